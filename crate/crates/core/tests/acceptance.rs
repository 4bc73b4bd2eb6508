//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::*;
use heatflow::asymptotics::{
    boundary_series_1d, boundary_series_geometric, predicted_free_series, predicted_realization_series,
    BoundaryCondition, EndpointJets, SeriesExpansion,
};
use heatflow::constants::{
    averaging_residuals, dimension_shift_residuals, moment_closed_form, solve_epsilon_table, SUPPORTED_MOMENTS,
};
use heatflow::fitharness::{
    fit_known_exponents, geometric_grid, localization_from_delta, sample, CoefficientStatus, FitReport,
};
use heatflow::geometry::{warped_boundary_data, Interval, ModelGeometry, WarpDirection, WarpedCollar};
use heatflow::heatcontent::{
    beta_difference, beta_dirichlet_numeric, beta_neumann_numeric, beta_numeric, SpecificHeatField, TemperatureField,
    Profile,
};
use heatflow::specfun::{c_alpha, gamma, normalizing_constant};
use heatflow::Alpha;
use num_complex::Complex64;
use rand::Rng;

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn run(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let late = elapsed > limit;
    let (ok, detail) = match outcome {
        Ok(d) if !late => (true, d),
        Ok(d) => (false, format!("{d}; over time limit")),
        Err(d) => (false, d),
    };
    println!(
        "{} criterion {id}: {name} ({detail}) [{:.2} s, limit {} s]",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn normalizing_constants() -> Check {
    let sp = PI.sqrt();
    let shown = [(0.0, -2.0 / sp), (-1.0, -1.0), (-2.0, -8.0 / (3.0 * sp))];
    let mut worst_shown = 0.0f64;
    for (a, v) in shown {
        worst_shown = worst_shown.max((c_alpha(Alpha::real(a).unwrap()) - c(v)).norm());
    }
    let mut r = rng(1);
    let mut worst_rec = 0.0f64;
    for _ in 0..100 {
        let a = random_alpha(&mut r, -4.0, 1.0, 3.0).value();
        let lhs_a = normalizing_constant(a);
        let rhs_a = -(a - 3.0) / (2.0 * (a - 1.0) * (a - 2.0)) * normalizing_constant(a - 2.0);
        let lhs_b = normalizing_constant(a + 1.0);
        let rhs_b = -(a - 2.0) / (2.0 * a * (a - 1.0)) * normalizing_constant(a - 1.0);
        worst_rec = worst_rec.max(rel(rhs_a, lhs_a)).max(rel(rhs_b, lhs_b));
    }
    ensure(
        worst_shown <= 1e-12 && worst_rec <= 1e-10,
        format!("displayed values err {worst_shown:.1e}, recursions rel err {worst_rec:.1e}"),
    )
}

fn moment_agreement() -> Check {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    let mut gamma_worst = 0.0f64;
    for _ in 0..20 {
        let alpha = random_alpha(&mut r, -2.0, 0.9, 1.0);
        for &((k, l), _) in SUPPORTED_MOMENTS.iter() {
            let closed = moment_closed_form(k, l, alpha).map_err(|e| e.to_string())?;
            let oracle = moment_double_quadrature(k, l, alpha, 1e-11);
            worst = worst.max((closed - oracle).norm());
        }
        let z = c(1.5) - alpha.value() / 2.0;
        gamma_worst = gamma_worst.max(rel(gamma(z).unwrap(), stirling_gamma(z)));
    }
    ensure(
        worst <= 1e-8 && gamma_worst <= 1e-12,
        format!("max |closed − quadrature| {worst:.1e}, Gamma vs Stirling {gamma_worst:.1e}"),
    )
}

fn table_consistency() -> Check {
    let mut r = rng(3);
    let (mut rel_w, mut dim_w, mut avg_w) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let alpha = random_alpha(&mut r, -2.0, 0.95, 1.5);
        let table = solve_epsilon_table(alpha).map_err(|e| e.to_string())?;
        rel_w = table.relation_residuals().iter().fold(rel_w, |m, &v| m.max(v));
        dim_w = dimension_shift_residuals(alpha)
            .map_err(|e| e.to_string())?
            .iter()
            .fold(dim_w, |m, &v| m.max(v));
        avg_w = averaging_residuals(alpha)
            .map_err(|e| e.to_string())?
            .iter()
            .fold(avg_w, |m, &(_, v)| m.max(v));
    }
    ensure(
        rel_w <= 1e-12 && dim_w <= 1e-10 && avg_w <= 1e-10,
        format!("relations {rel_w:.1e}, dimension shift {dim_w:.1e}, averaging {avg_w:.1e}"),
    )
}

fn fit_line(report: &FitReport) -> String {
    report
        .exponents
        .iter()
        .zip(&report.fitted)
        .zip(&report.rel_error)
        .map(|((e, f), r)| match r {
            Some(r) => format!("t^{e}: {:.10} (rel {r:.1e})", f.re),
            None => format!("t^{e}: {:.3e}", f.re),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn predictions(series: &SeriesExpansion, exponents: &[f64]) -> Vec<Option<Complex64>> {
    exponents.iter().map(|&e| Some(series.coefficient(c(e)))).collect()
}

fn perimeter_law() -> Check {
    let tol = 1e-10;
    let ts = geometric_grid(1e-4, 2.5e-2, 16).unwrap();
    let g = half_circle();
    let (phi, rho) = constant_fields(half_interval());
    let samples = sample(&ts, tol, |t| beta_numeric(&g, &phi, &rho, t, tol)).map_err(|e| e.to_string())?;
    let exps = [0.0, 0.5, 1.0, 1.5];
    let series = predicted_free_series(&phi, &rho, 2, 3, 1e-13).map_err(|e| e.to_string())?;
    let fit = fit_known_exponents(&samples, &exps)
        .map_err(|e| e.to_string())?
        .compare(&predictions(&series, &exps));
    let ok = fit.rel_error[0].unwrap() <= 1e-8
        && fit.rel_error[1].unwrap() <= 1e-6
        && fit.below_noise(2)
        && fit.below_noise(3);
    ensure(ok, format!("{}; noise t^1 {:.1e}, t^1.5 {:.1e}", fit_line(&fit), fit.noise[2], fit.noise[3]))
}

fn singular_data() -> Check {
    let tol = 1e-10;
    let ts = geometric_grid(1e-4, 2.5e-2, 16).unwrap();
    let g = half_circle();
    let phi = inverse_sqrt_field();
    let rho = SpecificHeatField::new(half_interval(), Profile::constant(1.0));
    let samples = sample(&ts, tol, |t| beta_numeric(&g, &phi, &rho, t, tol)).map_err(|e| e.to_string())?;
    let exps = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0];
    let series = predicted_free_series(&phi, &rho, 2, 3, 1e-13).map_err(|e| e.to_string())?;
    let fit = fit_known_exponents(&samples, &exps)
        .map_err(|e| e.to_string())?
        .compare(&predictions(&series, &exps));
    let quarter = -(2.0f64).sqrt() * 1.225_416_702_465_177_6 / PI.sqrt();
    let lead = rel(fit.fitted[1], c(quarter));
    let mass = rel(fit.fitted[0], c(2.0 * PI.sqrt()));
    ensure(
        lead <= 1e-4 && mass <= 1e-6,
        format!("t^1/4 rel {lead:.1e}, t^0 rel {mass:.1e}, condition {:.1e}; {}", fit.condition, fit_line(&fit)),
    )
}

fn dirichlet_neumann_average() -> Check {
    let iv = half_interval();
    let phi = TemperatureField::smooth(iv, Profile::polynomial(&[1.0, 0.3]));
    let rho = SpecificHeatField::new(iv, Profile::polynomial(&[1.0, 0.0, -0.1]));
    let g = half_circle();
    let tol = 1e-11;
    let mut worst = 0.0f64;
    for t in geometric_grid(1e-3, 2e-2, 8).unwrap() {
        let circle = beta_numeric(&g, &phi, &rho, t, tol).map_err(|e| e.to_string())?;
        let d = beta_dirichlet_numeric(iv, &phi, &rho, t, tol).map_err(|e| e.to_string())?;
        let n = beta_neumann_numeric(iv, &phi, &rho, t, tol).map_err(|e| e.to_string())?;
        worst = worst.max((circle - 0.5 * (d + n)).norm());
    }
    ensure(worst <= 1e-9, format!("max |β_circle − ½(β_D + β_N)| {worst:.1e}"))
}

fn dirichlet_leading() -> Check {
    let tol = 1e-10;
    let ts = geometric_grid(1e-4, 2.5e-2, 16).unwrap();
    let iv = half_interval();
    let (phi, rho) = constant_fields(iv);
    let exps = [0.0, 0.5, 1.0, 1.5];
    let dirichlet = sample(&ts, tol, |t| beta_dirichlet_numeric(iv, &phi, &rho, t, tol)).map_err(|e| e.to_string())?;
    let series = predicted_realization_series(&phi, &rho, BoundaryCondition::Dirichlet, 1, 1e-13)
        .map_err(|e| e.to_string())?;
    let fd = fit_known_exponents(&dirichlet, &exps)
        .map_err(|e| e.to_string())?
        .compare(&predictions(&series, &exps));
    let neumann = sample(&ts, tol, |t| beta_neumann_numeric(iv, &phi, &rho, t, tol)).map_err(|e| e.to_string())?;
    let fnm = fit_known_exponents(&neumann, &exps).map_err(|e| e.to_string())?;
    let d_ok = fd.status(1, 1e-6) == CoefficientStatus::Pass && rel(fd.fitted[1], c(-4.0 / PI.sqrt())) <= 1e-6;
    let n_ok = (1..4).all(|k| fnm.below_noise(k));
    ensure(
        d_ok && n_ok,
        format!(
            "Dirichlet {}; Neumann t^0.5..t^1.5: {:.1e}, {:.1e}, {:.1e}",
            fit_line(&fd),
            fnm.fitted[1].norm(),
            fnm.fitted[2].norm(),
            fnm.fitted[3].norm()
        ),
    )
}

fn warped_identity() -> Check {
    let mut r = rng(8);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let alpha = random_alpha(&mut r, -2.5, 0.95, 1.5);
        let dims = r.gen_range(1..5);
        let dirs = (0..dims)
            .map(|_| WarpDirection::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)))
            .collect();
        let collar = WarpedCollar::new(dirs).unwrap();
        let p = [random_complex(&mut r, 1.0), random_complex(&mut r, 1.0), random_complex(&mut r, 1.0)];
        let q = [random_complex(&mut r, 1.0), random_complex(&mut r, 1.0), random_complex(&mut r, 1.0)];
        let table = solve_epsilon_table(alpha).map_err(|e| e.to_string())?;
        let warped = boundary_series_geometric(&warped_boundary_data(&collar, p, q), &table);
        let flat = boundary_series_1d(
            &[EndpointJets {
                phi: p.to_vec(),
                rho: q.to_vec(),
                alpha,
            }],
            2,
        )
        .map_err(|e| e.to_string())?;
        for j in 0..3 {
            worst = worst.max((warped[j] - flat[j].1).norm());
        }
    }
    ensure(worst <= 1e-10, format!("max |warped − flat| {worst:.1e}"))
}

fn localization() -> Check {
    let omega = half_interval();
    let full = ModelGeometry::DirichletInterval {
        interval: Interval::new(-1.0, PI + 1.0).unwrap(),
    };
    let line = ModelGeometry::IntervalInLine { interval: omega };
    let (phi, rho) = constant_fields(omega);
    let rel_tol = 1e-8;
    let ts = geometric_grid(2e-3, 2e-2, 10).unwrap();
    let delta = sample(&ts, rel_tol, |t| beta_difference(&full, &line, &phi, &rho, t, rel_tol))
        .map_err(|e| e.to_string())?;
    let report = localization_from_delta(&delta, 1.0, 1, PI, 1.0).map_err(|e| e.to_string())?;
    let worst = report
        .rows
        .iter()
        .map(|r| r.delta / r.bound)
        .fold(0.0f64, f64::max);
    ensure(
        report.passes() && report.slope.is_some(),
        format!(
            "max |Δβ|/bound {worst:.1e}, violations {:?}, slope {:.4} (limit {:.4})",
            report.violations(),
            report.slope.unwrap_or(f64::NAN),
            report.slope_limit
        ),
    )
}

fn main() {
    let results = [
        run(1, "normalizing constants and recursions", secs(1), normalizing_constants),
        run(2, "moment closed forms vs double quadrature", secs(30), moment_agreement),
        run(3, "epsilon table relations, dimension shift, averaging", secs(5), table_consistency),
        run(4, "perimeter law on the half circle", secs(120), perimeter_law),
        run(5, "singular initial temperature", secs(180), singular_data),
        run(6, "Dirichlet/Neumann averaging", secs(60), dirichlet_neumann_average),
        run(7, "Dirichlet and Neumann leading coefficients", secs(120), dirichlet_leading),
        run(8, "warped collar algebraic identity", secs(5), warped_identity),
        run(9, "localization bound and decay rate", secs(60), localization),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
