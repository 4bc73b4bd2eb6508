//! Property tests for the invariants of each module.

mod common;

use std::f64::consts::PI;

use common::*;
use heatflow::asymptotics::{
    boundary_series_1d, boundary_series_geometric, dirichlet_robin_series, shift_jets, BoundaryCondition,
    EndpointJets,
};
use heatflow::constants::{moment_closed_form, moment_quadrature, solve_epsilon_table, EPSILON_COUNT, SUPPORTED_MOMENTS};
use heatflow::fitharness::{fit_known_exponents, Sample, SampleSet};
use heatflow::geometry::{straight_boundary_data, warped_boundary_data, BoundaryComponentData, WarpDirection, WarpedCollar};
use heatflow::heatcontent::{beta_numeric, Profile, SpecificHeatField, TemperatureField};
use heatflow::kernels::{circle_kernel, interval_dirichlet_kernel, interval_neumann_kernel, line_kernel};
use heatflow::specfun::{gamma, normalizing_constant};
use heatflow::Alpha;
use num_complex::Complex64;
use proptest::prelude::*;

fn alpha_strategy() -> impl Strategy<Value = Alpha> {
    (-3.0f64..0.95, -2.0f64..2.0).prop_map(|(re, im)| Alpha::new(Complex64::new(re, im)).unwrap())
}

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn jets_strategy() -> impl Strategy<Value = [Complex64; 3]> {
    [complex_strategy(), complex_strategy(), complex_strategy()]
}

fn collar_strategy() -> impl Strategy<Value = WarpedCollar> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0), 1..5).prop_map(|v| {
        WarpedCollar::new(v.into_iter().map(|(a, b, d)| WarpDirection::new(a, b, d)).collect()).unwrap()
    })
}

fn flat_series(p: [Complex64; 3], q: [Complex64; 3], alpha: Alpha) -> Vec<Complex64> {
    boundary_series_1d(
        &[EndpointJets {
            phi: p.to_vec(),
            rho: q.to_vec(),
            alpha,
        }],
        2,
    )
    .unwrap()
    .into_iter()
    .map(|(_, v)| v)
    .collect()
}

fn scaled_close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn recursion_lowering_by_two(alpha in alpha_strategy()) {
        let a = alpha.value();
        let lhs = normalizing_constant(a);
        let rhs = -(a - 3.0) / (2.0 * (a - 1.0) * (a - 2.0)) * normalizing_constant(a - 2.0);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm());
    }

    #[test]
    fn recursion_across_one(re in -3.0f64..-0.01, im in -2.0f64..2.0) {
        let a = Complex64::new(re, im);
        let lhs = normalizing_constant(a + 1.0);
        let rhs = -(a - 2.0) / (2.0 * a * (a - 1.0)) * normalizing_constant(a - 1.0);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm());
    }

    #[test]
    fn gamma_functional_equation(re in -3.0f64..6.0, im in -3.0f64..3.0) {
        let z = Complex64::new(re, im);
        prop_assume!((z - Complex64::new(z.re.round(), 0.0)).norm() > 1e-2 || z.re > 0.5);
        let next = gamma(z + 1.0).unwrap();
        let prev = gamma(z).unwrap();
        prop_assert!((next - z * prev).norm() <= 1e-11 * next.norm());
    }

    #[test]
    fn gamma_matches_stirling_oracle(re in 0.5f64..8.0, im in -4.0f64..4.0) {
        let z = Complex64::new(re, im);
        let g = gamma(z).unwrap();
        prop_assert!((g - stirling_gamma(z)).norm() <= 1e-12 * g.norm());
    }

    #[test]
    fn relation_closure_and_product_pair(alpha in alpha_strategy()) {
        let t = solve_epsilon_table(alpha).unwrap();
        prop_assert!(t.relation_residuals().iter().all(|&r| r <= 1e-12 * t[0].norm().max(1.0)));
        prop_assert_eq!(t[6] + t[12], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn epsilon_table_is_holomorphic(re in -2.5f64..0.8, im in -1.5f64..1.5) {
        let h = 1e-4;
        let a = Complex64::new(re, im);
        let table = |z: Complex64| solve_epsilon_table(Alpha::new(z).unwrap()).unwrap();
        let (xp, xm) = (table(a + h), table(a - h));
        let i = Complex64::new(0.0, 1.0);
        let (yp, ym) = (table(a + i * h), table(a - i * h));
        for nu in 0..EPSILON_COUNT {
            let dx = (xp[nu] - xm[nu]) / (2.0 * h);
            let dy = (yp[nu] - ym[nu]) / (2.0 * h * i);
            prop_assert!((dx - dy).norm() <= 1e-6 * dx.norm().max(1.0), "ν={} dx={} dy={}", nu, dx, dy);
        }
    }

    #[test]
    fn warped_assembly_equals_flat(collar in collar_strategy(), p in jets_strategy(), q in jets_strategy(), alpha in alpha_strategy()) {
        let table = solve_epsilon_table(alpha).unwrap();
        let warped = boundary_series_geometric(&warped_boundary_data(&collar, p, q), &table);
        let flat = flat_series(p, q, alpha);
        for j in 0..3 {
            prop_assert!(scaled_close(warped[j], flat[j], 1e-10), "j={}: {} vs {}", j, warped[j], flat[j]);
        }
    }

    #[test]
    fn warped_data_is_bilinear(collar in collar_strategy(), p in jets_strategy(), p2 in jets_strategy(), q in jets_strategy(), s in complex_strategy()) {
        let mix: [Complex64; 3] = std::array::from_fn(|i| p[i] + s * p2[i]);
        let a = warped_boundary_data(&collar, mix, q);
        let b = warped_boundary_data(&collar, p, q);
        let c2 = warped_boundary_data(&collar, p2, q);
        for i in 0..3 {
            prop_assert!(scaled_close(a.phi[i], b.phi[i] + s * c2.phi[i], 1e-13));
        }
        prop_assert!(scaled_close(a.tangential_pairing, b.tangential_pairing + s * c2.tangential_pairing, 1e-13));
        let r = warped_boundary_data(&collar, q, mix);
        let r1 = warped_boundary_data(&collar, q, p);
        let r2 = warped_boundary_data(&collar, q, p2);
        for i in 0..3 {
            prop_assert!(scaled_close(r.rho[i], r1.rho[i] + s * r2.rho[i], 1e-13));
        }
    }

    #[test]
    fn flat_geometric_reduces_to_1d(p in jets_strategy(), q in jets_strategy(), alpha in alpha_strategy()) {
        let table = solve_epsilon_table(alpha).unwrap();
        let g = boundary_series_geometric(&straight_boundary_data(p, q), &table);
        let flat = flat_series(p, q, alpha);
        for j in 0..3 {
            prop_assert!(scaled_close(g[j], flat[j], 1e-12));
        }
    }

    #[test]
    fn averaging_on_curvature_free_data(
        p in jets_strategy(), q in jets_strategy(), alpha in alpha_strategy(),
        e in -2.0f64..2.0, ric in -2.0f64..2.0, pairing in complex_strategy(),
    ) {
        let data = BoundaryComponentData {
            e_val: e,
            ric_mm: ric,
            tangential_pairing: pairing,
            ..straight_boundary_data(p, q)
        };
        let table = solve_epsilon_table(alpha).unwrap();
        let g = boundary_series_geometric(&data, &table);
        let d = dirichlet_robin_series(&data, alpha, BoundaryCondition::Dirichlet);
        let n = dirichlet_robin_series(&data, alpha, BoundaryCondition::Robin(0.0));
        for j in 0..3 {
            prop_assert!(scaled_close(g[j], 0.5 * (d[j] + n[j]), 1e-10), "j={}", j);
        }
    }

    #[test]
    fn series_dimension_shift(p in jets_strategy(), q in jets_strategy(), alpha in alpha_strategy()) {
        // Jets (0, φ_0, φ_1) at α are the jets φ of r^{-(α-1)} at α − 1.
        let shifted = flat_series(shift_jets(p), q, alpha);
        let lowered = flat_series(p, q, alpha.lowered(1));
        prop_assert_eq!(shifted[0], Complex64::new(0.0, 0.0));
        for j in 1..3 {
            prop_assert!(scaled_close(shifted[j], lowered[j - 1], 1e-12));
        }
    }

    #[test]
    fn heat_kernels_symmetric_and_positive(x in 0.01f64..3.13, y in 0.01f64..3.13, t in 1e-3f64..2.0) {
        let pairs = [
            (line_kernel(x, y, t).unwrap(), line_kernel(y, x, t).unwrap()),
            (circle_kernel(x, y, t, 2.0 * PI).unwrap(), circle_kernel(y, x, t, 2.0 * PI).unwrap()),
            (interval_dirichlet_kernel(x, y, t, 0.0, PI).unwrap(), interval_dirichlet_kernel(y, x, t, 0.0, PI).unwrap()),
            (interval_neumann_kernel(x, y, t, 0.0, PI).unwrap(), interval_neumann_kernel(y, x, t, 0.0, PI).unwrap()),
        ];
        // Image sums cancel at large t; roundoff scales with the largest image.
        let scale = 1.0 / (4.0 * PI * t).sqrt();
        for (k, (a, b)) in pairs.iter().enumerate() {
            prop_assert!(*a >= 0.0, "kernel {} negative", k);
            prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(scale), "kernel {} asymmetric", k);
        }
        let d = pairs[2].0;
        prop_assert!(d > 0.0 || t < 2e-2, "Dirichlet kernel vanished at t={}", t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn moment_triple_agreement(alpha in alpha_strategy()) {
        for &((k, l), _) in SUPPORTED_MOMENTS.iter() {
            let a = moment_closed_form(k, l, alpha).unwrap();
            let b = moment_quadrature(k, l, alpha, 1e-11).unwrap();
            prop_assert!((a - b).norm() <= 1e-8, "({},{}) at {}: {} vs {}", k, l, alpha, a, b);
        }
    }

    #[test]
    fn heat_content_bilinear_and_symmetric(
        a in prop::collection::vec(-1.0f64..1.0, 3),
        b in prop::collection::vec(-1.0f64..1.0, 3),
        r in prop::collection::vec(-1.0f64..1.0, 3),
        s in -2.0f64..2.0,
        t in 1e-3f64..0.1,
    ) {
        let iv = half_interval();
        let g = half_circle();
        let tol = 1e-13;
        let temp = |c: &[f64]| TemperatureField::smooth(iv, Profile::polynomial(c));
        let heat = |c: &[f64]| SpecificHeatField::new(iv, Profile::polynomial(c));
        let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + s * y).collect();
        let lhs = beta_numeric(&g, &temp(&mix), &heat(&r), t, tol).unwrap();
        let rhs = beta_numeric(&g, &temp(&a), &heat(&r), t, tol).unwrap() + s * beta_numeric(&g, &temp(&b), &heat(&r), t, tol).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10);
        let lhs = beta_numeric(&g, &temp(&r), &heat(&mix), t, tol).unwrap();
        let rhs = beta_numeric(&g, &temp(&r), &heat(&a), t, tol).unwrap() + s * beta_numeric(&g, &temp(&r), &heat(&b), t, tol).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10);
        let forward = beta_numeric(&g, &temp(&a), &heat(&r), t, tol).unwrap();
        let backward = beta_numeric(&g, &temp(&r), &heat(&a), t, tol).unwrap();
        prop_assert!((forward - backward).norm() <= 1e-10);
    }

    #[test]
    fn heat_loss_is_strict(t in 1e-4f64..5.0) {
        let (phi, rho) = constant_fields(half_interval());
        let b = beta_numeric(&half_circle(), &phi, &rho, t, 1e-12).unwrap().re;
        prop_assert!(b > 0.0 && b < PI);
    }

    #[test]
    fn fit_is_exact_and_order_invariant(
        coeffs in prop::collection::vec(-3.0f64..3.0, 4),
        perm_seed in any::<u64>(),
    ) {
        let exps = [0.0, 0.5, 1.0, 1.5];
        let ts = heatflow::fitharness::geometric_grid(1e-4, 2.5e-2, 16).unwrap();
        let rows: Vec<Sample> = ts.iter().map(|&t| {
            let v: f64 = exps.iter().zip(&coeffs).map(|(e, c)| c * t.powf(*e)).sum();
            Sample { t, beta: Complex64::new(v, -0.5 * v), quad_tol: 1e-14 }
        }).collect();
        let base = fit_known_exponents(&SampleSet::new(rows.clone()).unwrap(), &exps).unwrap();
        prop_assert!(base.residual_norm <= 1e-12);
        for (k, c) in coeffs.iter().enumerate() {
            prop_assert!((base.fitted[k] - Complex64::new(*c, -0.5 * c)).norm() <= 1e-8 * (1.0 + c.abs()));
        }
        let mut shuffled = rows;
        let mut r = rng(perm_seed);
        use rand::seq::SliceRandom;
        shuffled.shuffle(&mut r);
        let again = fit_known_exponents(&SampleSet::from_unsorted(shuffled).unwrap(), &exps).unwrap();
        prop_assert_eq!(base.fitted, again.fitted);
    }
}

#[test]
fn condition_grows_as_range_shrinks() {
    let exps = [0.0, 0.5, 1.0, 1.5];
    let cond = |hi: f64| {
        let ts = heatflow::fitharness::geometric_grid(1e-4, hi, 16).unwrap();
        let rows = ts.iter().map(|&t| Sample { t, beta: c(1.0), quad_tol: 0.0 }).collect();
        fit_known_exponents(&SampleSet::new(rows).unwrap(), &exps).unwrap().condition
    };
    let (wide, mid, narrow) = (cond(1e-1), cond(1e-2), cond(1e-3));
    assert!(wide < mid && mid < narrow, "{wide} {mid} {narrow}");
    let ts = heatflow::fitharness::geometric_grid(1e-4, 1.0001e-4, 16).unwrap();
    let rows = ts.iter().map(|&t| Sample { t, beta: c(1.0), quad_tol: 0.0 }).collect();
    if let Ok(f) = fit_known_exponents(&SampleSet::new(rows).unwrap(), &exps) { assert!(!f.warnings.is_empty()) }
}
