//! Brute-force heat content `β = ∬_{Ω×Ω} K(x, x̃; t) φ(x) ρ(x̃) dx dx̃` on the
//! model geometries.
//!
//! The inner integral is done per kernel image, exactly for polynomial `ρ`.
//! The outer integral is adaptive, with geometric breakpoints toward both
//! endpoints and a power substitution at the singular one.

mod fields;
mod inner;

use num_complex::Complex64;

pub use fields::{DerivativeFn, Profile, SpecificHeatField, TemperatureField};

use crate::error::{Error, Result};
use crate::geometry::{Endpoint, Interval, ModelGeometry};
use crate::kernels::{ImageSet, KernelSpec};
use crate::quadrature::{integrate, Quadrature, Tolerance};
use crate::summation::ComplexSum;

/// Subinterval budget for each outer quadrature piece.
pub const MAX_INTERVALS: usize = 20_000;

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveTime(t))
    }
}

fn same_interval(p: Interval, q: Interval) -> bool {
    let scale = 1.0f64.max(p.a().abs()).max(p.b().abs());
    (p.a() - q.a()).abs() <= 1e-12 * scale && (p.b() - q.b()).abs() <= 1e-12 * scale
}

fn check_fields(phi: &TemperatureField, rho: &SpecificHeatField) -> Result<Interval> {
    let iv = phi.interval();
    if same_interval(iv, rho.interval()) {
        Ok(iv)
    } else {
        Err(Error::InvalidGeometry(format!(
            "temperature lives on [{}, {}], specific heat on [{}, {}]",
            iv.a(),
            iv.b(),
            rho.interval().a(),
            rho.interval().b()
        )))
    }
}

/// `∫_Ω φ(x) g(x) dx` for smooth `g`, resolving structure on scale `h` at
/// both endpoints and the `r^{-α}` singularity of `φ`.
pub fn integrate_against<G>(phi: &TemperatureField, g: G, h: f64, tol: Tolerance) -> Result<Quadrature>
where
    G: Fn(f64) -> Complex64,
{
    let iv = phi.interval();
    let half = 0.5 * iv.length();
    let mut distances = vec![0.0];
    let mut d = h.min(0.25 * half);
    while d < half {
        distances.push(d);
        d *= 4.0;
    }
    distances.push(half);

    let piece_tol = Tolerance {
        abs: 0.5 * tol.abs,
        rel: tol.rel,
    };
    let mut total = ComplexSum::new();
    let mut error = 0.0;
    let mut intervals = 0;
    for end in [Endpoint::Left, Endpoint::Right] {
        let e = iv.endpoint(end);
        let dir = if end == Endpoint::Left { 1.0 } else { -1.0 };
        let alpha = phi.alpha().value();
        let singular = end == phi.singular_end() && phi.is_singular() && alpha.re > -1.0;
        let q = if singular {
            let p = 2.0 / (1.0 - alpha.re);
            let points: Vec<f64> = distances.iter().map(|&r| r.powf(1.0 / p)).collect();
            let exponent = (p - 1.0) - p * alpha;
            let profile = phi.profile();
            integrate(
                |v| {
                    let x = e + dir * v.powf(p);
                    (exponent * v.ln()).exp() * p * profile.value(x) * g(x)
                },
                &points,
                piece_tol,
                MAX_INTERVALS,
            )?
        } else {
            integrate(
                |r| {
                    let x = e + dir * r;
                    phi.value(x) * g(x)
                },
                &distances,
                piece_tol,
                MAX_INTERVALS,
            )?
        };
        total.add(q.value);
        error += q.error;
        intervals += q.intervals;
    }
    Ok(Quadrature {
        value: total.value(),
        error,
        intervals,
    })
}

/// Heat content for an explicit image expansion, integrating over the
/// fields' interval.
pub fn beta_with_images(
    images: &ImageSet,
    phi: &TemperatureField,
    rho: &SpecificHeatField,
    t: f64,
    tol: Tolerance,
) -> Result<Quadrature> {
    check_time(t)?;
    let iv = check_fields(phi, rho)?;
    let (a, b) = (iv.a(), iv.b());
    // Half of the budget goes to the inner integrals when they are not exact.
    let inner_tol = if rho.profile().as_polynomial().is_some() {
        0.0
    } else {
        let l1 = integrate_against(
            &TemperatureField::new(iv, phi.alpha(), phi.singular_end(), Profile::constant(1.0)),
            |x| Complex64::new(phi.profile().value(x).norm(), 0.0),
            iv.length() * 1e-3,
            Tolerance::relative(1e-3),
        )?
        .value
        .norm();
        0.5 * tol.abs.max(f64::MIN_POSITIVE) / l1.max(1e-300)
    };
    let outer_tol = Tolerance {
        abs: if inner_tol > 0.0 { 0.5 * tol.abs } else { tol.abs },
        rel: tol.rel,
    };
    let profile = rho.profile();
    let failure = std::cell::Cell::new(None);
    let u = |x: f64| {
        let mut terms: Vec<(f64, Complex64)> = images
            .images()
            .iter()
            .map(|img| {
                let y = img.source(x);
                let v = inner::image_integral(profile, y, a, b, t, inner_tol.max(1e-300)).unwrap_or_else(|e| {
                    failure.set(Some(e));
                    Complex64::new(0.0, 0.0)
                });
                ((y - 0.5 * (a + b)).abs(), v * img.sign)
            })
            .collect();
        terms.sort_by(|p, q| q.0.total_cmp(&p.0));
        terms.into_iter().map(|(_, v)| v).collect::<ComplexSum>().value()
    };
    let h = t.min(t.sqrt()) / 4.0;
    let q = integrate_against(phi, u, h, outer_tol)?;
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(q),
    }
}

fn domain_of(geom: &ModelGeometry) -> Result<Interval> {
    geom.domain().ok_or_else(|| {
        Error::InvalidGeometry("products factor; combine factor contents with beta_product".into())
    })
}

/// `β_Ω(φ, ρ)(t)` with absolute error at most `tol`. `Ω` is the fields'
/// interval; it must be the geometry's domain, or lie inside it for the
/// Dirichlet and Neumann realizations.
pub fn beta_numeric(
    geom: &ModelGeometry,
    phi: &TemperatureField,
    rho: &SpecificHeatField,
    t: f64,
    tol: f64,
) -> Result<Complex64> {
    check_time(t)?;
    let domain = domain_of(geom)?;
    let iv = check_fields(phi, rho)?;
    // A realization on a larger interval may host a subdomain `Ω`.
    let fits = match geom {
        ModelGeometry::DirichletInterval { .. } | ModelGeometry::NeumannInterval { .. } => {
            iv.a() >= domain.a() && iv.b() <= domain.b()
        }
        _ => same_interval(domain, iv),
    };
    if !fits {
        return Err(Error::InvalidGeometry(format!(
            "fields live on [{}, {}] but the domain is [{}, {}]",
            iv.a(),
            iv.b(),
            domain.a(),
            domain.b()
        )));
    }
    let images = KernelSpec::with_default_tail(geom.clone())?.images(t)?;
    Ok(beta_with_images(&images, phi, rho, t, Tolerance::absolute(tol))?.value)
}

/// `β^{full} − β^{truncated}` on the fields' interval, computed from the
/// difference of the two image expansions so that shared images cancel
/// before integration. The tolerance is relative to the difference.
pub fn beta_difference(
    full: &ModelGeometry,
    truncated: &ModelGeometry,
    phi: &TemperatureField,
    rho: &SpecificHeatField,
    t: f64,
    rel_tol: f64,
) -> Result<Complex64> {
    check_time(t)?;
    let a = KernelSpec::with_default_tail(full.clone())?.images(t)?;
    let b = KernelSpec::with_default_tail(truncated.clone())?.images(t)?;
    let diff = a.difference(&b);
    if diff.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let tol = Tolerance {
        abs: f64::MIN_POSITIVE,
        rel: rel_tol,
    };
    Ok(beta_with_images(&diff, phi, rho, t, tol)?.value)
}

pub fn beta_dirichlet_numeric(
    interval: Interval,
    phi: &TemperatureField,
    rho: &SpecificHeatField,
    t: f64,
    tol: f64,
) -> Result<Complex64> {
    beta_numeric(&ModelGeometry::DirichletInterval { interval }, phi, rho, t, tol)
}

pub fn beta_neumann_numeric(
    interval: Interval,
    phi: &TemperatureField,
    rho: &SpecificHeatField,
    t: f64,
    tol: f64,
) -> Result<Complex64> {
    beta_numeric(&ModelGeometry::NeumannInterval { interval }, phi, rho, t, tol)
}

/// Heat content of a product from the contents of its factors.
pub fn beta_product(factor_betas: &[Complex64]) -> Complex64 {
    factor_betas.iter().product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_fields(iv: Interval) -> (TemperatureField, SpecificHeatField) {
        (
            TemperatureField::smooth(iv, Profile::constant(1.0)),
            SpecificHeatField::new(iv, Profile::constant(1.0)),
        )
    }

    fn half_circle() -> (ModelGeometry, Interval) {
        let iv = Interval::new(0.0, PI).unwrap();
        (
            ModelGeometry::IntervalInCircle {
                interval: iv,
                circumference: 2.0 * PI,
            },
            iv,
        )
    }

    #[test]
    fn perimeter_law_on_half_circle() {
        let (g, iv) = half_circle();
        let (phi, rho) = unit_fields(iv);
        let b = beta_numeric(&g, &phi, &rho, 0.01, 1e-12).unwrap();
        let want = PI - 2.0 / PI.sqrt() * 0.1;
        assert!((b.re - want).abs() < 2e-6, "{b}");
    }

    #[test]
    fn small_time_recovers_mass() {
        let (g, iv) = half_circle();
        let (phi, rho) = unit_fields(iv);
        let b = beta_numeric(&g, &phi, &rho, 1e-6, 1e-10).unwrap();
        assert!((b.re - PI).abs() <= 2e-3);
    }

    #[test]
    fn dirichlet_and_neumann_leading_terms() {
        let iv = Interval::new(0.0, PI).unwrap();
        let (phi, rho) = unit_fields(iv);
        let d = beta_dirichlet_numeric(iv, &phi, &rho, 0.01, 1e-12).unwrap();
        assert!((d.re - (PI - 4.0 / PI.sqrt() * 0.1)).abs() < 1e-5);
        let n = beta_neumann_numeric(iv, &phi, &rho, 0.01, 1e-12).unwrap();
        assert!((n.re - PI).abs() < 1e-8);
    }

    #[test]
    fn closed_circle_conserves_heat() {
        let l = 3.0;
        let iv = Interval::new(0.0, l).unwrap();
        let (phi, rho) = unit_fields(iv);
        let g = ModelGeometry::Circle { circumference: l };
        for t in [0.01, 0.3] {
            let b = beta_numeric(&g, &phi, &rho, t, 1e-11).unwrap();
            assert!((b.re - l).abs() < 1e-9);
        }
    }

    #[test]
    fn product_of_factor_contents() {
        let z = Complex64::new(2.5, 0.0);
        assert_eq!(beta_product(&[z]), z);
        assert_eq!(beta_product(&[z, Complex64::new(4.0, 0.0)]), Complex64::new(10.0, 0.0));
        let (g, iv) = half_circle();
        let (phi, rho) = unit_fields(iv);
        assert!(beta_numeric(&ModelGeometry::Product(vec![g]), &phi, &rho, 0.01, 1e-10).is_err());
    }

    #[test]
    fn reject_bad_time_and_mismatched_fields() {
        let (g, iv) = half_circle();
        let (phi, _) = unit_fields(iv);
        let rho = SpecificHeatField::new(Interval::new(0.0, 1.0).unwrap(), Profile::constant(1.0));
        assert!(beta_numeric(&g, &phi, &rho, 0.01, 1e-10).is_err());
        let (phi, rho) = unit_fields(iv);
        assert!(matches!(
            beta_numeric(&g, &phi, &rho, 0.0, 1e-10),
            Err(Error::NonPositiveTime(_))
        ));
    }

    #[test]
    fn weighted_integral_of_singular_field() {
        let iv = Interval::new(0.0, PI).unwrap();
        let phi = TemperatureField::new(
            iv,
            crate::specfun::Alpha::real(0.5).unwrap(),
            Endpoint::Left,
            Profile::constant(1.0),
        );
        let q = integrate_against(&phi, |_| Complex64::new(1.0, 0.0), 1e-3, Tolerance::absolute(1e-13)).unwrap();
        assert!((q.value.re - 2.0 * PI.sqrt()).abs() < 1e-12);
    }
}
