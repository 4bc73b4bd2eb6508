//! Test-only oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use heatflow::geometry::{Endpoint, Interval, ModelGeometry};
use heatflow::heatcontent::{Profile, SpecificHeatField, TemperatureField};
use heatflow::quadrature::{integrate, Tolerance};
use heatflow::Alpha;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Admissible exponent with `Re α ∈ [lo, hi)` and `|Im α| ≤ im`.
pub fn random_alpha(r: &mut StdRng, lo: f64, hi: f64, im: f64) -> Alpha {
    let re = r.gen_range(lo..hi);
    let im = if im > 0.0 { r.gen_range(-im..im) } else { 0.0 };
    Alpha::new(Complex64::new(re, im)).unwrap()
}

pub fn random_complex(r: &mut StdRng, scale: f64) -> Complex64 {
    Complex64::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale))
}

/// `ln Γ(z)` by the Stirling series after shifting `Re z` above 10; valid
/// for `Re z > 0`.
pub fn stirling_ln_gamma(z: Complex64) -> Complex64 {
    let mut shift = c(0.0);
    let mut w = z;
    while w.re < 10.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

pub fn stirling_gamma(z: Complex64) -> Complex64 {
    stirling_ln_gamma(z).exp()
}

/// `(−1)^{ℓ+1} (4π)^{−1/2} ∬_{[0,∞)²} e^{−(u+ũ)²/4} u^{k−α} ũ^ℓ` by nested
/// adaptive quadrature, with `u = v^p` chosen so the transformed weight is
/// at least as smooth as `v`.
pub fn moment_double_quadrature(k: usize, l: usize, alpha: Alpha, tol: f64) -> Complex64 {
    let a = c(k as f64) - alpha.value();
    let upper = 14.0 + (k + l) as f64;
    let inner = |u: f64| {
        integrate(
            |w| c((-(u + w) * (u + w) / 4.0).exp() * w.powi(l as i32)),
            &[0.0, 1.0, 4.0, upper],
            Tolerance::absolute(tol * 1e-2),
            4000,
        )
        .unwrap()
        .value
        .re
    };
    let p = if a.re < 1.0 { 2.0 / (1.0 + a.re) } else { 1.0 };
    let exponent = (p - 1.0) + p * a;
    let outer = integrate(
        |v| p * (exponent * v.ln()).exp() * inner(v.powf(p)),
        &[0.0, 0.5f64.powf(1.0 / p), 1.0, 2.0f64.powf(1.0 / p), upper.powf(1.0 / p)],
        Tolerance::absolute(tol),
        4000,
    )
    .unwrap()
    .value;
    let sign = if l.is_multiple_of(2) { -1.0 } else { 1.0 };
    outer * sign / (4.0 * PI).sqrt()
}

pub fn half_interval() -> Interval {
    Interval::new(0.0, PI).unwrap()
}

pub fn half_circle() -> ModelGeometry {
    ModelGeometry::IntervalInCircle {
        interval: half_interval(),
        circumference: 2.0 * PI,
    }
}

pub fn constant_fields(iv: Interval) -> (TemperatureField, SpecificHeatField) {
    (
        TemperatureField::smooth(iv, Profile::constant(1.0)),
        SpecificHeatField::new(iv, Profile::constant(1.0)),
    )
}

/// `φ = x^{-1/2}` on `[0, π]`, singular at the left end.
pub fn inverse_sqrt_field() -> TemperatureField {
    TemperatureField::new(
        half_interval(),
        Alpha::real(0.5).unwrap(),
        Endpoint::Left,
        Profile::constant(1.0),
    )
}
