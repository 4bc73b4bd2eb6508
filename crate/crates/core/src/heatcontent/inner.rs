//! Inner integrals `∫_a^b G(x̃ − y) ρ(x̃) dx̃` of one Gaussian image against
//! the specific heat.

use num_complex::Complex64;

use super::fields::Profile;
use crate::error::Result;
use crate::kernels::gaussian;
use crate::quadrature::{integrate, Tolerance};
use crate::specfun::erfc;

/// Truncated Gaussian moments `M_k = ∫_A^B s^k G(s) ds` for `k ≤ k_max`.
pub(crate) fn gaussian_moments(lo: f64, hi: f64, t: f64, k_max: usize) -> Vec<f64> {
    let w = 2.0 * t.sqrt();
    let m0 = if lo >= 0.0 {
        0.5 * (erfc(lo / w) - erfc(hi / w))
    } else if hi <= 0.0 {
        0.5 * (erfc(-hi / w) - erfc(-lo / w))
    } else {
        0.5 * (2.0 - erfc(hi / w) - erfc(-lo / w))
    };
    let mut m = Vec::with_capacity(k_max + 1);
    m.push(m0);
    if k_max == 0 {
        return m;
    }
    let (g_lo, g_hi) = (gaussian(lo, t), gaussian(hi, t));
    m.push(2.0 * t * (g_lo - g_hi));
    let (mut p_lo, mut p_hi) = (1.0, 1.0);
    for k in 2..=k_max {
        p_lo *= lo;
        p_hi *= hi;
        let v = 2.0 * t * (p_lo * g_lo - p_hi * g_hi) + 2.0 * t * (k - 1) as f64 * m[k - 2];
        m.push(v);
    }
    m
}

/// Coefficients of `p(y + s)` in powers of `s`.
pub(crate) fn taylor_shift(c: &[Complex64], y: f64) -> Vec<Complex64> {
    let mut d = c.to_vec();
    let n = d.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let next = d[j + 1];
            d[j] += next * y;
        }
    }
    d
}

pub(crate) fn polynomial_image(c: &[Complex64], y: f64, a: f64, b: f64, t: f64) -> Complex64 {
    let shifted = taylor_shift(c, y);
    let m = gaussian_moments(a - y, b - y, t, shifted.len().saturating_sub(1));
    shifted.iter().zip(&m).map(|(&ci, &mi)| ci * mi).sum()
}

/// Half-width beyond which the Gaussian mass is below `tol`.
fn window(t: f64, tol: f64) -> f64 {
    2.0 * t.sqrt() * ((1.0 / tol).ln().max(1.0) + 4.0).sqrt()
}

pub(crate) fn tower_image(profile: &Profile, y: f64, a: f64, b: f64, t: f64, tol: f64) -> Result<Complex64> {
    let w = window(t, tol);
    let (lo, hi) = (a.max(y - w), b.min(y + w));
    if lo >= hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut points = vec![lo];
    if y > lo && y < hi {
        points.push(y);
    }
    points.push(hi);
    let q = integrate(
        |s| profile.value(s) * gaussian(s - y, t),
        &points,
        Tolerance::absolute(tol),
        4000,
    )?;
    Ok(q.value)
}

pub(crate) fn image_integral(profile: &Profile, y: f64, a: f64, b: f64, t: f64, tol: f64) -> Result<Complex64> {
    match profile.as_polynomial() {
        Some(c) => Ok(polynomial_image(c, y, a, b, t)),
        None => tower_image(profile, y, a, b, t, tol),
    }
}
