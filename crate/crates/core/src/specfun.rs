//! Complex Gamma function and the normalizing constants `c_α`.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Singularity exponent of the initial temperature at the boundary:
/// `φ ~ r^{-α}(φ_0 + φ_1 r + …)`. Integrability requires `Re α < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha(Complex64);

impl Alpha {
    pub fn new(value: Complex64) -> Result<Self> {
        if value.re < 1.0 && value.re.is_finite() && value.im.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::InvalidAlpha {
                re: value.re,
                im: value.im,
            })
        }
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(Complex64::new(re, 0.0))
    }

    pub const ZERO: Alpha = Alpha(Complex64::new(0.0, 0.0));

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }

    /// `α + k`; fails if the shifted exponent is no longer admissible.
    pub fn shifted(self, k: i32) -> Result<Self> {
        Self::new(self.0 + f64::from(k))
    }

    /// `α − k` for `k ≥ 0`, which is always admissible.
    pub fn lowered(self, k: u32) -> Self {
        Self(self.0 - f64::from(k))
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.0.re, self.0.im)
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;
    fn try_from(re: f64) -> Result<Self> {
        Self::real(re)
    }
}

// Lanczos coefficients for g = 7, n = 9.
#[allow(clippy::excessive_precision)]
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(z)` for complex `z`.
///
/// Lanczos approximation on `Re z ≥ 1/2`, reflection formula otherwise.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::GammaPole(z.re));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz), with the sine argument reduced to
        // |Re| ≤ 1/2 so the zeros near negative integers keep full accuracy.
        let n = z.re.round();
        let w = z - n;
        let mut s = (w * PI).sin();
        if (n as i64) % 2 != 0 {
            s = -s;
        }
        return PI / (s * gamma_unchecked(1.0 - z));
    }
    let x = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((x + 0.5) * t.ln() - t).exp() * acc
}

/// `c_α = 2^{1-α} Γ((2-α)/2) / (√π (α-1))`.
pub fn c_alpha(alpha: Alpha) -> Complex64 {
    normalizing_constant(alpha.value())
}

/// The same closed form at an arbitrary complex argument; used for shifted
/// exponents such as `c_{α-2}`.
pub fn normalizing_constant(a: Complex64) -> Complex64 {
    let two_pow = ((1.0 - a) * LN_2).exp();
    two_pow * gamma_unchecked((2.0 - a) / 2.0) / (PI.sqrt() * (a - 1.0))
}

/// Real error function.
#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Real complementary error function, accurate in relative terms deep into
/// the tail.
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}
