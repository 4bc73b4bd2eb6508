//! Initial temperature and specific heat on an interval.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Endpoint, Interval};
use crate::specfun::Alpha;

/// `(n, x) ↦ f^{(n)}(x)`.
pub type DerivativeFn = Arc<dyn Fn(usize, f64) -> Complex64 + Send + Sync>;

/// A smooth function with derivatives available on demand.
#[derive(Clone)]
pub enum Profile {
    /// Monomial coefficients, lowest degree first.
    Polynomial(Vec<Complex64>),
    /// A callable derivative tower; `depth` bounds the available order.
    Tower { derivative: DerivativeFn, depth: Option<usize> },
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            Profile::Tower { depth, .. } => f.debug_struct("Tower").field("depth", depth).finish_non_exhaustive(),
        }
    }
}

impl Profile {
    pub fn constant(c: f64) -> Self {
        Profile::Polynomial(vec![Complex64::new(c, 0.0)])
    }

    pub fn polynomial(coefficients: &[f64]) -> Self {
        Profile::Polynomial(coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn complex_polynomial(coefficients: Vec<Complex64>) -> Self {
        Profile::Polynomial(coefficients)
    }

    pub fn tower<F>(derivative: F, depth: Option<usize>) -> Self
    where
        F: Fn(usize, f64) -> Complex64 + Send + Sync + 'static,
    {
        Profile::Tower {
            derivative: Arc::new(derivative),
            depth,
        }
    }

    pub fn as_polynomial(&self) -> Option<&[Complex64]> {
        match self {
            Profile::Polynomial(c) => Some(c),
            Profile::Tower { .. } => None,
        }
    }

    pub fn value(&self, x: f64) -> Complex64 {
        match self {
            Profile::Polynomial(c) => horner(c, x),
            Profile::Tower { derivative, .. } => derivative(0, x),
        }
    }

    pub fn derivative(&self, n: usize, x: f64) -> Result<Complex64> {
        match self {
            Profile::Polynomial(c) => Ok(horner(&differentiate(c, n), x)),
            Profile::Tower { derivative, depth } => match depth {
                Some(d) if n > *d => Err(Error::DerivativeTowerTooShallow {
                    requested: n,
                    depth: *d,
                }),
                _ => Ok(derivative(n, x)),
            },
        }
    }

    /// Coefficients of `r ↦ f(x0 + direction·r)` through `r^order`.
    pub fn taylor(&self, x0: f64, direction: f64, order: usize) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(order + 1);
        let mut factorial = 1.0;
        let mut sign = 1.0;
        for n in 0..=order {
            if n > 0 {
                factorial *= n as f64;
                sign *= direction;
            }
            out.push(self.derivative(n, x0)? * (sign / factorial));
        }
        Ok(out)
    }

    /// `a·p + b·q`; the result is a tower unless both inputs are polynomials.
    pub fn linear_combination(a: Complex64, p: &Profile, b: Complex64, q: &Profile) -> Profile {
        if let (Some(pc), Some(qc)) = (p.as_polynomial(), q.as_polynomial()) {
            let n = pc.len().max(qc.len());
            let z = Complex64::new(0.0, 0.0);
            let coeffs = (0..n)
                .map(|i| a * pc.get(i).copied().unwrap_or(z) + b * qc.get(i).copied().unwrap_or(z))
                .collect();
            return Profile::Polynomial(coeffs);
        }
        let depth = match (p.depth(), q.depth()) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (d, None) | (None, d) => d,
        };
        let (p, q) = (p.clone(), q.clone());
        Profile::tower(
            move |n, x| {
                a * p.derivative(n, x).unwrap_or_default() + b * q.derivative(n, x).unwrap_or_default()
            },
            depth,
        )
    }

    fn depth(&self) -> Option<usize> {
        match self {
            Profile::Polynomial(_) => None,
            Profile::Tower { depth, .. } => *depth,
        }
    }
}

pub(crate) fn horner(c: &[Complex64], x: f64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * x + ci)
}

fn differentiate(c: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut d = c.to_vec();
    for _ in 0..n {
        if d.len() <= 1 {
            return vec![Complex64::new(0.0, 0.0)];
        }
        d = d.iter().enumerate().skip(1).map(|(i, &ci)| ci * i as f64).collect();
    }
    d
}

fn endpoint_taylor(profile: &Profile, interval: &Interval, end: Endpoint, order: usize) -> Result<Vec<Complex64>> {
    let direction = match end {
        Endpoint::Left => 1.0,
        Endpoint::Right => -1.0,
    };
    profile.taylor(interval.endpoint(end), direction, order)
}

/// Initial temperature `φ(x) = r(x)^{-α} s(x)`, with `r` the distance to the
/// singular endpoint and `s` smooth on the closed interval.
#[derive(Debug, Clone)]
pub struct TemperatureField {
    interval: Interval,
    alpha: Alpha,
    singular_end: Endpoint,
    smooth: Profile,
}

impl TemperatureField {
    pub fn new(interval: Interval, alpha: Alpha, singular_end: Endpoint, smooth: Profile) -> Self {
        Self {
            interval,
            alpha,
            singular_end,
            smooth,
        }
    }

    /// A field smooth up to both endpoints.
    pub fn smooth(interval: Interval, smooth: Profile) -> Self {
        Self::new(interval, Alpha::ZERO, Endpoint::Left, smooth)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn singular_end(&self) -> Endpoint {
        self.singular_end
    }

    pub fn profile(&self) -> &Profile {
        &self.smooth
    }

    pub fn is_singular(&self) -> bool {
        self.alpha.value() != Complex64::new(0.0, 0.0)
    }

    /// `r^{-α}` at distance `r > 0` from the singular endpoint.
    pub fn weight(&self, r: f64) -> Complex64 {
        if self.is_singular() {
            (-self.alpha.value() * r.ln()).exp()
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    pub fn value(&self, x: f64) -> Complex64 {
        self.weight(self.interval.distance(x, self.singular_end)) * self.smooth.value(x)
    }

    /// Jets `φ_0..φ_order` at `end` in the monomial convention; at the
    /// singular endpoint these are the Taylor coefficients of `s`, elsewhere
    /// those of `φ` itself.
    pub fn jets(&self, end: Endpoint, order: usize) -> Result<Vec<Complex64>> {
        let s = endpoint_taylor(&self.smooth, &self.interval, end, order)?;
        if end == self.singular_end || !self.is_singular() {
            return Ok(s);
        }
        // (ℓ − r)^{-α} = ℓ^{-α} Σ (α)_n/n! (r/ℓ)^n.
        let l = self.interval.length();
        let a = self.alpha.value();
        let mut w = Vec::with_capacity(order + 1);
        let mut term = (-a * l.ln()).exp();
        for n in 0..=order {
            w.push(term);
            term *= (a + n as f64) / ((n + 1) as f64 * l);
        }
        Ok((0..=order)
            .map(|n| (0..=n).map(|k| w[k] * s[n - k]).sum())
            .collect())
    }
}

/// Specific heat `ρ`, smooth up to the boundary.
#[derive(Debug, Clone)]
pub struct SpecificHeatField {
    interval: Interval,
    smooth: Profile,
}

impl SpecificHeatField {
    pub fn new(interval: Interval, smooth: Profile) -> Self {
        Self { interval, smooth }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn profile(&self) -> &Profile {
        &self.smooth
    }

    pub fn value(&self, x: f64) -> Complex64 {
        self.smooth.value(x)
    }

    pub fn derivative(&self, n: usize, x: f64) -> Result<Complex64> {
        self.smooth.derivative(n, x)
    }

    pub fn jets(&self, end: Endpoint, order: usize) -> Result<Vec<Complex64>> {
        endpoint_taylor(&self.smooth, &self.interval, end, order)
    }
}
