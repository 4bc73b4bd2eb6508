//! Sampling heat content over a time grid and extracting coefficients on a
//! known exponent basis.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::asymptotics::SeriesExpansion;
use crate::error::{Error, Result};

/// Environment variable holding the sampling thread count; unset means serial.
pub const THREADS_ENV: &str = "HEATFLOW_THREADS";

/// Condition estimate above which a fit carries a warning.
pub const CONDITION_WARNING: f64 = 1e10;

/// Coefficients within this multiple of their propagated noise are unresolved.
pub const NOISE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub beta: Complex64,
    pub quad_tol: f64,
}

/// Samples with strictly increasing positive times.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    rows: Vec<Sample>,
}

impl SampleSet {
    pub fn new(rows: Vec<Sample>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if !(r.t.is_finite() && r.t > 0.0) {
                return Err(Error::InvalidSamples(format!("row {i}: time {} is not positive", r.t)));
            }
            if !(r.beta.re.is_finite() && r.beta.im.is_finite()) {
                return Err(Error::InvalidSamples(format!("row {i}: heat content is not finite")));
            }
            if !(r.quad_tol >= 0.0) {
                return Err(Error::InvalidSamples(format!("row {i}: negative tolerance")));
            }
        }
        if rows.windows(2).any(|w| w[0].t >= w[1].t) {
            return Err(Error::InvalidSamples("times must be strictly increasing".into()));
        }
        Ok(Self { rows })
    }

    /// Sorts by time before validating.
    pub fn from_unsorted(mut rows: Vec<Sample>) -> Result<Self> {
        rows.sort_by(|p, q| p.t.total_cmp(&q.t));
        Self::new(rows)
    }

    pub fn rows(&self) -> &[Sample] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }
}

/// `count` geometrically spaced times from `t_min` to `t_max` inclusive.
pub fn geometric_grid(t_min: f64, t_max: f64, count: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
        return Err(Error::InvalidSamples(format!("bad time range [{t_min}, {t_max}]")));
    }
    if count < 2 {
        return Err(Error::InvalidSamples(format!("grid needs at least two points, got {count}")));
    }
    let ratio = (t_max / t_min).ln() / (count - 1) as f64;
    let mut ts: Vec<f64> = (0..count).map(|i| t_min * (ratio * i as f64).exp()).collect();
    ts[count - 1] = t_max;
    Ok(ts)
}

/// Thread count requested through [`THREADS_ENV`], if any.
pub fn configured_threads() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Evaluates `f` at each time. Results are in grid order regardless of
/// scheduling.
pub fn sample<F>(times: &[f64], quad_tol: f64, f: F) -> Result<SampleSet>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let eval = |&t: &f64| f(t).map(|beta| Sample { t, beta, quad_tol });
    let rows: Result<Vec<Sample>> = match configured_threads() {
        Some(n) if n > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidSamples(format!("thread pool: {e}")))?;
            pool.install(|| times.par_iter().map(eval).collect())
        }
        _ => times.iter().map(eval).collect(),
    };
    SampleSet::new(rows?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientStatus {
    Pass,
    Fail,
    /// The compared magnitude is within the noise floor.
    Unresolved,
}

impl fmt::Display for CoefficientStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientStatus::Pass => "pass",
            CoefficientStatus::Fail => "fail",
            CoefficientStatus::Unresolved => "unresolved",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub exponents: Vec<f64>,
    pub fitted: Vec<Complex64>,
    pub predicted: Vec<Option<Complex64>>,
    pub abs_error: Vec<Option<f64>>,
    pub rel_error: Vec<Option<f64>>,
    /// Quadrature noise propagated through the pseudo-inverse.
    pub noise: Vec<f64>,
    pub residual_norm: f64,
    pub condition: f64,
    pub samples: usize,
    pub warnings: Vec<String>,
}

impl FitReport {
    /// Attaches predictions in exponent order.
    pub fn compare(mut self, predicted: &[Option<Complex64>]) -> Self {
        for (k, p) in predicted.iter().enumerate().take(self.exponents.len()) {
            self.predicted[k] = *p;
            if let Some(p) = p {
                let abs = (self.fitted[k] - p).norm();
                self.abs_error[k] = Some(abs);
                self.rel_error[k] = (p.norm() > 0.0).then(|| abs / p.norm());
            }
        }
        self
    }

    pub fn index_of(&self, exponent: f64) -> Option<usize> {
        self.exponents.iter().position(|&e| (e - exponent).abs() < 1e-12)
    }

    pub fn coefficient(&self, exponent: f64) -> Option<Complex64> {
        self.index_of(exponent).map(|k| self.fitted[k])
    }

    /// Whether the fitted coefficient is indistinguishable from zero.
    pub fn below_noise(&self, k: usize) -> bool {
        self.fitted[k].norm() <= NOISE_FACTOR * self.noise[k]
    }

    pub fn status(&self, k: usize, rel_tol: f64) -> CoefficientStatus {
        match (self.predicted[k], self.rel_error[k], self.abs_error[k]) {
            (Some(p), _, _) if p.norm() <= NOISE_FACTOR * self.noise[k] => CoefficientStatus::Unresolved,
            (Some(_), Some(r), _) if r <= rel_tol => CoefficientStatus::Pass,
            (Some(_), None, Some(a)) if a <= rel_tol => CoefficientStatus::Pass,
            (None, _, _) => CoefficientStatus::Unresolved,
            _ => CoefficientStatus::Fail,
        }
    }
}

/// Least squares `β(t_i) ≈ Σ_k a_k t_i^{e_k}` with column scaling.
pub fn fit_known_exponents(samples: &SampleSet, exponents: &[f64]) -> Result<FitReport> {
    let (n, m) = (samples.len(), exponents.len());
    if m == 0 {
        return Err(Error::IllPosedFit("no exponents".into()));
    }
    if n < m + 2 {
        return Err(Error::IllPosedFit(format!("{n} samples for {m} exponents; need at least {}", m + 2)));
    }
    for (i, e) in exponents.iter().enumerate() {
        if !e.is_finite() || exponents[..i].iter().any(|f| (f - e).abs() < 1e-12) {
            return Err(Error::IllPosedFit(format!("exponent {e} is repeated or not finite")));
        }
    }
    let rows = samples.rows();
    let mut a = DMatrix::from_fn(n, m, |i, k| rows[i].t.powf(exponents[k]));
    let scale: Vec<f64> = (0..m).map(|k| a.column(k).norm()).collect();
    for (k, s) in scale.iter().enumerate() {
        a.column_mut(k).unscale_mut(*s);
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(smin > 1e-15 * smax) {
        return Err(Error::RankDeficient(condition));
    }
    let pinv = svd.pseudo_inverse(0.0).map_err(|e| Error::IllPosedFit(e.to_string()))?;

    let re = DVector::from_fn(n, |i, _| rows[i].beta.re);
    let im = DVector::from_fn(n, |i, _| rows[i].beta.im);
    let (xr, xi) = (&pinv * &re, &pinv * &im);
    let fitted: Vec<Complex64> = (0..m).map(|k| Complex64::new(xr[k], xi[k]) / scale[k]).collect();
    let noise: Vec<f64> = (0..m)
        .map(|k| (0..n).map(|i| pinv[(k, i)].abs() * rows[i].quad_tol).sum::<f64>() / scale[k])
        .collect();
    let (rr, ri) = (&a * &xr - &re, &a * &xi - &im);
    let residual_norm = (rr.norm_squared() + ri.norm_squared()).sqrt();

    let mut warnings = Vec::new();
    if condition > CONDITION_WARNING {
        let w = format!("design matrix condition {condition:.3e} exceeds {CONDITION_WARNING:.0e}");
        log::warn!("{w}");
        warnings.push(w);
    }
    Ok(FitReport {
        exponents: exponents.to_vec(),
        fitted,
        predicted: vec![None; m],
        abs_error: vec![None; m],
        rel_error: vec![None; m],
        noise,
        residual_norm,
        condition,
        samples: n,
        warnings,
    })
}

/// Log-log slope of the remainder after subtracting the first `subtracted`
/// predicted terms.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayOrder {
    pub subtracted: usize,
    /// Real part of the exponent of the last subtracted term.
    pub last_exponent: Option<f64>,
    /// `None` when fewer than two samples stay above the noise floor.
    pub slope: Option<f64>,
    pub points_used: usize,
}

impl DecayOrder {
    /// The remainder decays faster than the last subtracted term, or is
    /// lost in noise.
    pub fn consistent(&self) -> bool {
        match (self.slope, self.last_exponent) {
            (Some(s), Some(e)) => s > e,
            _ => true,
        }
    }
}

pub fn sequential_residual_check(samples: &SampleSet, predicted: &SeriesExpansion) -> Result<Vec<DecayOrder>> {
    let terms = predicted.terms();
    if terms.is_empty() {
        return Err(Error::IllPosedFit("predicted series has no terms".into()));
    }
    let mut out = Vec::with_capacity(terms.len() + 1);
    for k in 0..=terms.len() {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for r in samples.rows() {
            let ln_t = r.t.ln();
            let model: Complex64 = terms[..k].iter().map(|(e, c)| c * (e * ln_t).exp()).sum();
            let rem = (r.beta - model).norm();
            if rem > NOISE_FACTOR * r.quad_tol && rem > 0.0 {
                xs.push(ln_t);
                ys.push(rem.ln());
            }
        }
        let slope = (xs.len() >= 2).then(|| line_slope(&xs, &ys));
        out.push(DecayOrder {
            subtracted: k,
            last_exponent: k.checked_sub(1).map(|i| terms[i].0.re),
            slope,
            points_used: xs.len(),
        });
    }
    Ok(out)
}

fn line_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationRow {
    pub t: f64,
    pub delta: f64,
    pub bound: f64,
}

impl LocalizationRow {
    pub fn within_bound(&self) -> bool {
        self.delta <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationReport {
    pub rows: Vec<LocalizationRow>,
    /// Fit of `ln|Δβ|` on `{1, 1/t}`; `None` if `Δβ` vanishes.
    pub fit: Option<FitReport>,
    pub slope: Option<f64>,
    /// `−(1 − 0.05) ε²/8`.
    pub slope_limit: f64,
}

impl LocalizationReport {
    pub fn violations(&self) -> Vec<f64> {
        self.rows.iter().filter(|r| !r.within_bound()).map(|r| r.t).collect()
    }

    pub fn slope_ok(&self) -> bool {
        self.slope.is_none_or(|s| s <= self.slope_limit)
    }

    pub fn passes(&self) -> bool {
        self.violations().is_empty() && self.slope_ok()
    }
}

/// `2^{(2+m)/2} ‖φ‖_{L¹} ‖ρ‖_∞ e^{−ε²/(8t)}`.
pub fn localization_bound(t: f64, epsilon: f64, m: u32, phi_l1: f64, rho_inf: f64) -> f64 {
    2f64.powf((2.0 + f64::from(m)) / 2.0) * phi_l1 * rho_inf * (-epsilon * epsilon / (8.0 * t)).exp()
}

/// Checks directly computed differences `Δβ(t)`; each sample's tolerance is
/// read as a relative error of `Δβ`.
pub fn localization_from_delta(
    delta: &SampleSet,
    epsilon: f64,
    m: u32,
    phi_l1: f64,
    rho_inf: f64,
) -> Result<LocalizationReport> {
    let rows: Vec<LocalizationRow> = delta
        .rows()
        .iter()
        .map(|r| LocalizationRow {
            t: r.t,
            delta: r.beta.norm(),
            bound: localization_bound(r.t, epsilon, m, phi_l1, rho_inf),
        })
        .collect();
    let logs: Vec<Sample> = delta
        .rows()
        .iter()
        .filter(|r| r.beta.norm() > 0.0)
        .map(|r| Sample {
            t: r.t,
            beta: Complex64::new(r.beta.norm().ln(), 0.0),
            quad_tol: r.quad_tol,
        })
        .collect();
    let fit = if logs.len() >= 4 {
        Some(fit_known_exponents(&SampleSet::new(logs)?, &[0.0, -1.0])?)
    } else {
        None
    };
    let slope = fit.as_ref().map(|f| f.fitted[1].re);
    Ok(LocalizationReport {
        rows,
        fit,
        slope,
        slope_limit: -0.95 * epsilon * epsilon / 8.0,
    })
}

/// Localization check from two sample sets on the same grid.
pub fn localization_decay(
    samples_full: &SampleSet,
    samples_truncated: &SampleSet,
    epsilon: f64,
    m: u32,
    phi_l1: f64,
    rho_inf: f64,
) -> Result<LocalizationReport> {
    if samples_full.times() != samples_truncated.times() {
        return Err(Error::InvalidSamples("sample grids differ".into()));
    }
    let delta: Vec<Sample> = samples_full
        .rows()
        .iter()
        .zip(samples_truncated.rows())
        .map(|(f, g)| {
            let d = f.beta - g.beta;
            let rel = if d.norm() > 0.0 { (f.quad_tol + g.quad_tol) / d.norm() } else { 0.0 };
            Sample {
                t: f.t,
                beta: d,
                quad_tol: rel,
            }
        })
        .collect();
    localization_from_delta(&SampleSet::new(delta)?, epsilon, m, phi_l1, rho_inf)
}
