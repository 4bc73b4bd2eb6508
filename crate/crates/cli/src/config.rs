//! Experiment configuration: defaults, an optional `key = value` file, and
//! command-line flags, in increasing precedence.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Constants,
    Verify1d,
    VerifyGeometry,
    VerifyAverage,
    VerifyDimshift,
    Localize,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Constants => "constants",
            Experiment::Verify1d => "verify-1d",
            Experiment::VerifyGeometry => "verify-geometry",
            Experiment::VerifyAverage => "verify-average",
            Experiment::VerifyDimshift => "verify-dimshift",
            Experiment::Localize => "localize",
        }
    }

    /// Geometry keys this experiment reads, beyond the common ones.
    fn geometry_keys(self) -> &'static [&'static str] {
        match self {
            Experiment::Constants | Experiment::VerifyDimshift => &[],
            Experiment::Verify1d => &["circumference", "interval"],
            Experiment::VerifyGeometry => &["warp-fprime", "warp-fsecond", "warp-delta"],
            Experiment::VerifyAverage => &["interval"],
            Experiment::Localize => &["interval", "epsilon"],
        }
    }

    fn default_grid(self) -> (f64, f64, usize) {
        match self {
            Experiment::VerifyAverage => (1e-3, 2e-2, 8),
            Experiment::Localize => (2e-3, 2e-2, 10),
            _ => (1e-4, 2.5e-2, 16),
        }
    }

    fn default_quad_tol(self) -> f64 {
        match self {
            // Relative to the localization difference.
            Experiment::Localize => 1e-8,
            _ => 1e-10,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const COMMON_KEYS: [&str; 6] = ["alpha", "t-min", "t-max", "t-count", "quad-tol", "out"];

/// Raw key/value settings before interpretation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn insert(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(normalize(key), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Later settings win.
    pub fn merge(mut self, other: Settings) -> Settings {
        self.0.extend(other.0);
        self
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Settings, CliError> {
    let mut s = Settings::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
        if k.trim().is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", n + 1)));
        }
        s.insert(k, v.trim());
    }
    Ok(s)
}

pub fn read_config_file(path: &Path) -> Result<Settings, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub alpha: Complex64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
    pub quad_tol: f64,
    pub out: PathBuf,
    pub circumference: f64,
    pub interval: (f64, f64),
    pub epsilon: f64,
    pub warp_fprime: Vec<f64>,
    pub warp_fsecond: Vec<f64>,
    pub warp_delta: Vec<f64>,
}

fn parse_f64(key: &str, v: &str) -> Result<f64, CliError> {
    v.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Usage(format!("{key}: '{v}' is not a finite number")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| parse_f64(key, x)).collect()
}

fn parse_pair(key: &str, v: &str) -> Result<(f64, f64), CliError> {
    match parse_list(key, v)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::Usage(format!("{key}: expected two comma-separated numbers, got '{v}'"))),
    }
}

impl ExperimentConfig {
    /// Interprets merged settings; unknown or irrelevant keys are errors.
    pub fn from_settings(experiment: Experiment, s: &Settings) -> Result<Self, CliError> {
        let allowed: Vec<&str> = COMMON_KEYS.iter().chain(experiment.geometry_keys()).copied().collect();
        if let Some(bad) = s.keys().find(|k| !allowed.contains(k)) {
            return Err(CliError::Usage(format!(
                "unknown key '{bad}' for {experiment}; allowed: {}",
                allowed.join(", ")
            )));
        }
        let (t_min, t_max, t_count) = experiment.default_grid();
        let num = |key: &str, default: f64| s.get(key).map_or(Ok(default), |v| parse_f64(key, v));
        let list = |key: &str, default: &[f64]| s.get(key).map_or(Ok(default.to_vec()), |v| parse_list(key, v));
        let alpha = match s.get("alpha") {
            Some(v) => {
                let (re, im) = parse_pair("alpha", v)?;
                Complex64::new(re, im)
            }
            None => Complex64::new(0.0, 0.0),
        };
        let t_count = match s.get("t-count") {
            Some(v) => v
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("t-count: '{v}' is not a non-negative integer")))?,
            None => t_count,
        };
        let interval = match s.get("interval") {
            Some(v) => parse_pair("interval", v)?,
            None => (0.0, PI),
        };
        let out = s
            .get("out")
            .map_or_else(|| PathBuf::from(format!("heatflow-{experiment}.csv")), PathBuf::from);
        let config = Self {
            experiment,
            alpha,
            t_min: num("t-min", t_min)?,
            t_max: num("t-max", t_max)?,
            t_count,
            quad_tol: num("quad-tol", experiment.default_quad_tol())?,
            out,
            circumference: num("circumference", 2.0 * PI)?,
            interval,
            epsilon: num("epsilon", 1.0)?,
            warp_fprime: list("warp-fprime", &[0.5, -0.25])?,
            warp_fsecond: list("warp-fsecond", &[0.3, 0.1])?,
            warp_delta: list("warp-delta", &[1.0, 0.5])?,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |m: String| Err(CliError::Usage(m));
        if !(self.alpha.re < 1.0) {
            return fail(format!("alpha must have real part below 1, got {}", self.alpha.re));
        }
        if !(self.t_min > 0.0 && self.t_min < self.t_max) {
            return fail(format!("need 0 < t-min < t-max, got {} and {}", self.t_min, self.t_max));
        }
        if self.t_count < 4 {
            return fail(format!("t-count must be at least 4, got {}", self.t_count));
        }
        if !(self.quad_tol > 0.0) {
            return fail(format!("quad-tol must be positive, got {}", self.quad_tol));
        }
        if !(self.interval.0 < self.interval.1) {
            return fail(format!("interval [{}, {}] is empty", self.interval.0, self.interval.1));
        }
        if !(self.circumference > self.interval.1 - self.interval.0) {
            return fail(format!(
                "circumference {} must exceed the interval length {}",
                self.circumference,
                self.interval.1 - self.interval.0
            ));
        }
        if !(self.epsilon > 0.0) {
            return fail(format!("epsilon must be positive, got {}", self.epsilon));
        }
        let n = self.warp_fprime.len();
        if self.warp_fsecond.len() != n || self.warp_delta.len() != n {
            return fail(format!(
                "warp lists must have equal lengths, got {}, {}, {}",
                n,
                self.warp_fsecond.len(),
                self.warp_delta.len()
            ));
        }
        Ok(())
    }

    /// `key = value` lines describing this configuration.
    pub fn describe(&self) -> Vec<String> {
        let mut v = vec![
            format!("alpha = {},{}", self.alpha.re, self.alpha.im),
            format!("t-min = {:e}", self.t_min),
            format!("t-max = {:e}", self.t_max),
            format!("t-count = {}", self.t_count),
            format!("quad-tol = {:e}", self.quad_tol),
        ];
        let join = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        for key in self.experiment.geometry_keys() {
            v.push(match *key {
                "circumference" => format!("circumference = {}", self.circumference),
                "interval" => format!("interval = {},{}", self.interval.0, self.interval.1),
                "epsilon" => format!("epsilon = {}", self.epsilon),
                "warp-fprime" => format!("warp-fprime = {}", join(&self.warp_fprime)),
                "warp-fsecond" => format!("warp-fsecond = {}", join(&self.warp_fsecond)),
                _ => format!("warp-delta = {}", join(&self.warp_delta)),
            });
        }
        v
    }
}
