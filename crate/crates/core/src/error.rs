use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("singularity exponent {re}{im:+}i must have real part below 1")]
    InvalidAlpha { re: f64, im: f64 },

    #[error("gamma function pole at {0}")]
    GammaPole(f64),

    #[error("moment ({k}, {l}) is outside the closed-form table")]
    OutOfTable { k: usize, l: usize },

    #[error("moment ({k}, {l}) diverges for this exponent")]
    DivergentMoment { k: usize, l: usize },

    #[error("quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tolerance:e} after {intervals} subintervals")]
    QuadratureFailure {
        estimate: f64,
        tolerance: f64,
        intervals: usize,
    },

    #[error("invalid tolerance {0:e}")]
    InvalidTolerance(f64),

    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("point {x} lies outside ({a}, {b})")]
    OutsideInterval { x: f64, a: f64, b: f64 },

    #[error("derivative of order {requested} requested from a tower of depth {depth}")]
    DerivativeTowerTooShallow { requested: usize, depth: usize },

    #[error("the relation system for the universal constants is singular")]
    SingularSystem,

    #[error("ill-posed fit: {0}")]
    IllPosedFit(String),

    #[error("design matrix is rank deficient (condition estimate {0:e})")]
    RankDeficient(f64),

    #[error("invalid sample set: {0}")]
    InvalidSamples(String),
}

pub type Result<T> = std::result::Result<T, Error>;
