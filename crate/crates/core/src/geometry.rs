//! Model geometries and the boundary data consumed by the coefficient
//! formulas, including the warped-product collars used to excite the
//! curvature invariants.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidGeometry(format!("interval [{a}, {b}] is empty or unbounded")))
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn endpoint(&self, end: Endpoint) -> f64 {
        match end {
            Endpoint::Left => self.a,
            Endpoint::Right => self.b,
        }
    }

    /// Distance from `x` to the given endpoint, measured inward.
    pub fn distance(&self, x: f64, end: Endpoint) -> f64 {
        match end {
            Endpoint::Left => x - self.a,
            Endpoint::Right => self.b - x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Left,
    Right,
}

impl Endpoint {
    pub fn other(self) -> Self {
        match self {
            Endpoint::Left => Endpoint::Right,
            Endpoint::Right => Endpoint::Left,
        }
    }
}

/// The exactly solvable settings in which heat content is computed.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelGeometry {
    /// A closed circle, `Ω = M`. Only valid as a product factor.
    Circle { circumference: f64 },
    /// `Ω = [a, b]` inside a circle; heat flows out freely.
    IntervalInCircle { interval: Interval, circumference: f64 },
    /// `Ω = [a, b]` inside the real line.
    IntervalInLine { interval: Interval },
    /// The Dirichlet realization on `[a, b]`.
    DirichletInterval { interval: Interval },
    /// The Neumann realization on `[a, b]`.
    NeumannInterval { interval: Interval },
    /// A product in which exactly one factor carries a boundary.
    Product(Vec<ModelGeometry>),
}

impl ModelGeometry {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelGeometry::Circle { circumference } => positive(*circumference, "circumference"),
            ModelGeometry::IntervalInCircle {
                interval,
                circumference,
            } => {
                positive(*circumference, "circumference")?;
                if interval.length() < *circumference {
                    Ok(())
                } else {
                    Err(Error::InvalidGeometry(format!(
                        "interval of length {} does not fit in a circle of circumference {}",
                        interval.length(),
                        circumference
                    )))
                }
            }
            ModelGeometry::IntervalInLine { .. }
            | ModelGeometry::DirichletInterval { .. }
            | ModelGeometry::NeumannInterval { .. } => Ok(()),
            ModelGeometry::Product(factors) => {
                let mut bounded = 0;
                for f in factors {
                    if matches!(f, ModelGeometry::Product(_)) {
                        return Err(Error::InvalidGeometry("nested products are not supported".into()));
                    }
                    f.validate()?;
                    if f.has_boundary() {
                        bounded += 1;
                    }
                }
                if bounded == 1 {
                    Ok(())
                } else {
                    Err(Error::InvalidGeometry(format!(
                        "a product needs exactly one factor with boundary, found {bounded}"
                    )))
                }
            }
        }
    }

    pub fn has_boundary(&self) -> bool {
        match self {
            ModelGeometry::Circle { .. } => false,
            ModelGeometry::Product(factors) => factors.iter().any(|f| f.has_boundary()),
            _ => true,
        }
    }

    /// The integration domain `Ω` of a one-dimensional geometry.
    pub fn domain(&self) -> Option<Interval> {
        match self {
            ModelGeometry::Circle { circumference } => Interval::new(0.0, *circumference).ok(),
            ModelGeometry::IntervalInCircle { interval, .. }
            | ModelGeometry::IntervalInLine { interval }
            | ModelGeometry::DirichletInterval { interval }
            | ModelGeometry::NeumannInterval { interval } => Some(*interval),
            ModelGeometry::Product(_) => None,
        }
    }
}

fn positive(v: f64, what: &str) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidGeometry(format!("{what} must be positive, got {v}")))
    }
}

/// Warping data along one torus direction of the collar metric
/// `Σ e^{2 f_a(x)} dθ_a² + dx²` and operator drift `δ_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpDirection {
    /// `f_a(0)`; must vanish.
    pub f0: f64,
    /// `f_a'(0)`.
    pub f1: f64,
    /// `f_a''(0)`.
    pub f2: f64,
    pub delta: f64,
}

impl WarpDirection {
    pub fn new(f1: f64, f2: f64, delta: f64) -> Self {
        Self {
            f0: 0.0,
            f1,
            f2,
            delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WarpedCollar {
    directions: Vec<WarpDirection>,
}

impl WarpedCollar {
    pub fn new(directions: Vec<WarpDirection>) -> Result<Self> {
        for (i, d) in directions.iter().enumerate() {
            if d.f0 != 0.0 {
                return Err(Error::InvalidGeometry(format!(
                    "warping function {i} must vanish on the boundary, got f(0) = {}",
                    d.f0
                )));
            }
            if !(d.f1.is_finite() && d.f2.is_finite() && d.delta.is_finite()) {
                return Err(Error::InvalidGeometry(format!("warping direction {i} is not finite")));
            }
        }
        Ok(Self { directions })
    }

    /// Collar from parallel lists of `f'(0)`, `f''(0)` and `δ`.
    pub fn from_lists(f_prime: &[f64], f_second: &[f64], delta: &[f64]) -> Result<Self> {
        if f_prime.len() != f_second.len() || f_prime.len() != delta.len() {
            return Err(Error::InvalidGeometry(format!(
                "warp lists have lengths {}, {}, {}",
                f_prime.len(),
                f_second.len(),
                delta.len()
            )));
        }
        Self::new(
            f_prime
                .iter()
                .zip(f_second)
                .zip(delta)
                .map(|((&f1, &f2), &d)| WarpDirection::new(f1, f2, d))
                .collect(),
        )
    }

    pub fn directions(&self) -> &[WarpDirection] {
        &self.directions
    }
}

/// Everything the order-≤2 boundary coefficients consume at one boundary
/// component. Jets use the monomial convention
/// `φ ~ r^{-α}(φ_0 + φ_1 r + φ_2 r² + …)`. The second fundamental form is kept
/// only through its contractions `L_aa`, `(L_aa)²` and `L_ab L_ab`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryComponentData {
    pub phi: [Complex64; 3],
    pub rho: [Complex64; 3],
    pub l_trace: f64,
    pub l_trace_sq: f64,
    pub l_sq_trace: f64,
    pub ric_mm: f64,
    pub e_val: f64,
    pub tau: f64,
    /// `⟨φ_{0;a}, ρ_{0;a}⟩`.
    pub tangential_pairing: Complex64,
    /// Robin coefficient `S`; read only by the Robin coefficients.
    pub robin_s: f64,
}

impl BoundaryComponentData {
    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            phi: [z; 3],
            rho: [z; 3],
            l_trace: 0.0,
            l_trace_sq: 0.0,
            l_sq_trace: 0.0,
            ric_mm: 0.0,
            e_val: 0.0,
            tau: 0.0,
            tangential_pairing: z,
            robin_s: 0.0,
        }
    }

    /// Whether all curvature and tangential fields vanish.
    pub fn is_flat(&self) -> bool {
        self.l_trace == 0.0
            && self.l_trace_sq == 0.0
            && self.l_sq_trace == 0.0
            && self.ric_mm == 0.0
            && self.tau == 0.0
            && self.tangential_pairing == Complex64::new(0.0, 0.0)
    }
}

/// Data at a flat, straight boundary: jets pass through, geometry vanishes.
pub fn straight_boundary_data(phi: [Complex64; 3], rho: [Complex64; 3]) -> BoundaryComponentData {
    BoundaryComponentData {
        phi,
        rho,
        ..BoundaryComponentData::zero()
    }
}

/// Boundary data on `{x = 0}` of the warped collar, with `φ_Ω = φ_Σ` and
/// `ρ_Ω = ρ_Σ e^{−Σ f_a}`.
///
/// `L_ab = −f_a' δ_ab`, `Ric_mm = −Σ(f_a'' + f_a'²)`,
/// `E = ½Σf_a'' − ¼Σδ_a² + ¼(Σf_a')²`, and the jets pick up the connection
/// term `∓½Σf_a'` in the normal direction.
pub fn warped_boundary_data(
    collar: &WarpedCollar,
    phi_sigma: [Complex64; 3],
    rho_sigma: [Complex64; 3],
) -> BoundaryComponentData {
    let d = collar.directions();
    let sum_f1: f64 = d.iter().map(|w| w.f1).sum();
    let sum_f1_sq: f64 = d.iter().map(|w| w.f1 * w.f1).sum();
    let sum_f2: f64 = d.iter().map(|w| w.f2).sum();
    let sum_delta_sq: f64 = d.iter().map(|w| w.delta * w.delta).sum();

    let jets = |j: [Complex64; 3]| {
        let shift = 0.125 * sum_f1 * sum_f1 - 0.25 * sum_f2;
        [
            j[0],
            j[1] - 0.5 * sum_f1 * j[0],
            j[2] - 0.5 * sum_f1 * j[1] + shift * j[0],
        ]
    };

    // Scalar curvature of the collar: sectional curvatures −(f_a'' + f_a'²)
    // in the (x, θ_a) planes and −f_a' f_b' in the (θ_a, θ_b) planes.
    let cross = sum_f1 * sum_f1 - sum_f1_sq;
    let tau = -2.0 * (sum_f2 + sum_f1_sq) - cross;

    BoundaryComponentData {
        phi: jets(phi_sigma),
        rho: jets(rho_sigma),
        l_trace: -sum_f1,
        l_trace_sq: sum_f1 * sum_f1,
        l_sq_trace: sum_f1_sq,
        ric_mm: -(sum_f2 + sum_f1_sq),
        e_val: 0.5 * sum_f2 - 0.25 * sum_delta_sq + 0.25 * sum_f1 * sum_f1,
        tau,
        tangential_pairing: -0.25 * sum_delta_sq * phi_sigma[0] * rho_sigma[0],
        robin_s: 0.0,
    }
}
