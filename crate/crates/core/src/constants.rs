//! The universal constants `ε_{0..14}(α)` multiplying the boundary invariants
//! of the heat content expansion, in three independent routes:
//!
//! * closed Gamma-function forms of the one-dimensional moment integrals,
//! * the linear relations forced by warped-product and product examples,
//! * direct quadrature of the moment integrals
//!   `c_{k,ℓ,α} = (−1)^{ℓ+1} (4π)^{-1/2} ∬ e^{-(u+ũ)²/4} u^{k-α} ũ^ℓ du dũ`.
//!
//! Indices follow the enumeration of the boundary invariants
//! (`ν = 0` for `⟨φ_0, ρ_0⟩` through `ν = 14` for `⟨φ_1, ρ_1⟩`).

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::ops::Index;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::asymptotics::{dirichlet_robin_series, probe_data, BoundaryCondition, INVARIANT_ORDER};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::specfun::{erfc, gamma, normalizing_constant, Alpha};

/// Number of universal constants.
pub const EPSILON_COUNT: usize = 15;

/// `(k, ℓ)` pairs with a closed form, and the constant each one equals.
pub const SUPPORTED_MOMENTS: [((usize, usize), usize); 6] = [
    ((0, 0), 0),
    ((1, 0), 1),
    ((0, 1), 3),
    ((2, 0), 4),
    ((1, 1), 14),
    ((0, 2), 7),
];

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sqrt_4pi() -> f64 {
    (4.0 * PI).sqrt()
}

fn pow2(e: Complex64) -> Complex64 {
    (e * LN_2).exp()
}

/// One moment `c_{k,ℓ,α}` with its indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentConstant {
    pub k: usize,
    pub l: usize,
    pub alpha: Alpha,
    pub value: Complex64,
}

impl MomentConstant {
    /// Closed-form value for every `(k, ℓ)` (Beta-function reduction).
    pub fn general(k: usize, l: usize, alpha: Alpha) -> Result<Self> {
        Ok(Self {
            k,
            l,
            alpha,
            value: moment_general(k, l, alpha.value())?,
        })
    }
}

/// `c_{k,ℓ,α}` for the six tabulated pairs, in the Gamma-function forms
/// (finite wherever the integral converges).
pub fn moment_closed_form(k: usize, l: usize, alpha: Alpha) -> Result<Complex64> {
    let a = alpha.value();
    let s = sqrt_4pi();
    let g = |z: Complex64| gamma(z);
    let value = match (k, l) {
        (0, 0) => pow2(1.0 - a) * g((2.0 - a) / 2.0)? / ((a - 1.0) * s),
        (1, 0) => pow2(2.0 - a) * g((3.0 - a) / 2.0)? / ((a - 2.0) * s),
        (0, 1) => -pow2(1.0 - a) * g((1.0 - a) / 2.0)? / ((a - 2.0) * s),
        (2, 0) => pow2(3.0 - a) * g((4.0 - a) / 2.0)? / ((a - 3.0) * s),
        (1, 1) => -pow2(2.0 - a) * g((2.0 - a) / 2.0)? / ((a - 3.0) * s),
        (0, 2) => -pow2(3.0 - a) * g((2.0 - a) / 2.0)? / ((a - 1.0) * (a - 3.0) * s),
        _ => return Err(Error::OutOfTable { k, l }),
    };
    Ok(value)
}

/// `c_{k,ℓ,α}` for arbitrary orders.
///
/// Substituting `s = u + ũ`, `u = s w` separates the double integral into a
/// Gaussian moment and a Beta integral:
/// `∬ = 2^{a+ℓ+1} Γ((a+ℓ+2)/2) Γ(a+1) ℓ! / Γ(a+ℓ+2)` with `a = k − α`.
/// Requires `Re α < 1 + k`.
pub fn moment_general(k: usize, l: usize, alpha: Complex64) -> Result<Complex64> {
    let a = k as f64 - alpha;
    if a.re <= -1.0 {
        return Err(Error::DivergentMoment { k, l });
    }
    let lf = l as f64;
    let factorial: f64 = (1..=l).map(|i| i as f64).product();
    let integral = pow2(a + lf + 1.0) * gamma((a + lf + 2.0) / 2.0)? * gamma(a + 1.0)? * factorial
        / gamma(a + lf + 2.0)?;
    let sign = if l.is_multiple_of(2) { -1.0 } else { 1.0 };
    Ok(sign * integral / sqrt_4pi())
}

/// `∫_0^∞ e^{-(u+v)²/4} v^ℓ dv` for `ℓ = 0..=l`, by integrating by parts.
fn inner_moments(u: f64, l: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(l + 1);
    out.push(PI.sqrt() * erfc(0.5 * u));
    if l >= 1 {
        out.push(2.0 * (-0.25 * u * u).exp() - u * out[0]);
    }
    for j in 2..=l {
        let next = 2.0 * (j as f64 - 1.0) * out[j - 2] - u * out[j - 1];
        out.push(next);
    }
    out
}

/// `c_{k,ℓ,α}` by quadrature, including the `(−1)^{ℓ+1}` sign.
///
/// The inner integral is done in closed form (erfc), leaving a one-dimensional
/// integral with an endpoint singularity `u^{k−α}`; the substitution
/// `u = v^p` with `p (Re(k−α) + 1) = 2` makes the transformed integrand
/// vanish linearly at the origin.
pub fn moment_quadrature(k: usize, l: usize, alpha: Alpha, tol: f64) -> Result<Complex64> {
    if !(tol >= 1e-12) || !tol.is_finite() {
        return Err(Error::InvalidTolerance(tol));
    }
    let a = k as f64 - alpha.value();
    if a.re <= -1.0 {
        return Err(Error::DivergentMoment { k, l });
    }
    let p = if a.re < 1.0 { 2.0 / (a.re + 1.0) } else { 1.0 };
    let exponent = p * (a + 1.0) - 1.0;
    let upper = 16.0 + (k + l) as f64;
    let breaks: Vec<f64> = [0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 11.0, upper]
        .iter()
        .map(|u: &f64| u.powf(1.0 / p))
        .collect();
    let integrand = |v: f64| {
        if v <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let u = v.powf(p);
        let inner = inner_moments(u, l)[l];
        p * (exponent * v.ln()).exp() * inner
    };
    let scale = sqrt_4pi();
    let q = integrate(integrand, &breaks, Tolerance::absolute(tol * scale), 4000)?;
    let sign = if l.is_multiple_of(2) { -1.0 } else { 1.0 };
    Ok(sign * q.value / scale)
}

/// The six moments of the table with the constant each determines.
pub fn supported_moments(alpha: Alpha) -> Result<Vec<(MomentConstant, usize)>> {
    SUPPORTED_MOMENTS
        .iter()
        .map(|&((k, l), nu)| {
            Ok((
                MomentConstant {
                    k,
                    l,
                    alpha,
                    value: moment_closed_form(k, l, alpha)?,
                },
                nu,
            ))
        })
        .collect()
}

/// Where an entry of an [`EpsilonTable`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Solved,
    Quadrature,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Solved => "solved",
            Provenance::Quadrature => "quadrature",
        })
    }
}

/// The fifteen universal constants at one exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonTable {
    alpha: Alpha,
    entries: [Complex64; EPSILON_COUNT],
    provenance: [Provenance; EPSILON_COUNT],
}

impl EpsilonTable {
    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn entries(&self) -> &[Complex64; EPSILON_COUNT] {
        &self.entries
    }

    pub fn get(&self, nu: usize) -> Complex64 {
        self.entries[nu]
    }

    pub fn provenance(&self, nu: usize) -> Provenance {
        self.provenance[nu]
    }

    /// `|Σ_ν r_ν ε_ν|` for each of the seven linear relations.
    pub fn relation_residuals(&self) -> [f64; 7] {
        let mut out = [0.0; 7];
        for (row, res) in RELATIONS.iter().zip(out.iter_mut()) {
            let s: Complex64 = row.iter().zip(self.entries.iter()).map(|(r, e)| e * *r).sum();
            *res = s.norm();
        }
        out
    }
}

impl Index<usize> for EpsilonTable {
    type Output = Complex64;
    fn index(&self, nu: usize) -> &Complex64 {
        &self.entries[nu]
    }
}

/// Linear relations among the constants. Each row lists the coefficient of
/// `ε_0 … ε_14`; the row must vanish. The comment names the monomial whose
/// coefficient produced it.
pub const RELATIONS: [[f64; EPSILON_COUNT]; 7] = [
    // Σ_{a,b} f_a' f_b' φ_0 ρ_0
    [0.0, 0.0, 0.0, 0.0, 0.125, 0.5, 0.25, 0.125, 0.5, 0.0, 1.0, 0.0, 0.0, 0.0, 0.25],
    // Σ_a f_a' φ_0 ρ_0
    [0.0, -0.5, -1.0, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    // Σ_a δ_a² φ_0 ρ_0
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.25, 0.0, 0.0, 0.0, 0.0, 0.0, -0.25, 0.0, 0.0],
    // Σ_a (f_a')² φ_0 ρ_0
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    // Σ_a f_a' φ_1 ρ_0
    [0.0, 0.0, 0.0, 0.0, -0.5, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.5],
    // Σ_a f_a' φ_0 ρ_1
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.5, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.5],
    // Σ_a f_a'' φ_0 ρ_0
    [0.0, 0.0, 0.0, 0.0, -0.25, 0.0, 0.5, -0.25, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
];

/// Constants not fixed by a moment or product formula.
const UNKNOWNS: [usize; 6] = [2, 5, 8, 9, 10, 11];
/// Relations used to solve for them (the δ² row only involves knowns).
const SOLVING_ROWS: [usize; 6] = [0, 1, 3, 4, 5, 6];

/// Assemble the table from the six moments plus the product-formula values
/// `ε_6 = −ε_12 = ε_0` and `ε_13 = 0`, then solve the relation system.
fn assemble(alpha: Alpha, moments: [Complex64; 6], moment_tag: Provenance) -> Result<EpsilonTable> {
    let zero = Complex64::new(0.0, 0.0);
    let mut entries = [zero; EPSILON_COUNT];
    let mut provenance = [Provenance::Solved; EPSILON_COUNT];
    for (&(_, nu), value) in SUPPORTED_MOMENTS.iter().zip(moments) {
        entries[nu] = value;
        provenance[nu] = moment_tag;
    }
    // Product with a closed factor: ε_6 = c_α/2 = ε_0, ε_12 = −ε_6, ε_13 = 0.
    entries[6] = entries[0];
    entries[12] = -entries[0];
    entries[13] = zero;
    for nu in [6, 12, 13] {
        provenance[nu] = moment_tag;
    }

    let n = UNKNOWNS.len();
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    let mut rhs = DVector::<Complex64>::zeros(n);
    for (i, &row) in SOLVING_ROWS.iter().enumerate() {
        let coeffs = &RELATIONS[row];
        for (j, &nu) in UNKNOWNS.iter().enumerate() {
            matrix[(i, j)] = c64(coeffs[nu]);
        }
        let known: Complex64 = (0..EPSILON_COUNT)
            .filter(|nu| !UNKNOWNS.contains(nu))
            .map(|nu| entries[nu] * coeffs[nu])
            .sum();
        rhs[i] = -known;
    }
    let solution = matrix.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    for (j, &nu) in UNKNOWNS.iter().enumerate() {
        entries[nu] = solution[j];
        provenance[nu] = Provenance::Solved;
    }
    Ok(EpsilonTable {
        alpha,
        entries,
        provenance,
    })
}

/// The full table from the closed forms and the relation system.
pub fn solve_epsilon_table(alpha: Alpha) -> Result<EpsilonTable> {
    let mut moments = [Complex64::new(0.0, 0.0); 6];
    for (slot, &((k, l), _)) in moments.iter_mut().zip(SUPPORTED_MOMENTS.iter()) {
        *slot = moment_closed_form(k, l, alpha)?;
    }
    assemble(alpha, moments, Provenance::ClosedForm)
}

/// The same table with every moment computed by quadrature.
pub fn quadrature_epsilon_table(alpha: Alpha, tol: f64) -> Result<EpsilonTable> {
    let mut moments = [Complex64::new(0.0, 0.0); 6];
    for (slot, &((k, l), _)) in moments.iter_mut().zip(SUPPORTED_MOMENTS.iter()) {
        *slot = moment_quadrature(k, l, alpha, tol)?;
    }
    assemble(alpha, moments, Provenance::Quadrature)
}

/// Residuals of dimension shifting:
/// `ε_1(α) = ε_0(α−1)`, `ε_4(α) = ε_0(α−2)`, `ε_5(α) = ε_2(α−1)`,
/// `ε_14(α) = ε_3(α−1)`.
pub fn dimension_shift_residuals(alpha: Alpha) -> Result<[f64; 4]> {
    let here = solve_epsilon_table(alpha)?;
    let down1 = solve_epsilon_table(alpha.lowered(1))?;
    let down2 = solve_epsilon_table(alpha.lowered(2))?;
    Ok([
        (here[1] - down1[0]).norm(),
        (here[4] - down2[0]).norm(),
        (here[5] - down1[2]).norm(),
        (here[14] - down1[3]).norm(),
    ])
}

/// Invariants that survive on a totally geodesic fixed-point set (no second
/// fundamental form), where the closed-manifold constants are the average
/// of the Dirichlet and Neumann ones.
pub const AVERAGING_INDICES: [usize; 9] = [0, 1, 3, 4, 6, 7, 9, 12, 14];

/// `ε_ν − ½(ε_ν^D + ε_ν^N)` for each index in [`AVERAGING_INDICES`], where the
/// Dirichlet and Neumann constants are read off the boundary-condition
/// coefficient formulas by probing one invariant at a time.
pub fn averaging_residuals(alpha: Alpha) -> Result<Vec<(usize, f64)>> {
    let table = solve_epsilon_table(alpha)?;
    AVERAGING_INDICES
        .iter()
        .map(|&nu| {
            let data = probe_data(nu);
            let j = INVARIANT_ORDER[nu];
            let dirichlet = dirichlet_robin_series(&data, alpha, BoundaryCondition::Dirichlet)[j];
            let neumann = dirichlet_robin_series(&data, alpha, BoundaryCondition::Robin(0.0))[j];
            Ok((nu, (table[nu] - 0.5 * (dirichlet + neumann)).norm()))
        })
        .collect()
}

/// `c_{α−shift}` convenience used by the coefficient formulas.
pub(crate) fn c_shift(alpha: Alpha, shift: u32) -> Complex64 {
    normalizing_constant(alpha.value() - f64::from(shift))
}
