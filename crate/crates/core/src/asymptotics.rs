//! Predicted small-time series `β ~ Σ_n β_n t^n + Σ_j β_{j,α} t^{(1+j−α)/2}`.

use num_complex::Complex64;

use crate::constants::{c_shift, moment_general, EpsilonTable, EPSILON_COUNT};
use crate::error::{Error, Result};
use crate::geometry::{straight_boundary_data, BoundaryComponentData, Endpoint};
use crate::heatcontent::{integrate_against, SpecificHeatField, TemperatureField};
use crate::quadrature::Tolerance;
use crate::specfun::{c_alpha, Alpha};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Order `j` of the boundary coefficient that carries each invariant.
pub const INVARIANT_ORDER: [usize; EPSILON_COUNT] = [0, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2];

/// Readable name of the invariant multiplying each `ε_ν`.
pub const INVARIANT_LABELS: [&str; EPSILON_COUNT] = [
    "<phi0,rho0>",
    "<phi1,rho0>",
    "<Laa phi0,rho0>",
    "<phi0,rho1>",
    "<phi2,rho0>",
    "<Laa phi1,rho0>",
    "<E phi0,rho0>",
    "<phi0,rho2>",
    "<Laa phi0,rho1>",
    "<Ric_mm phi0,rho0>",
    "<Laa Lbb phi0,rho0>",
    "<Lab Lab phi0,rho0>",
    "<phi0;a,rho0;a>",
    "<tau phi0,rho0>",
    "<phi1,rho1>",
];

/// Boundary conditions for the realization on `Ω` itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet,
    /// `∇_m f + S f = 0`; `Robin(0.0)` is Neumann.
    Robin(f64),
}

/// Both families of a predicted expansion. Exponents are unique and sorted
/// by real part, then imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion {
    interior: Vec<(u32, Complex64)>,
    boundary: Vec<(Complex64, Complex64)>,
    alpha: Alpha,
    truncation: usize,
}

fn exponent_order(p: Complex64, q: Complex64) -> std::cmp::Ordering {
    p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im))
}

fn same_exponent(p: Complex64, q: Complex64) -> bool {
    (p - q).norm() <= 1e-14
}

/// Sorts terms and merges coefficients of equal exponents.
pub fn merge_terms(mut terms: Vec<(Complex64, Complex64)>) -> Vec<(Complex64, Complex64)> {
    terms.sort_by(|p, q| exponent_order(p.0, q.0));
    let mut out: Vec<(Complex64, Complex64)> = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        match out.last_mut() {
            Some(last) if same_exponent(last.0, e) => last.1 += c,
            _ => out.push((e, c)),
        }
    }
    out
}

impl SeriesExpansion {
    pub fn new(
        interior: Vec<(u32, Complex64)>,
        boundary: Vec<(Complex64, Complex64)>,
        alpha: Alpha,
        truncation: usize,
    ) -> Result<Self> {
        if interior.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidSamples("interior powers must be strictly increasing".into()));
        }
        if boundary
            .windows(2)
            .any(|w| exponent_order(w[0].0, w[1].0) != std::cmp::Ordering::Less || same_exponent(w[0].0, w[1].0))
        {
            return Err(Error::InvalidSamples("boundary exponents must be strictly increasing".into()));
        }
        Ok(Self {
            interior,
            boundary,
            alpha,
            truncation,
        })
    }

    pub fn empty() -> Self {
        Self {
            interior: Vec::new(),
            boundary: Vec::new(),
            alpha: Alpha::ZERO,
            truncation: 0,
        }
    }

    pub fn interior(&self) -> &[(u32, Complex64)] {
        &self.interior
    }

    pub fn boundary(&self) -> &[(Complex64, Complex64)] {
        &self.boundary
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// All terms as `(exponent, coefficient)`, both families merged.
    pub fn terms(&self) -> Vec<(Complex64, Complex64)> {
        let mut all: Vec<(Complex64, Complex64)> = self
            .interior
            .iter()
            .map(|&(n, c)| (Complex64::new(f64::from(n), 0.0), c))
            .collect();
        all.extend_from_slice(&self.boundary);
        merge_terms(all)
    }

    /// Coefficient of `t^e`, zero if absent.
    pub fn coefficient(&self, exponent: Complex64) -> Complex64 {
        self.terms()
            .into_iter()
            .find(|(e, _)| same_exponent(*e, exponent))
            .map_or(ZERO, |(_, c)| c)
    }
}

pub fn evaluate_series(series: &SeriesExpansion, t: f64) -> Complex64 {
    let ln_t = t.ln();
    let interior: Complex64 = series.interior.iter().map(|&(n, c)| c * t.powi(n as i32)).sum();
    let boundary: Complex64 = series.boundary.iter().map(|&(e, c)| c * (e * ln_t).exp()).sum();
    interior + boundary
}

/// `β_n = ((−1)^n/n!) ∫ φ · (−∂²)^n ρ = (1/n!) ∫ φ ρ^{(2n)}` for `n ≤ n_max`.
pub fn interior_coefficients(
    phi: &TemperatureField,
    rho: &SpecificHeatField,
    n_max: u32,
    tol: f64,
) -> Result<Vec<(u32, Complex64)>> {
    let iv = phi.interval();
    rho.derivative(2 * n_max as usize, iv.a())?;
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut factorial = 1.0;
    for n in 0..=n_max {
        if n > 0 {
            factorial *= f64::from(n);
        }
        let order = 2 * n as usize;
        let q = integrate_against(
            phi,
            |x| rho.derivative(order, x).unwrap_or_default(),
            1e-3 * iv.length(),
            Tolerance::absolute(tol),
        )?;
        out.push((n, q.value / factorial));
    }
    Ok(out)
}

/// Jets at one boundary point, with the exponent that applies there.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointJets {
    pub phi: Vec<Complex64>,
    pub rho: Vec<Complex64>,
    pub alpha: Alpha,
}

impl EndpointJets {
    /// Jets of both fields at `end`; `α` applies only at the singular end.
    pub fn from_fields(phi: &TemperatureField, rho: &SpecificHeatField, end: Endpoint, order: usize) -> Result<Self> {
        let alpha = if end == phi.singular_end() { phi.alpha() } else { Alpha::ZERO };
        Ok(Self {
            phi: phi.jets(end, order)?,
            rho: rho.jets(end, order)?,
            alpha,
        })
    }
}

/// `β_{j,α} = Σ_{k+ℓ=j} c_{k,ℓ,α} φ_k ρ_ℓ` per endpoint for `j ≤ j_max`,
/// returned as merged `(exponent, coefficient)` terms.
pub fn boundary_series_1d(endpoints: &[EndpointJets], j_max: usize) -> Result<Vec<(Complex64, Complex64)>> {
    let mut terms = Vec::new();
    for ep in endpoints {
        let a = ep.alpha.value();
        for j in 0..=j_max {
            let mut beta = ZERO;
            for k in 0..=j {
                let l = j - k;
                let (pk, rl) = (ep.phi.get(k).copied().unwrap_or(ZERO), ep.rho.get(l).copied().unwrap_or(ZERO));
                if pk != ZERO && rl != ZERO {
                    beta += moment_general(k, l, a)? * pk * rl;
                }
            }
            terms.push(((1.0 + j as f64 - a) / 2.0, beta));
        }
    }
    Ok(merge_terms(terms))
}

/// `β_0, β_1, β_2` from boundary data and the universal constants.
pub fn boundary_series_geometric(data: &BoundaryComponentData, table: &EpsilonTable) -> [Complex64; 3] {
    let e = table.entries();
    let [p0, p1, p2] = data.phi;
    let [r0, r1, r2] = data.rho;
    let laa = data.l_trace;
    let pr = p0 * r0;
    let b0 = e[0] * pr;
    let b1 = e[1] * p1 * r0 + e[2] * laa * pr + e[3] * p0 * r1;
    let b2 = e[4] * p2 * r0
        + e[5] * laa * p1 * r0
        + e[6] * data.e_val * pr
        + e[7] * p0 * r2
        + e[8] * laa * p0 * r1
        + e[9] * data.ric_mm * pr
        + e[10] * data.l_trace_sq * pr
        + e[11] * data.l_sq_trace * pr
        + e[12] * data.tangential_pairing
        + e[13] * data.tau * pr
        + e[14] * p1 * r1;
    [b0, b1, b2]
}

/// `β_0, β_1, β_2` for the Dirichlet or Robin realization on `Ω`.
pub fn dirichlet_robin_series(
    data: &BoundaryComponentData,
    alpha: Alpha,
    condition: BoundaryCondition,
) -> [Complex64; 3] {
    let a = alpha.value();
    let c0 = c_alpha(alpha);
    let c1 = c_shift(alpha, 1);
    let c2 = c_shift(alpha, 2);
    let [p0, p1, p2] = data.phi;
    let [r0, r1, r2] = data.rho;
    let laa = data.l_trace;
    let pr = p0 * r0;
    match condition {
        BoundaryCondition::Dirichlet => {
            let d12 = (a - 1.0) * (a - 2.0);
            let b2 = p2 * r0 - 0.5 * laa * p1 * r0 - (a - 3.0) / (2.0 * d12) * data.e_val * pr
                + 2.0 / d12 * p0 * r2
                - 1.0 / d12 * laa * p0 * r1
                + (a - 3.0) / (2.0 * d12) * data.tangential_pairing
                - (a - 1.0) / (4.0 * (a - 2.0)) * data.ric_mm * pr
                + (a - 1.0) / (8.0 * (a - 2.0)) * data.l_trace_sq * pr
                - (a - 1.0) / (4.0 * (a - 2.0)) * data.l_sq_trace * pr;
            [c0 * pr, c1 * (p1 - 0.5 * laa * p0) * r0, c2 * b2]
        }
        BoundaryCondition::Robin(s) => {
            let dual = r1 + s * r0;
            let b1 = -c1 / (1.0 - a) * p0 * dual;
            let b2 = -c2 / ((a - 1.0) * (a - 2.0)) * ((1.0 - a) * p1 + s * p0 - a / 2.0 * laa * p0) * dual;
            [ZERO, b1, b2]
        }
    }
}

/// Data exciting only the invariant multiplying `ε_ν`, with unit weight.
pub fn probe_data(nu: usize) -> BoundaryComponentData {
    let mut d = BoundaryComponentData::zero();
    let unit_pair = |d: &mut BoundaryComponentData| {
        d.phi[0] = ONE;
        d.rho[0] = ONE;
    };
    match nu {
        0 => unit_pair(&mut d),
        1 => {
            d.phi[1] = ONE;
            d.rho[0] = ONE;
        }
        2 => {
            unit_pair(&mut d);
            d.l_trace = 1.0;
        }
        3 => {
            d.phi[0] = ONE;
            d.rho[1] = ONE;
        }
        4 => {
            d.phi[2] = ONE;
            d.rho[0] = ONE;
        }
        5 => {
            d.phi[1] = ONE;
            d.rho[0] = ONE;
            d.l_trace = 1.0;
        }
        6 => {
            unit_pair(&mut d);
            d.e_val = 1.0;
        }
        7 => {
            d.phi[0] = ONE;
            d.rho[2] = ONE;
        }
        8 => {
            d.phi[0] = ONE;
            d.rho[1] = ONE;
            d.l_trace = 1.0;
        }
        9 => {
            unit_pair(&mut d);
            d.ric_mm = 1.0;
        }
        10 => {
            unit_pair(&mut d);
            d.l_trace_sq = 1.0;
        }
        11 => {
            unit_pair(&mut d);
            d.l_sq_trace = 1.0;
        }
        12 => d.tangential_pairing = ONE,
        13 => {
            unit_pair(&mut d);
            d.tau = 1.0;
        }
        14 => {
            d.phi[1] = ONE;
            d.rho[1] = ONE;
        }
        _ => panic!("no invariant with index {nu}"),
    }
    d
}

/// `(0, φ_0, φ_1)` from `(φ_0, φ_1, φ_2)`.
pub fn shift_jets(jets: [Complex64; 3]) -> [Complex64; 3] {
    [ZERO, jets[0], jets[1]]
}

fn component_series(terms: &mut Vec<(Complex64, Complex64)>, alpha: Alpha, coefficients: [Complex64; 3]) {
    for (j, c) in coefficients.into_iter().enumerate() {
        terms.push(((1.0 + j as f64 - alpha.value()) / 2.0, c));
    }
}

fn endpoint_alphas(phi: &TemperatureField) -> [(Endpoint, Alpha); 2] {
    let at = |end| if end == phi.singular_end() { phi.alpha() } else { Alpha::ZERO };
    [(Endpoint::Left, at(Endpoint::Left)), (Endpoint::Right, at(Endpoint::Right))]
}

/// Series for `Ω` inside a manifold without boundary: interior terms
/// through `t^{n_max}`, boundary terms through `j_max` at both endpoints.
pub fn predicted_free_series(
    phi: &TemperatureField,
    rho: &SpecificHeatField,
    n_max: u32,
    j_max: usize,
    tol: f64,
) -> Result<SeriesExpansion> {
    let interior = interior_coefficients(phi, rho, n_max, tol)?;
    let endpoints = [Endpoint::Left, Endpoint::Right]
        .iter()
        .map(|&e| EndpointJets::from_fields(phi, rho, e, j_max))
        .collect::<Result<Vec<_>>>()?;
    let boundary = boundary_series_1d(&endpoints, j_max)?;
    SeriesExpansion::new(interior, boundary, phi.alpha(), j_max)
}

/// Series for the Dirichlet or Robin realization on `Ω`, boundary terms
/// through `j = 2`.
pub fn predicted_realization_series(
    phi: &TemperatureField,
    rho: &SpecificHeatField,
    condition: BoundaryCondition,
    n_max: u32,
    tol: f64,
) -> Result<SeriesExpansion> {
    let interior = interior_coefficients(phi, rho, n_max, tol)?;
    let mut terms = Vec::new();
    for (end, alpha) in endpoint_alphas(phi) {
        let p = phi.jets(end, 2)?;
        let r = rho.jets(end, 2)?;
        let mut data = straight_boundary_data([p[0], p[1], p[2]], [r[0], r[1], r[2]]);
        if let BoundaryCondition::Robin(s) = condition {
            data.robin_s = s;
        }
        component_series(&mut terms, alpha, dirichlet_robin_series(&data, alpha, condition));
    }
    SeriesExpansion::new(interior, merge_terms(terms), phi.alpha(), 2)
}
