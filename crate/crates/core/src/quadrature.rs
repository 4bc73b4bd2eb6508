//! Globally adaptive Gauss–Kronrod (10/21) integration of complex-valued
//! integrands, plus a fixed composite rule for smooth integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::summation::ComplexSum;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Absolute and relative error targets. A quadrature succeeds once the
/// estimated error is below `max(abs, rel * |I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    pub fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs.max(self.rel * value.norm())
    }

    fn validate(&self) -> Result<()> {
        let ok = self.abs >= 0.0 && self.rel >= 0.0 && (self.abs > 0.0 || self.rel > 0.0);
        if ok && self.abs.is_finite() && self.rel.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidTolerance(self.abs.max(self.rel)))
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    roundoff: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // Largest error first; ties broken by position for determinism.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One application of the 21-point Kronrod rule with the QUADPACK error
/// heuristic.
fn kronrod21<F>(f: &F, a: f64, b: f64) -> Segment
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs_sum = fc.norm() * WGK[10];
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(10).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        values[j] = (f1, f2);
        kronrod += (f1 + f2) * w;
        abs_sum += (f1.norm() + f2.norm()) * w;
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).norm() * WGK[10];
    for (j, (f1, f2)) in values.iter().enumerate() {
        asc += ((f1 - mean).norm() + (f2 - mean).norm()) * WGK[j];
    }
    let scale = half.abs();
    let value = kronrod * half;
    let resabs = abs_sum * scale;
    let resasc = asc * scale;
    let mut error = ((kronrod - gauss) * half).norm();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let mut roundoff = false;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * resabs;
        roundoff = error <= floor;
        error = error.max(floor);
    }
    Segment {
        a,
        b,
        value,
        error,
        roundoff,
    }
}

/// Integrates `f` over `[points[0], points[last]]`, starting from the
/// subdivision given by `points` (which must be increasing).
pub fn integrate<F>(f: F, points: &[f64], tol: Tolerance, max_intervals: usize) -> Result<Quadrature>
where
    F: Fn(f64) -> Complex64,
{
    tol.validate()?;
    let mut pts: Vec<f64> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return Ok(Quadrature {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            intervals: 0,
        });
    }

    let mut heap: BinaryHeap<Segment> = pts.windows(2).map(|w| kronrod21(&f, w[0], w[1])).collect();
    let mut frozen: Vec<Segment> = Vec::new();

    loop {
        let (value, error) = totals(heap.iter().chain(frozen.iter()));
        let target = tol.target(value);
        let count = heap.len() + frozen.len();
        if error <= target {
            return Ok(finish(heap, frozen));
        }
        if count >= max_intervals {
            return Err(Error::QuadratureFailure {
                estimate: error,
                tolerance: target,
                intervals: count,
            });
        }
        let Some(worst) = heap.pop() else {
            // Every segment is at floating-point resolution; the estimate
            // stands as reported.
            return Ok(finish(heap, frozen));
        };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.roundoff || mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        heap.push(kronrod21(&f, worst.a, mid));
        heap.push(kronrod21(&f, mid, worst.b));
    }
}

fn totals<'a, I: Iterator<Item = &'a Segment>>(segments: I) -> (Complex64, f64) {
    let mut value = ComplexSum::new();
    let mut error = 0.0;
    for s in segments {
        value.add(s.value);
        error += s.error;
    }
    (value.value(), error)
}

fn finish(heap: BinaryHeap<Segment>, frozen: Vec<Segment>) -> Quadrature {
    let mut all: Vec<Segment> = heap.into_vec();
    all.extend(frozen);
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let (value, error) = totals(all.iter());
    Quadrature {
        value,
        error,
        intervals: all.len(),
    }
}

/// Composite 21-point Kronrod rule on `panels` equal subintervals, without
/// error control. Intended for integrands known to be smooth on the scale of
/// a panel.
pub fn composite_kronrod<F>(f: F, a: f64, b: f64, panels: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    if b <= a || panels == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let h = (b - a) / panels as f64;
    let mut acc = ComplexSum::new();
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let hi = if p + 1 == panels { b } else { lo + h };
        acc.add(kronrod21(&f, lo, hi).value);
    }
    acc.value()
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn kronrod_weights_sum_to_two() {
        let total: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        assert!((total - 2.0).abs() < 1e-15);
        let gauss: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((gauss - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kronrod_exact_for_degree_31() {
        let s = kronrod21(&|x: f64| c(x.powi(30) + x.powi(31)), -1.0, 1.0);
        assert!((s.value.re - 2.0 / 31.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_inverse_sqrt() {
        let r = integrate(|x: f64| c(1.0 / x.sqrt()), &[0.0, 1.0], Tolerance::absolute(1e-10), 500).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-9, "{:?}", r);
    }

    #[test]
    fn adaptive_complex_oscillatory() {
        // ∫_0^π e^{ix} dx = 2i
        let r = integrate(
            |x: f64| Complex64::new(0.0, x).exp(),
            &[0.0, std::f64::consts::PI],
            Tolerance::absolute(1e-13),
            100,
        )
        .unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn relative_tolerance_resolves_tiny_integrands() {
        // ∫_0^1 e^{-500 - x/0.002} dx = 0.002 e^{-500}(1 - e^{-500})
        let scale = (-500.0f64).exp();
        let r = integrate(
            |x: f64| c((-500.0 - x / 0.002).exp()),
            &[0.0, 0.001, 0.01, 1.0],
            Tolerance::relative(1e-10),
            500,
        )
        .unwrap();
        let exact = 0.002 * scale;
        assert!(((r.value.re - exact) / exact).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let err = integrate(|x: f64| c((1.0 / x).sin() / x), &[1e-300, 1.0], Tolerance::absolute(1e-14), 4);
        assert!(matches!(err, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn invalid_tolerance_rejected() {
        let err = integrate(|x: f64| c(x), &[0.0, 1.0], Tolerance { abs: 0.0, rel: 0.0 }, 10);
        assert!(matches!(err, Err(Error::InvalidTolerance(_))));
    }

    #[test]
    fn gauss_legendre_matches_kronrod_gauss_nodes() {
        let (x, w) = gauss_legendre(10);
        for k in 0..5 {
            assert!((x[9 - k] - XGK[2 * k + 1]).abs() < 1e-15);
            assert!((w[9 - k] - WG[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn composite_rule_on_gaussian() {
        let v = composite_kronrod(|x: f64| c((-x * x).exp()), -8.0, 8.0, 16);
        assert!((v.re - std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }
}
