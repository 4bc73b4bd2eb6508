//! Exact heat kernels on the model 1D geometries, built as signed sums of
//! translated and reflected Gaussians.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::ModelGeometry;
use crate::summation::CompensatedSum;

/// Default relative mass allowed in the omitted image tail.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-14;

/// `(4πt)^{-1/2} e^{-s²/(4t)}`; `t` is assumed positive.
#[inline]
pub fn gaussian(s: f64, t: f64) -> f64 {
    (-s * s / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveTime(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImageKind {
    /// Source point `x + shift`.
    Direct,
    /// Source point `shift − x`.
    Reflected,
}

/// One Gaussian term `sign · G(x̃ − source(x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Image {
    pub sign: f64,
    pub kind: ImageKind,
    pub shift: f64,
}

impl Image {
    pub fn source(&self, x: f64) -> f64 {
        match self.kind {
            ImageKind::Direct => x + self.shift,
            ImageKind::Reflected => self.shift - x,
        }
    }

    fn matches(&self, other: &Image) -> bool {
        let scale = 1.0f64.max(self.shift.abs()).max(other.shift.abs());
        self.kind == other.kind && (self.shift - other.shift).abs() <= 1e-13 * scale
    }
}

/// A finite image expansion of a kernel at a fixed time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ImageSet {
    images: Vec<Image>,
}

impl ImageSet {
    pub fn new(images: Vec<Image>) -> Self {
        Self { images }
    }

    pub fn images(&self) -> &[Image] {
        &self.images
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    /// `self − other` with shared images cancelled symbolically.
    pub fn difference(&self, other: &ImageSet) -> ImageSet {
        let mut out = self.images.clone();
        for img in &other.images {
            match out.iter().position(|o| o.matches(img) && (o.sign - img.sign).abs() == 0.0) {
                Some(i) => {
                    out.remove(i);
                }
                None => out.push(Image {
                    sign: -img.sign,
                    ..*img
                }),
            }
        }
        ImageSet { images: out }
    }

    /// Kernel value, summed from the farthest image to the nearest.
    pub fn evaluate(&self, x: f64, x_tilde: f64, t: f64) -> f64 {
        let mut terms: Vec<(f64, f64)> = self
            .images
            .iter()
            .map(|img| {
                let s = x_tilde - img.source(x);
                (s.abs(), img.sign * gaussian(s, t))
            })
            .collect();
        terms.sort_by(|p, q| q.0.total_cmp(&p.0));
        terms.into_iter().map(|(_, v)| v).collect::<CompensatedSum>().value()
    }
}

/// Offset radius beyond which images are dropped.
pub fn truncation_radius(period: f64, t: f64, tol: f64) -> f64 {
    (3.0 * period).max(12.0 * (4.0 * t * (1.0 / tol).ln()).sqrt())
}

fn periodic_images(period: f64, radius: f64) -> impl Iterator<Item = i64> {
    let n = (radius / period).floor() as i64;
    -n..=n
}

/// A kernel on a model geometry with its image truncation policy.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    geometry: ModelGeometry,
    tail_tolerance: f64,
}

impl KernelSpec {
    pub fn new(geometry: ModelGeometry, tail_tolerance: f64) -> Result<Self> {
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(Error::InvalidTolerance(tail_tolerance));
        }
        geometry.validate()?;
        if matches!(geometry, ModelGeometry::Product(_)) {
            return Err(Error::InvalidGeometry(
                "product kernels factor; build one kernel per factor".into(),
            ));
        }
        Ok(Self {
            geometry,
            tail_tolerance,
        })
    }

    pub fn with_default_tail(geometry: ModelGeometry) -> Result<Self> {
        Self::new(geometry, DEFAULT_TAIL_TOLERANCE)
    }

    pub fn geometry(&self) -> &ModelGeometry {
        &self.geometry
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    pub fn images(&self, t: f64) -> Result<ImageSet> {
        check_time(t)?;
        let tol = self.tail_tolerance;
        let direct = |shift: f64, sign: f64| Image {
            sign,
            kind: ImageKind::Direct,
            shift,
        };
        let images = match &self.geometry {
            ModelGeometry::IntervalInLine { .. } => vec![direct(0.0, 1.0)],
            ModelGeometry::Circle { circumference: l }
            | ModelGeometry::IntervalInCircle { circumference: l, .. } => {
                let r = truncation_radius(*l, t, tol);
                periodic_images(*l, r).map(|n| direct(n as f64 * l, 1.0)).collect()
            }
            ModelGeometry::DirichletInterval { interval } | ModelGeometry::NeumannInterval { interval } => {
                let reflected_sign = if matches!(self.geometry, ModelGeometry::DirichletInterval { .. }) {
                    -1.0
                } else {
                    1.0
                };
                let period = 2.0 * interval.length();
                // Reflected sources sit up to one period from the interval.
                let r = truncation_radius(period, t, tol) + period;
                let mut v = Vec::new();
                for n in periodic_images(period, r) {
                    let off = n as f64 * period;
                    v.push(direct(off, 1.0));
                    v.push(Image {
                        sign: reflected_sign,
                        kind: ImageKind::Reflected,
                        shift: 2.0 * interval.a() + off,
                    });
                }
                v
            }
            ModelGeometry::Product(_) => unreachable!("rejected in KernelSpec::new"),
        };
        Ok(ImageSet::new(images))
    }

    pub fn evaluate(&self, x: f64, x_tilde: f64, t: f64) -> Result<f64> {
        if let Some(iv) = self.closed_interval() {
            for p in [x, x_tilde] {
                if !(p >= iv.0 && p <= iv.1) {
                    return Err(Error::OutsideInterval { x: p, a: iv.0, b: iv.1 });
                }
            }
        }
        Ok(self.images(t)?.evaluate(x, x_tilde, t))
    }

    fn closed_interval(&self) -> Option<(f64, f64)> {
        match &self.geometry {
            ModelGeometry::DirichletInterval { interval } | ModelGeometry::NeumannInterval { interval } => {
                Some((interval.a(), interval.b()))
            }
            _ => None,
        }
    }
}

pub fn line_kernel(x: f64, x_tilde: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(gaussian(x - x_tilde, t))
}

pub fn circle_kernel(x: f64, x_tilde: f64, t: f64, circumference: f64) -> Result<f64> {
    check_time(t)?;
    KernelSpec::with_default_tail(ModelGeometry::Circle { circumference })?.evaluate(x, x_tilde, t)
}

pub fn interval_dirichlet_kernel(x: f64, x_tilde: f64, t: f64, a: f64, b: f64) -> Result<f64> {
    check_time(t)?;
    let interval = crate::geometry::Interval::new(a, b)?;
    KernelSpec::with_default_tail(ModelGeometry::DirichletInterval { interval })?.evaluate(x, x_tilde, t)
}

pub fn interval_neumann_kernel(x: f64, x_tilde: f64, t: f64, a: f64, b: f64) -> Result<f64> {
    check_time(t)?;
    let interval = crate::geometry::Interval::new(a, b)?;
    KernelSpec::with_default_tail(ModelGeometry::NeumannInterval { interval })?.evaluate(x, x_tilde, t)
}
