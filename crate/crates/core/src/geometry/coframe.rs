use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{metric_det, MetricField2, Signature};
use crate::error::{Error, Result};
use crate::jets::{Jet3, Point2, Rect};
use crate::tolerances::DEGENERATE_DET;

/// Where a coframe came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    LowerTriangular,
    /// Closed-form frame of a solution family.
    Family(String),
    /// Adapted to a coordinate curve (used for geodesic curvature).
    Adapted,
    /// Obtained from another coframe by a gauge rotation.
    Rotated,
    Custom,
}

/// Orthonormal coframe `Θᵃ = theta[a][μ] dx^μ` with jet-valued components.
#[derive(Debug, Clone, PartialEq)]
pub struct Coframe {
    pub theta: [[Jet3; 2]; 2],
    pub kind: FrameKind,
}

impl Coframe {
    pub fn new(theta: [[Jet3; 2]; 2], kind: FrameKind) -> Self {
        Self { theta, kind }
    }

    /// `det Θ = Θ¹₁Θ²₂ - Θ¹₂Θ²₁`, the coefficient of `dx¹∧dx²` in `Θ¹∧Θ²`.
    pub fn det(&self) -> Jet3 {
        let t = &self.theta;
        t[0][0] * t[1][1] - t[0][1] * t[1][0]
    }

    /// Values of the dual frame: `e_a = inverse[μ][a] ∂_μ`.
    pub fn inverse(&self, p: Point2) -> Result<[[f64; 2]; 2]> {
        let m = self.values();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let scale = m.iter().flatten().fold(0f64, |a, b| a.max(b.abs()));
        if det.abs() <= DEGENERATE_DET * scale * scale || !det.is_finite() {
            return Err(Error::DegenerateCoframe { point: p, det });
        }
        Ok([
            [m[1][1] / det, -m[0][1] / det],
            [-m[1][0] / det, m[0][0] / det],
        ])
    }

    pub fn values(&self) -> [[f64; 2]; 2] {
        let t = &self.theta;
        [[t[0][0].value(), t[0][1].value()], [t[1][0].value(), t[1][1].value()]]
    }

    /// Metric `η_ab Θᵃ Θᵇ` reconstructed from the coframe.
    pub fn metric(&self, sig: Signature) -> [Jet3; 3] {
        let t = &self.theta;
        let e = sig.eta2();
        [
            t[0][0] * t[0][0] + t[1][0] * t[1][0] * e,
            t[0][0] * t[0][1] + t[1][0] * t[1][1] * e,
            t[0][1] * t[0][1] + t[1][1] * t[1][1] * e,
        ]
    }

    /// Largest component defect `|η Θ Θ - h|` relative to `max |h_ij|`.
    pub fn reproduction_defect(&self, h: &[Jet3; 3], sig: Signature) -> f64 {
        let m = self.metric(sig);
        let scale = h.iter().fold(0f64, |a, b| a.max(b.value().abs()));
        let diff = m
            .iter()
            .zip(h)
            .fold(0f64, |a, (x, y)| a.max((x.value() - y.value()).abs()));
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    pub fn order(&self) -> u8 {
        self.theta.iter().flatten().map(|j| j.order()).min().unwrap_or(0)
    }
}

/// Checks nondegeneracy and the declared signature of `h` at `p`.
pub fn check_metric(h: &[Jet3; 3], sig: Signature, p: Point2) -> Result<()> {
    let det = metric_det(h);
    let scale = h.iter().fold(0f64, |a, b| a.max(b.value().abs()));
    if !det.is_finite() || det.abs() <= DEGENERATE_DET * scale * scale {
        return Err(Error::DegenerateMetric { point: p, det, scale });
    }
    match sig {
        Signature::Riemannian if det < 0.0 => Err(Error::SignatureMismatch {
            point: p,
            detail: format!("det h = {det:e} < 0 for a Riemannian metric"),
        }),
        Signature::Riemannian if h[0].value() < 0.0 => Err(Error::SignatureMismatch {
            point: p,
            detail: "metric is negative definite".into(),
        }),
        Signature::Lorentzian if det > 0.0 => Err(Error::SignatureMismatch {
            point: p,
            detail: format!("det h = {det:e} > 0 for a Lorentzian metric"),
        }),
        _ => Ok(()),
    }
}

/// Signature-aware Cholesky-type coframe.
///
/// Riemannian: `Θ¹ = √h11 (dx¹ + h12/h11 dx²)`, `Θ² = √(det h / h11) dx²`.
/// Lorentzian: the leg along `dx¹` goes into `Θ¹` when `h11 > 0` and into
/// `Θ²` when `h11 < 0`.
pub fn build_coframe(h: &[Jet3; 3], sig: Signature, p: Point2) -> Result<Coframe> {
    check_metric(h, sig, p)?;
    let dom = |source| Error::Domain { point: p, source };
    let [h11, h12, h22] = *h;
    let det = h11 * h22 - h12 * h12;
    let scale = h.iter().fold(0f64, |a, b| a.max(b.value().abs()));
    let zero = Jet3::constant(0.0);
    let theta = match sig {
        Signature::Riemannian => {
            let a = h11.sqrt().map_err(dom)?;
            let b = det.checked_div(&h11).and_then(|q| q.sqrt()).map_err(dom)?;
            [[a, h12.checked_div(&a).map_err(dom)?], [zero, b]]
        }
        Signature::Lorentzian => {
            if h11.value().abs() <= DEGENERATE_DET.sqrt() * scale {
                return Err(Error::FrameDegeneracy {
                    point: p,
                    what: "h11 (null coordinate direction)",
                    value: h11.value(),
                });
            }
            if h11.value() > 0.0 {
                let a = h11.sqrt().map_err(dom)?;
                let b = (-det).checked_div(&h11).and_then(|q| q.sqrt()).map_err(dom)?;
                [[a, h12.checked_div(&a).map_err(dom)?], [zero, b]]
            } else {
                let a = (-h11).sqrt().map_err(dom)?;
                let b = det.checked_div(&h11).and_then(|q| q.sqrt()).map_err(dom)?;
                [[zero, b], [a, a * h12.checked_div(&h11).map_err(dom)?]]
            }
        }
    };
    Ok(Coframe::new(theta, FrameKind::LowerTriangular))
}

/// A coframe defined at every point of (part of) the chart.
pub trait CoframeField: Send + Sync {
    fn coframe(&self, p: Point2) -> Result<Coframe>;

    fn signature(&self) -> Signature;

    fn domain(&self) -> Option<Rect> {
        None
    }
}

impl<T: CoframeField + ?Sized> CoframeField for &T {
    fn coframe(&self, p: Point2) -> Result<Coframe> {
        (**self).coframe(p)
    }
    fn signature(&self) -> Signature {
        (**self).signature()
    }
    fn domain(&self) -> Option<Rect> {
        (**self).domain()
    }
}

impl<T: CoframeField + ?Sized> CoframeField for Arc<T> {
    fn coframe(&self, p: Point2) -> Result<Coframe> {
        (**self).coframe(p)
    }
    fn signature(&self) -> Signature {
        (**self).signature()
    }
    fn domain(&self) -> Option<Rect> {
        (**self).domain()
    }
}

/// [`build_coframe`] applied pointwise to a metric field.
pub struct LowerTriangular<M> {
    pub metric: M,
    pub signature: Signature,
}

impl<M: MetricField2> LowerTriangular<M> {
    pub fn new(metric: M, signature: Signature) -> Self {
        Self { metric, signature }
    }
}

impl<M: MetricField2> CoframeField for LowerTriangular<M> {
    fn coframe(&self, p: Point2) -> Result<Coframe> {
        build_coframe(&self.metric.components(p)?, self.signature, p)
    }
    fn signature(&self) -> Signature {
        self.signature
    }
    fn domain(&self) -> Option<Rect> {
        self.metric.domain()
    }
}
