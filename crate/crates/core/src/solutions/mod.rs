//! Catalog of solution families: their GHM systems, closed-form frames,
//! closed-form connection and curvature oracles, main field equations and
//! quadrature equations for the remaining metric function.

pub mod terms;
mod axisym;
mod einstein_rosen;
mod gowdy;
mod schwarzschild;

pub use axisym::{curzon_kappa, StationaryAxisymmetric};
pub use einstein_rosen::EinsteinRosen;
pub use gowdy::{AvtdConfig, AvtdP, AvtdQ, Gowdy, AvtdMetric, ThetaFn};
pub use schwarzschild::{ExtensionField, Schwarzschild};

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_coframe, connection_from_cartan, curvature, Coframe, CoframeField, MetricField2, Signature};
use crate::ghm::GhmSystem;
use crate::jets::{Axis, Jet3, Point2, Rect};
use crate::quad::adaptive_simpson;
use crate::tolerances::{INTEGRABILITY, PATH_QUADRATURE};

/// Value and partial derivatives through second order of a field at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivs {
    pub v: f64,
    /// `∂₁`
    pub d1: f64,
    /// `∂₂`
    pub d2: f64,
    pub d11: f64,
    pub d12: f64,
    pub d22: f64,
}

impl From<Jet3> for Derivs {
    fn from(j: Jet3) -> Self {
        let [d1, d2] = j.d1();
        let [d11, d12, d22] = j.d2();
        Self { v: j.value(), d1, d2, d11, d12, d22 }
    }
}

/// `T11 = scale * grad[index]` and likewise for `T12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRelation {
    pub t11: (usize, f64),
    pub t12: (usize, f64),
    /// Name of the reconstructed metric function.
    pub potential: &'static str,
}

/// A family of configurations with the pieces needed by the verification
/// and analysis pipelines. Optional pieces return `None` when the family has
/// no such closed form.
pub trait Family: Send + Sync {
    fn id(&self) -> &'static str;

    fn coordinate_names(&self) -> [&'static str; 2];

    /// Signature of the metric whose frame geometry is analysed.
    fn signature(&self) -> Signature;

    fn domain(&self) -> Option<Rect> {
        None
    }

    /// The metric analysed by the frame pipeline (the induced metric for GHM
    /// families).
    fn metric(&self, p: Point2) -> Result<[Jet3; 3]>;

    fn system(&self) -> Option<&GhmSystem> {
        None
    }

    /// Whether [`Family::family_coframe`] is a closed-form frame of the family
    /// rather than the lower-triangular default.
    fn has_family_frame(&self) -> bool {
        false
    }

    fn family_coframe(&self, p: Point2) -> Result<Coframe> {
        build_coframe(&self.metric(p)?, self.signature(), p)
    }

    /// Closed-form frame components `(ω₁, ω₂)` of `ω¹₂` in the family frame.
    fn closed_form_connection(&self, _p: Point2) -> Option<Result<[f64; 2]>> {
        None
    }

    /// Closed-form curvature coefficient `F`.
    fn closed_form_curvature(&self, _p: Point2) -> Option<Result<f64>> {
        None
    }

    /// Closed-form Ricci scalar.
    fn closed_form_ricci(&self, _p: Point2) -> Option<Result<f64>> {
        None
    }

    /// Family-specific main field equations.
    fn main_eq_residuals(&self, _p: Point2) -> Option<Result<Vec<f64>>> {
        None
    }

    /// `main[i] = factor[i] * generic[i]`, where `generic` is the GHM residual.
    fn main_eq_factors(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Right-hand sides of the quadrature equations, as jets so that their
    /// integrability can be checked.
    fn quadrature_gradient(&self, _p: Point2) -> Option<Result<[Jet3; 2]>> {
        None
    }

    fn quadrature_relation(&self) -> Option<QuadratureRelation> {
        None
    }

    /// The family's reduced Lagrangian written out directly.
    fn reduced_lagrangian(&self, _p: Point2) -> Option<Result<f64>> {
        None
    }
}

/// The analysed metric of a family as a [`MetricField2`].
pub struct FamilyMetric(pub Arc<dyn Family>);

impl MetricField2 for FamilyMetric {
    fn components(&self, p: Point2) -> Result<[Jet3; 3]> {
        self.0.metric(p)
    }
    fn domain(&self) -> Option<Rect> {
        self.0.domain()
    }
}

/// The family's closed-form coframe as a [`CoframeField`].
pub struct FamilyFrame(pub Arc<dyn Family>);

impl CoframeField for FamilyFrame {
    fn coframe(&self, p: Point2) -> Result<Coframe> {
        self.0.family_coframe(p)
    }
    fn signature(&self) -> Signature {
        self.0.signature()
    }
    fn domain(&self) -> Option<Rect> {
        self.0.domain()
    }
}

/// Pipeline and closed-form values of the frame geometry at one point, in
/// the family's own coframe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSample {
    pub p: Point2,
    /// Frame components of `ω¹₂` from Cartan's equation.
    pub omega: [f64; 2],
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub closed_omega: Option<[f64; 2]>,
    pub closed_f: Option<f64>,
    pub closed_r: Option<f64>,
}

pub fn oracle_sample(family: &dyn Family, p: Point2) -> Result<OracleSample> {
    let cf = family.family_coframe(p)?;
    let w = connection_from_cartan(&cf, family.signature(), p)?;
    let c = curvature(&w, &cf, p)?;
    Ok(OracleSample {
        p,
        omega: w.frame,
        f: c.f,
        r: c.r,
        closed_omega: family.closed_form_connection(p).transpose()?,
        closed_f: family.closed_form_curvature(p).transpose()?,
        closed_r: family.closed_form_ricci(p).transpose()?,
    })
}

/// Curl `∂₂ g₁ - ∂₁ g₂` of a quadrature gradient.
pub fn integrability_defect(grad: &[Jet3; 2]) -> f64 {
    grad[0].partial(Axis::X2).value() - grad[1].partial(Axis::X1).value()
}

/// Reconstructs the change of the quadrature potential along a polyline by
/// integrating its gradient with composite Simpson and Richardson doubling.
///
/// The gradient must be integrable at every sample: a curl above the
/// integrability tolerance is reported instead of a value.
pub fn reconstruct_potential(family: &dyn Family, path: &[Point2], n_steps: usize) -> Result<f64> {
    if path.len() < 2 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (dx, dy) = (b.x1 - a.x1, b.x2 - a.x2);
        if dx == 0.0 && dy == 0.0 {
            continue;
        }
        let est = adaptive_simpson(
            |s| {
                let p = Point2::new(a.x1 + s * dx, a.x2 + s * dy);
                let g = family
                    .quadrature_gradient(p)
                    .ok_or_else(|| Error::Unsupported(format!("{} has no quadrature equations", family.id())))??;
                let defect = integrability_defect(&g);
                if defect.abs() > INTEGRABILITY {
                    return Err(Error::IntegrabilityViolated { point: p, defect });
                }
                Ok(g[0].value() * dx + g[1].value() * dy)
            },
            0.0,
            1.0,
            n_steps.max(2),
            PATH_QUADRATURE,
            12,
        )?;
        total += est.value;
    }
    Ok(total)
}

/// Shared check for closed-form frames: a denominator that vanishes marks the
/// frame-degeneracy locus.
pub(crate) fn nonzero(v: f64, scale: f64, what: &'static str, p: Point2) -> Result<()> {
    if !v.is_finite() || v.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::FrameDegeneracy { point: p, what, value: v });
    }
    Ok(())
}

pub(crate) fn dom(p: Point2) -> impl Fn(crate::jets::JetError) -> Error {
    move |source| Error::Domain { point: p, source }
}
