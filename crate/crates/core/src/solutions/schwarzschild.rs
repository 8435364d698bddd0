use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{dom, nonzero, Derivs, Family};
use crate::error::{Error, Result};
use crate::geometry::{Coframe, FnMetric, FrameKind, Signature};
use crate::ghm::{induced_metric, FnTarget, GhmSystem};
use crate::jets::{FnField, Jet3, Point2, Rect, ScalarField2};

/// Harmonic extension field `X(r, φ)`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ExtensionField {
    /// `r cos φ`
    Cartesian,
    /// `rⁿ cos nφ`
    Multipole { n: i32 },
    /// `ln r`, independent of `φ`
    LogRadius,
    #[serde(skip)]
    Custom(Arc<dyn ScalarField2>),
}

impl std::fmt::Debug for ExtensionField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtensionField::Cartesian => write!(f, "r cos(phi)"),
            ExtensionField::Multipole { n } => write!(f, "r^{n} cos({n} phi)"),
            ExtensionField::LogRadius => write!(f, "ln r"),
            ExtensionField::Custom(_) => write!(f, "custom"),
        }
    }
}

impl ExtensionField {
    fn field(&self) -> Result<Arc<dyn ScalarField2>> {
        Ok(match self {
            ExtensionField::Cartesian => Arc::new(FnField::new(|r, phi| Ok(r * phi.cos()))),
            ExtensionField::Multipole { n } => {
                let n = *n;
                Arc::new(FnField::new(move |r, phi| Ok(r.powi(n)? * (phi * n as f64).cos())))
            }
            ExtensionField::LogRadius => {
                return Err(Error::Unsupported(
                    "X = ln r does not depend on phi: the induced metric has rank 1".into(),
                ))
            }
            ExtensionField::Custom(f) => f.clone(),
        })
    }
}

/// Schwarzschild in the dimensionally extended representation:
/// coordinates `(r, φ)`, `g = diag(1, r²)`, `G = diag(r, 1)`, `y = (f, X)`
/// with `f = a + b/r`.
pub struct Schwarzschild {
    m: f64,
    a: f64,
    b: f64,
    f: Arc<dyn ScalarField2>,
    x: Arc<dyn ScalarField2>,
    system: GhmSystem,
}

impl Schwarzschild {
    pub fn new(m: f64, extension: ExtensionField) -> Result<Self> {
        Self::with_f(m, 1.0, -2.0 * m, extension)
    }

    /// General `f = a + b/r`.
    pub fn with_f(m: f64, a: f64, b: f64, extension: ExtensionField) -> Result<Self> {
        if !(m.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidConfig("Schwarzschild parameters must be finite".into()));
        }
        let f: Arc<dyn ScalarField2> = Arc::new(FnField::new(move |r, _| Ok(r.recip()? * b + a)));
        let x = extension.field()?;
        let base = Arc::new(FnMetric::new(|r, _| Ok([Jet3::constant(1.0), Jet3::constant(0.0), r * r])));
        let target = Arc::new(
            FnTarget::new(2, |_: &[Jet3], x: [Jet3; 2]| {
                Ok(vec![x[0], Jet3::constant(0.0), Jet3::constant(0.0), Jet3::constant(1.0)])
            })
            .with_extension(vec![false, true]),
        );
        let system = GhmSystem::new(base, target, vec![f.clone(), x.clone()])?;
        Ok(Self { m, a, b, f, x, system })
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    /// `f = a + b/r` coefficients.
    pub fn f_coefficients(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Horizon radius `2m`, marked in reports.
    pub fn horizon(&self) -> f64 {
        2.0 * self.m
    }
}

impl Family for Schwarzschild {
    fn id(&self) -> &'static str {
        "schwarzschild"
    }

    fn coordinate_names(&self) -> [&'static str; 2] {
        ["r", "phi"]
    }

    fn signature(&self) -> Signature {
        Signature::Riemannian
    }

    fn domain(&self) -> Option<Rect> {
        Some(Rect::new([f64::MIN_POSITIVE, f64::INFINITY], [f64::NEG_INFINITY, f64::INFINITY]))
    }

    fn metric(&self, p: Point2) -> Result<[Jet3; 3]> {
        induced_metric(&self.system, p)
    }

    fn system(&self) -> Option<&GhmSystem> {
        Some(&self.system)
    }

    fn has_family_frame(&self) -> bool {
        true
    }

    /// `Θ¹ = dX`, `Θ² = √r f′ dr`.
    fn family_coframe(&self, p: Point2) -> Result<Coframe> {
        let x = self.x.eval(p)?;
        let [xr, xphi] = x.gradient();
        let fr = self.f.eval(p)?.partial(crate::jets::Axis::X1);
        nonzero(xphi.value(), 1.0, "dX/dphi", p)?;
        nonzero(fr.value(), 1.0, "df/dr", p)?;
        let (r, _) = Jet3::coordinates(p);
        let sr = r.sqrt().map_err(dom(p))?;
        Ok(Coframe::new([[xr, xphi], [sr * fr, Jet3::constant(0.0)]], FrameKind::Family("dX, sqrt(r) f' dr".into())))
    }

    fn closed_form_connection(&self, _p: Point2) -> Option<Result<[f64; 2]>> {
        Some(Ok([0.0, 0.0]))
    }

    fn closed_form_curvature(&self, _p: Point2) -> Option<Result<f64>> {
        Some(Ok(0.0))
    }

    fn closed_form_ricci(&self, _p: Point2) -> Option<Result<f64>> {
        Some(Ok(0.0))
    }

    fn main_eq_residuals(&self, p: Point2) -> Option<Result<Vec<f64>>> {
        Some((|| {
            let r = p.x1;
            let f = Derivs::from(self.f.eval(p)?);
            let x = Derivs::from(self.x.eval(p)?);
            Ok(vec![f.d11 + 2.0 * f.d1 / r, x.d11 + x.d1 / r + x.d22 / (r * r)])
        })())
    }

    fn main_eq_factors(&self) -> Vec<f64> {
        vec![1.0, 1.0]
    }

    fn reduced_lagrangian(&self, p: Point2) -> Option<Result<f64>> {
        Some((|| {
            let r = p.x1;
            let f = Derivs::from(self.f.eval(p)?);
            let x = Derivs::from(self.x.eval(p)?);
            Ok(r * r * f.d1 * f.d1 + r * x.d1 * x.d1 + x.d2 * x.d2 / r)
        })())
    }
}
