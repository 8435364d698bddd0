use std::sync::Arc;

use super::{dom, Derivs, Family, QuadratureRelation};
use crate::error::{Error, Result};
use crate::geometry::{FnMetric, MetricField2, Signature};
use crate::ghm::{induced_metric, FnTarget, GhmSystem, TargetMetric};
use crate::jets::{FnField, Jet3, Point2, Rect, ScalarField2};

/// `f = exp(2ψ)` for a Weyl potential `ψ`.
struct ExpTwice(Arc<dyn ScalarField2>);

impl ScalarField2 for ExpTwice {
    fn eval(&self, p: Point2) -> Result<Jet3> {
        Ok((self.0.eval(p)? * 2.0).exp())
    }
    fn domain(&self) -> Option<Rect> {
        self.0.domain()
    }
}

/// Stationary axisymmetric fields in Weyl coordinates `(ρ, z)`.
///
/// Three variants share this type:
///
/// - stationary: `y = (f, Ω)`, `G = ρ/(2f²) δ`;
/// - static: `Ω = 0`, same target; the induced metric has rank one, so frame
///   geometry is refused while the field equations, energy–momentum tensor
///   and conservation law remain available;
/// - static with dimensional extension: `y = (f, X)`, `G = diag(ρ/(2f²), 1)`.
pub struct StationaryAxisymmetric {
    id: &'static str,
    f: Arc<dyn ScalarField2>,
    omega: Option<Arc<dyn ScalarField2>>,
    extension: Option<Arc<dyn ScalarField2>>,
    psi: Option<Arc<dyn ScalarField2>>,
    kappa: Option<Arc<dyn Fn(Point2) -> f64 + Send + Sync>>,
    system: GhmSystem,
}

fn flat_base() -> Arc<dyn MetricField2> {
    Arc::new(FnMetric::new(|_, _| {
        Ok([Jet3::constant(1.0), Jet3::constant(0.0), Jet3::constant(1.0)])
    }))
}

fn conformal_target() -> Arc<dyn TargetMetric> {
    Arc::new(FnTarget::new(2, |y: &[Jet3], x: [Jet3; 2]| {
        let c = x[0].checked_div(&(y[0] * y[0] * 2.0))?;
        Ok(vec![c, Jet3::constant(0.0), Jet3::constant(0.0), c])
    }))
}

fn extended_target() -> Arc<dyn TargetMetric> {
    Arc::new(
        FnTarget::new(2, |y: &[Jet3], x: [Jet3; 2]| {
            let c = x[0].checked_div(&(y[0] * y[0] * 2.0))?;
            Ok(vec![c, Jet3::constant(0.0), Jet3::constant(0.0), Jet3::constant(1.0)])
        })
        .with_extension(vec![false, true]),
    )
}

/// `κ = -m²ρ² / (2(ρ² + z²)²)` for the Curzon potential.
pub fn curzon_kappa(m: f64, p: Point2) -> f64 {
    let r2 = p.x1 * p.x1 + p.x2 * p.x2;
    -m * m * p.x1 * p.x1 / (2.0 * r2 * r2)
}

impl StationaryAxisymmetric {
    pub fn stationary(f: Arc<dyn ScalarField2>, omega: Arc<dyn ScalarField2>) -> Result<Self> {
        let system = GhmSystem::new(flat_base(), conformal_target(), vec![f.clone(), omega.clone()])?;
        Ok(Self { id: "axisym", f, omega: Some(omega), extension: None, psi: None, kappa: None, system })
    }

    /// Static Weyl field `f = e^{2ψ}`, optionally with an extension field `X`.
    pub fn weyl_static(psi: Arc<dyn ScalarField2>, extension: Option<Arc<dyn ScalarField2>>) -> Result<Self> {
        let f: Arc<dyn ScalarField2> = Arc::new(ExpTwice(psi.clone()));
        let system = match &extension {
            Some(x) => GhmSystem::new(flat_base(), extended_target(), vec![f.clone(), x.clone()])?,
            None => {
                let zero: Arc<dyn ScalarField2> = Arc::new(FnField::new(|_, _| Ok(Jet3::constant(0.0))));
                GhmSystem::new(flat_base(), conformal_target(), vec![f.clone(), zero])?
            }
        };
        Ok(Self { id: "weyl_static", f, omega: None, extension, psi: Some(psi), kappa: None, system })
    }

    /// The Curzon particle `ψ = -m / √(ρ² + z²)` with its closed-form `κ`.
    pub fn curzon(m: f64, extension: Option<Arc<dyn ScalarField2>>) -> Result<Self> {
        let psi: Arc<dyn ScalarField2> =
            Arc::new(FnField::new(move |r, z| Ok((r * r + z * z).sqrt()?.recip()? * (-m))));
        let mut s = Self::weyl_static(psi, extension)?;
        s.kappa = Some(Arc::new(move |p| curzon_kappa(m, p)));
        Ok(s)
    }

    /// Closed-form `κ` when the configuration provides one.
    pub fn kappa(&self, p: Point2) -> Option<f64> {
        self.kappa.as_ref().map(|k| k(p))
    }

    /// `ψ_ρρ + ψ_ρ/ρ + ψ_zz` for the Weyl potential.
    pub fn weyl_laplacian(&self, p: Point2) -> Option<Result<f64>> {
        let psi = self.psi.as_ref()?;
        Some(psi.eval(p).map(|j| {
            let d = Derivs::from(j);
            d.d11 + d.d1 / p.x1 + d.d22
        }))
    }

    pub fn is_static(&self) -> bool {
        self.omega.is_none()
    }

    fn omega_derivs(&self, p: Point2) -> Result<Derivs> {
        match &self.omega {
            Some(o) => Ok(o.eval(p)?.into()),
            None => Ok(Jet3::constant(0.0).into()),
        }
    }
}

impl Family for StationaryAxisymmetric {
    fn id(&self) -> &'static str {
        self.id
    }

    fn coordinate_names(&self) -> [&'static str; 2] {
        ["rho", "z"]
    }

    fn signature(&self) -> Signature {
        Signature::Riemannian
    }

    fn domain(&self) -> Option<Rect> {
        Some(Rect::new([f64::MIN_POSITIVE, f64::INFINITY], [f64::NEG_INFINITY, f64::INFINITY]))
    }

    fn metric(&self, p: Point2) -> Result<[Jet3; 3]> {
        if self.omega.is_none() && self.extension.is_none() {
            return Err(Error::Unsupported(
                "static configuration (Omega = 0) has a rank-1 induced metric; add the dimensional-extension field X"
                    .into(),
            ));
        }
        induced_metric(&self.system, p)
    }

    fn system(&self) -> Option<&GhmSystem> {
        Some(&self.system)
    }

    fn main_eq_residuals(&self, p: Point2) -> Option<Result<Vec<f64>>> {
        Some((|| {
            let rho = p.x1;
            let f = Derivs::from(self.f.eval(p)?);
            let o = self.omega_derivs(p)?;
            let m1 = f.d11 + f.d1 / rho + f.d22 - (f.d1 * f.d1 + f.d2 * f.d2 - o.d1 * o.d1 - o.d2 * o.d2) / f.v;
            let m2 = match &self.extension {
                Some(x) => {
                    let x = Derivs::from(x.eval(p)?);
                    x.d11 + x.d22
                }
                None => o.d11 + o.d1 / rho + o.d22 - 2.0 / f.v * (f.d1 * o.d1 + f.d2 * o.d2),
            };
            Ok(vec![m1, m2])
        })())
    }

    fn main_eq_factors(&self) -> Vec<f64> {
        vec![1.0, 1.0]
    }

    fn quadrature_gradient(&self, p: Point2) -> Option<Result<[Jet3; 2]>> {
        Some((|| {
            let (rho, _) = Jet3::coordinates(p);
            let f = self.f.eval(p)?;
            let o = match &self.omega {
                Some(o) => o.eval(p)?,
                None => Jet3::constant(0.0),
            };
            let [fr, fz] = f.gradient();
            let [or, oz] = o.gradient();
            let c = rho.checked_div(&(f * f)).map_err(dom(p))?;
            Ok([
                c * 0.25 * (fr * fr - fz * fz + or * or - oz * oz),
                c * 0.5 * (fr * fz + or * oz),
            ])
        })())
    }

    fn quadrature_relation(&self) -> Option<QuadratureRelation> {
        if self.extension.is_some() {
            return None;
        }
        Some(QuadratureRelation { t11: (0, 1.0), t12: (1, 1.0), potential: "kappa" })
    }

    fn reduced_lagrangian(&self, p: Point2) -> Option<Result<f64>> {
        Some((|| {
            let f = Derivs::from(self.f.eval(p)?);
            let o = self.omega_derivs(p)?;
            let mut l = p.x1 / (2.0 * f.v * f.v) * (f.d1 * f.d1 + f.d2 * f.d2 + o.d1 * o.d1 + o.d2 * o.d2);
            if let Some(x) = &self.extension {
                let x = Derivs::from(x.eval(p)?);
                l += x.d1 * x.d1 + x.d2 * x.d2;
            }
            Ok(l)
        })())
    }
}
