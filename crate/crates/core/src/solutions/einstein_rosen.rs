use std::f64::consts::SQRT_2;
use std::sync::Arc;

use super::terms::{er_u_terms, er_v_terms, PairDerivs};
use super::{dom, nonzero, Family, QuadratureRelation};
use crate::error::{Error, Result};
use crate::geometry::{Coframe, FnMetric, FrameKind, Signature};
use crate::ghm::{induced_metric, FnTarget, GhmSystem};
use crate::jets::{FnField, Jet3, JetError, Point2, Rect, ScalarField2};

/// Einstein–Rosen waves `(ψ, Ω)` in coordinates `(t, ρ)` with base
/// `g = diag(1, -1)` and target `G = ½ρ diag(4, e^{-4ψ})`.
///
/// The induced metric `2ρ dψ² + ½ρ e^{-4ψ} dΩ²` is Riemannian.
pub struct EinsteinRosen {
    psi: Arc<dyn ScalarField2>,
    omega: Arc<dyn ScalarField2>,
    system: GhmSystem,
}

impl EinsteinRosen {
    pub fn new(psi: Arc<dyn ScalarField2>, omega: Arc<dyn ScalarField2>) -> Result<Self> {
        let base = Arc::new(FnMetric::new(|_, _| {
            Ok([Jet3::constant(1.0), Jet3::constant(0.0), Jet3::constant(-1.0)])
        }));
        let target = Arc::new(FnTarget::new(2, |y: &[Jet3], x: [Jet3; 2]| {
            let rho = x[1];
            Ok(vec![rho * 2.0, Jet3::constant(0.0), Jet3::constant(0.0), rho * 0.5 * (y[0] * -4.0).exp()])
        }));
        let system = GhmSystem::new(base, target, vec![psi.clone(), omega.clone()])?;
        Ok(Self { psi, omega, system })
    }

    /// `ψ = ½ ln(k(1 + ρ²)/2)`, `Ω = kt`: an exact solution.
    pub fn exact(k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::InvalidConfig("exact Einstein-Rosen solution needs k > 0".into()));
        }
        let psi = FnField::new(move |_, rho| -> std::result::Result<Jet3, JetError> {
            Ok(((rho * rho + 1.0) * (k / 2.0)).ln()? * 0.5)
        });
        let omega = FnField::new(move |t, _| Ok(t * k));
        Self::new(Arc::new(psi), Arc::new(omega))
    }

    pub fn pair_derivs(&self, p: Point2) -> Result<PairDerivs> {
        Ok(PairDerivs::new(self.psi.eval(p)?.into(), self.omega.eval(p)?.into()))
    }

    /// `R ρ + 4`, zero when the closed-form Ricci scalar holds.
    pub fn ricci_diagnostic(&self, ricci: f64, p: Point2) -> f64 {
        ricci * p.x2 + 4.0
    }

    fn n_value(d: &PairDerivs) -> f64 {
        (-4.0 * d.a.v).exp() * d.b.d1 * d.b.d1 + 4.0 * d.a.d1 * d.a.d1
    }
}

impl Family for EinsteinRosen {
    fn id(&self) -> &'static str {
        "einstein_rosen"
    }

    fn coordinate_names(&self) -> [&'static str; 2] {
        ["t", "rho"]
    }

    fn signature(&self) -> Signature {
        Signature::Riemannian
    }

    fn domain(&self) -> Option<Rect> {
        Some(Rect::new([f64::NEG_INFINITY, f64::INFINITY], [f64::MIN_POSITIVE, f64::INFINITY]))
    }

    fn metric(&self, p: Point2) -> Result<[Jet3; 3]> {
        let [ot, or] = self.omega.eval(p)?.d1();
        if ot == 0.0 && or == 0.0 {
            return Err(Error::Unsupported(
                "polarized configuration (Omega constant) has a rank-1 induced metric; add a dimensional-extension field"
                    .into(),
            ));
        }
        induced_metric(&self.system, p)
    }

    fn system(&self) -> Option<&GhmSystem> {
        Some(&self.system)
    }

    fn has_family_frame(&self) -> bool {
        true
    }

    fn family_coframe(&self, p: Point2) -> Result<Coframe> {
        let sj = self.psi.eval(p)?;
        let oj = self.omega.eval(p)?;
        let [st, sr] = sj.gradient();
        let [ot, or] = oj.gradient();
        let (_, rho) = Jet3::coordinates(p);
        let em4 = (sj * -4.0).exp();
        let n = em4 * ot * ot + st * st * 4.0;
        let a = em4 * ot * or + st * sr * 4.0;
        let delta = ot * sr - st * or;
        nonzero(n.value(), 1.0, "N = e^{-4 psi} Omega_t^2 + 4 psi_t^2", p)?;
        nonzero(delta.value(), 1.0, "Omega_t psi_rho - psi_t Omega_rho", p)?;
        let d = dom(p);
        let t11 = (rho * n).sqrt().map_err(&d)? * (1.0 / SQRT_2);
        let t12 = t11 * a.checked_div(&n).map_err(&d)?;
        let t22 = ((rho * 2.0).sqrt().map_err(&d)? * (sj * -2.0).exp() * delta)
            .checked_div(&n.sqrt().map_err(&d)?)
            .map_err(&d)?;
        Ok(Coframe::new([[t11, t12], [Jet3::constant(0.0), t22]], FrameKind::Family("einstein_rosen".into())))
    }

    fn closed_form_connection(&self, p: Point2) -> Option<Result<[f64; 2]>> {
        Some((|| {
            let d = self.pair_derivs(p)?;
            let n = Self::n_value(&d);
            nonzero(n, 1.0, "N = e^{-4 psi} Omega_t^2 + 4 psi_t^2", p)?;
            let delta = d.a.d1 * d.b.d2 - d.b.d1 * d.a.d2;
            nonzero(delta, 1.0, "psi_t Omega_rho - Omega_t psi_rho", p)?;
            let pre = 1.0 / (p.x2.sqrt() * n.powf(1.5));
            let u: f64 = er_u_terms(&d).iter().sum::<f64>() * SQRT_2;
            let v: f64 = er_v_terms(&d).iter().sum::<f64>() * SQRT_2;
            Ok([pre * u, pre * v / delta])
        })())
    }

    fn closed_form_curvature(&self, p: Point2) -> Option<Result<f64>> {
        Some(Ok(-2.0 / p.x2))
    }

    fn closed_form_ricci(&self, p: Point2) -> Option<Result<f64>> {
        Some(Ok(-4.0 / p.x2))
    }

    fn main_eq_residuals(&self, p: Point2) -> Option<Result<Vec<f64>>> {
        Some((|| {
            let d = self.pair_derivs(p)?;
            let (s, o) = (d.a, d.b);
            let rho = p.x2;
            let em4 = (-4.0 * s.v).exp();
            Ok(vec![
                -s.d11 + s.d22 + s.d2 / rho - em4 / 2.0 * (o.d1 * o.d1 - o.d2 * o.d2),
                -o.d11 + o.d22 + o.d2 / rho + 4.0 * (s.d1 * o.d1 - s.d2 * o.d2),
            ])
        })())
    }

    fn main_eq_factors(&self) -> Vec<f64> {
        vec![-1.0, -1.0]
    }

    fn quadrature_gradient(&self, p: Point2) -> Option<Result<[Jet3; 2]>> {
        Some((|| {
            let sj = self.psi.eval(p)?;
            let oj = self.omega.eval(p)?;
            let (_, rho) = Jet3::coordinates(p);
            let [st, sr] = sj.gradient();
            let [ot, or] = oj.gradient();
            let em4 = (sj * -4.0).exp();
            Ok([
                rho * st * sr * 2.0 + rho * em4 * ot * or * 0.5,
                rho * (st * st + sr * sr) + rho * em4 * (ot * ot + or * or) * 0.25,
            ])
        })())
    }

    fn quadrature_relation(&self) -> Option<QuadratureRelation> {
        Some(QuadratureRelation { t11: (1, 1.0), t12: (0, 1.0), potential: "kappa" })
    }

    fn reduced_lagrangian(&self, p: Point2) -> Option<Result<f64>> {
        Some((|| {
            let d = self.pair_derivs(p)?;
            let (s, o) = (d.a, d.b);
            let rho = p.x2;
            Ok(2.0 * rho * (s.d1 * s.d1 - s.d2 * s.d2)
                + rho * (-4.0 * s.v).exp() / 2.0 * (o.d1 * o.d1 - o.d2 * o.d2))
        })())
    }
}
