use std::f64::consts::SQRT_2;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::terms::{gowdy_u_terms, gowdy_v_terms, gowdy_w_terms, PairDerivs};
use super::{dom, nonzero, Family, QuadratureRelation};
use crate::error::{Error, Result};
use crate::geometry::{Coframe, FnMetric, FrameKind, Signature};
use crate::ghm::{induced_metric, FnTarget, GhmSystem};
use crate::jets::{FnField, Jet3, JetError, Point2, ScalarField2};

/// Function of `θ` from a small library.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ThetaFn {
    Const { c: f64 },
    /// `offset + slope θ`
    Linear { offset: f64, slope: f64 },
    /// `offset + amplitude cos(k θ + phase)`
    Cos { offset: f64, amplitude: f64, k: f64, #[serde(default)] phase: f64 },
}

impl ThetaFn {
    pub fn eval(&self, th: Jet3) -> Jet3 {
        match *self {
            ThetaFn::Const { c } => Jet3::constant(c),
            ThetaFn::Linear { offset, slope } => th * slope + offset,
            ThetaFn::Cos { offset, amplitude, k, phase } => (th * k + phase).cos() * amplitude + offset,
        }
    }
}

/// Parameters of the AVTD family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AvtdConfig {
    pub a: ThetaFn,
    pub b: ThetaFn,
    pub c: ThetaFn,
    pub d: ThetaFn,
}

impl AvtdConfig {
    /// `A = 1, B = 0, C = 1, D = θ`, for which `P = -t`, `Q = θ`.
    pub fn standard() -> Self {
        Self {
            a: ThetaFn::Const { c: 1.0 },
            b: ThetaFn::Const { c: 0.0 },
            c: ThetaFn::Const { c: 1.0 },
            d: ThetaFn::Linear { offset: 0.0, slope: 1.0 },
        }
    }

    /// The default choice with `C` replaced by a constant.
    pub fn with_c(c: f64) -> Self {
        Self { c: ThetaFn::Const { c }, ..Self::standard() }
    }
}

/// `P = ln[A(e^{-Ct} + B² e^{Ct})]`.
#[derive(Debug, Clone, Copy)]
pub struct AvtdP(pub AvtdConfig);

/// `Q = B / (A(e^{-2Ct} + B²)) + D`.
#[derive(Debug, Clone, Copy)]
pub struct AvtdQ(pub AvtdConfig);

impl ScalarField2 for AvtdP {
    fn eval(&self, p: Point2) -> Result<Jet3> {
        let (t, th) = Jet3::coordinates(p);
        let cfg = &self.0;
        let (a, b, c) = (cfg.a.eval(th), cfg.b.eval(th), cfg.c.eval(th));
        let ct = c * t;
        (a * ((-ct).exp() + b * b * ct.exp())).ln().map_err(|source| Error::Domain { point: p, source })
    }
}

impl ScalarField2 for AvtdQ {
    fn eval(&self, p: Point2) -> Result<Jet3> {
        let (t, th) = Jet3::coordinates(p);
        let cfg = &self.0;
        let (a, b, c, d) = (cfg.a.eval(th), cfg.b.eval(th), cfg.c.eval(th), cfg.d.eval(th));
        let den = a * ((c * t * -2.0).exp() + b * b);
        Ok(b.checked_div(&den).map_err(|source| Error::Domain { point: p, source })? + d)
    }
}

/// Unpolarized Gowdy `T³` fields `(P, Q)` in coordinates `(t, θ)` with base
/// `g = diag(1, -e^{2t})` and target `G = ½e^{-t} diag(1, e^{2P})`.
pub struct Gowdy {
    p: Arc<dyn ScalarField2>,
    q: Arc<dyn ScalarField2>,
    system: GhmSystem,
}

impl Gowdy {
    pub fn new(p: Arc<dyn ScalarField2>, q: Arc<dyn ScalarField2>) -> Result<Self> {
        let base = Arc::new(FnMetric::new(|t, _| {
            Ok([Jet3::constant(1.0), Jet3::constant(0.0), -(t * 2.0).exp()])
        }));
        let target = Arc::new(FnTarget::new(2, |y: &[Jet3], x: [Jet3; 2]| {
            let c = (-x[0]).exp() * 0.5;
            Ok(vec![c, Jet3::constant(0.0), Jet3::constant(0.0), c * (y[0] * 2.0).exp()])
        }));
        let system = GhmSystem::new(base, target, vec![p.clone(), q.clone()])?;
        Ok(Self { p, q, system })
    }

    pub fn avtd(cfg: AvtdConfig) -> Result<Self> {
        Self::new(Arc::new(AvtdP(cfg)), Arc::new(AvtdQ(cfg)))
    }

    /// `P = t + ln(c/k) - ln cosh(ct)`, `Q = kθ`: an exact solution.
    pub fn exact(c: f64, k: f64) -> Result<Self> {
        if !(c > 0.0 && k > 0.0) {
            return Err(Error::InvalidConfig("exact Gowdy solution needs c > 0 and k > 0".into()));
        }
        let p = FnField::new(move |t, _| -> std::result::Result<Jet3, JetError> {
            Ok(t + (c / k).ln() - (t * c).cosh().ln()?)
        });
        let q = FnField::new(move |_, th| Ok(th * k));
        Self::new(Arc::new(p), Arc::new(q))
    }

    pub fn pair_derivs(&self, p: Point2) -> Result<PairDerivs> {
        Ok(PairDerivs::new(self.p.eval(p)?.into(), self.q.eval(p)?.into()))
    }

    /// `PtQθ - QtPθ`, whose zeros are the frame-degeneracy locus.
    fn delta(d: &PairDerivs) -> f64 {
        d.a.d1 * d.b.d2 - d.b.d1 * d.a.d2
    }

    /// Ricci scalar with the prefactor printed in the main text (`-e^t` in
    /// place of `-2e^t`).
    pub fn main_text_ricci(&self, p: Point2) -> Result<f64> {
        Ok(self.closed_form_ricci(p).expect("gowdy has a Ricci oracle")? / 2.0)
    }

    /// `½ e^{t/2} / (N^{3/2} (PθQt - PtQθ))`.
    pub fn connection_prefactor(&self, p: Point2) -> Result<f64> {
        let d = self.pair_derivs(p)?;
        let n = (2.0 * d.a.v).exp() * d.b.d1 * d.b.d1 + d.a.d1 * d.a.d1;
        nonzero(n, 1.0, "N = e^{2P} Qt^2 + Pt^2", p)?;
        let delta = Self::delta(&d);
        nonzero(delta, 1.0, "Pt Qtheta - Qt Ptheta", p)?;
        Ok(0.5 * (p.x1 / 2.0).exp() / (n.powf(1.5) * -delta))
    }
}

impl Family for Gowdy {
    fn id(&self) -> &'static str {
        "gowdy_avtd"
    }

    fn coordinate_names(&self) -> [&'static str; 2] {
        ["t", "theta"]
    }

    fn signature(&self) -> Signature {
        Signature::Riemannian
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

    fn family_coframe(&self, p: Point2) -> Result<Coframe> {
        let pj = self.p.eval(p)?;
        let qj = self.q.eval(p)?;
        let [pt, pth] = pj.gradient();
        let [qt, qth] = qj.gradient();
        let (t, _) = Jet3::coordinates(p);
        let e2p = (pj * 2.0).exp();
        let n = e2p * qt * qt + pt * pt;
        let a = e2p * qt * qth + pt * pth;
        let delta = pt * qth - qt * pth;
        nonzero(n.value(), 1.0, "N = e^{2P} Qt^2 + Pt^2", p)?;
        nonzero(delta.value(), 1.0, "Pt Qtheta - Qt Ptheta", p)?;
        let d = dom(p);
        let s = ((-t).exp() * n).sqrt().map_err(&d)?;
        let t1 = s * (1.0 / SQRT_2);
        let t12 = t1 * a.checked_div(&n).map_err(&d)?;
        let t22 = ((pj - t).exp() * delta * (1.0 / SQRT_2)).checked_div(&s).map_err(&d)?;
        Ok(Coframe::new([[t1, t12], [Jet3::constant(0.0), t22]], FrameKind::Family("gowdy".into())))
    }

    fn closed_form_connection(&self, p: Point2) -> Option<Result<[f64; 2]>> {
        Some((|| {
            let pre = self.connection_prefactor(p)?;
            let d = self.pair_derivs(p)?;
            let u: f64 = gowdy_u_terms(&d).iter().sum::<f64>() * SQRT_2;
            let v: f64 = gowdy_v_terms(&d).iter().sum::<f64>() * SQRT_2;
            Ok([pre * u, -pre * v])
        })())
    }

    fn closed_form_ricci(&self, p: Point2) -> Option<Result<f64>> {
        Some((|| {
            let d = self.pair_derivs(p)?;
            let delta = Self::delta(&d);
            nonzero(delta, 1.0, "Pt Qtheta - Qt Ptheta", p)?;
            let w: f64 = gowdy_w_terms(&d).iter().sum();
            Ok(-2.0 * p.x1.exp() * w / delta.powi(3))
        })())
    }

    fn main_eq_residuals(&self, p: Point2) -> Option<Result<Vec<f64>>> {
        Some((|| {
            let d = self.pair_derivs(p)?;
            let (pp, q) = (d.a, d.b);
            let em2t = (-2.0 * p.x1).exp();
            let e2p = (2.0 * pp.v).exp();
            Ok(vec![
                pp.d11 - em2t * pp.d22 - e2p * (q.d1 * q.d1 - em2t * q.d2 * q.d2),
                q.d11 - em2t * q.d22 + 2.0 * (pp.d1 * q.d1 - em2t * pp.d2 * q.d2),
            ])
        })())
    }

    fn main_eq_factors(&self) -> Vec<f64> {
        vec![1.0, 1.0]
    }

    fn quadrature_gradient(&self, p: Point2) -> Option<Result<[Jet3; 2]>> {
        Some((|| {
            let pj = self.p.eval(p)?;
            let qj = self.q.eval(p)?;
            let (t, _) = Jet3::coordinates(p);
            let [pt, pth] = pj.gradient();
            let [qt, qth] = qj.gradient();
            let em2t = (t * -2.0).exp();
            let e2p = (pj * 2.0).exp();
            Ok([
                pt * pt + em2t * pth * pth + e2p * (qt * qt + em2t * qth * qth),
                (pt * pth + e2p * qt * qth) * 2.0,
            ])
        })())
    }

    fn quadrature_relation(&self) -> Option<QuadratureRelation> {
        Some(QuadratureRelation { t11: (0, 0.25), t12: (1, 0.25), potential: "lambda" })
    }

    fn reduced_lagrangian(&self, p: Point2) -> Option<Result<f64>> {
        Some((|| {
            let d = self.pair_derivs(p)?;
            let (pp, q) = (d.a, d.b);
            let em2t = (-2.0 * p.x1).exp();
            Ok(0.5 * (pp.d1 * pp.d1 - em2t * pp.d2 * pp.d2)
                + 0.5 * (2.0 * pp.v).exp() * (q.d1 * q.d1 - em2t * q.d2 * q.d2))
        })())
    }
}

/// The literal metric `h = ½e^{-t} dt² + ½e^{t} dθ²` with its diagonal frame.
#[derive(Debug, Clone, Copy, Default)]
pub struct AvtdMetric;

impl Family for AvtdMetric {
    fn id(&self) -> &'static str {
        "gowdy_avtd_metric"
    }

    fn coordinate_names(&self) -> [&'static str; 2] {
        ["t", "theta"]
    }

    fn signature(&self) -> Signature {
        Signature::Riemannian
    }

    fn metric(&self, p: Point2) -> Result<[Jet3; 3]> {
        let (t, _) = Jet3::coordinates(p);
        Ok([(-t).exp() * 0.5, Jet3::constant(0.0), t.exp() * 0.5])
    }

    fn has_family_frame(&self) -> bool {
        true
    }

    fn family_coframe(&self, p: Point2) -> Result<Coframe> {
        let (t, _) = Jet3::coordinates(p);
        let z = Jet3::constant(0.0);
        Ok(Coframe::new(
            [[(t * -0.5).exp() * (1.0 / SQRT_2), z], [z, (t * 0.5).exp() * (1.0 / SQRT_2)]],
            FrameKind::Family("diagonal".into()),
        ))
    }

    fn closed_form_connection(&self, p: Point2) -> Option<Result<[f64; 2]>> {
        Some(Ok([0.0, -(p.x1 / 2.0).exp() / SQRT_2]))
    }

    fn closed_form_curvature(&self, p: Point2) -> Option<Result<f64>> {
        Some(Ok(-p.x1.exp()))
    }

    fn closed_form_ricci(&self, p: Point2) -> Option<Result<f64>> {
        Some(Ok(-2.0 * p.x1.exp()))
    }
}
