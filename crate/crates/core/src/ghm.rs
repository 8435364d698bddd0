//! Generalized harmonic maps `y: (M, g) → (N, G(y, x))` from a two-dimensional base.
//!
//! Everything here is evaluated pointwise from third-order jets of the fields
//! `yᴬ(x)` and of the base metric. Target-metric derivatives are obtained by
//! seeding the jet slots: `∂_C G_AB` by seeding `y^C`, the explicit base
//! derivatives `∂_a G_AB` by seeding `x^a` with `y` frozen.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::MetricField2;
use crate::jets::{Axis, Jet3, JetError, Point2, Rect, ScalarField2};

/// Target metric `G_AB(y, x)` evaluated on jets.
pub trait TargetMetric: Send + Sync {
    fn dim(&self) -> usize;

    /// Row-major `n × n` components. Must be symmetric.
    fn metric(&self, y: &[Jet3], x: [Jet3; 2]) -> std::result::Result<Vec<Jet3>, JetError>;

    /// Flags marking dimensional-extension coordinates.
    fn extension(&self) -> Vec<bool> {
        vec![false; self.dim()]
    }
}

/// Target metric given by a closure.
pub struct FnTarget<F> {
    dim: usize,
    f: F,
    extension: Vec<bool>,
}

impl<F> FnTarget<F>
where
    F: Fn(&[Jet3], [Jet3; 2]) -> std::result::Result<Vec<Jet3>, JetError> + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f, extension: vec![false; dim] }
    }

    pub fn with_extension(mut self, extension: Vec<bool>) -> Self {
        assert_eq!(extension.len(), self.dim);
        self.extension = extension;
        self
    }
}

impl<F> TargetMetric for FnTarget<F>
where
    F: Fn(&[Jet3], [Jet3; 2]) -> std::result::Result<Vec<Jet3>, JetError> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn metric(&self, y: &[Jet3], x: [Jet3; 2]) -> std::result::Result<Vec<Jet3>, JetError> {
        (self.f)(y, x)
    }
    fn extension(&self) -> Vec<bool> {
        self.extension.clone()
    }
}

/// `G` with its base-point dependence frozen at `x0`, so that `∂_a G = 0`.
pub struct FrozenTarget {
    pub inner: Arc<dyn TargetMetric>,
    pub x0: Point2,
}

impl TargetMetric for FrozenTarget {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn metric(&self, y: &[Jet3], _x: [Jet3; 2]) -> std::result::Result<Vec<Jet3>, JetError> {
        self.inner
            .metric(y, [Jet3::constant(self.x0.x1), Jet3::constant(self.x0.x2)])
    }
    fn extension(&self) -> Vec<bool> {
        self.inner.extension()
    }
}

/// Base metric, target metric and embedding fields.
#[derive(Clone)]
pub struct GhmSystem {
    pub base: Arc<dyn MetricField2>,
    pub target: Arc<dyn TargetMetric>,
    pub fields: Vec<Arc<dyn ScalarField2>>,
    pub domain: Option<Rect>,
}

impl GhmSystem {
    pub fn new(
        base: Arc<dyn MetricField2>,
        target: Arc<dyn TargetMetric>,
        fields: Vec<Arc<dyn ScalarField2>>,
    ) -> Result<Self> {
        if fields.len() != target.dim() {
            return Err(Error::InvalidConfig(format!(
                "target dimension {} but {} fields",
                target.dim(),
                fields.len()
            )));
        }
        if target.extension().len() != target.dim() {
            return Err(Error::InvalidConfig("extension flags do not match the target dimension".into()));
        }
        Ok(Self { base, target, fields, domain: None })
    }

    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn with_target(&self, target: Arc<dyn TargetMetric>) -> Self {
        Self { target, ..self.clone() }
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }
}

/// All pointwise data the GHM operations share.
struct PointData {
    n: usize,
    /// `√|g|` as a jet.
    sqrt_g: Jet3,
    g: [Jet3; 3],
    /// `[g^11, g^12, g^22]` as jets.
    ginv: [Jet3; 3],
    /// `∂_a yᴬ` as jets (`dy[A][a]`).
    dy: Vec<[Jet3; 2]>,
    /// `G_AB` along the map, jets through the composition.
    big_g: Vec<Jet3>,
    /// `G^AB` values.
    big_g_inv: DMatrix<f64>,
    /// `∂_C G_AB` values, `dg_dy[C][A*n+B]`.
    dg_dy: Vec<Vec<f64>>,
    /// Explicit `∂_a G_AB` values, `dg_dx[a][A*n+B]`.
    dg_dx: [Vec<f64>; 2],
}

fn sym(m: &[Jet3; 3], a: usize, b: usize) -> Jet3 {
    m[a + b]
}

fn sym_v(m: &[Jet3; 3], a: usize, b: usize) -> f64 {
    m[a + b].value()
}

impl PointData {
    fn new(sys: &GhmSystem, p: Point2) -> Result<Self> {
        let dom = |source| Error::Domain { point: p, source };
        let n = sys.dim();
        let g = sys.base.components(p)?;
        let det = g[0] * g[2] - g[1] * g[1];
        let scale = g.iter().fold(0f64, |a, b| a.max(b.value().abs()));
        if det.value().abs() <= crate::tolerances::DEGENERATE_DET * scale * scale {
            return Err(Error::DegenerateMetric { point: p, det: det.value(), scale });
        }
        let inv_det = det.recip().map_err(dom)?;
        let ginv = [g[2] * inv_det, -g[1] * inv_det, g[0] * inv_det];
        let sqrt_g = if det.value() > 0.0 { det.sqrt() } else { (-det).sqrt() }.map_err(dom)?;

        let y: Vec<Jet3> = sys.fields.iter().map(|f| f.eval(p)).collect::<Result<_>>()?;
        let dy: Vec<[Jet3; 2]> = y.iter().map(|j| j.gradient()).collect();
        let (x1, x2) = Jet3::coordinates(p);
        let big_g = sys.target.metric(&y, [x1, x2]).map_err(dom)?;
        if big_g.len() != n * n {
            return Err(Error::InvalidConfig(format!("target metric returned {} components", big_g.len())));
        }

        let yv: Vec<f64> = y.iter().map(|j| j.value()).collect();
        let mut dg_dy = vec![Vec::new(); n];
        let mut c = 0;
        while c < n {
            let mut seeded: Vec<Jet3> = yv.iter().map(|v| Jet3::constant(*v)).collect();
            seeded[c] = Jet3::var(Axis::X1, yv[c]);
            if c + 1 < n {
                seeded[c + 1] = Jet3::var(Axis::X2, yv[c + 1]);
            }
            let gs = sys
                .target
                .metric(&seeded, [Jet3::constant(p.x1), Jet3::constant(p.x2)])
                .map_err(dom)?;
            dg_dy[c] = gs.iter().map(|j| j.d1()[0]).collect();
            if c + 1 < n {
                dg_dy[c + 1] = gs.iter().map(|j| j.d1()[1]).collect();
            }
            c += 2;
        }
        let frozen: Vec<Jet3> = yv.iter().map(|v| Jet3::constant(*v)).collect();
        let gx = sys.target.metric(&frozen, [x1, x2]).map_err(dom)?;
        let dg_dx = [
            gx.iter().map(|j| j.d1()[0]).collect(),
            gx.iter().map(|j| j.d1()[1]).collect(),
        ];

        let gv = DMatrix::from_iterator(n, n, big_g.iter().map(|j| j.value()));
        let gscale = gv.iter().fold(0f64, |a, b| a.max(b.abs()));
        let gdet = gv.determinant();
        if !gdet.is_finite() || gdet.abs() <= 1e-14 * gscale.powi(n as i32) {
            return Err(Error::SingularTarget { point: p });
        }
        let big_g_inv = gv.try_inverse().ok_or(Error::SingularTarget { point: p })?;

        Ok(Self { n, sqrt_g, g, ginv, dy, big_g, big_g_inv, dg_dy, dg_dx })
    }

    fn gg(&self, a: usize, b: usize) -> f64 {
        self.big_g[a * self.n + b].value()
    }

    /// `h_ab` as jets (order one less than the fields).
    fn induced(&self) -> [Jet3; 3] {
        let mut h = [Jet3::constant(0.0); 3];
        for (k, (a, b)) in [(0, 0), (0, 1), (1, 1)].into_iter().enumerate() {
            let mut acc = Jet3::constant(0.0);
            for aa in 0..self.n {
                for bb in 0..self.n {
                    acc += self.dy[aa][a] * self.dy[bb][b] * self.big_g[aa * self.n + bb];
                }
            }
            h[k] = acc;
        }
        h
    }

    /// `g^{ab} ∂_a y^B ∂_b y^C` values.
    fn contracted(&self, b_: usize, c_: usize) -> f64 {
        let mut acc = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                acc += sym_v(&self.ginv, a, b) * self.dy[b_][a].value() * self.dy[c_][b].value();
            }
        }
        acc
    }

    fn explicit_lagrangian_gradient(&self) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (a, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for aa in 0..self.n {
                for bb in 0..self.n {
                    acc += self.contracted(aa, bb) * self.dg_dx[a][aa * self.n + bb];
                }
            }
            *o = self.sqrt_g.value() * acc;
        }
        out
    }
}

/// Induced metric `h_ab = ∂_a yᴬ ∂_b yᴮ G_AB(y, x)` as `[h11, h12, h22]`.
pub fn induced_metric(sys: &GhmSystem, p: Point2) -> Result<[Jet3; 3]> {
    Ok(PointData::new(sys, p)?.induced())
}

/// Lagrangian density `√|g| g^{ab} h_ab` and the part of its gradient that
/// comes only from the explicit base-point dependence of `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianDensity {
    pub total: Jet3,
    pub explicit_gradient: [f64; 2],
}

pub fn lagrangian_density(sys: &GhmSystem, p: Point2) -> Result<LagrangianDensity> {
    let d = PointData::new(sys, p)?;
    let h = d.induced();
    let mut tr = Jet3::constant(0.0);
    for a in 0..2 {
        for b in 0..2 {
            tr += sym(&d.ginv, a, b) * sym(&h, a, b);
        }
    }
    Ok(LagrangianDensity { total: d.sqrt_g * tr, explicit_gradient: d.explicit_lagrangian_gradient() })
}

/// The three groups of terms in the field equations, per target coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldEqTerms {
    /// `(1/√|g|) ∂_a(√|g| g^{ab} ∂_b yᴬ)`
    pub laplacian: Vec<f64>,
    /// `Γᴬ_BC g^{ab} ∂_a yᴮ ∂_b y^C`
    pub christoffel: Vec<f64>,
    /// `G^{AB} g^{ab} ∂_a y^C ∂_b G_BC` with the explicit base derivative.
    pub explicit: Vec<f64>,
}

impl FieldEqTerms {
    pub fn residual(&self) -> Vec<f64> {
        (0..self.laplacian.len())
            .map(|a| self.laplacian[a] + self.christoffel[a] + self.explicit[a])
            .collect()
    }
}

pub fn field_eq_terms(sys: &GhmSystem, p: Point2) -> Result<FieldEqTerms> {
    let d = PointData::new(sys, p)?;
    let n = d.n;
    let mut laplacian = vec![0.0; n];
    for (aa, out) in laplacian.iter_mut().enumerate() {
        let mut div = 0.0;
        for a in 0..2 {
            let v = d.sqrt_g * (sym(&d.ginv, a, 0) * d.dy[aa][0] + sym(&d.ginv, a, 1) * d.dy[aa][1]);
            div += v.partial(Axis::from_index(a)).value();
        }
        *out = div / d.sqrt_g.value();
    }

    // Γ_{D,BC} = ½(∂_B G_DC + ∂_C G_DB - ∂_D G_BC)
    let dg = |c: usize, a: usize, b: usize| d.dg_dy[c][a * n + b];
    let mut christoffel = vec![0.0; n];
    for (aa, out) in christoffel.iter_mut().enumerate() {
        let mut acc = 0.0;
        for b in 0..n {
            for c in 0..n {
                let k = d.contracted(b, c);
                if k == 0.0 {
                    continue;
                }
                let mut gamma = 0.0;
                for dd in 0..n {
                    gamma += d.big_g_inv[(aa, dd)] * 0.5 * (dg(b, dd, c) + dg(c, dd, b) - dg(dd, b, c));
                }
                acc += gamma * k;
            }
        }
        *out = acc;
    }

    let mut explicit = vec![0.0; n];
    for (aa, out) in explicit.iter_mut().enumerate() {
        let mut acc = 0.0;
        for b in 0..n {
            for c in 0..n {
                let mut s = 0.0;
                for a in 0..2 {
                    for bb in 0..2 {
                        s += sym_v(&d.ginv, a, bb) * d.dy[c][bb].value() * d.dg_dx[a][b * n + c];
                    }
                }
                acc += d.big_g_inv[(aa, b)] * s;
            }
        }
        *out = acc;
    }
    Ok(FieldEqTerms { laplacian, christoffel, explicit })
}

/// Field-equation residual per target coordinate.
pub fn field_eq_residual(sys: &GhmSystem, p: Point2) -> Result<Vec<f64>> {
    Ok(field_eq_terms(sys, p)?.residual())
}

/// `T_ab = √|g| (h_ab - ½ g_ab g^{cd} h_cd)` as jets `[T11, T12, T22]`.
pub fn energy_momentum_jets(sys: &GhmSystem, p: Point2) -> Result<[Jet3; 3]> {
    let d = PointData::new(sys, p)?;
    Ok(energy_momentum_from(&d))
}

fn energy_momentum_from(d: &PointData) -> [Jet3; 3] {
    let h = d.induced();
    let mut tr = Jet3::constant(0.0);
    for a in 0..2 {
        for b in 0..2 {
            tr += sym(&d.ginv, a, b) * sym(&h, a, b);
        }
    }
    let half = tr * 0.5;
    [
        d.sqrt_g * (h[0] - d.g[0] * half),
        d.sqrt_g * (h[1] - d.g[1] * half),
        d.sqrt_g * (h[2] - d.g[2] * half),
    ]
}

/// Energy–momentum tensor values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyMomentum {
    /// `[T11, T12, T22]`
    pub t: [f64; 3],
}

impl EnergyMomentum {
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.t[a + b]
    }
}

pub fn energy_momentum(sys: &GhmSystem, p: Point2) -> Result<EnergyMomentum> {
    let t = energy_momentum_jets(sys, p)?;
    Ok(EnergyMomentum { t: [t[0].value(), t[1].value(), t[2].value()] })
}

/// `g^{ab} T_ab / √|g|`, which vanishes identically on a two-dimensional base.
pub fn energy_momentum_trace(sys: &GhmSystem, p: Point2) -> Result<f64> {
    let d = PointData::new(sys, p)?;
    let t = energy_momentum_from(&d);
    let mut tr = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            tr += sym_v(&d.ginv, a, b) * t[a + b].value();
        }
    }
    Ok(tr / d.sqrt_g.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservationResidual {
    /// `∇_b T_a^b + ½ ∂_a L` (explicit part), per base coordinate.
    pub components: [f64; 2],
    /// `∂_1 T_21 + ∂_2 T_22`, the integrability condition of the quadratures.
    pub integrability: f64,
}

/// Residual of the generalized conservation law.
///
/// `T_a^b = T_ac g^{cb}` carries the density weight of `√|g|`, so its covariant
/// divergence is `∂_b T_a^b - Γ^c_{ba} T_c^b`.
pub fn conservation_residual(sys: &GhmSystem, p: Point2) -> Result<ConservationResidual> {
    let d = PointData::new(sys, p)?;
    let t = energy_momentum_from(&d);
    // mixed[a][b] = T_a^b
    let mut mixed = [[Jet3::constant(0.0); 2]; 2];
    for (a, row) in mixed.iter_mut().enumerate() {
        for (b, m) in row.iter_mut().enumerate() {
            *m = sym(&t, a, 0) * sym(&d.ginv, 0, b) + sym(&t, a, 1) * sym(&d.ginv, 1, b);
        }
    }
    let dgv = |c: usize, a: usize, b: usize| d.g[a + b].d1()[c];
    let gamma = |c: usize, a: usize, b: usize| {
        let mut acc = 0.0;
        for e in 0..2 {
            acc += 0.5 * sym_v(&d.ginv, c, e) * (dgv(a, e, b) + dgv(b, e, a) - dgv(e, a, b));
        }
        acc
    };
    let dl = d.explicit_lagrangian_gradient();
    let mut components = [0.0; 2];
    for (a, out) in components.iter_mut().enumerate() {
        let mut div = 0.0;
        for b in 0..2 {
            div += mixed[a][b].partial(Axis::from_index(b)).value();
        }
        let mut conn = 0.0;
        for b in 0..2 {
            for c in 0..2 {
                conn += gamma(c, b, a) * mixed[c][b].value();
            }
        }
        *out = div - conn + 0.5 * dl[a];
    }
    let integrability = t[1].partial(Axis::X1).value() + t[2].partial(Axis::X2).value();
    Ok(ConservationResidual { components, integrability })
}

/// Largest violation of the extension-sector block conditions
/// `G_{AB̃} = 0`, `∂_{Ã} G_{AB} = 0`, `∂_A G_{ÃB̃} = 0` at `p`.
pub fn extension_defect(sys: &GhmSystem, p: Point2) -> Result<f64> {
    let d = PointData::new(sys, p)?;
    let ext = sys.target.extension();
    let n = d.n;
    let mut worst = 0f64;
    for a in 0..n {
        for b in 0..n {
            if ext[a] != ext[b] {
                worst = worst.max(d.gg(a, b).abs());
            }
            for c in 0..n {
                if ext[c] != ext[a] && ext[a] == ext[b] {
                    worst = worst.max(d.dg_dy[c][a * n + b].abs());
                }
            }
        }
    }
    Ok(worst)
}

/// The induced metric of a system as a [`MetricField2`].
#[derive(Clone)]
pub struct InducedMetric(pub Arc<GhmSystem>);

impl MetricField2 for InducedMetric {
    fn components(&self, p: Point2) -> Result<[Jet3; 3]> {
        induced_metric(&self.0, p)
    }
    fn domain(&self) -> Option<Rect> {
        self.0.domain
    }
}
