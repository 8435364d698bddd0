use serde::{Deserialize, Serialize};

use super::{Coframe, CoframeField, FrameKind, Signature};
use crate::error::{Error, Result};
use crate::jets::{Axis, Jet3, JetError, Point2, Rect, ScalarField2};
use crate::tolerances::DEGENERATE_DET;

/// The connection one-form `ω¹₂` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionOneForm {
    /// Coordinate components `ω_μ` with derivative data.
    pub coord: [Jet3; 2],
    /// Frame components `ω_a = ω_μ e_a^μ`.
    pub frame: [f64; 2],
}

impl ConnectionOneForm {
    pub fn from_coord(coord: [Jet3; 2], cf: &Coframe, p: Point2) -> Result<Self> {
        let e = cf.inverse(p)?;
        let w = [coord[0].value(), coord[1].value()];
        let frame = [w[0] * e[0][0] + w[1] * e[1][0], w[0] * e[0][1] + w[1] * e[1][1]];
        Ok(Self { coord, frame })
    }
}

/// Curvature coefficient `F` in `dω = F Θ¹∧Θ²` and the Ricci scalar `R = 2F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureData {
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

fn exterior(a: &[Jet3; 2]) -> Jet3 {
    a[1].partial(Axis::X1) - a[0].partial(Axis::X2)
}

/// Solves the first structure equation `dΘᵃ + ωᵃ_b ∧ Θᵇ = 0` for `ω¹₂`.
///
/// With `dΘᵃ = Dᵃ dx¹∧dx²` and `ω²₁ = s ω¹₂` the two `dx¹∧dx²` coefficients give
///
/// ```text
/// D¹ + ω₁Θ²₂ - ω₂Θ²₁ = 0
/// D² + s (ω₁Θ¹₂ - ω₂Θ¹₁) = 0
/// ```
///
/// whose determinant is `-s det Θ`.
pub fn connection_from_cartan(cf: &Coframe, sig: Signature, p: Point2) -> Result<ConnectionOneForm> {
    if cf.order() == 0 {
        return Err(Error::Unsupported("coframe carries no derivative data".into()));
    }
    let t = &cf.theta;
    let d1 = exterior(&t[0]);
    let d2 = exterior(&t[1]);
    let det = cf.det();
    let scale = cf.values().iter().flatten().fold(0f64, |a, b| a.max(b.abs()));
    if det.value().abs() <= DEGENERATE_DET * scale * scale || !det.value().is_finite() {
        return Err(Error::DegenerateCoframe { point: p, det: det.value() });
    }
    let s = sig.antisymmetry();
    let inv = (det * (-s)).recip().map_err(|source| Error::Domain { point: p, source })?;
    let w1 = (d1 * t[0][0] * s - t[1][0] * d2) * inv;
    let w2 = (d1 * t[0][1] * s - t[1][1] * d2) * inv;
    ConnectionOneForm::from_coord([w1, w2], cf, p)
}

/// Second structure equation in the abelian case: `F = dω / (Θ¹∧Θ²)`.
pub fn curvature(conn: &ConnectionOneForm, cf: &Coframe, p: Point2) -> Result<CurvatureData> {
    if conn.coord.iter().any(|w| w.order() == 0) {
        return Err(Error::Unsupported("connection carries no derivative data".into()));
    }
    let dw = exterior(&conn.coord).value();
    let det = cf.det().value();
    let scale = cf.values().iter().flatten().fold(0f64, |a, b| a.max(b.abs()));
    if det.abs() <= DEGENERATE_DET * scale * scale || !det.is_finite() {
        return Err(Error::DegenerateCoframe { point: p, det });
    }
    let f = dw / det;
    Ok(CurvatureData { f, r: 2.0 * f })
}

/// `ω' = ω - dλ`: the connection in the coframe rotated by [`rotate_coframe`].
pub fn gauge_transform(coord: &[Jet3; 2], lambda: &Jet3) -> [Jet3; 2] {
    [
        coord[0] - lambda.partial(Axis::X1),
        coord[1] - lambda.partial(Axis::X2),
    ]
}

/// Local frame change by the angle (SO(2)) or rapidity (SO(1,1)) `λ`:
///
/// ```text
/// SO(2):   Θ'¹ =  cos λ Θ¹ + sin λ Θ²,   Θ'² = -sin λ Θ¹ + cos λ Θ²
/// SO(1,1): Θ'¹ = cosh λ Θ¹ + sinh λ Θ²,  Θ'² = sinh λ Θ¹ + cosh λ Θ²
/// ```
pub fn rotate_coframe(cf: &Coframe, lambda: &Jet3, sig: Signature) -> Coframe {
    let (m00, m01, m10, m11) = match sig {
        Signature::Riemannian => {
            let (c, s) = (lambda.cos(), lambda.sin());
            (c, s, -s, c)
        }
        Signature::Lorentzian => {
            let (c, s) = (lambda.cosh(), lambda.sinh());
            (c, s, s, c)
        }
    };
    let t = &cf.theta;
    let mut out = [[Jet3::constant(0.0); 2]; 2];
    for mu in 0..2 {
        out[0][mu] = m00 * t[0][mu] + m01 * t[1][mu];
        out[1][mu] = m10 * t[0][mu] + m11 * t[1][mu];
    }
    Coframe::new(out, FrameKind::Rotated)
}

/// Coframe, connection and curvature evaluated together.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameGeometry {
    pub coframe: Coframe,
    pub connection: ConnectionOneForm,
    pub curvature: CurvatureData,
}

pub fn frame_geometry(field: &dyn CoframeField, p: Point2) -> Result<FrameGeometry> {
    let coframe = field.coframe(p)?;
    let connection = connection_from_cartan(&coframe, field.signature(), p)?;
    let curvature = curvature(&connection, &coframe, p)?;
    Ok(FrameGeometry { coframe, connection, curvature })
}

/// A connection one-form given on the chart by its coordinate components.
pub trait ConnectionField: Send + Sync {
    fn connection(&self, p: Point2) -> Result<[Jet3; 2]>;

    fn domain(&self) -> Option<Rect> {
        None
    }
}

/// The Levi-Civita connection of a coframe field, through Cartan's equation.
pub struct CartanConnection<C>(pub C);

impl<C: CoframeField> ConnectionField for CartanConnection<C> {
    fn connection(&self, p: Point2) -> Result<[Jet3; 2]> {
        let cf = self.0.coframe(p)?;
        Ok(connection_from_cartan(&cf, self.0.signature(), p)?.coord)
    }
    fn domain(&self) -> Option<Rect> {
        self.0.domain()
    }
}

/// A connection given by a jet closure `(x1, x2) -> [ω₁, ω₂]`.
pub struct FnConnection<F> {
    f: F,
    domain: Option<Rect>,
}

impl<F> FnConnection<F>
where
    F: Fn(Jet3, Jet3) -> std::result::Result<[Jet3; 2], JetError> + Send + Sync,
{
    pub fn new(f: F) -> Self {
        Self { f, domain: None }
    }

    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = Some(domain);
        self
    }
}

impl<F> ConnectionField for FnConnection<F>
where
    F: Fn(Jet3, Jet3) -> std::result::Result<[Jet3; 2], JetError> + Send + Sync,
{
    fn connection(&self, p: Point2) -> Result<[Jet3; 2]> {
        let (x1, x2) = Jet3::coordinates(p);
        (self.f)(x1, x2).map_err(|source| Error::Domain { point: p, source })
    }
    fn domain(&self) -> Option<Rect> {
        self.domain
    }
}

/// `inner - dλ` for a gauge function `λ`.
pub struct GaugedConnection<C, L> {
    pub inner: C,
    pub lambda: L,
}

impl<C: ConnectionField, L: ScalarField2> ConnectionField for GaugedConnection<C, L> {
    fn connection(&self, p: Point2) -> Result<[Jet3; 2]> {
        Ok(gauge_transform(&self.inner.connection(p)?, &self.lambda.eval(p)?))
    }
    fn domain(&self) -> Option<Rect> {
        self.inner.domain()
    }
}
