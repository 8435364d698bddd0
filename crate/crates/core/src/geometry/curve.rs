use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{build_coframe, check_metric, connection_from_cartan, Coframe, ConnectionField, FrameKind, MetricField2, Signature};
use crate::error::{Error, Result};
use crate::jets::{Axis, Jet3, Point2};
use crate::quad::{richardson_pair, simpson, Estimate};

/// A smooth piece of a closed curve, parametrized by `s ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Piece {
    Line { from: Point2, to: Point2 },
    Arc { center: Point2, radius: f64, start: f64, end: f64 },
}

impl Piece {
    pub fn point(&self, s: f64) -> Point2 {
        match *self {
            Piece::Line { from, to } => Point2::new(from.x1 + s * (to.x1 - from.x1), from.x2 + s * (to.x2 - from.x2)),
            Piece::Arc { center, radius, start, end } => {
                let a = start + s * (end - start);
                Point2::new(center.x1 + radius * a.cos(), center.x2 + radius * a.sin())
            }
        }
    }

    pub fn velocity(&self, s: f64) -> [f64; 2] {
        match *self {
            Piece::Line { from, to } => [to.x1 - from.x1, to.x2 - from.x2],
            Piece::Arc { radius, start, end, .. } => {
                let a = start + s * (end - start);
                let da = end - start;
                [-radius * a.sin() * da, radius * a.cos() * da]
            }
        }
    }
}

/// A closed curve in the chart, possibly closing only through a periodic
/// identification of one coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClosedCurve {
    /// Vertices joined by straight segments, last back to first.
    Polygon { vertices: Vec<Point2> },
    /// A counter-clockwise coordinate circle.
    Circle { center: Point2, radius: f64 },
    /// `x_axis` runs over one period from `start` with the other coordinate
    /// fixed at `fixed`.
    Periodic { axis: Axis, fixed: f64, start: f64, period: f64 },
}

impl ClosedCurve {
    /// Counter-clockwise coordinate rectangle.
    pub fn rectangle(x1: [f64; 2], x2: [f64; 2]) -> Self {
        ClosedCurve::Polygon {
            vertices: vec![
                Point2::new(x1[0], x2[0]),
                Point2::new(x1[1], x2[0]),
                Point2::new(x1[1], x2[1]),
                Point2::new(x1[0], x2[1]),
            ],
        }
    }

    pub fn pieces(&self) -> Result<Vec<Piece>> {
        match self {
            ClosedCurve::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::OpenBoundary(format!(
                        "a polygon needs at least 3 vertices, got {}",
                        vertices.len()
                    )));
                }
                Ok((0..vertices.len())
                    .map(|i| Piece::Line { from: vertices[i], to: vertices[(i + 1) % vertices.len()] })
                    .collect())
            }
            ClosedCurve::Circle { center, radius } => Ok(vec![Piece::Arc {
                center: *center,
                radius: *radius,
                start: 0.0,
                end: 2.0 * PI,
            }]),
            ClosedCurve::Periodic { axis, fixed, start, period } => {
                let (from, to) = match axis {
                    Axis::X1 => (Point2::new(*start, *fixed), Point2::new(start + period, *fixed)),
                    Axis::X2 => (Point2::new(*fixed, *start), Point2::new(*fixed, start + period)),
                };
                Ok(vec![Piece::Line { from, to }])
            }
        }
    }

    /// Sample points `(piece index, s, point)` at `n` panels per piece.
    pub fn samples(&self, n: usize) -> Result<Vec<Point2>> {
        let pieces = self.pieces()?;
        let mut out = Vec::with_capacity(pieces.len() * n);
        for piece in &pieces {
            for i in 0..n {
                out.push(piece.point(i as f64 / n as f64));
            }
        }
        Ok(out)
    }
}

fn line_integral(conn: &dyn ConnectionField, piece: &Piece, n: usize) -> Result<f64> {
    let domain = conn.domain();
    simpson(
        |s| {
            let p = piece.point(s);
            if let Some(d) = domain {
                if !d.contains(p) {
                    return Err(Error::CurveOutsideDomain { s, point: p });
                }
            }
            let w = conn.connection(p)?;
            let v = piece.velocity(s);
            Ok(w[0].value() * v[0] + w[1].value() * v[1])
        },
        0.0,
        1.0,
        n,
    )
}

/// `∮ ω_μ dx^μ` by composite Simpson on each piece at `n_steps` and
/// `2 n_steps` panels, with the Richardson error estimate.
pub fn loop_holonomy(conn: &dyn ConnectionField, curve: &ClosedCurve, n_steps: usize) -> Result<Estimate> {
    if n_steps < 16 {
        return Err(Error::InvalidConfig(format!("holonomy needs n_steps >= 16, got {n_steps}")));
    }
    let n = n_steps + n_steps % 2;
    let mut coarse = 0.0;
    let mut fine = 0.0;
    for piece in curve.pieces()? {
        coarse += line_integral(conn, &piece, n)?;
        fine += line_integral(conn, &piece, 2 * n)?;
    }
    Ok(richardson_pair(coarse, fine))
}

/// Orthonormal coframe whose first dual vector is the unit tangent of the
/// coordinate line along `axis`, positively oriented.
pub(crate) fn adapted_coframe(h: &[Jet3; 3], along: Axis, p: Point2) -> Result<Coframe> {
    check_metric(h, Signature::Riemannian, p)?;
    match along {
        Axis::X1 => {
            let mut cf = build_coframe(h, Signature::Riemannian, p)?;
            cf.kind = FrameKind::Adapted;
            Ok(cf)
        }
        Axis::X2 => {
            let dom = |source| Error::Domain { point: p, source };
            let [h11, h12, h22] = *h;
            let a = h22.sqrt().map_err(dom)?;
            let det = h11 * h22 - h12 * h12;
            let b = det.sqrt().map_err(dom)?.checked_div(&a).map_err(dom)?;
            let ia = a.recip().map_err(dom)?;
            Ok(Coframe::new([[h12 * ia, a], [-b, Jet3::constant(0.0)]], FrameKind::Adapted))
        }
    }
}

/// Geodesic curvature of the coordinate line through `p` running along `axis`
/// in the direction of increasing coordinate, signed towards the left normal.
///
/// With `e1` the unit tangent, `∇_{e1} e1 = κ e2`, hence `κ = -ω¹₂(e1)`.
pub fn geodesic_curvature(h: &dyn MetricField2, along: Axis, p: Point2) -> Result<f64> {
    let comps = h.components(p)?;
    let hii = comps[if along == Axis::X1 { 0 } else { 2 }].value();
    if hii <= 0.0 {
        return Err(Error::NullTangent { point: p });
    }
    let cf = adapted_coframe(&comps, along, p)?;
    let w = connection_from_cartan(&cf, Signature::Riemannian, p)?;
    Ok(-w.frame[0])
}
