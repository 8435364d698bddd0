use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{frame_geometry, geodesic_curvature, metric_det, LowerTriangular, MetricField2, Signature};
use crate::jets::{Axis, Point2, Rect};
use crate::quad::{observed_order, simpson, simpson_nodes, simpson_weights};

/// How a side of a coordinate rectangle enters Gauss–Bonnet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideKind {
    /// A boundary curve: contributes its geodesic curvature and corners.
    Boundary,
    /// Identified with the opposite side.
    Periodic,
    /// Collapses to a point (coordinate pole); contributes nothing.
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sides {
    pub x1_lo: SideKind,
    pub x1_hi: SideKind,
    pub x2_lo: SideKind,
    pub x2_hi: SideKind,
}

impl Sides {
    pub fn boundary() -> Self {
        Self { x1_lo: SideKind::Boundary, x1_hi: SideKind::Boundary, x2_lo: SideKind::Boundary, x2_hi: SideKind::Boundary }
    }

    /// Boundary in `x1`, periodic in `x2`: an annulus.
    pub fn annulus() -> Self {
        Self { x2_lo: SideKind::Periodic, x2_hi: SideKind::Periodic, ..Self::boundary() }
    }
}

/// A coordinate rectangle with its side kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Patch {
    pub rect: Rect,
    pub sides: Sides,
}

/// A region made of coordinate patches of one chart with disjoint interiors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerDomain {
    pub patches: Vec<Patch>,
}

impl EulerDomain {
    pub fn single(rect: Rect, sides: Sides) -> Self {
        Self { patches: vec![Patch { rect, sides }] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideIntegral {
    pub patch: usize,
    /// `"x1_lo"`, `"x1_hi"`, `"x2_lo"` or `"x2_hi"`.
    pub side: &'static str,
    /// Signed `∫ κ ds` along the positively oriented boundary.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerResult {
    /// `∫∫ F dA`.
    pub bulk: f64,
    pub boundary: Vec<SideIntegral>,
    /// `Σ (π - α_i)`.
    pub corners: f64,
    pub chi: f64,
    /// Richardson estimate of the quadrature error in `chi`.
    pub error: f64,
    /// Convergence order read from panel counts `n`, `2n`, `4n`; `None` when
    /// the differences are at rounding level.
    pub observed_order: Option<f64>,
    /// `chi` at `n`, `2n`, `4n` panels.
    pub sequence: [f64; 3],
    pub resolution: usize,
}

impl EulerResult {
    pub fn nearest_integer(&self) -> i64 {
        self.chi.round() as i64
    }

    pub fn integrality_defect(&self) -> f64 {
        (self.chi - self.chi.round()).abs()
    }
}

fn validate(domain: &EulerDomain) -> Result<()> {
    if domain.patches.is_empty() {
        return Err(Error::OpenBoundary("domain has no patches".into()));
    }
    for (i, p) in domain.patches.iter().enumerate() {
        let s = p.sides;
        let periodic = |a: SideKind, b: SideKind| (a == SideKind::Periodic) != (b == SideKind::Periodic);
        if periodic(s.x1_lo, s.x1_hi) || periodic(s.x2_lo, s.x2_hi) {
            return Err(Error::OpenBoundary(format!("patch {i}: a periodic side needs a periodic opposite side")));
        }
        for b in [p.rect.x1, p.rect.x2] {
            if !(b[0].is_finite() && b[1].is_finite() && b[0] < b[1]) {
                return Err(Error::OpenBoundary(format!("patch {i}: bounds {b:?} do not enclose a region")));
            }
        }
    }
    Ok(())
}

/// `∫∫ F √det h dx¹dx²` by tensor Simpson; nodes on pole sides get weight zero.
fn bulk(metric: &dyn MetricField2, patch: &Patch, n: usize) -> Result<f64> {
    let r = patch.rect;
    let (xa, xb) = (simpson_nodes(r.x1[0], r.x1[1], n), simpson_nodes(r.x2[0], r.x2[1], n));
    let (wa, wb) = (simpson_weights(r.x1[0], r.x1[1], n), simpson_weights(r.x2[0], r.x2[1], n));
    let s = patch.sides;
    let lt = LowerTriangular::new(metric, Signature::Riemannian);
    let rows: Vec<Result<f64>> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for j in 0..=n {
                let pole = (i == 0 && s.x1_lo == SideKind::Pole)
                    || (i == n && s.x1_hi == SideKind::Pole)
                    || (j == 0 && s.x2_lo == SideKind::Pole)
                    || (j == n && s.x2_hi == SideKind::Pole);
                if pole {
                    continue;
                }
                let p = Point2::new(xa[i], xb[j]);
                let g = frame_geometry(&lt, p)?;
                acc += wb[j] * g.curvature.f * g.coframe.det().value().abs();
            }
            Ok(wa[i] * acc)
        })
        .collect();
    rows.into_iter().sum()
}

fn side_integral(metric: &dyn MetricField2, along: Axis, fixed: f64, range: [f64; 2], n: usize) -> Result<f64> {
    let h_index = if along == Axis::X1 { 0 } else { 2 };
    simpson(
        |s| {
            let p = match along {
                Axis::X1 => Point2::new(s, fixed),
                Axis::X2 => Point2::new(fixed, s),
            };
            let hii = metric.components(p)?[h_index].value();
            Ok(geodesic_curvature(metric, along, p)? * hii.max(0.0).sqrt())
        },
        range[0],
        range[1],
        n,
    )
}

fn corner_angle(metric: &dyn MetricField2, p: Point2, flip: bool) -> Result<f64> {
    let h = metric.components(p)?;
    let (h11, h12, h22) = (h[0].value(), h[1].value(), h[2].value());
    let c = if flip { -h12 } else { h12 } / (h11 * h22).sqrt();
    Ok(c.clamp(-1.0, 1.0).acos())
}

struct Parts {
    bulk: f64,
    boundary: Vec<SideIntegral>,
    corners: f64,
}

impl Parts {
    fn chi(&self) -> f64 {
        (self.bulk + self.boundary.iter().map(|s| s.value).sum::<f64>() + self.corners) / (2.0 * PI)
    }
}

fn evaluate(metric: &dyn MetricField2, domain: &EulerDomain, n: usize) -> Result<Parts> {
    let mut parts = Parts { bulk: 0.0, boundary: Vec::new(), corners: 0.0 };
    for (k, patch) in domain.patches.iter().enumerate() {
        parts.bulk += bulk(metric, patch, n)?;
        let r = patch.rect;
        let s = patch.sides;
        // counter-clockwise traversal: x2_lo forwards, x1_hi forwards,
        // x2_hi backwards, x1_lo backwards
        let sides = [
            ("x2_lo", s.x2_lo, Axis::X1, r.x2[0], r.x1, 1.0),
            ("x1_hi", s.x1_hi, Axis::X2, r.x1[1], r.x2, 1.0),
            ("x2_hi", s.x2_hi, Axis::X1, r.x2[1], r.x1, -1.0),
            ("x1_lo", s.x1_lo, Axis::X2, r.x1[0], r.x2, -1.0),
        ];
        for (name, kind, along, fixed, range, sign) in sides {
            if kind == SideKind::Boundary {
                let v = side_integral(metric, along, fixed, range, n)?;
                parts.boundary.push(SideIntegral { patch: k, side: name, value: sign * v });
            }
        }
        let b = |k: SideKind| k == SideKind::Boundary;
        let corners = [
            (b(s.x1_lo) && b(s.x2_lo), Point2::new(r.x1[0], r.x2[0]), false),
            (b(s.x1_hi) && b(s.x2_lo), Point2::new(r.x1[1], r.x2[0]), true),
            (b(s.x1_hi) && b(s.x2_hi), Point2::new(r.x1[1], r.x2[1]), false),
            (b(s.x1_lo) && b(s.x2_hi), Point2::new(r.x1[0], r.x2[1]), true),
        ];
        for (present, p, flip) in corners {
            if present {
                parts.corners += PI - corner_angle(metric, p, flip)?;
            }
        }
    }
    Ok(parts)
}

/// Gauss–Bonnet: `2πχ = ∫∫ F dA + ∮ κ ds + Σ (π - α_i)`.
///
/// The bulk and boundary terms are integrated with composite Simpson at `n`,
/// `2n` and `4n` panels per axis; the reported value is the finest result
/// with one Richardson correction.
pub fn euler_number(metric: &dyn MetricField2, signature: Signature, domain: &EulerDomain, n: usize) -> Result<EulerResult> {
    if signature == Signature::Lorentzian {
        return Err(Error::LorentzianDomain("the Euler number needs a Riemannian metric".into()));
    }
    validate(domain)?;
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidConfig(format!("euler resolution must be even and >= 2, got {n}")));
    }
    for patch in &domain.patches {
        let c = Point2::new(0.5 * (patch.rect.x1[0] + patch.rect.x1[1]), 0.5 * (patch.rect.x2[0] + patch.rect.x2[1]));
        if metric_det(&metric.components(c)?) < 0.0 {
            return Err(Error::LorentzianDomain(format!("metric has Lorentzian signature at {c}")));
        }
    }
    let p1 = evaluate(metric, domain, n)?;
    let p2 = evaluate(metric, domain, 2 * n)?;
    let p4 = evaluate(metric, domain, 4 * n)?;
    let seq = [p1.chi(), p2.chi(), p4.chi()];
    let order = observed_order(p1.bulk, p2.bulk, p4.bulk).or_else(|| observed_order(seq[0], seq[1], seq[2]));
    let correction = (seq[2] - seq[1]) / 15.0;
    Ok(EulerResult {
        bulk: p4.bulk,
        boundary: p4.boundary.clone(),
        corners: p4.corners,
        chi: seq[2] + correction,
        error: correction.abs(),
        observed_order: order,
        sequence: seq,
        resolution: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::FnMetric;
    use crate::jets::Jet3;

    #[test]
    fn flat_square() {
        let m = FnMetric::new(|_, _| Ok([Jet3::constant(1.0), Jet3::constant(0.0), Jet3::constant(1.0)]));
        let d = EulerDomain::single(Rect::new([0.0, 1.0], [0.0, 1.0]), Sides::boundary());
        let e = euler_number(&m, Signature::Riemannian, &d, 8).unwrap();
        assert!((e.chi - 1.0).abs() < 1e-12);
        assert!((e.corners - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn lorentzian_rejected() {
        let m = FnMetric::new(|_, _| Ok([Jet3::constant(1.0), Jet3::constant(0.0), Jet3::constant(-1.0)]));
        let d = EulerDomain::single(Rect::new([0.0, 1.0], [0.0, 1.0]), Sides::boundary());
        assert!(matches!(euler_number(&m, Signature::Lorentzian, &d, 8), Err(Error::LorentzianDomain(_))));
        assert!(matches!(euler_number(&m, Signature::Riemannian, &d, 8), Err(Error::LorentzianDomain(_))));
    }

    #[test]
    fn unpaired_periodic_side() {
        let m = FnMetric::new(|_, _| Ok([Jet3::constant(1.0), Jet3::constant(0.0), Jet3::constant(1.0)]));
        let sides = Sides { x2_lo: SideKind::Periodic, ..Sides::boundary() };
        let d = EulerDomain::single(Rect::new([0.0, 1.0], [0.0, 1.0]), sides);
        assert!(matches!(euler_number(&m, Signature::Riemannian, &d, 8), Err(Error::OpenBoundary(_))));
    }
}
