//! Orthonormal-frame calculus on a two-dimensional chart.
//!
//! Conventions used throughout:
//!
//! - A coframe is stored as `theta[a][mu]`, so `Θᵃ = theta[a][0] dx¹ + theta[a][1] dx²`.
//! - The frame metric is `η = diag(1, ε)` with `ε = +1` (Riemannian) or `-1`
//!   (Lorentzian, with `Θ²` the timelike-or-spacelike leg of opposite sign).
//! - `ω = ω¹₂` is the only independent connection component; `ω²₁ = -ε ω¹₂`.
//! - Curvature is `dω = F Θ¹∧Θ²` and the Ricci scalar is `R = 2F`. With these
//!   conventions the round unit sphere has `F = 1`.
//! - A gauge rotation by `λ` sends `ω` to `ω - dλ`.

mod coframe;
mod connection;
mod curve;

pub use coframe::{build_coframe, check_metric, Coframe, CoframeField, FrameKind, LowerTriangular};
pub use connection::{
    connection_from_cartan, curvature, frame_geometry, gauge_transform, rotate_coframe, CartanConnection,
    ConnectionField, ConnectionOneForm, CurvatureData, FnConnection, FrameGeometry, GaugedConnection,
};
pub use curve::{geodesic_curvature, loop_holonomy, ClosedCurve, Piece};

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{Jet3, JetError, Point2, Rect, ScalarField2};

/// Signature of a two-dimensional metric and of its orthonormal frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Signature {
    /// η = diag(1, 1), structure group SO(2).
    Riemannian,
    /// η = diag(1, -1), structure group SO(1,1).
    Lorentzian,
}

impl Signature {
    /// The second diagonal entry of η.
    pub fn eta2(self) -> f64 {
        match self {
            Signature::Riemannian => 1.0,
            Signature::Lorentzian => -1.0,
        }
    }

    /// The factor `s` in `ω²₁ = s ω¹₂`.
    pub fn antisymmetry(self) -> f64 {
        -self.eta2()
    }

    pub fn group(self) -> &'static str {
        match self {
            Signature::Riemannian => "SO(2)",
            Signature::Lorentzian => "SO(1,1)",
        }
    }
}

/// A symmetric metric `h11 dx¹dx¹ + 2 h12 dx¹dx² + h22 dx²dx²` on the chart.
pub trait MetricField2: Send + Sync {
    /// `[h11, h12, h22]` as jets at `p`.
    fn components(&self, p: Point2) -> Result<[Jet3; 3]>;

    fn domain(&self) -> Option<Rect> {
        None
    }
}

impl<T: MetricField2 + ?Sized> MetricField2 for &T {
    fn components(&self, p: Point2) -> Result<[Jet3; 3]> {
        (**self).components(p)
    }
    fn domain(&self) -> Option<Rect> {
        (**self).domain()
    }
}

impl<T: MetricField2 + ?Sized> MetricField2 for Arc<T> {
    fn components(&self, p: Point2) -> Result<[Jet3; 3]> {
        (**self).components(p)
    }
    fn domain(&self) -> Option<Rect> {
        (**self).domain()
    }
}

impl<T: MetricField2 + ?Sized> MetricField2 for Box<T> {
    fn components(&self, p: Point2) -> Result<[Jet3; 3]> {
        (**self).components(p)
    }
    fn domain(&self) -> Option<Rect> {
        (**self).domain()
    }
}

/// Metric assembled from three scalar component fields.
pub struct ComponentMetric {
    pub h11: Arc<dyn ScalarField2>,
    pub h12: Arc<dyn ScalarField2>,
    pub h22: Arc<dyn ScalarField2>,
    pub domain: Option<Rect>,
}

impl MetricField2 for ComponentMetric {
    fn components(&self, p: Point2) -> Result<[Jet3; 3]> {
        Ok([self.h11.eval(p)?, self.h12.eval(p)?, self.h22.eval(p)?])
    }
    fn domain(&self) -> Option<Rect> {
        self.domain
    }
}

/// Metric given by a jet closure in the seeded coordinates.
pub struct FnMetric<F> {
    f: F,
    domain: Option<Rect>,
}

impl<F> FnMetric<F>
where
    F: Fn(Jet3, Jet3) -> std::result::Result<[Jet3; 3], JetError> + Send + Sync,
{
    pub fn new(f: F) -> Self {
        Self { f, domain: None }
    }

    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = Some(domain);
        self
    }
}

impl<F> MetricField2 for FnMetric<F>
where
    F: Fn(Jet3, Jet3) -> std::result::Result<[Jet3; 3], JetError> + Send + Sync,
{
    fn components(&self, p: Point2) -> Result<[Jet3; 3]> {
        let (x1, x2) = Jet3::coordinates(p);
        (self.f)(x1, x2).map_err(|source| Error::Domain { point: p, source })
    }
    fn domain(&self) -> Option<Rect> {
        self.domain
    }
}

/// Value of `det h`.
pub fn metric_det(h: &[Jet3; 3]) -> f64 {
    h[0].value() * h[2].value() - h[1].value() * h[1].value()
}
