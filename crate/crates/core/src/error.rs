use thiserror::Error;

use crate::jets::{JetError, Point2};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error at {point}: {source}")]
    Domain { point: Point2, source: JetError },

    #[error("degenerate metric at {point}: |det h| = {det:e} (scale {scale:e})")]
    DegenerateMetric { point: Point2, det: f64, scale: f64 },

    #[error("signature mismatch at {point}: {detail}")]
    SignatureMismatch { point: Point2, detail: String },

    #[error("singular Cartan system at {point}: det(theta) = {det:e}")]
    DegenerateCoframe { point: Point2, det: f64 },

    #[error("frame degeneracy locus hit at {point}: {what} = {value:e}")]
    FrameDegeneracy {
        point: Point2,
        what: &'static str,
        value: f64,
    },

    #[error("finite-difference stencil of width {h} leaves the field domain at {point}")]
    StencilOutsideDomain { point: Point2, h: f64 },

    #[error("curve leaves the domain at parameter s = {s} ({point})")]
    CurveOutsideDomain { s: f64, point: Point2 },

    #[error("null or non-spacelike tangent at {point}")]
    NullTangent { point: Point2 },

    #[error("integrability violated at {point}: curl of the quadrature gradient = {defect:e}")]
    IntegrabilityViolated { point: Point2, defect: f64 },

    #[error("target metric is singular at {point}")]
    SingularTarget { point: Point2 },

    #[error("Lorentzian signature is not allowed here: {0}")]
    LorentzianDomain(String),

    #[error("boundary is not closed: {0}")]
    OpenBoundary(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("expression parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    /// Location attached to the error, when there is one.
    pub fn point(&self) -> Option<Point2> {
        match self {
            Error::Domain { point, .. }
            | Error::DegenerateMetric { point, .. }
            | Error::SignatureMismatch { point, .. }
            | Error::DegenerateCoframe { point, .. }
            | Error::FrameDegeneracy { point, .. }
            | Error::StencilOutsideDomain { point, .. }
            | Error::CurveOutsideDomain { point, .. }
            | Error::NullTangent { point }
            | Error::IntegrabilityViolated { point, .. }
            | Error::SingularTarget { point } => Some(*point),
            _ => None,
        }
    }
}
