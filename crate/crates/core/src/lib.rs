//! Generalized harmonic maps on a two-dimensional base, the orthonormal-frame
//! geometry of their induced metrics, and numerical checks for topological
//! quantization conditions.
//!
//! The crate is organised bottom-up:
//!
//! - [`jets`]: third-order forward-mode differentiation on a 2-D chart.
//! - [`geometry`]: coframes, Cartan connection and curvature, gauge
//!   transformations, holonomy and geodesic curvature.
//! - [`ghm`]: induced metric, Lagrangian, field equations, energy–momentum
//!   tensor and its generalized conservation law.
//! - [`solutions`]: the stationary axisymmetric, Schwarzschild, Gowdy and
//!   Einstein–Rosen families together with their closed-form oracles.
//! - [`quantization`]: regularity scans, Gauss–Bonnet Euler numbers, frame
//!   transition checks and parameter-spectrum searches.

pub mod error;
pub mod expr;
pub mod geometry;
pub mod ghm;
pub mod jets;
pub mod quad;
pub mod quantization;
pub mod solutions;
pub mod tolerances;

pub use error::{Error, Result};
pub use jets::{Axis, FnField, Jet3, JetError, Point2, Rect, ScalarField2};
