//! Numerical thresholds shared by the library, the test suites and the CLI.

use serde::{Deserialize, Serialize};

/// `|det h| < DEGENERATE_DET * max|h_ij|²` marks a metric as degenerate.
pub const DEGENERATE_DET: f64 = 1e-12;

/// Relative defect allowed when a coframe reproduces its metric.
pub const FRAME_REPRODUCTION: f64 = 1e-10;

/// Default absolute tolerance for holonomy quadrature.
pub const HOLONOMY: f64 = 1e-8;

/// Distance from an integer below which a χ estimate counts as integral.
pub const EULER_INTEGRALITY: f64 = 1e-6;

/// Richardson target for potential reconstruction along a path.
pub const PATH_QUADRATURE: f64 = 1e-9;

/// Bound on the curl of a quadrature gradient for it to count as integrable.
pub const INTEGRABILITY: f64 = 1e-8;

/// Minimum number of samples for a blowup-exponent fit.
pub const MIN_FIT_SAMPLES: usize = 8;

/// Knobs exposed to configuration files. Every field has a default equal to
/// the library constant of the same meaning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Field-equation residuals (absolute).
    pub residual: f64,
    /// Conservation-law residuals (absolute).
    pub conservation: f64,
    /// Pointwise identities such as T = ∂κ or L = L_reduced (relative).
    pub identity: f64,
    /// Closed-form oracle against pipeline (relative).
    pub oracle: f64,
    /// A connection with all frame components below this is "identically zero".
    pub zero_connection: f64,
    /// Frame reproduction of the metric (relative).
    pub frame: f64,
    /// Holonomy quadrature (absolute).
    pub holonomy: f64,
    /// Distance of χ from an integer.
    pub euler: f64,
    /// Potential reconstruction along a path (absolute).
    pub path: f64,
    /// Curvature below which a connection counts as flat near a loop.
    pub flatness: f64,
    /// Spread of holonomy windings across a sweep that counts as variation.
    pub winding_variation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-10,
            conservation: 1e-8,
            identity: 1e-8,
            oracle: 1e-8,
            zero_connection: 1e-10,
            frame: FRAME_REPRODUCTION,
            holonomy: HOLONOMY,
            euler: EULER_INTEGRALITY,
            path: 1e-6,
            flatness: 1e-8,
            winding_variation: 1e-6,
        }
    }
}

impl Tolerances {
    /// Field names accepted by [`Tolerances::set`].
    pub const KEYS: [&'static str; 11] = [
        "residual",
        "conservation",
        "identity",
        "oracle",
        "zero_connection",
        "frame",
        "holonomy",
        "euler",
        "path",
        "flatness",
        "winding_variation",
    ];

    /// Sets a knob by name. Returns `false` for an unknown name.
    pub fn set(&mut self, key: &str, value: f64) -> bool {
        let slot = match key {
            "residual" => &mut self.residual,
            "conservation" => &mut self.conservation,
            "identity" => &mut self.identity,
            "oracle" => &mut self.oracle,
            "zero_connection" => &mut self.zero_connection,
            "frame" => &mut self.frame,
            "holonomy" => &mut self.holonomy,
            "euler" => &mut self.euler,
            "path" => &mut self.path,
            "flatness" => &mut self.flatness,
            "winding_variation" => &mut self.winding_variation,
            _ => return false,
        };
        *slot = value;
        true
    }
}

/// Relative error `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Relative error of two vectors measured against the larger Euclidean norm.
pub fn rel_err_vec(a: &[f64], b: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let scale = norm(a).max(norm(b));
    if scale == 0.0 {
        0.0
    } else {
        norm(&diff) / scale
    }
}
