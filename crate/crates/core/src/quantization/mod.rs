//! Checks for topological quantization conditions: where the connection and
//! curvature are regular, the Euler characteristic of a region, whether
//! overlapping frames are related by a single-valued gauge function, and
//! whether any invariant forces a parameter onto a discrete set.

mod euler;
mod regularity;
mod spectrum;
mod transition;

pub use euler::{euler_number, EulerDomain, EulerResult, Patch, SideIntegral, SideKind, Sides};
pub use regularity::{
    fit_blowup, regularity_scan, BlowupFit, Locus, PointSample, RegularityReport, RegularityThresholds, SingularLocus,
};
pub use spectrum::{
    spectrum_search, synthetic_control, synthetic_control_loop, Constraint, ConstraintKind, ParamPoint, ParamRecord,
    SpectrumConfig, SpectrumReport,
};
pub use transition::{transition_check, GaugeSample, LoopWinding, TransitionReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{Axis, Point2, Rect};

/// A band `lo <= x_axis <= hi` removed from a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
}

/// Tensor-product sample grid over a rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
    /// Number of nodes per axis.
    pub n: [usize; 2],
    #[serde(default)]
    pub exclusions: Vec<Exclusion>,
    /// A periodic axis omits its upper end.
    #[serde(default)]
    pub periodic: [bool; 2],
}

impl GridSpec {
    pub fn new(x1: [f64; 2], x2: [f64; 2], n: [usize; 2]) -> Self {
        Self { x1, x2, n, exclusions: Vec::new(), periodic: [false; 2] }
    }

    pub fn periodic(mut self, axis: Axis) -> Self {
        self.periodic[axis.index()] = true;
        self
    }

    pub fn exclude(mut self, e: Exclusion) -> Self {
        self.exclusions.push(e);
        self
    }

    pub fn rect(&self) -> Rect {
        Rect::new(self.x1, self.x2)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n[0] < 8 || self.n[1] < 8 {
            return Err(Error::InvalidConfig(format!("grid resolution must be >= 8 per axis, got {:?}", self.n)));
        }
        for b in [self.x1, self.x2] {
            if !(b[0].is_finite() && b[1].is_finite() && b[0] < b[1]) {
                return Err(Error::InvalidConfig(format!("grid bounds {b:?} must be finite and increasing")));
            }
        }
        for e in &self.exclusions {
            let b = if e.axis == Axis::X1 { self.x1 } else { self.x2 };
            if !(e.lo <= e.hi && e.lo >= b[0] && e.hi <= b[1]) {
                return Err(Error::InvalidConfig(format!("exclusion {e:?} lies outside the grid bounds {b:?}")));
            }
        }
        Ok(())
    }

    /// Node coordinates along one axis.
    pub fn axis_nodes(&self, axis: Axis) -> Vec<f64> {
        let i = axis.index();
        let [lo, hi] = if i == 0 { self.x1 } else { self.x2 };
        let n = self.n[i];
        let steps = if self.periodic[i] { n } else { n - 1 };
        (0..n).map(|k| lo + (hi - lo) * k as f64 / steps as f64).collect()
    }

    fn excluded(&self, p: Point2) -> bool {
        self.exclusions.iter().any(|e| {
            let c = p.coord(e.axis);
            c >= e.lo && c <= e.hi
        })
    }

    /// Grid points in row-major order (`x1` outer), exclusions removed.
    pub fn points(&self) -> Vec<Point2> {
        let a = self.axis_nodes(Axis::X1);
        let b = self.axis_nodes(Axis::X2);
        a.iter()
            .flat_map(|&x| b.iter().map(move |&y| Point2::new(x, y)))
            .filter(|p| !self.excluded(*p))
            .collect()
    }
}
