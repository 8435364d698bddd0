use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{euler_number, EulerDomain};
use crate::error::Result;
use crate::geometry::{
    loop_holonomy, CartanConnection, ClosedCurve, ConnectionField, FnConnection, LowerTriangular, MetricField2,
    Signature,
};
use crate::jets::{Axis, Jet3};
use crate::solutions::{Family, FamilyMetric, FamilyFrame};
use crate::tolerances::Tolerances;

/// What the spectrum search needs at one parameter value.
#[derive(Clone)]
pub struct ParamPoint {
    pub connection: Arc<dyn ConnectionField>,
    /// Riemannian metric for the Euler number, when one applies.
    pub metric: Option<Arc<dyn MetricField2>>,
    pub signature: Signature,
}

impl ParamPoint {
    /// Connection of the family's closed-form frame (lower-triangular frame
    /// when it has none) and its analysed metric.
    pub fn from_family(family: Arc<dyn Family>) -> Self {
        let signature = family.signature();
        let connection: Arc<dyn ConnectionField> = if family.has_family_frame() {
            Arc::new(CartanConnection(FamilyFrame(family.clone())))
        } else {
            Arc::new(CartanConnection(LowerTriangular::new(FamilyMetric(family.clone()), signature)))
        };
        let metric: Option<Arc<dyn MetricField2>> =
            (signature == Signature::Riemannian).then(|| Arc::new(FamilyMetric(family)) as Arc<dyn MetricField2>);
        Self { connection, metric, signature }
    }
}

/// Positive control: the flat connection `ω = c dx²` on a cylinder periodic
/// in `x²` with period 2π. Its holonomy around the cylinder is `2πc`, so a
/// single-valued gauge requires `c ∈ ℤ`.
pub fn synthetic_control(c: f64) -> Result<ParamPoint> {
    Ok(ParamPoint {
        connection: Arc::new(FnConnection::new(move |_, _| Ok([Jet3::constant(0.0), Jet3::constant(c)]))),
        metric: None,
        signature: Signature::Riemannian,
    })
}

/// The loop used with [`synthetic_control`].
pub fn synthetic_control_loop() -> ClosedCurve {
    ClosedCurve::Periodic { axis: Axis::X2, fixed: 1.0, start: 0.0, period: 2.0 * PI }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub loops: Vec<ClosedCurve>,
    pub euler_domain: Option<EulerDomain>,
    pub euler_resolution: usize,
    pub holonomy_steps: usize,
    /// Require the gauge to be single valued around each loop, which turns
    /// `hol/2π ∈ ℤ` into a condition on flat connections.
    pub single_valued_gauge: bool,
    pub bisection_steps: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            loops: Vec::new(),
            euler_domain: None,
            euler_resolution: 8,
            holonomy_steps: 64,
            single_valued_gauge: false,
            bisection_steps: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamRecord {
    pub param: f64,
    pub chi: Option<f64>,
    pub holonomies: Vec<f64>,
    /// Holonomies reduced to `[0, 2π)` (SO(2) only).
    pub holonomy_mod: Vec<Option<f64>>,
    /// Largest `|dω|` sampled along each loop.
    pub curvature_on_loop: Vec<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `hol/2π ∈ ℤ` on a flat connection; the allowed parameters are listed.
    HolonomyIntegrality { loop_index: usize, allowed: Vec<f64> },
    /// The rounded Euler number jumps at `location`.
    EulerJump { location: f64, from: i64, to: i64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint {
    #[serde(flatten)]
    pub kind: ConstraintKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub params: Vec<ParamRecord>,
    pub constraints: Vec<Constraint>,
    /// How constraints are detected, with the thresholds used.
    pub detection: String,
}

fn loop_curvature(conn: &dyn ConnectionField, curve: &ClosedCurve) -> Result<f64> {
    let mut m = 0f64;
    for p in curve.samples(32)? {
        let w = conn.connection(p)?;
        let dw = w[1].partial(Axis::X1).value() - w[0].partial(Axis::X2).value();
        m = m.max(dw.abs());
    }
    Ok(m)
}

fn holonomy(point: &ParamPoint, curve: &ClosedCurve, steps: usize) -> Result<f64> {
    Ok(loop_holonomy(point.connection.as_ref(), curve, steps)?.value)
}

fn chi(point: &ParamPoint, cfg: &SpectrumConfig) -> Result<Option<f64>> {
    match (&point.metric, &cfg.euler_domain) {
        (Some(m), Some(d)) => Ok(Some(euler_number(m.as_ref(), point.signature, d, cfg.euler_resolution)?.chi)),
        _ => Ok(None),
    }
}

fn record(param: f64, point: Result<ParamPoint>, cfg: &SpectrumConfig) -> ParamRecord {
    let run = || -> Result<ParamRecord> {
        let point = point?;
        let mut holonomies = Vec::new();
        let mut curvature_on_loop = Vec::new();
        for c in &cfg.loops {
            holonomies.push(holonomy(&point, c, cfg.holonomy_steps)?);
            curvature_on_loop.push(loop_curvature(point.connection.as_ref(), c)?);
        }
        let holonomy_mod = holonomies
            .iter()
            .map(|h| (point.signature == Signature::Riemannian).then(|| h.rem_euclid(2.0 * PI)))
            .collect();
        Ok(ParamRecord { param, chi: chi(&point, cfg)?, holonomies, holonomy_mod, curvature_on_loop, error: None })
    };
    run().unwrap_or_else(|e| ParamRecord {
        param,
        chi: None,
        holonomies: Vec::new(),
        holonomy_mod: Vec::new(),
        curvature_on_loop: Vec::new(),
        error: Some(e.to_string()),
    })
}

/// Root of `g` in `[a, b]` by bisection, given `g(a)` and `g(b)` of opposite sign.
fn bisect(mut a: f64, mut b: f64, mut ga: f64, steps: usize, g: &dyn Fn(f64) -> Option<f64>) -> f64 {
    for _ in 0..steps {
        let m = 0.5 * (a + b);
        match g(m) {
            Some(gm) if gm == 0.0 => return m,
            Some(gm) if (gm > 0.0) == (ga > 0.0) => {
                a = m;
                ga = gm;
            }
            Some(_) => b = m,
            None => break,
        }
    }
    0.5 * (a + b)
}

fn push_unique(v: &mut Vec<f64>, x: f64, tol: f64) {
    if !v.iter().any(|y| (y - x).abs() <= tol) {
        v.push(x);
    }
}

/// Sweeps a parameter and looks for invariants that single out a discrete
/// set of values.
///
/// A holonomy constraint is reported for a loop only when the connection is
/// flat along it at every parameter (`|dω| <= flatness`), a single-valued
/// gauge was requested and `hol/2π` varies by more than `winding_variation`
/// across the sweep; the allowed values, where `hol/2π` is an integer, are
/// located by bisection. A jump of the rounded Euler number between adjacent
/// parameters is reported with its location, also found by bisection.
/// Parameter values that fail to build are recorded and skipped.
pub fn spectrum_search(
    build: &(dyn Fn(f64) -> Result<ParamPoint> + Sync),
    params: &[f64],
    cfg: &SpectrumConfig,
    tol: &Tolerances,
) -> SpectrumReport {
    let records: Vec<ParamRecord> = params.par_iter().map(|&c| record(c, build(c), cfg)).collect();
    let valid: Vec<&ParamRecord> = records.iter().filter(|r| r.error.is_none()).collect();
    let mut constraints = Vec::new();

    if cfg.single_valued_gauge {
        for (k, curve) in cfg.loops.iter().enumerate() {
            let flat = !valid.is_empty() && valid.iter().all(|r| r.curvature_on_loop[k] <= tol.flatness);
            let riemannian = valid.iter().all(|r| r.holonomy_mod[k].is_some());
            let w: Vec<f64> = valid.iter().map(|r| r.holonomies[k] / (2.0 * PI)).collect();
            let spread = w.iter().copied().fold(f64::NEG_INFINITY, f64::max) - w.iter().copied().fold(f64::INFINITY, f64::min);
            if !(flat && riemannian && spread > tol.winding_variation) {
                continue;
            }
            let g = |c: f64| -> Option<f64> {
                let p = build(c).ok()?;
                holonomy(&p, curve, cfg.holonomy_steps).ok().map(|h| h / (2.0 * PI))
            };
            let mut allowed = Vec::new();
            let snap = tol.holonomy.max(tol.winding_variation);
            for (i, r) in valid.iter().enumerate() {
                if (w[i] - w[i].round()).abs() <= snap {
                    push_unique(&mut allowed, r.param, 1e-12);
                }
                if i + 1 < valid.len() {
                    let (a, b) = (w[i], w[i + 1]);
                    let (lo, hi) = (a.min(b), a.max(b));
                    let mut n = lo.floor() + 1.0;
                    while n < hi {
                        if (n - a).abs() > snap && (n - b).abs() > snap {
                            let root = bisect(r.param, valid[i + 1].param, a - n, cfg.bisection_steps, &|c| g(c).map(|v| v - n));
                            push_unique(&mut allowed, root, 1e-9);
                        }
                        n += 1.0;
                    }
                }
            }
            allowed.sort_by(f64::total_cmp);
            constraints.push(Constraint {
                detail: format!(
                    "flat connection with holonomy/2pi varying over [{:.6}, {:.6}] along loop {k}; single-valued gauge requires it to be an integer",
                    w.iter().copied().fold(f64::INFINITY, f64::min),
                    w.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                ),
                kind: ConstraintKind::HolonomyIntegrality { loop_index: k, allowed },
            });
        }
    }

    let with_chi: Vec<(f64, f64)> = valid.iter().filter_map(|r| r.chi.map(|x| (r.param, x))).collect();
    for pair in with_chi.windows(2) {
        let ((a, xa), (b, xb)) = (pair[0], pair[1]);
        let (ka, kb) = (xa.round() as i64, xb.round() as i64);
        if ka == kb {
            continue;
        }
        let g = |c: f64| -> Option<f64> {
            let p = build(c).ok()?;
            let x = chi(&p, cfg).ok()??;
            Some(if x.round() as i64 == ka { -1.0 } else { 1.0 })
        };
        let location = bisect(a, b, -1.0, cfg.bisection_steps, &g);
        constraints.push(Constraint {
            kind: ConstraintKind::EulerJump { location, from: ka, to: kb },
            detail: format!("Euler number changes from {ka} to {kb} between {a} and {b}"),
        });
    }

    SpectrumReport {
        params: records,
        constraints,
        detection: format!(
            "holonomy integrality: flat along the loop (|dω| <= {:e}), single-valued gauge requested ({}), holonomy/2pi spread > {:e}; Euler jump: rounded chi differs between neighbours",
            tol.flatness, cfg.single_valued_gauge, tol.winding_variation
        ),
    }
}
