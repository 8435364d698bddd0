use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GridSpec;
use crate::error::Result;
use crate::geometry::{frame_geometry, CoframeField};
use crate::jets::{Axis, Point2};
use crate::tolerances::MIN_FIT_SAMPLES;

/// A coordinate line `x_axis = value` tested for curvature blowup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Locus {
    pub axis: Axis,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegularityThresholds {
    /// All `|ω_a|` and `|F|` below this: identically zero.
    pub zero_connection: f64,
    /// A fitted exponent at or below `-blowup_exponent` is a blowup.
    pub blowup_exponent: f64,
    /// Largest RMS residual of the log-log fit for a blowup to be reported.
    pub fit_residual: f64,
    /// Candidate loci. Empty means the four grid edges.
    pub loci: Vec<Locus>,
}

impl Default for RegularityThresholds {
    fn default() -> Self {
        Self { zero_connection: 1e-10, blowup_exponent: 0.5, fit_residual: 0.1, loci: Vec::new() }
    }
}

/// Frame geometry at one grid point, or the reason it is missing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    pub p: Point2,
    pub omega: Option<[f64; 2]>,
    #[serde(rename = "F")]
    pub f: Option<f64>,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub error: Option<String>,
}

impl PointSample {
    pub fn frame_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Least-squares fit `log y = exponent · log d + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupFit {
    pub exponent: f64,
    pub intercept: f64,
    /// RMS residual in `log y`.
    pub residual: f64,
    pub samples: usize,
    pub d_min: f64,
    pub d_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularLocus {
    pub locus: Locus,
    pub fit: Option<BlowupFit>,
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub samples: Vec<PointSample>,
    pub max_omega: f64,
    pub max_f: f64,
    pub max_r: f64,
    pub failed: usize,
    pub identically_zero: bool,
    pub loci: Vec<SingularLocus>,
    pub verdict: String,
}

/// Fits the closest decade of `(distance, value)` pairs, widening to
/// [`MIN_FIT_SAMPLES`] points when the decade holds fewer.
pub fn fit_blowup(data: &[(f64, f64)]) -> Option<BlowupFit> {
    let mut pts: Vec<(f64, f64)> =
        data.iter().copied().filter(|(d, y)| *d > 0.0 && d.is_finite() && *y > 0.0 && y.is_finite()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.len() < MIN_FIT_SAMPLES {
        return None;
    }
    let d0 = pts[0].0;
    let in_decade = pts.iter().take_while(|(d, _)| *d <= 10.0 * d0).count();
    pts.truncate(in_decade.max(MIN_FIT_SAMPLES));
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|(d, _)| d.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, y)| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - exponent * x - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Some(BlowupFit {
        exponent,
        intercept,
        residual,
        samples: pts.len(),
        d_min: d0,
        d_max: pts.last().map(|p| p.0).unwrap_or(d0),
    })
}

fn sample(frames: &dyn CoframeField, p: Point2) -> PointSample {
    match frame_geometry(frames, p) {
        Ok(g) => PointSample {
            p,
            omega: Some(g.connection.frame),
            f: Some(g.curvature.f),
            r: Some(g.curvature.r),
            error: None,
        },
        Err(e) => PointSample { p, omega: None, f: None, r: None, error: Some(e.to_string()) },
    }
}

fn profile(grid: &GridSpec, samples: &[PointSample], locus: Locus) -> Vec<(f64, f64)> {
    grid.axis_nodes(locus.axis)
        .into_iter()
        .filter_map(|c| {
            let m = samples
                .iter()
                .filter(|s| s.p.coord(locus.axis) == c)
                .filter_map(|s| s.r.map(f64::abs))
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))?;
            Some(((c - locus.value).abs(), m))
        })
        .collect()
}

/// Evaluates connection and curvature on every grid node, then fits the
/// growth of `|R|` towards each candidate locus.
///
/// Points where the frame cannot be built are recorded with their error.
/// Nodes are evaluated in parallel; results are kept in grid order, so the
/// report does not depend on scheduling.
pub fn regularity_scan(
    frames: &dyn CoframeField,
    grid: &GridSpec,
    th: &RegularityThresholds,
) -> Result<RegularityReport> {
    grid.validate()?;
    let samples: Vec<PointSample> = grid.points().par_iter().map(|&p| sample(frames, p)).collect();
    let ok: Vec<&PointSample> = samples.iter().filter(|s| s.frame_ok()).collect();
    let max_omega = ok.iter().filter_map(|s| s.omega).flatten().fold(0f64, |a, b| a.max(b.abs()));
    let max_f = ok.iter().filter_map(|s| s.f).fold(0f64, |a, b| a.max(b.abs()));
    let max_r = ok.iter().filter_map(|s| s.r).fold(0f64, |a, b| a.max(b.abs()));
    let failed = samples.len() - ok.len();
    let identically_zero = !ok.is_empty() && max_omega < th.zero_connection && max_f < th.zero_connection;

    let loci: Vec<Locus> = if th.loci.is_empty() {
        vec![
            Locus { axis: Axis::X1, value: grid.x1[0] },
            Locus { axis: Axis::X1, value: grid.x1[1] },
            Locus { axis: Axis::X2, value: grid.x2[0] },
            Locus { axis: Axis::X2, value: grid.x2[1] },
        ]
    } else {
        th.loci.clone()
    };
    let loci: Vec<SingularLocus> = loci
        .into_iter()
        .map(|locus| {
            let fit = if identically_zero { None } else { fit_blowup(&profile(grid, &samples, locus)) };
            let singular =
                fit.is_some_and(|f| f.exponent <= -th.blowup_exponent && f.residual <= th.fit_residual);
            SingularLocus { locus, fit, singular }
        })
        .collect();

    let mut verdict = if ok.is_empty() {
        "no grid point admits a frame".to_string()
    } else if identically_zero {
        "connection regular, identically zero".to_string()
    } else {
        let sing: Vec<String> = loci
            .iter()
            .filter(|l| l.singular)
            .map(|l| {
                format!(
                    "x{} = {} (exponent {:.3})",
                    l.locus.axis.index() + 1,
                    l.locus.value,
                    l.fit.map_or(f64::NAN, |f| f.exponent)
                )
            })
            .collect();
        if sing.is_empty() {
            "connection and curvature regular on the grid".to_string()
        } else {
            format!("curvature blows up towards {}", sing.join(", "))
        }
    };
    if failed > 0 && !ok.is_empty() {
        verdict.push_str(&format!("; {failed} grid points without a valid frame"));
    }
    Ok(RegularityReport { samples, max_omega, max_f, max_r, failed, identically_zero, loci, verdict })
}
