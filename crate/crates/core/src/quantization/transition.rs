use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::GridSpec;
use crate::error::{Error, Result};
use crate::geometry::{connection_from_cartan, ClosedCurve, Coframe, CoframeField, Signature};
use crate::jets::{Jet3, Point2};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugeSample {
    pub p: Point2,
    /// Rotation angle (or rapidity) taking frame A to frame B.
    pub lambda: Option<f64>,
    /// `max_μ |ω_B - ω_A + ∂_μ λ|`.
    pub gauge_defect: Option<f64>,
    /// Distance of `Θ_B Θ_A⁻¹` from the structure group.
    pub group_defect: Option<f64>,
    pub orientation_mismatch: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopWinding {
    pub curve: ClosedCurve,
    /// Unwrapped change of `λ` once around the loop.
    pub total_change: f64,
    /// `total_change / 2π` rounded; always 0 for SO(1,1).
    pub winding: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionReport {
    pub signature: Signature,
    pub samples: Vec<GaugeSample>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub max_gauge_defect: f64,
    pub max_group_defect: f64,
    pub orientation_mismatch: bool,
    pub windings: Vec<LoopWinding>,
    pub gauge_ok: bool,
    pub single_valued: bool,
    pub verdict: String,
}

/// `M = Θ_B Θ_A⁻¹` as jets.
fn transition_matrix(a: &Coframe, b: &Coframe, p: Point2) -> Result<[[Jet3; 2]; 2]> {
    let ta = &a.theta;
    let det = a.det();
    let inv_det = det.recip().map_err(|_| Error::DegenerateCoframe { point: p, det: det.value() })?;
    let inv = [[ta[1][1] * inv_det, -ta[0][1] * inv_det], [-ta[1][0] * inv_det, ta[0][0] * inv_det]];
    let tb = &b.theta;
    let mut m = [[Jet3::constant(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = tb[i][0] * inv[0][j] + tb[i][1] * inv[1][j];
        }
    }
    Ok(m)
}

struct Local {
    lambda: Jet3,
    group_defect: f64,
    mismatch: bool,
}

fn local_gauge(m: &[[Jet3; 2]; 2], sig: Signature, p: Point2) -> Result<Local> {
    let v = |i: usize, j: usize| m[i][j].value();
    let scale = v(0, 0).abs().max(v(0, 1).abs()).max(1.0);
    let det = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
    let dom = |source| Error::Domain { point: p, source };
    match sig {
        Signature::Riemannian => {
            let mismatch = det < 0.0;
            let group_defect = if mismatch {
                ((v(0, 0) + v(1, 1)).abs()).max((v(0, 1) - v(1, 0)).abs()) / scale
            } else {
                ((v(0, 0) - v(1, 1)).abs()).max((v(0, 1) + v(1, 0)).abs()) / scale
            };
            Ok(Local { lambda: m[0][1].atan2(&m[0][0]).map_err(dom)?, group_defect, mismatch })
        }
        Signature::Lorentzian => {
            let mismatch = det < 0.0 || v(0, 0) < 0.0;
            let group_defect = ((v(0, 0) - v(1, 1)).abs()).max((v(0, 1) - v(1, 0)).abs()) / scale;
            let ratio = ((m[0][0] + m[0][1]).checked_div(&(m[0][0] - m[0][1])).map_err(dom)?).ln().map_err(dom)?;
            Ok(Local { lambda: ratio * 0.5, group_defect, mismatch })
        }
    }
}

fn sample(a: &dyn CoframeField, b: &dyn CoframeField, p: Point2) -> Result<(Local, f64)> {
    let sig = a.signature();
    let ca = a.coframe(p)?;
    let cb = b.coframe(p)?;
    let m = transition_matrix(&ca, &cb, p)?;
    let local = local_gauge(&m, sig, p)?;
    let wa = connection_from_cartan(&ca, sig, p)?;
    let wb = connection_from_cartan(&cb, sig, p)?;
    let dl = local.lambda.d1();
    let scale = wa.coord.iter().chain(&wb.coord).fold(1f64, |s, w| s.max(w.value().abs()));
    let defect = (0..2)
        .map(|mu| (wb.coord[mu].value() - wa.coord[mu].value() + dl[mu]).abs())
        .fold(0f64, f64::max)
        / scale;
    Ok((local, defect))
}

fn wrap(d: f64) -> f64 {
    (d + PI).rem_euclid(2.0 * PI) - PI
}

fn loop_winding(
    a: &dyn CoframeField,
    b: &dyn CoframeField,
    curve: &ClosedCurve,
    n: usize,
) -> Result<LoopWinding> {
    let sig = a.signature();
    let lambdas: Vec<f64> = curve
        .samples(n)?
        .into_iter()
        .map(|p| {
            let m = transition_matrix(&a.coframe(p)?, &b.coframe(p)?, p)?;
            Ok(local_gauge(&m, sig, p)?.lambda.value())
        })
        .collect::<Result<_>>()?;
    let k = lambdas.len();
    let total_change: f64 = (0..k)
        .map(|i| {
            let d = lambdas[(i + 1) % k] - lambdas[i];
            if sig == Signature::Riemannian { wrap(d) } else { d }
        })
        .sum();
    let winding = if sig == Signature::Riemannian { (total_change / (2.0 * PI)).round() as i64 } else { 0 };
    Ok(LoopWinding { curve: curve.clone(), total_change, winding })
}

/// Recovers the gauge function relating two orthonormal coframes of the same
/// metric on an overlap, checks `ω_B = ω_A - dλ`, and measures the winding
/// of `λ` along closed loops in the overlap.
pub fn transition_check(
    a: &dyn CoframeField,
    b: &dyn CoframeField,
    overlap: &GridSpec,
    loops: &[ClosedCurve],
    gauge_tol: f64,
) -> Result<TransitionReport> {
    overlap.validate()?;
    let sig = a.signature();
    if b.signature() != sig {
        return Err(Error::SignatureMismatch {
            point: Point2::new(overlap.x1[0], overlap.x2[0]),
            detail: format!("frame A is {:?}, frame B is {:?}", sig, b.signature()),
        });
    }
    let samples: Vec<GaugeSample> = overlap
        .points()
        .par_iter()
        .map(|&p| match sample(a, b, p) {
            Ok((l, d)) => GaugeSample {
                p,
                lambda: Some(l.lambda.value()),
                gauge_defect: Some(d),
                group_defect: Some(l.group_defect),
                orientation_mismatch: l.mismatch,
                error: None,
            },
            Err(e) => GaugeSample {
                p,
                lambda: None,
                gauge_defect: None,
                group_defect: None,
                orientation_mismatch: false,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let lambdas: Vec<f64> = samples.iter().filter_map(|s| s.lambda).collect();
    let lambda_min = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let lambda_max = lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_gauge_defect = samples.iter().filter_map(|s| s.gauge_defect).fold(0f64, f64::max);
    let max_group_defect = samples.iter().filter_map(|s| s.group_defect).fold(0f64, f64::max);
    let orientation_mismatch = samples.iter().any(|s| s.orientation_mismatch);
    let failed = samples.iter().filter(|s| s.error.is_some()).count();
    let windings = loops.iter().map(|c| loop_winding(a, b, c, 256)).collect::<Result<Vec<_>>>()?;
    let gauge_ok = failed == 0 && !orientation_mismatch && max_gauge_defect <= gauge_tol && max_group_defect <= gauge_tol;
    let single_valued = gauge_ok && windings.iter().all(|w| w.winding == 0);

    let verdict = if failed > 0 {
        format!("{failed} overlap points without a valid pair of frames")
    } else if orientation_mismatch {
        "frames have opposite orientation: no proper transition function".to_string()
    } else if !gauge_ok {
        format!("transition is not a {} gauge transformation (defect {:.3e})", sig.group(), max_gauge_defect.max(max_group_defect))
    } else if !single_valued {
        let w: Vec<String> = windings.iter().map(|w| w.winding.to_string()).collect();
        format!("gauge function winds along the loops: {}", w.join(", "))
    } else if lambda_max - lambda_min <= gauge_tol {
        "frames differ by a rigid transformation; gauge function single-valued".to_string()
    } else {
        "gauge function single-valued on the overlap".to_string()
    };
    Ok(TransitionReport {
        signature: sig,
        samples,
        lambda_min,
        lambda_max,
        max_gauge_defect,
        max_group_defect,
        orientation_mismatch,
        windings,
        gauge_ok,
        single_valued,
        verdict,
    })
}
