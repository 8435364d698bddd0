//! The long closed-form expressions for the Gowdy and Einstein–Rosen
//! connections and curvature, kept as lists of monomials so that a mismatch
//! against the pipeline can be traced to a single term.

use serde::Serialize;

use super::Derivs;

/// First and second derivatives of the pair `(P, Q)` of Gowdy fields in
/// coordinates `(t, θ)`; the same layout serves `(ψ, Ω)` in `(t, ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDerivs {
    pub a: Derivs,
    pub b: Derivs,
}

impl PairDerivs {
    pub fn new(a: Derivs, b: Derivs) -> Self {
        Self { a, b }
    }
}

/// Monomials of `U`, without the overall `√2`.
pub fn gowdy_u_terms(d: &PairDerivs) -> Vec<f64> {
    let (p, pt, pth, ptt) = (d.a.v, d.a.d1, d.a.d2, d.a.d11);
    let (qt, qth, qtt) = (d.b.d1, d.b.d2, d.b.d11);
    let (e1, e3, e4) = (p.exp(), (3.0 * p).exp(), (4.0 * p).exp());
    vec![
        2.0 * qt.powi(4) * pth * e3,
        -2.0 * qt.powi(3) * pt * qth * e4,
        qt.powi(3) * qth * e3,
        4.0 * qt * qt * pt * pt * pth * e1,
        -4.0 * qt * pt.powi(3) * qth * e1,
        qt * qt * pt * ptt * e1,
        qt * pt * pt * qth * e1,
        2.0 * qt * pt * pth * qtt * e1,
        2.0 * qt * pt * qth * ptt * e1,
        -2.0 * pt * pt * qth * qtt * e1,
        pt.powi(3) * pth,
    ]
}

/// Monomials of `V`, without the overall `√2`.
pub fn gowdy_v_terms(d: &PairDerivs) -> Vec<f64> {
    let (p, pt, pth, ptt, ptht) = (d.a.v, d.a.d1, d.a.d2, d.a.d11, d.a.d12);
    let (qt, qth, qtt, qtht) = (d.b.d1, d.b.d2, d.b.d11, d.b.d12);
    let e2 = (2.0 * p).exp();
    vec![
        2.0 * qt.powi(3) * ptht * e2,
        -qt.powi(3) * pth * e2,
        -2.0 * qt * qt * pt * qtht * e2,
        qt * qt * pt * qth * e2,
        -2.0 * qt * qt * qth * ptt * e2,
        2.0 * qt * pt.powi(3) * pth,
        2.0 * qt * pt * qth * qtt * e2,
        -2.0 * pt.powi(4) * qth,
        2.0 * qt * pt * pt * ptht,
        -qt * pt * pt * pth,
        -2.0 * qt * pt * pth * ptt,
        -2.0 * pt.powi(3) * qtht,
        pt.powi(3) * qth,
        2.0 * pt * pt * pth * qtt,
    ]
}

/// Monomials of `W̃`.
pub fn gowdy_w_terms(d: &PairDerivs) -> Vec<f64> {
    let (p, pt, pth, ptt, ptht, pthth) = (d.a.v, d.a.d1, d.a.d2, d.a.d11, d.a.d12, d.a.d22);
    let (qt, qth, qtt, qtht, qthth) = (d.b.d1, d.b.d2, d.b.d11, d.b.d12, d.b.d22);
    let em2 = (-2.0 * p).exp();
    vec![
        2.0 * qth.powi(3) * pt * pt,
        -pt * pt * qth.powi(3),
        -6.0 * pt * pt * pth * qt * qth * qth,
        pt * pt * pthth * qth * em2,
        -pt * pt * pth * qthth * em2,
        2.0 * pt * qth * qth * qt * pth,
        6.0 * pt * qth * pth * pth * qt * qt,
        -2.0 * pt * qth * pth * ptht * em2,
        2.0 * pt * pth * pth * qtht * em2,
        ptt * qth.powi(3),
        -2.0 * qth * qth * qt * ptht,
        -qth * qth * pth * qtt,
        2.0 * qth * qt * pth * qtht,
        qth * pth * pth * ptt * em2,
        -qth * pth * pth * qt * qt,
        qth * qt * qt * pthth,
        -2.0 * pth.powi(3) * qt.powi(3),
        -qt * qt * pth * qthth,
        -pth.powi(3) * qtt * em2,
    ]
}

/// Monomials of `u` for Einstein–Rosen waves, without the overall `√2`.
/// `a = ψ`, `b = Ω` in coordinates `(t, ρ)`.
pub fn er_u_terms(d: &PairDerivs) -> Vec<f64> {
    let (s, st, stt) = (d.a.v, d.a.d1, d.a.d11);
    let (ot, ott) = (d.b.d1, d.b.d11);
    let e = -(-2.0 * s).exp();
    vec![
        e * (-4.0 * s).exp() * ot.powi(3),
        e * 8.0 * ot * st * st,
        e * -2.0 * ott * st,
        e * 2.0 * stt * ot,
    ]
}

/// Monomials of `v` for Einstein–Rosen waves, without the overall `√2`.
pub fn er_v_terms(d: &PairDerivs) -> Vec<f64> {
    let (s, st, sr, stt, str_) = (d.a.v, d.a.d1, d.a.d2, d.a.d11, d.a.d12);
    let (ot, or, ott, otr) = (d.b.d1, d.b.d2, d.b.d11, d.b.d12);
    let e4 = (-4.0 * s).exp();
    vec![
        or * ott * ot * st * e4,
        -or * stt * ot * ot * e4,
        8.0 * or * st.powi(4),
        -8.0 * sr * ot * st.powi(3),
        ot.powi(3) * str_,
        -ot * ot * otr * st * e4,
        4.0 * sr * st * st * ott,
        -4.0 * sr * st * stt * ot,
        4.0 * st * st * str_ * ot,
        -4.0 * st.powi(3) * otr,
    ]
}

/// Single-term explanation of the difference between a transcribed sum and
/// the value it should have.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Attribution {
    Match,
    GlobalFactor { factor: f64 },
    DropTerm { index: usize },
    FlipTerm { index: usize },
    DoubleTerm { index: usize },
    Unexplained { residual: f64 },
}

/// Tries, in order: exact agreement, dropping, flipping or doubling one term,
/// then a simple global factor. `expected` is what the term sum should equal.
pub fn attribute(terms: &[f64], expected: f64, tol: f64) -> Attribution {
    let sum: f64 = terms.iter().sum();
    let scale = terms.iter().map(|t| t.abs()).fold(expected.abs(), f64::max).max(f64::MIN_POSITIVE);
    let close = |a: f64| (a - expected).abs() <= tol * scale;
    if close(sum) {
        return Attribution::Match;
    }
    for (i, t) in terms.iter().enumerate() {
        if t.abs() <= tol * scale {
            continue;
        }
        if close(sum - t) {
            return Attribution::DropTerm { index: i };
        }
        if close(sum - 2.0 * t) {
            return Attribution::FlipTerm { index: i };
        }
        if close(sum + t) {
            return Attribution::DoubleTerm { index: i };
        }
    }
    if sum.abs() > tol * scale && expected.abs() > tol * scale {
        let factor = expected / sum;
        // only simple rational factors count as explanations
        for den in 1..=4 {
            let num = factor * den as f64;
            if (num - num.round()).abs() <= 1e-6 * num.abs().max(1.0) && num.round() != 0.0 {
                return Attribution::GlobalFactor { factor };
            }
        }
    }
    Attribution::Unexplained { residual: sum - expected }
}
