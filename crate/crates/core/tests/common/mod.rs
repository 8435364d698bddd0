#![allow(dead_code)]

use std::sync::Arc;

use ghmtq::jets::fd_oracle;
use ghmtq::{FnField, Jet3, Point2, ScalarField2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn points(seed: u64, n: usize, x1: [f64; 2], x2: [f64; 2]) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point2::new(rng.random_range(x1[0]..x1[1]), rng.random_range(x2[0]..x2[1]))).collect()
}

/// Composite analytic fields, all defined on [0.2, 1.2]².
pub fn jet_suite() -> Vec<(&'static str, Arc<dyn ScalarField2>)> {
    fn f<F>(f: F) -> Arc<dyn ScalarField2>
    where
        F: Fn(Jet3, Jet3) -> Result<Jet3, ghmtq::JetError> + Send + Sync + 'static,
    {
        Arc::new(FnField::new(f))
    }
    vec![
        ("exp(x1 x2)", f(|a, b| Ok((a * b).exp()))),
        ("ln(1 + x1^2 + x2)", f(|a, b| (a * a + b + 1.0).ln())),
        ("sqrt(x1 + x2^2)", f(|a, b| (a + b * b).sqrt())),
        ("sin(x1) cos(x2)", f(|a, b| Ok(a.sin() * b.cos()))),
        ("x1 / (1 + x2^2)", f(|a, b| a.checked_div(&(b * b + 1.0)))),
        ("(x1 + 2 x2)^1.5", f(|a, b| (a + b * 2.0).powf(1.5))),
        ("tanh(x1 - x2)", f(|a, b| Ok((a - b).tanh()))),
        ("atan(x1 x2)", f(|a, b| Ok((a * b).atan()))),
        ("sinh(x1) cosh(x2)", f(|a, b| Ok(a.sinh() * b.cosh()))),
        ("exp(-x1) sin(3 x2)", f(|a, b| Ok((-a).exp() * (b * 3.0).sin()))),
        ("(1 + x1^2 + x2^2)^-2", f(|a, b| (a * a + b * b + 1.0).powi(-2))),
        ("asinh(x1 + x2) atan2(x2, 1 + x1)", f(|a, b| Ok((a + b).asinh() * b.atan2(&(a + 1.0))?))),
    ]
}

/// Error of each derivative order of the jet against central differences,
/// measured as `|jet - fd| / max(|jet|, 1)` over the slots of that order.
pub fn fd_errors(field: &dyn ScalarField2, p: Point2, h: f64) -> [f64; 3] {
    let j = field.eval(p).unwrap();
    let o = fd_oracle(field, p, h).unwrap();
    let err = |a: &[f64], b: &[f64]| {
        let n = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        n(&d) / n(a).max(1.0)
    };
    [err(&j.d1(), &o.d1()), err(&j.d2(), &o.d2()), err(&j.d3(), &o.d3())]
}
