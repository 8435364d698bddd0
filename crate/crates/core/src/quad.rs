//! Composite Simpson quadrature with Richardson error estimates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Composite Simpson rule on `[a, b]` with `n` (even, ≥ 2) panels.
pub fn simpson<F>(mut f: F, a: f64, b: f64, n: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidConfig(format!("Simpson needs an even panel count >= 2, got {n}")));
    }
    let h = (b - a) / n as f64;
    let mut acc = f(a)? + f(b)?;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

/// Simpson weights for `n` panels (length `n + 1`, already scaled by `h/3`).
pub fn simpson_weights(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

/// Node abscissae matching [`simpson_weights`].
pub fn simpson_nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..=n).map(|i| if i == n { b } else { a + i as f64 * h }).collect()
}

/// A quadrature value with its Richardson error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Combines Simpson results at `n` and `2n` panels. The fine value is kept
/// and `|fine - coarse| / 15` is the error estimate.
pub fn richardson_pair(coarse: f64, fine: f64) -> Estimate {
    Estimate {
        value: fine,
        error: (fine - coarse).abs() / 15.0,
    }
}

/// Observed convergence order from three results at `n`, `2n`, `4n`.
///
/// `None` when the differences are at rounding level and no order can be read off.
pub fn observed_order(i_n: f64, i_2n: f64, i_4n: f64) -> Option<f64> {
    let d1 = (i_n - i_2n).abs();
    let d2 = (i_2n - i_4n).abs();
    let floor = 64.0 * f64::EPSILON * i_4n.abs().max(1.0);
    if d1 <= floor || d2 <= floor {
        return None;
    }
    Some((d1 / d2).log2())
}

/// Simpson with repeated panel doubling until the Richardson estimate drops
/// below `tol` or `max_doublings` is reached.
pub fn adaptive_simpson<F>(mut f: F, a: f64, b: f64, n0: usize, tol: f64, max_doublings: u32) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut n = n0.max(2) + n0 % 2;
    let mut prev = simpson(&mut f, a, b, n)?;
    let mut est = Estimate { value: prev, error: f64::INFINITY };
    for _ in 0..max_doublings {
        n *= 2;
        let next = simpson(&mut f, a, b, n)?;
        est = richardson_pair(prev, next);
        if est.error <= tol {
            break;
        }
        prev = next;
    }
    Ok(est)
}
