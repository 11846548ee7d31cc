//! Bracketed root finding for real functions of one variable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A located root with the final bracket and `|f(root)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Bisection on `[lo, hi]` until the bracket is narrower than `xtol`
/// (or cannot shrink further in floating point).
pub fn bisect<F>(name: &'static str, f: F, lo: f64, hi: f64, xtol: f64) -> Result<Root>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(Root { root: a, lo: a, hi: a, residual: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { root: b, lo: b, hi: b, residual: 0.0, iterations: 0 });
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::BracketFailure { name, lo, hi });
    }
    let mut iterations = 0;
    while b - a > xtol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        iterations += 1;
        if fm == 0.0 {
            return Ok(Root { root: m, lo: m, hi: m, residual: 0.0, iterations });
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let root = 0.5 * (a + b);
    Ok(Root { root, lo: a, hi: b, residual: f(root).abs(), iterations })
}

/// [`bisect`] followed by up to three Newton steps, each kept only if it
/// stays inside the final bracket and does not increase `|f|`.
pub fn bisect_polished<F, D>(name: &'static str, f: F, df: D, lo: f64, hi: f64, xtol: f64) -> Result<Root>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut root = bisect(name, &f, lo, hi, xtol)?;
    for _ in 0..3 {
        let d = df(root.root);
        if d == 0.0 || root.residual == 0.0 {
            break;
        }
        let x = root.root - f(root.root) / d;
        let r = f(x).abs();
        if x < root.lo || x > root.hi || r > root.residual {
            break;
        }
        root.root = x;
        root.residual = r;
        root.iterations += 1;
    }
    Ok(root)
}

/// First subinterval `[x, x + step]` of `[lo, hi]` on which `f` changes sign
/// or vanishes at the right end.
pub fn first_sign_change<F>(f: F, lo: f64, hi: f64, step: f64) -> Option<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let mut a = lo;
    let mut fa = f(a);
    while a < hi {
        let b = (a + step).min(hi);
        let fb = f(b);
        if fb == 0.0 || fa.signum() != fb.signum() {
            return Some((a, b));
        }
        a = b;
        fa = fb;
    }
    None
}
