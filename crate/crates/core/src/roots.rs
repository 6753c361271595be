//! Sign-change scanning and bisection on continuous real functions.

use crate::error::{Error, Result};

/// Maximum bisection steps before a bracket is reported as non-convergent.
pub const MAX_BISECTIONS: usize = 200;

/// Bisects a bracket `[lo, hi]` with `f(lo)·f(hi) < 0` down to width `tol`.
pub fn bisect<F>(op: &'static str, mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.signum() != fb.signum()) || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Convergence { op, lo, hi });
    }
    for _ in 0..MAX_BISECTIONS {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if !fm.is_finite() {
            return Err(Error::Convergence { op, lo, hi });
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Err(Error::Convergence { op, lo, hi })
}

/// Finds every sign change of `f` over the increasing abscissae `grid` and refines
/// each one by bisection. Grid points where `f` is exactly zero are roots.
pub fn scan_roots<F>(op: &'static str, mut f: F, grid: &[f64], tol: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> f64,
{
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &x in grid {
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::Convergence { op, lo: x, hi: x });
        }
        if fx == 0.0 {
            roots.push(x);
            prev = None;
            continue;
        }
        if let Some((xp, fp)) = prev {
            if fp.signum() != fx.signum() {
                roots.push(bisect(op, &mut f, xp, x, tol)?);
            }
        }
        prev = Some((x, fx));
    }
    Ok(roots)
}

/// Uniform grid covering `[lo, hi]` with spacing at most `step`, endpoints included.
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    (0..=n).map(|i| if i == n { hi } else { lo + i as f64 * h }).collect()
}
