//! Exact spectrum of the step well inside the harmonic trap.
//!
//! Inside the well the radial equation is again a trap equation with the shifted
//! parameter `ν_in = ν + V₀/2`, so the regular solution is
//! `r^l e^{-r²/2} M(-ν_in, l+3/2, r²)` and the decaying one outside is
//! `r^l e^{-r²/2} U(-ν, l+3/2, r²)`. Eigenvalues are the zeros of the Wronskian-like
//! mismatch `M' U - M U'` at `z = d²`. A Numerov shooting solver provides an
//! independent check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freescatter::StepWell;
use crate::roots::{bisect, uniform_grid};
use crate::specfun::{kummer_m_estimate, tricomi_u, BESSEL_MAX_ORDER};
use crate::trapsolver::{nu_of_energy, WaveFunctionSample};

pub const MAX_ENERGY: f64 = 40.0;
pub const SCAN_STEP: f64 = 0.01;
pub const ENERGY_TOL: f64 = 1e-12;
/// Largest mismatch residual accepted at an eigenvalue.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Largest allowed disagreement between a Numerov level and its doubled-grid value.
pub const RICHARDSON_TOL: f64 = 1e-6;

/// Uniform radial grid description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && n_points >= 10) {
            return Err(Error::domain("RadialGrid", "need 0 < r_min < r_max and at least 10 points"));
        }
        Ok(RadialGrid { r_min, r_max, n_points })
    }

    /// `r_min = 1e-4`, `r_max = 10`, `2·10⁴` points.
    pub fn oracle() -> Self {
        RadialGrid { r_min: 1e-4, r_max: 10.0, n_points: 20_000 }
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points - 1) as f64
    }

    pub fn doubled(&self) -> Self {
        RadialGrid { n_points: 2 * self.n_points, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    KummerMatch,
    Numerov,
}

/// One exact eigenvalue with its quality metric and node count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenSolveReport {
    pub energy: f64,
    pub method: Method,
    pub residual: f64,
    pub nodes: usize,
}

fn check_inputs(op: &'static str, l: usize, well: &StepWell, window: (f64, f64)) -> Result<()> {
    if l > BESSEL_MAX_ORDER {
        return Err(Error::domain(op, format!("l = {l} too large")));
    }
    let (lo, hi) = window;
    if !(lo < hi && hi <= MAX_ENERGY) {
        return Err(Error::domain(op, format!("window [{lo}, {hi}] is not an interval below {MAX_ENERGY}")));
    }
    if lo < -well.depth {
        return Err(Error::domain(op, format!("window starts below the well bottom -V0 = {}", -well.depth)));
    }
    Ok(())
}

/// `(M, M', U, U')` in `z` at the well edge.
fn edge_values(l: usize, well: &StepWell, e: f64) -> Result<[f64; 4]> {
    let b = l as f64 + 1.5;
    let z = well.range * well.range;
    let nu = nu_of_energy(l, e);
    let a_in = -nu - 0.5 * well.depth;
    let (m, _) = kummer_m_estimate(a_in, b, z)?;
    let (m1, _) = kummer_m_estimate(a_in + 1.0, b + 1.0, z)?;
    let u = tricomi_u(-nu, b, z)?;
    Ok([m, a_in / b * m1, u.f, u.df])
}

/// Cross-multiplied log-derivative mismatch and its normalising scale.
fn kummer_mismatch(l: usize, well: &StepWell, e: f64) -> Result<(f64, f64)> {
    let [m, dm, u, du] = edge_values(l, well, e)?;
    Ok((dm * u - m * du, (dm * u).abs() + (m * du).abs()))
}

/// Normalised matching residual of the Kummer solution at energy `e`.
pub fn matching_residual(l: usize, well: &StepWell, e: f64) -> Result<f64> {
    let (v, scale) = kummer_mismatch(l, well, e)?;
    Ok(if scale == 0.0 { 0.0 } else { v.abs() / scale })
}

/// Scans `f` on `grid`, refining every sign change to `ENERGY_TOL`.
fn scan_and_bisect<F>(op: &'static str, f: F, grid: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut failure = None;
    let mut g = |e: f64| match f(e) {
        Ok(v) => v,
        Err(err) => {
            failure.get_or_insert(err);
            f64::NAN
        }
    };
    let roots = crate::roots::scan_roots(op, &mut g, grid, ENERGY_TOL);
    if let Some(err) = failure {
        return Err(err);
    }
    roots
}

/// Exact eigenvalues by Kummer-function matching at `r = d`, sorted ascending.
pub fn exact_levels_matching(l: usize, well: &StepWell, window: (f64, f64)) -> Result<Vec<EigenSolveReport>> {
    let op = "exact_levels_matching";
    check_inputs(op, l, well, window)?;
    let grid = uniform_grid(window.0, window.1, SCAN_STEP);
    let roots = scan_and_bisect(op, |e| Ok(kummer_mismatch(l, well, e)?.0), &grid)?;
    roots
        .into_iter()
        .map(|e| {
            let residual = matching_residual(l, well, e)?;
            if !(residual < RESIDUAL_TOL) {
                return Err(Error::Convergence { op, lo: e, hi: e });
            }
            let nodes = numerov_nodes(l, well, e, &node_grid(e))?;
            Ok(EigenSolveReport { energy: e, method: Method::KummerMatch, residual, nodes })
        })
        .collect()
}

fn node_grid(e: f64) -> RadialGrid {
    let r_max = (10.0_f64).max((2.0 * e.max(0.0)).sqrt() + 6.0);
    RadialGrid { r_min: 1e-4, r_max, n_points: 20_000 }
}

/// Result of integrating both Numerov pieces to the well edge.
struct Shot {
    /// Normalised `(u, u')` of the outward solution at `d`.
    inner: (f64, f64),
    /// Normalised `(u, u')` of the inward solution at `d`.
    outer: (f64, f64),
    nodes: usize,
    inner_values: Vec<f64>,
    outer_values: Vec<f64>,
}

impl Shot {
    fn mismatch(&self) -> f64 {
        self.inner.1 * self.outer.0 - self.inner.0 * self.outer.1
    }

    fn residual(&self) -> f64 {
        let scale = (self.inner.1 * self.outer.0).abs() + (self.inner.0 * self.outer.1).abs();
        if scale == 0.0 {
            0.0
        } else {
            self.mismatch().abs() / scale
        }
    }
}

/// Point counts of the inner `[r_min, d]` and outer `[d, r_max]` grids.
fn split(grid: &RadialGrid) -> (usize, usize) {
    let half = (grid.n_points / 2).max(10);
    (half, grid.n_points.saturating_sub(half).max(10))
}

fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { b } else { a + i as f64 * h }).collect()
}

struct Run {
    values: Vec<f64>,
    nodes: usize,
    /// Value and derivative at the second-to-last abscissa.
    end: (f64, f64),
}

/// Numerov recursion for `u'' = f u` on uniform abscissae `x`, started from two
/// values. The last abscissa lies one step beyond the point of interest, so the
/// derivative there comes from the central formula
/// `u'ₘ = [(1 - h²fₘ₊₁/6) uₘ₊₁ - (1 - h²fₘ₋₁/6) uₘ₋₁] / 2h`, accurate to `O(h⁴)`.
/// Sign changes are counted up to the point of interest.
fn numerov(x: &[f64], f: &[f64], u0: f64, u1: f64, keep: bool) -> Run {
    let n = x.len();
    let h = x[1] - x[0];
    let h2 = h * h / 12.0;
    let mut values = Vec::with_capacity(if keep { n } else { 0 });
    if keep {
        values.extend([u0, u1]);
    }
    let mut rescale_at = Vec::new();
    let (mut p, mut a, mut b) = (0.0, u0, u1);
    let mut nodes = usize::from(a * b < 0.0);
    for i in 1..n - 1 {
        let c = (2.0 * (1.0 + 5.0 * h2 * f[i]) * b - (1.0 - h2 * f[i - 1]) * a) / (1.0 - h2 * f[i + 1]);
        if c * b < 0.0 && i + 1 < n - 1 {
            nodes += 1;
        }
        p = a;
        a = b;
        b = c;
        if b.abs() > 1e200 {
            p *= 1e-200;
            a *= 1e-200;
            b *= 1e-200;
            rescale_at.push(i + 1);
        }
        if keep {
            values.push(b);
        }
    }
    if keep {
        for &idx in &rescale_at {
            values[..idx].iter_mut().for_each(|v| *v *= 1e-200);
        }
        values.pop();
    }
    let du = ((1.0 - 2.0 * h2 * f[n - 1]) * b - (1.0 - 2.0 * h2 * f[n - 3]) * p) / (2.0 * h);
    Run { values, nodes, end: (a, du) }
}

fn normalise_pair(u: f64, du: f64) -> (f64, f64) {
    let n = u.hypot(du);
    (u / n, du / n)
}

/// `f(r) = 2[V(r) - E] + l(l+1)/r² + r²` with the inside or outside branch of `V`.
fn numerov_f(l: usize, well: &StepWell, e: f64, inside: bool) -> impl Fn(f64) -> f64 + '_ {
    let ll = (l * (l + 1)) as f64;
    let v = if inside { -well.depth } else { 0.0 };
    move |r: f64| 2.0 * (v - e) + ll / (r * r) + r * r
}

fn check_grid(grid: &RadialGrid, d: f64) -> Result<()> {
    let (_, n_out) = split(grid);
    let h_out = (grid.r_max - d) / (n_out - 1) as f64;
    if !(grid.r_min < d && grid.r_max > d + 1.0 && h_out < 0.5 * d) {
        return Err(Error::domain("numerov_levels", "grid must extend from below d to beyond d + 1 and resolve d"));
    }
    Ok(())
}

/// Outward run on `[r_min, d]` (plus one step), regular seed `r^{l+1}(1 + c r²)`.
fn inner_run(l: usize, well: &StepWell, e: f64, grid: &RadialGrid, keep: bool) -> Run {
    let (n_in, _) = split(grid);
    let d = well.range;
    let mut r = uniform(grid.r_min, d, n_in);
    r.push(d + (d - grid.r_min) / (n_in - 1) as f64);
    let fi = numerov_f(l, well, e, true);
    let f: Vec<f64> = r.iter().map(|&x| fi(x)).collect();
    let c = (-well.depth - e) / (2 * l + 3) as f64;
    let seed = |x: f64| x.powi(l as i32 + 1) * (1.0 + c * x * x);
    numerov(&r, &f, seed(r[0]), seed(r[1]), keep)
}

fn shoot(l: usize, well: &StepWell, e: f64, grid: &RadialGrid, keep: bool) -> Result<Shot> {
    let d = well.range;
    check_grid(grid, d)?;
    let inner = inner_run(l, well, e, grid, keep);

    // inward from r_max on the mirrored abscissa x = -r, seeded with r^{E-1/2} e^{-r²/2}
    let (_, n_out) = split(grid);
    let mut r = uniform(d, grid.r_max, n_out);
    let h = (grid.r_max - d) / (n_out - 1) as f64;
    r.insert(0, d - h);
    r.reverse();
    let fo = numerov_f(l, well, e, false);
    let f: Vec<f64> = r.iter().map(|&x| fo(x)).collect();
    let x: Vec<f64> = r.iter().map(|&v| -v).collect();
    let p = e - 0.5;
    let tail = (r[1] / r[0]).powf(p) * (-(r[1] * r[1] - r[0] * r[0]) / 2.0).exp();
    let outer = numerov(&x, &f, 1.0, tail, keep);
    let mut outer_values = outer.values;
    outer_values.reverse();

    Ok(Shot {
        inner: normalise_pair(inner.end.0, inner.end.1),
        outer: normalise_pair(outer.end.0, -outer.end.1),
        nodes: inner.nodes + outer.nodes,
        inner_values: inner.values,
        outer_values,
    })
}

/// Number of eigenvalues below `e`, from the zeros of the regular solution
/// integrated outward over the whole grid.
fn sturm_count(l: usize, well: &StepWell, e: f64, grid: &RadialGrid) -> usize {
    let d = well.range;
    let inner = inner_run(l, well, e, grid, false);
    let (u, du) = inner.end;
    let (_, n_out) = split(grid);
    let r = uniform(d, grid.r_max, n_out);
    let h = r[1] - r[0];
    let fo = numerov_f(l, well, e, false);
    let f: Vec<f64> = r.iter().map(|&x| fo(x)).collect();
    let ll = (l * (l + 1)) as f64;
    let df = -2.0 * ll / (d * d * d) + 2.0 * d;
    let u1 = u + h * du + 0.5 * h * h * f[0] * u + h * h * h / 6.0 * (df * u + f[0] * du);
    let mut x = r;
    x.push(grid.r_max + h);
    let mut ff = f;
    ff.push(fo(grid.r_max + h));
    inner.nodes + usize::from(u * u1 < 0.0) + numerov(&x, &ff, u, u1, false).nodes
}

/// Bisects the Numerov mismatch on `[lo, hi]`.
fn refine(l: usize, well: &StepWell, lo: f64, hi: f64, grid: &RadialGrid) -> Result<f64> {
    let g = |x: f64| shoot(l, well, x, grid, false).map_or(f64::NAN, |s| s.mismatch());
    bisect("numerov_levels", g, lo, hi, ENERGY_TOL)
}

/// Eigenvalues of the step well plus trap by Numerov shooting, matched at `r = d`.
///
/// Levels are isolated by bisection on the node count of the outward solution and
/// then refined on the log-derivative mismatch. Every level is recomputed on a grid
/// with twice the points; a disagreement above `RICHARDSON_TOL` is reported as
/// [`Error::Precision`].
pub fn numerov_levels(l: usize, well: &StepWell, window: (f64, f64), grid: &RadialGrid) -> Result<Vec<EigenSolveReport>> {
    let op = "numerov_levels";
    check_inputs(op, l, well, window)?;
    check_grid(grid, well.range)?;
    let (lo, hi) = window;
    let count = |e: f64| sturm_count(l, well, e, grid);
    let (k_lo, k_hi) = (count(lo), count(hi));
    let fine = grid.doubled();
    let mut out = Vec::new();
    let mut floor = lo;
    for k in k_lo..k_hi {
        let (mut a, mut b) = (floor, hi);
        while b - a > 1e-3 {
            let m = 0.5 * (a + b);
            if count(m) <= k {
                a = m;
            } else {
                b = m;
            }
        }
        let (wa, wb) = ((a - 1e-3).max(floor), (b + 1e-3).min(hi));
        let e = refine(l, well, wa, wb, grid)?;
        let e2 = refine(l, well, (e - 1e-4).max(lo), (e + 1e-4).min(hi), &fine)
            .map_err(|_| Error::Precision { op, estimate: f64::INFINITY })?;
        if (e2 - e).abs() > RICHARDSON_TOL {
            return Err(Error::Precision { op, estimate: (e2 - e).abs() });
        }
        let shot = shoot(l, well, e, grid, false)?;
        out.push(EigenSolveReport { energy: e, method: Method::Numerov, residual: shot.residual(), nodes: shot.nodes });
        floor = b;
    }
    Ok(out)
}

/// Number of nodes of the eigenfunction at `e`, counted on both Numerov pieces.
fn numerov_nodes(l: usize, well: &StepWell, e: f64, grid: &RadialGrid) -> Result<usize> {
    Ok(shoot(l, well, e, grid, false)?.nodes)
}

/// Normalised exact eigenfunction `u = r R` on `r_grid` from the matched Kummer
/// pieces.
pub fn exact_wavefunction(l: usize, well: &StepWell, e: f64, r_grid: &[f64]) -> Result<Vec<WaveFunctionSample>> {
    let op = "exact_wavefunction";
    if l > BESSEL_MAX_ORDER {
        return Err(Error::domain(op, format!("l = {l} too large")));
    }
    if r_grid.len() < 2 || r_grid[0] <= 0.0 || r_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain(op, "grid must be positive and strictly increasing"));
    }
    let residual = matching_residual(l, well, e)?;
    if !(residual < RESIDUAL_TOL) {
        return Err(Error::NotEigenvalue { op, residual });
    }
    let [m, dm, u, du] = edge_values(l, well, e)?;
    let c = (u * m + du * dm) / (m * m + dm * dm);
    let b = l as f64 + 1.5;
    let nu = nu_of_energy(l, e);
    let a_in = -nu - 0.5 * well.depth;
    let raw: Vec<f64> = r_grid
        .iter()
        .map(|&r| {
            let z = r * r;
            let bracket = if r < well.range {
                c * kummer_m_estimate(a_in, b, z)?.0
            } else {
                tricomi_u(-nu, b, z)?.f
            };
            Ok(r.powi(l as i32 + 1) * (-0.5 * z).exp() * bracket)
        })
        .collect::<Result<_>>()?;
    crate::trapsolver::normalise(r_grid, raw)
}

/// Numerov eigenfunction at a given energy, sampled on its own grid pieces and
/// normalised by the trapezoid rule. Used as a cross-check of
/// [`exact_wavefunction`].
pub fn numerov_wavefunction(l: usize, well: &StepWell, e: f64, grid: &RadialGrid) -> Result<Vec<WaveFunctionSample>> {
    let shot = shoot(l, well, e, grid, true)?;
    let d = well.range;
    let (n_in, n_out) = split(grid);
    let r_in = uniform(grid.r_min, d, n_in);
    let r_out = uniform(d, grid.r_max, n_out);
    // scale the outer piece to meet the inner one at d
    let k = shot.inner_values[n_in - 1] / shot.outer_values[0];
    let mut r = r_in.clone();
    let mut raw = shot.inner_values.clone();
    r.extend_from_slice(&r_out[1..]);
    raw.extend(shot.outer_values[1..].iter().map(|v| v * k));
    crate::trapsolver::normalise(&r, raw)
}

/// `⟨r²/2⟩` in the free bound state of the well at energy `e_b`.
pub fn bound_state_moment(l: usize, well: &StepWell, e_b: f64) -> Result<f64> {
    crate::trapsolver::well_state_moment(l, well, e_b)
}
