//! Free-space scattering off the spherical step well.
//!
//! Everything that can pass through a pole (`tan δ_l`, its continuation `t` and
//! `a_l^{2l+1}`) is carried as a [`ProjectivePair`] so that downstream root functions
//! stay continuous through resonances.
//!
//! # Continuation to negative energy
//!
//! With `k = iκ` and `x = κ r`, the free solutions continue as
//!
//! ```text
//! j_l(ix)  = i^l i_l(x)                    j_l'(ix) = i^{l-1} i_l'(x)
//! n_l(ix)  = -i^{-l-1} k_l(x) - i^{l-1} i_l(x)
//! ```
//!
//! Writing `β` for the inside log-derivative at `r = d` and
//! `P = κ i_l' - β i_l`, `Q = κ k_l' - β k_l` (both real), the matching numerator and
//! denominator become `S = i^l P` and `C = -i^{-l-1} Q - i^{l-1} P`. The continued
//! quantity `t = tanh[iδ_l(iκ)] = i tan δ_l(iκ) = i S / C` then reduces to
//!
//! ```text
//! t = (-1)^l P / (Q + (-1)^l P)
//! ```
//!
//! which is real, and equals one exactly when `Q = 0`, i.e. at a bound state.
//!
//! Since `tan δ_l(k) = k^{2l+1} f(k²)` for a finite-range potential,
//! `t = (-1)^l κ^{2l+1} a_l^{2l+1}` below threshold. The scattering length is therefore
//! continued as `a_l^{2l+1} = (-1)^l t / κ^{2l+1}`, which is continuous through `E = 0`
//! for every `l`. At a bound state this gives `a_l = (-1)^l / κ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{bisect, scan_roots};
use crate::specfun::{dfact_even, dfact_odd, mod_sph_bessel_ik, sph_bessel_jn};

pub const MAX_DEPTH: f64 = 1e4;
pub const MAX_RANGE: f64 = 2.0;

/// Default energy resolution of bound-state scans.
pub const BOUND_SCAN_STEP: f64 = 1e-3;
/// Bisection tolerance for bound-state energies.
pub const BOUND_TOL: f64 = 1e-10;

/// Spherical step well `V(r) = -V₀` for `r < d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepWell {
    pub depth: f64,
    pub range: f64,
}

impl StepWell {
    /// `depth ∈ [0, 1e4]` (zero means no interaction), `range ∈ (0, 2]`.
    pub fn new(depth: f64, range: f64) -> Result<Self> {
        if !(0.0..=MAX_DEPTH).contains(&depth) {
            return Err(Error::domain("StepWell", format!("depth {depth} outside [0, {MAX_DEPTH}]")));
        }
        if !(range > 0.0 && range <= MAX_RANGE) {
            return Err(Error::domain("StepWell", format!("range {range} outside (0, {MAX_RANGE}]")));
        }
        Ok(StepWell { depth, range })
    }

    pub fn potential(&self, r: f64) -> f64 {
        if r < self.range {
            -self.depth
        } else {
            0.0
        }
    }
}

/// Homogeneous pair `(num, den)` standing for `num/den`, normalised to unit length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePair {
    pub num: f64,
    pub den: f64,
}

impl ProjectivePair {
    pub fn new(num: f64, den: f64) -> Result<Self> {
        let norm = num.hypot(den);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::domain("ProjectivePair", format!("degenerate pair ({num}, {den})")));
        }
        Ok(ProjectivePair { num: num / norm, den: den / norm })
    }

    /// `num/den`, signed infinity when `den == 0`.
    pub fn value(&self) -> f64 {
        if self.den == 0.0 {
            f64::INFINITY.copysign(self.num)
        } else {
            self.num / self.den
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.den == 0.0
    }

    pub fn scaled(&self, s: f64) -> ProjectivePair {
        ProjectivePair { num: s * self.num, den: s * self.den }
    }
}

/// Scattering data at one energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringPoint {
    pub energy: f64,
    pub l: usize,
    /// `tan δ_l` for `E > 0`, the continuation `t` for `E < 0`.
    pub tan_or_t: ProjectivePair,
    /// `a_l^{2l+1}` as a projective pair.
    pub a_pair: ProjectivePair,
    pub a_pow: f64,
    pub a_signed: f64,
}

/// Signed `(2l+1)`-th root.
pub fn odd_root(v: f64, l: usize) -> f64 {
    if v.is_infinite() {
        return v;
    }
    v.signum() * v.abs().powf(1.0 / (2 * l + 1) as f64)
}

fn parity(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Log-derivative of the inside solution at `r = d` as a normalised pair
/// `(R'(d), R(d))`, continuous through `E = -V₀`.
fn inside_log_derivative(l: usize, well: &StepWell, e: f64) -> Result<(f64, f64)> {
    let d = well.range;
    let e_in = e + well.depth;
    let (num, den) = if e_in > 0.0 && (2.0 * e_in).sqrt() * d > 1e-12 {
        let q = (2.0 * e_in).sqrt();
        let (j, _) = sph_bessel_jn(l, q * d)?;
        (q * j.df, j.f)
    } else if e_in < 0.0 && (-2.0 * e_in).sqrt() * d > 1e-12 {
        let q = (-2.0 * e_in).sqrt();
        let (i, _) = mod_sph_bessel_ik(l, q * d)?;
        (q * i.df, i.f)
    } else {
        (l as f64, d)
    };
    let n = num.hypot(den);
    Ok((num / n, den / n))
}

fn check_l(op: &'static str, l: usize) -> Result<()> {
    if l > crate::specfun::BESSEL_MAX_ORDER {
        return Err(Error::domain(op, format!("l = {l} too large")));
    }
    Ok(())
}

/// `tan δ_l(k)` for the step well as the pair `(S, C)`.
///
/// With inside log-derivative pair `(β_n, β_d)` at `r = d`:
/// `S = β_d k j_l'(kd) - β_n j_l(kd)`, `C = β_d k n_l'(kd) - β_n n_l(kd)`.
pub fn tan_delta(l: usize, well: &StepWell, e: f64) -> Result<ProjectivePair> {
    check_l("tan_delta", l)?;
    if !(e > 0.0) {
        return Err(Error::domain("tan_delta", format!("energy {e} must be positive")));
    }
    if well.depth == 0.0 {
        return ProjectivePair::new(0.0, 1.0);
    }
    let k = (2.0 * e).sqrt();
    let (bn, bd) = inside_log_derivative(l, well, e)?;
    let (j, n) = sph_bessel_jn(l, k * well.range)?;
    let s = bd * k * j.df - bn * j.f;
    let c = bd * k * n.df - bn * n.f;
    ProjectivePair::new(s, c)
}

/// Matching functions `(P, Q)` below threshold, see the module notes.
fn continuation_pq(l: usize, well: &StepWell, e: f64) -> Result<(f64, f64)> {
    let kappa = (-2.0 * e).sqrt();
    let (bn, bd) = inside_log_derivative(l, well, e)?;
    let (i, k) = mod_sph_bessel_ik(l, kappa * well.range)?;
    Ok((bd * kappa * i.df - bn * i.f, bd * kappa * k.df - bn * k.f))
}

/// `t = tanh[iδ_l(iκ)]` at `E = -κ²/2 < 0` as the real pair
/// `((-1)^l P, Q + (-1)^l P)`.
pub fn continuation_t(l: usize, well: &StepWell, e: f64) -> Result<ProjectivePair> {
    check_l("continuation_t", l)?;
    if !(e < 0.0) {
        return Err(Error::domain("continuation_t", format!("energy {e} must be negative")));
    }
    if well.depth == 0.0 {
        return ProjectivePair::new(0.0, 1.0);
    }
    let (p, q) = continuation_pq(l, well, e)?;
    let sp = parity(l) * p;
    ProjectivePair::new(sp, q + sp)
}

/// Energy-dependent scattering length `a_l^{2l+1}(E)`:
/// `-tan δ_l / k^{2l+1}` above threshold and `(-1)^l t / κ^{2l+1}` below.
pub fn scattering_length_pow(l: usize, well: &StepWell, e: f64) -> Result<ScatteringPoint> {
    if e == 0.0 || e.is_nan() {
        return Err(Error::domain("scattering_length_pow", "energy must be non-zero"));
    }
    let p = (2 * l + 1) as i32;
    let (tan_or_t, a_pair) = if e > 0.0 {
        let t = tan_delta(l, well, e)?;
        let k = (2.0 * e).sqrt();
        (t, ProjectivePair::new(-t.num, t.den * k.powi(p))?)
    } else {
        let t = continuation_t(l, well, e)?;
        let kappa = (-2.0 * e).sqrt();
        (t, ProjectivePair::new(parity(l) * t.num, t.den * kappa.powi(p))?)
    };
    let a_pow = a_pair.value();
    Ok(ScatteringPoint { energy: e, l, tan_or_t, a_pair, a_pow, a_signed: odd_root(a_pow, l) })
}

/// Bound-state condition `κ k_l'(κd) R(d) - R'(d) k_l(κd)`; zero exactly at the free
/// bound states of the well, continuous on `(-V₀, 0)`.
pub fn bound_state_mismatch(l: usize, well: &StepWell, e: f64) -> Result<f64> {
    Ok(continuation_pq(l, well, e)?.1)
}

fn scan_grid_down(well: &StepWell, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    // steps shrink to `step` near the bottom of the well and are capped so the
    // inside phase q·d advances by at most 0.01 per step
    let mut grid = vec![hi];
    let mut e = hi;
    while e > lo {
        let q = (2.0 * (e + well.depth)).max(0.0).sqrt();
        let h = (0.01 * q / well.range).clamp(step, 0.05);
        e = (e - h).max(lo);
        grid.push(e);
    }
    grid.reverse();
    grid
}

/// All free bound states of angular momentum `l` with energy in `[lo, hi]`,
/// `-V₀ ≤ lo < hi ≤ 0`, sorted ascending.
pub fn well_bound_states(l: usize, well: &StepWell, lo: f64, hi: f64) -> Result<Vec<f64>> {
    check_l("well_bound_states", l)?;
    if !(lo >= -well.depth && hi <= 0.0 && lo < hi) {
        return Err(Error::domain(
            "well_bound_states",
            format!("window [{lo}, {hi}] not inside [-V0, 0] = [{}, 0]", -well.depth),
        ));
    }
    let hi = hi.min(-1e-10);
    let lo = lo.max(-well.depth + 1e-12);
    if lo >= hi {
        return Ok(Vec::new());
    }
    let grid = scan_grid_down(well, lo, hi, BOUND_SCAN_STEP);
    let mut failure = None;
    let f = |e: f64| match bound_state_mismatch(l, well, e) {
        Ok(v) => v,
        Err(err) => {
            failure.get_or_insert(err);
            f64::NAN
        }
    };
    let roots = scan_roots("well_bound_states", f, &grid, BOUND_TOL);
    if let Some(err) = failure {
        return Err(err);
    }
    roots
}

/// All free bound states of the well for angular momentum `l`.
pub fn all_bound_states(l: usize, well: &StepWell) -> Result<Vec<f64>> {
    if well.depth == 0.0 {
        return Ok(Vec::new());
    }
    well_bound_states(l, well, -well.depth, 0.0)
}

/// Smallest depth whose `l`-wave bound state lies at `e_b < 0` for a well of range `d`.
///
/// At fixed `E_b` the bound-state condition is scanned in the inside phase
/// `p = q d` (`V₀ = p²/(2d²) - E_b`), so the first root is the lowest-lying state
/// reaching `E_b`, i.e. the one just bound.
pub fn calibrate_depth(l: usize, d: f64, e_b: f64) -> Result<f64> {
    check_l("calibrate_depth", l)?;
    if !(d > 0.0 && d <= MAX_RANGE) {
        return Err(Error::domain("calibrate_depth", format!("range {d} outside (0, 2]")));
    }
    if !(e_b < 0.0 && e_b > -MAX_DEPTH) {
        return Err(Error::domain("calibrate_depth", format!("E_b = {e_b} must lie in (-1e4, 0)")));
    }
    let depth_of = |p: f64| p * p / (2.0 * d * d) - e_b;
    let p_max = d * (2.0 * (MAX_DEPTH + e_b)).sqrt();
    let f = |p: f64| -> f64 {
        let well = StepWell { depth: depth_of(p), range: d };
        bound_state_mismatch(l, &well, e_b).unwrap_or(f64::NAN)
    };
    let step = 0.01;
    let mut p_prev = 0.0;
    let mut f_prev = f(p_prev);
    let mut p = step;
    while p <= p_max + step {
        let pc = p.min(p_max);
        let fc = f(pc);
        if !fc.is_finite() {
            return Err(Error::Convergence { op: "calibrate_depth", lo: depth_of(p_prev), hi: depth_of(pc) });
        }
        if fc == 0.0 || fc.signum() != f_prev.signum() {
            let root = bisect("calibrate_depth", &f, p_prev, pc, 1e-15 * pc)?;
            let depth = depth_of(root);
            verify_calibration(l, &StepWell { depth, range: d }, e_b)?;
            return Ok(depth);
        }
        if pc >= p_max {
            break;
        }
        p_prev = pc;
        f_prev = fc;
        p += step;
    }
    Err(Error::Convergence { op: "calibrate_depth", lo: -e_b, hi: MAX_DEPTH })
}

fn verify_calibration(l: usize, well: &StepWell, e_b: f64) -> Result<()> {
    let lo = (e_b - 1e-3).max(-well.depth);
    let hi = (e_b + 1e-3).min(-1e-12);
    let f = |e: f64| bound_state_mismatch(l, well, e).unwrap_or(f64::NAN);
    let e = bisect("calibrate_depth", f, lo, hi, 1e-13)?;
    if (e - e_b).abs() > 1e-8 {
        return Err(Error::Convergence { op: "calibrate_depth", lo: e, hi: e_b });
    }
    Ok(())
}

/// Finite-radius delta-shell check: builds the shell solution of strength `a_pow`
/// at radius `s` and returns the asymptotic `tan δ` it produces.
///
/// Inside `B j_l(kr)`, outside `j_l(kr) - T n_l(kr)`. Continuity fixes `B`, and the
/// jump `½[R'₊ - R'₋] = Ô R` with `Ô = ½ (2l+1)!!/(2l)!! a_pow s^{-(l+2)} ∂^{2l+1} r^{l+1}`
/// acting on the outside solution fixes `T`. The derivative is taken exactly from the
/// power series of `r^{l+1} j_l(kr)` and `r^{l+1} n_l(kr)`. As `s → 0`,
/// `T → -a_pow k^{2l+1}`.
pub fn shell_consistency(l: usize, a_pow: f64, s: f64, k: f64) -> Result<f64> {
    check_l("shell_consistency", l)?;
    if !(s > 0.0 && k > 0.0) {
        return Err(Error::domain("shell_consistency", "s and k must be positive"));
    }
    if !(k * s < 0.05) {
        return Err(Error::domain("shell_consistency", format!("k s = {} must be < 0.05", k * s)));
    }
    if a_pow == 0.0 {
        return Ok(0.0);
    }
    let x = k * s;
    let (j, _) = sph_bessel_jn(l, x)?;
    let (dj, dn) = regularized_derivatives(l, k, s);
    let c = 0.5 * dfact_odd(l) / dfact_even(l) * a_pow;
    // ½[R'₊ - R'₋] = (k/2) T (n j' - n' j)/j = -(k/2) T / (x² j)
    let lhs = -0.5 * k / (x * x * j.f);
    let sp = s.powi(l as i32 + 2);
    Ok(c * dj / (sp * lhs + c * dn))
}

/// `∂^{2l+1}[r^{l+1} j_l(kr)]` and `∂^{2l+1}[r^{l+1} n_l(kr)]` at `r = s`.
pub fn regularized_derivatives(l: usize, k: f64, s: f64) -> (f64, f64) {
    let order = 2 * l + 1;
    let falling = |p: usize, n: usize| -> f64 { ((p - n + 1)..=p).map(|i| i as f64).product() };

    // r^{l+1} j_l(kr) = Σ_m (-1)^m k^{l+2m} r^{2l+1+2m} / (2^m m! (2l+2m+1)!!)
    let mut dj = 0.0;
    let mut coeff = k.powi(l as i32) / dfact_odd(l);
    for m in 0..40usize {
        if m > 0 {
            coeff *= -k * k / (2.0 * m as f64 * (2 * (l + m) + 1) as f64);
        }
        let p = order + 2 * m;
        let t = coeff * falling(p, order) * s.powi(2 * m as i32);
        dj += t;
        if t.abs() < 1e-18 * dj.abs() {
            break;
        }
    }

    // r^{l+1} n_l(kr) = -(2l-1)!!/k^{l+1} Σ_m (-k²r²/2)^m / (m! Π_{j≤m}(2j-1-2l))
    let lead = -(if l == 0 { 1.0 } else { dfact_odd(l - 1) }) / k.powi(l as i32 + 1);
    let mut dn = 0.0;
    let mut coeff = 1.0;
    for m in 1..(l + 41) {
        coeff *= -0.5 * k * k / (m as f64 * (2.0 * m as f64 - 1.0 - 2.0 * l as f64));
        if 2 * m < order {
            continue;
        }
        let t = lead * coeff * falling(2 * m, order) * s.powi((2 * m - order) as i32);
        dn += t;
        if t.abs() < 1e-18 * dn.abs() {
            break;
        }
    }
    (dj, dn)
}

/// Asymptotic continuity ratio `B/A ≈ 1 + T (2l+1)!!(2l-1)!!/(ks)^{2l+1}` valid for
/// `ks ≪ 1`.
pub fn continuity_ratio_asymptotic(l: usize, tan_delta: f64, ks: f64) -> f64 {
    let odd_below = if l == 0 { 1.0 } else { dfact_odd(l - 1) };
    1.0 + tan_delta * dfact_odd(l) * odd_below / ks.powi(2 * l as i32 + 1)
}

/// Exact continuity ratio `B/A = 1 - T n_l(ks)/j_l(ks)`.
pub fn continuity_ratio_exact(l: usize, tan_delta: f64, ks: f64) -> Result<f64> {
    let (j, n) = sph_bessel_jn(l, ks)?;
    Ok(1.0 - tan_delta * n.f / j.f)
}
