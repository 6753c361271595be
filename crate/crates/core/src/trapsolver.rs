//! Two particles in an isotropic harmonic trap interacting through the δ-shell
//! pseudopotential.
//!
//! With `E = 2ν + l + 3/2` the outside solution is `r^l e^{-r²/2} U(-ν, l+3/2, r²)`
//! and the shell boundary condition reduces, as `s → 0`, to
//!
//! ```text
//! A_l Γ(-ν) / Γ(-ν-l-1/2) = 1 / a_l^{2l+1},
//! A_l = (π/2) (-1)^l [(2l+1)!!]² / Γ(l+3/2)²
//! ```
//!
//! Roots are located on the entire function `A_l a rγ(-ν-l-1/2) - rγ(-ν)`, where
//! `rγ = 1/Γ`, so neither the noninteracting poles nor resonances of `a` interrupt
//! the bracketing.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freescatter::{scattering_length_pow, well_bound_states, ProjectivePair, StepWell};
use crate::quad::{graded_breaks, trapezoid, Composite};
use crate::roots::{scan_roots, uniform_grid};
use crate::specfun::{
    dfact_even, dfact_odd, gamma_real, kummer_m, mod_sph_bessel_ik, reciprocal_gamma, sph_bessel_jn,
    tricomi_u, BESSEL_MAX_ORDER,
};

pub const MAX_NU: f64 = 50.0;
pub const MAX_WINDOW: f64 = 40.0;
pub const NU_SCAN_STEP: f64 = 0.005;
pub const ENERGY_SCAN_STEP: f64 = 0.01;
/// Largest normalised residual at which a `TrapLevel` still counts as an eigenvalue.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-8;
/// Half-width in `ν` of the spurious-root guard.
pub const SPURIOUS_GUARD: f64 = 1e-6;

/// One eigenvalue of the trapped pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapLevel {
    pub l: usize,
    pub nu: f64,
    pub energy: f64,
    /// `⌊ν⌋` for `ν ≥ 0`; roots below `ν = 0` are numbered `-1, -2, …` downwards.
    pub branch: i64,
    /// `a_l^{2l+1}` the level was solved for (`±inf` at unitarity).
    pub a_pow: f64,
    /// Scale-free residual of the trap equation at `ν` for this `a_pow`.
    pub residual: f64,
}

/// A level solved simultaneously with the energy-dependent scattering length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfConsistentLevel {
    pub level: TrapLevel,
    pub a_pow_at_e: f64,
    pub residual: f64,
    pub well: StepWell,
    /// Root sits on a simultaneous zero of a pole-free factor and its coefficient.
    pub flagged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveFunctionSample {
    pub r: f64,
    pub u: f64,
}

fn parity(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_l(op: &'static str, l: usize) -> Result<()> {
    if l > BESSEL_MAX_ORDER {
        return Err(Error::domain(op, format!("l = {l} too large")));
    }
    Ok(())
}

fn check_window(op: &'static str, window: (f64, f64)) -> Result<()> {
    let (lo, hi) = window;
    if !(lo < hi && lo >= -MAX_WINDOW && hi <= MAX_WINDOW) {
        return Err(Error::domain(op, format!("window [{lo}, {hi}] not an interval inside [-40, 40]")));
    }
    Ok(())
}

pub fn nu_of_energy(l: usize, e: f64) -> f64 {
    0.5 * (e - l as f64 - 1.5)
}

pub fn energy_of_nu(l: usize, nu: f64) -> f64 {
    2.0 * nu + l as f64 + 1.5
}

/// `A_l = (π/2)(-1)^l [(2l+1)!!]² / Γ(l+3/2)²`.
pub fn trap_coefficient(l: usize) -> f64 {
    let g = gamma_real(l as f64 + 1.5).expect("gamma at a positive half-integer");
    let df = dfact_odd(l);
    0.5 * PI * parity(l) * df * df / (g * g)
}

/// Left side of the trap eigenvalue equation as the entire pair
/// `(A_l rγ(-ν-l-1/2), rγ(-ν))`.
pub fn eigenvalue_lhs(l: usize, nu: f64) -> Result<ProjectivePair> {
    check_l("eigenvalue_lhs", l)?;
    if !(nu.abs() <= MAX_NU) {
        return Err(Error::domain("eigenvalue_lhs", format!("|ν| = {} exceeds {MAX_NU}", nu.abs())));
    }
    ProjectivePair::new(
        trap_coefficient(l) * reciprocal_gamma(-nu - l as f64 - 0.5),
        reciprocal_gamma(-nu),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Form {
    Direct,
    Reciprocal,
}

fn default_form(a_pow: f64) -> Form {
    if a_pow.abs() <= 1.0 {
        Form::Direct
    } else {
        Form::Reciprocal
    }
}

/// The two terms of the pole-free root function, `W = t₁ - t₂`.
fn fixed_a_terms(l: usize, a_pow: f64, nu: f64, form: Form) -> (f64, f64) {
    let (g1, g0) = lhs_terms(l, nu);
    if a_pow.is_infinite() {
        return (g1, 0.0);
    }
    match form {
        Form::Direct => (a_pow * g1, g0),
        Form::Reciprocal => (g1, g0 / a_pow),
    }
}

/// `(A_l rγ(-ν-l-1/2), rγ(-ν))` without normalisation.
fn lhs_terms(l: usize, nu: f64) -> (f64, f64) {
    (trap_coefficient(l) * reciprocal_gamma(-nu - l as f64 - 0.5), reciprocal_gamma(-nu))
}

/// `|n g₁ - d g₀| / (|(n, d)| (|g₁| + |g₀|))`, a scale-free distance between the pair
/// `(n, d)` and the trap left side `(g₁, g₀)`.
fn projective_residual(n: f64, d: f64, g1: f64, g0: f64) -> f64 {
    let scale = n.hypot(d) * (g1.abs() + g0.abs());
    if scale == 0.0 {
        0.0
    } else {
        (n * g1 - d * g0).abs() / scale
    }
}

/// Residual of the trap equation at `ν` for a fixed `a_l^{2l+1}`.
pub fn fixed_a_residual(l: usize, a_pow: f64, nu: f64) -> f64 {
    let (g1, g0) = lhs_terms(l, nu);
    if a_pow.is_infinite() {
        projective_residual(1.0, 0.0, g1, g0)
    } else {
        projective_residual(a_pow, 1.0, g1, g0)
    }
}

/// Branch labels for roots sorted by `ν`.
fn branches(nus: &[f64]) -> Vec<i64> {
    let below = nus.iter().filter(|&&nu| nu < 0.0).count() as i64;
    let mut neg = 0;
    nus.iter()
        .map(|&nu| {
            if nu >= 0.0 {
                nu.floor() as i64
            } else {
                neg += 1;
                neg - 1 - below
            }
        })
        .collect()
}

fn fixed_a_roots(l: usize, a_pow: f64, window: (f64, f64), form: Form) -> Result<Vec<TrapLevel>> {
    check_l("levels_fixed_a", l)?;
    check_window("levels_fixed_a", window)?;
    if a_pow.is_nan() {
        return Err(Error::domain("levels_fixed_a", "a_pow is NaN"));
    }
    let nu_lo = nu_of_energy(l, window.0);
    let nu_hi = nu_of_energy(l, window.1);
    let nus: Vec<f64> = if a_pow == 0.0 {
        let first = nu_lo.max(0.0).ceil() as i64;
        let last = nu_hi.floor() as i64;
        (first..=last).map(|n| n as f64).collect()
    } else {
        // scanning up to ν = 0 keeps the negative branch labels window independent
        let grid = uniform_grid(nu_lo, nu_hi.max(0.0), NU_SCAN_STEP);
        let f = |nu: f64| {
            let (t1, t2) = fixed_a_terms(l, a_pow, nu, form);
            t1 - t2
        };
        scan_roots("levels_fixed_a", f, &grid, 0.0)?
    };
    let labels = branches(&nus);
    Ok(nus
        .iter()
        .zip(labels)
        .filter(|(&nu, _)| nu >= nu_lo && nu <= nu_hi)
        .map(|(&nu, branch)| TrapLevel {
            l,
            nu,
            energy: energy_of_nu(l, nu),
            branch,
            a_pow,
            residual: fixed_a_residual(l, a_pow, nu),
        })
        .collect())
}

/// Trap levels for a constant `a_l^{2l+1}` (`±inf` for unitarity) with energy in
/// `window`, sorted by energy.
pub fn levels_fixed_a(l: usize, a_pow: f64, window: (f64, f64)) -> Result<Vec<TrapLevel>> {
    fixed_a_roots(l, a_pow, window, default_form(a_pow))
}

/// Scattering-length pair with a single orientation on both sides of threshold.
struct OrientedScattering<'a> {
    l: usize,
    well: &'a StepWell,
    below_sign: f64,
}

impl<'a> OrientedScattering<'a> {
    const THRESHOLD_GAP: f64 = 1e-9;

    fn new(l: usize, well: &'a StepWell) -> Result<Self> {
        let up = scattering_length_pow(l, well, 1e-6)?.a_pair;
        let down = scattering_length_pow(l, well, -1e-6)?.a_pair;
        let dot = up.num * down.num + up.den * down.den;
        Ok(OrientedScattering { l, well, below_sign: if dot < 0.0 { -1.0 } else { 1.0 } })
    }

    fn pair(&self, e: f64) -> Result<(f64, f64)> {
        let e = if e.abs() < Self::THRESHOLD_GAP {
            Self::THRESHOLD_GAP.copysign(if e == 0.0 { 1.0 } else { e })
        } else {
            e
        };
        let p = scattering_length_pow(self.l, self.well, e)?.a_pair;
        let s = if e < 0.0 { self.below_sign } else { 1.0 };
        Ok((s * p.num, s * p.den))
    }

    fn terms(&self, e: f64) -> Result<(f64, f64)> {
        let (n, d) = self.pair(e)?;
        let (g1, g0) = lhs_terms(self.l, nu_of_energy(self.l, e));
        Ok((n * g1, d * g0))
    }
}

fn nearest_distance(x: f64, offset: f64) -> f64 {
    let m = (x - offset).round().max(0.0);
    (x - offset - m).abs()
}

/// Trap levels solved self-consistently with the exact energy-dependent
/// scattering length of `well`.
pub fn self_consistent_levels(l: usize, well: &StepWell, window: (f64, f64)) -> Result<Vec<SelfConsistentLevel>> {
    check_l("self_consistent_levels", l)?;
    check_window("self_consistent_levels", window)?;
    let sc = OrientedScattering::new(l, well)?;
    let top = window.1.max(energy_of_nu(l, 0.0));
    let grid = uniform_grid(window.0, top, ENERGY_SCAN_STEP);

    let mut failure = None;
    let f = |e: f64| match sc.terms(e) {
        Ok((t1, t2)) => t1 - t2,
        Err(err) => {
            failure.get_or_insert(err);
            f64::NAN
        }
    };
    let roots = scan_roots("self_consistent_levels", f, &grid, 0.0);
    if let Some(err) = failure {
        return Err(err);
    }
    let roots = roots?;

    let nus: Vec<f64> = roots.iter().map(|&e| nu_of_energy(l, e)).collect();
    let labels = branches(&nus);
    let dnu = SPURIOUS_GUARD;
    let mut out = Vec::new();
    for ((&e, &nu), branch) in roots.iter().zip(&nus).zip(labels) {
        if e < window.0 || e > window.1 {
            continue;
        }
        let (n, d) = sc.pair(e)?;
        let a_pow = if d == 0.0 { f64::INFINITY.copysign(n) } else { n / d };
        let (lo, hi) = (sc.pair(e - 2.0 * dnu)?, sc.pair(e + 2.0 * dnu)?);
        let num_crosses = lo.0.signum() != hi.0.signum() || n == 0.0;
        let den_crosses = lo.1.signum() != hi.1.signum() || d == 0.0;
        let flagged = (num_crosses && nearest_distance(nu, 0.0) <= dnu)
            || (den_crosses && nearest_distance(nu, -(l as f64) - 0.5) <= dnu);
        let (g1, g0) = lhs_terms(l, nu);
        let residual = projective_residual(n, d, g1, g0);
        out.push(SelfConsistentLevel {
            level: TrapLevel {
                l,
                nu,
                energy: energy_of_nu(l, nu),
                branch,
                a_pow,
                residual: fixed_a_residual(l, a_pow, nu),
            },
            a_pow_at_e: a_pow,
            residual,
            well: *well,
            flagged,
        });
    }
    Ok(out)
}

/// Exact and small-`s` continuity ratios `B/A'` of the inside and outside trap
/// solutions at the shell, with the outside written as `A' C_l U(-ν, l+3/2, r²)`.
///
/// The regular part of `C_l U` is `-M`, so the small-`s` form is
/// `B/A' ≈ -1 + C_l Γ(l+3/2) / ((l+1/2) Γ(-ν) s^{2l+1})`.
pub fn trap_continuity_ratio(l: usize, nu: f64, s: f64) -> Result<(f64, f64)> {
    let b = l as f64 + 1.5;
    let z = s * s;
    let rg1 = reciprocal_gamma(-nu - l as f64 - 0.5);
    let cu = tricomi_u(-nu, b, z)?.f * shell_constant(l, nu)?;
    let exact = cu / kummer_m(-nu, b, z)?.f;
    let g = gamma_real(b)?;
    let singular = parity(l) * g * g * reciprocal_gamma(-nu) / (PI * (l as f64 + 0.5) * rg1);
    Ok((exact, -1.0 + singular / s.powi(2 * l as i32 + 1)))
}

/// `C_l = (-1)^l Γ(l+3/2) Γ(-ν-l-1/2) / π`.
fn shell_constant(l: usize, nu: f64) -> Result<f64> {
    let rg1 = reciprocal_gamma(-nu - l as f64 - 0.5);
    if rg1 == 0.0 {
        return Err(Error::domain("shell_constant", "C_l diverges at unitarity"));
    }
    Ok(parity(l) * gamma_real(l as f64 + 1.5)? / (PI * rg1))
}

/// Pseudo wave function `u = r R` of a trap level on `r_grid`, normalised with the
/// trapezoid rule on the grid.
///
/// Inside the shell `B M(-ν, l+3/2, r²)`, outside `A' C_l U(-ν, l+3/2, r²)` (both times
/// `r^{l+1} e^{-r²/2}`), with `B` fixed by continuity at `r = s`.
pub fn pseudo_wavefunction(level: &TrapLevel, s: f64, r_grid: &[f64]) -> Result<Vec<WaveFunctionSample>> {
    let op = "pseudo_wavefunction";
    let l = level.l;
    check_l(op, l)?;
    if !(s > 0.0 && s <= 1e-2) {
        return Err(Error::domain(op, format!("shell radius {s} outside (0, 1e-2]")));
    }
    if r_grid.len() < 2 || r_grid[0] <= 0.0 || r_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain(op, "grid must be positive and strictly increasing"));
    }
    if (level.energy - energy_of_nu(l, level.nu)).abs() > 1e-12 * level.energy.abs().max(1.0) {
        return Err(Error::domain(op, "energy and ν disagree"));
    }
    let residual = fixed_a_residual(l, level.a_pow, level.nu);
    if !(residual <= EIGEN_RESIDUAL_TOL) {
        return Err(Error::NotEigenvalue { op, residual });
    }
    let nu = level.nu;
    let b = l as f64 + 1.5;
    // only the sign of A' C_l matters after normalisation
    let rg1 = reciprocal_gamma(-nu - l as f64 - 0.5);
    let sign = parity(l) * if rg1 < 0.0 { -1.0 } else { 1.0 };
    let outside = |r: f64| -> Result<f64> { Ok(sign * tricomi_u(-nu, b, r * r)?.f) };
    let inside_scale = outside(s)? / kummer_m(-nu, b, s * s)?.f;
    let raw: Vec<f64> = r_grid
        .iter()
        .map(|&r| {
            let bracket = if r < s { inside_scale * kummer_m(-nu, b, r * r)?.f } else { outside(r)? };
            Ok(r.powi(l as i32 + 1) * (-0.5 * r * r).exp() * bracket)
        })
        .collect::<Result<_>>()?;
    normalise(r_grid, raw)
}

pub(crate) fn normalise(r_grid: &[f64], raw: Vec<f64>) -> Result<Vec<WaveFunctionSample>> {
    let sq: Vec<f64> = raw.iter().map(|u| u * u).collect();
    let norm = trapezoid(r_grid, &sq).sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::domain("normalise", "wave function has no finite norm on the grid"));
    }
    Ok(r_grid.iter().zip(raw).map(|(&r, u)| WaveFunctionSample { r, u: u / norm }).collect())
}

/// Energy `-1/(2a²)` of the δ-shell bound state for the signed scattering length
/// `a_l`. A bound state requires `(-1)^l a_l > 0`.
pub fn delta_bound_energy(l: usize, a_signed: f64) -> Result<f64> {
    if !(parity(l) * a_signed > 0.0) || !a_signed.is_finite() {
        return Err(Error::domain(
            "delta_bound_energy",
            format!("no δ-shell bound state for l = {l}, a = {a_signed}"),
        ));
    }
    Ok(-0.5 / (a_signed * a_signed))
}

/// `2(l+1)(2l-1)!!` and `(2l)!!`, the zero-range coupling over π.
fn zero_range_rational(l: usize) -> (f64, f64) {
    let odd_below = if l == 0 { 1.0 } else { dfact_odd(l - 1) };
    (2.0 * (l + 1) as f64 * odd_below, dfact_even(l))
}

/// `2(2l+1)!!` and `(2l)!!`, the δ-shell coupling `4π·½(2l+1)!!/(2l)!!` over π.
fn shell_rational(l: usize) -> (f64, f64) {
    (2.0 * dfact_odd(l), dfact_even(l))
}

/// Coupling prefactor of the regularised zero-range pseudopotential, `2π(l+1)(2l-1)!!/(2l)!!`.
pub fn zero_range_prefactor(l: usize) -> f64 {
    let (num, den) = zero_range_rational(l);
    PI * num / den
}

/// Coupling prefactor of the δ-shell operator, `½(2l+1)!!/(2l)!!`, expressed with
/// the `4π` normalisation of a three-dimensional δ function.
pub fn shell_prefactor(l: usize) -> f64 {
    let (num, den) = shell_rational(l);
    PI * num / den
}

/// Ratio of the zero-range coupling to the δ-shell coupling. The common factor π
/// is cancelled before dividing, so for `l ≤ 8` the result is the correctly
/// rounded rational.
pub fn prefactor_ratio(l: usize) -> f64 {
    let (zn, zd) = zero_range_rational(l);
    let (sn, sd) = shell_rational(l);
    (zn * sd) / (zd * sn)
}

/// First-order trap shift of a free bound state: `⟨r²/2⟩` in the finite-`s` δ-shell
/// state minus `⟨r²/2⟩` in the bound state of the well.
///
/// Returns `(ΔE, shell_term, well_term)`.
pub fn perturbative_shift(l: usize, well: &StepWell, e_b: f64, s: f64) -> Result<(f64, f64, f64)> {
    let op = "perturbative_shift";
    check_l(op, l)?;
    if !(1e-4..=1e-1).contains(&s) {
        return Err(Error::domain(op, format!("shell radius {s} outside [1e-4, 1e-1]")));
    }
    check_bound_state(op, l, well, e_b)?;
    let kappa = (-2.0 * e_b).sqrt();
    let shell = radial_moment(l, kappa, s, 1, |r| Ok(mod_sph_bessel_ik(l, kappa * r)?.0.f))?;
    let well_term = well_state_moment(l, well, e_b)?;
    Ok((shell - well_term, shell, well_term))
}

fn check_bound_state(op: &'static str, l: usize, well: &StepWell, e_b: f64) -> Result<()> {
    if !(e_b < 0.0 && e_b > -well.depth) {
        return Err(Error::domain(op, format!("E_b = {e_b} is not inside (-V0, 0)")));
    }
    let lo = (e_b - 1e-4).max(-well.depth);
    let hi = (e_b + 1e-4).min(0.0);
    let found = well_bound_states(l, well, lo, hi)?;
    let tol = 1e-7 * e_b.abs().max(1.0);
    if !found.iter().any(|&e| (e - e_b).abs() <= tol) {
        return Err(Error::domain(op, format!("E_b = {e_b} is not a bound state of the well")));
    }
    Ok(())
}

/// `⟨r²/2⟩` in the normalised free bound state of `well` at energy `e_b`.
pub fn well_state_moment(l: usize, well: &StepWell, e_b: f64) -> Result<f64> {
    check_l("well_state_moment", l)?;
    check_bound_state("well_state_moment", l, well, e_b)?;
    let kappa = (-2.0 * e_b).sqrt();
    let q = (2.0 * (e_b + well.depth)).sqrt();
    let d = well.range;
    let inside_panels = ((q * d / 0.5).ceil() as usize).max(1);
    radial_moment(l, kappa, d, inside_panels, |r| Ok(sph_bessel_jn(l, q * r)?.0.f))
}

/// `⟨r²/2⟩` for `R = c·inner(r)` on `[0, m]` and `R = k_l(κr)` beyond, continuous at
/// `m`, integrated with `inner_panels` equal panels inside.
fn radial_moment<F>(l: usize, kappa: f64, m: f64, inner_panels: usize, inner: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let outer = |r: f64| -> Result<f64> { Ok(mod_sph_bessel_ik(l, kappa * r)?.1.f) };
    let c = outer(m)? / inner(m)?;
    let u_in = |r: f64| inner(r).map_or(f64::NAN, |v| c * v * r);
    let u_out = |r: f64| outer(r).map_or(f64::NAN, |v| v * r);

    let quad = Composite::new(20);
    let inner_breaks: Vec<f64> = (0..=inner_panels).map(|i| m * i as f64 / inner_panels as f64).collect();
    let outer_breaks = graded_breaks(m, m + 40.0 / kappa, 0.25 * m, 1.5, 0.25 / kappa);
    let moment = |u: &dyn Fn(f64) -> f64, breaks: &[f64], p: i32| {
        quad.integrate(|r| r.powi(p) * u(r).powi(2), breaks)
    };
    let norm = moment(&u_in, &inner_breaks, 0) + moment(&u_out, &outer_breaks, 0);
    let r2 = moment(&u_in, &inner_breaks, 2) + moment(&u_out, &outer_breaks, 2);
    let v = 0.5 * r2 / norm;
    if !v.is_finite() {
        return Err(Error::domain("perturbative_shift", "bound-state moment is not finite"));
    }
    Ok(v)
}
