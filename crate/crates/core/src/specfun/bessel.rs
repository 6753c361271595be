use super::{dfact_odd, BesselPairValue};
use crate::error::{Error, Result};

/// Highest supported order for all spherical Bessel families.
pub const BESSEL_MAX_ORDER: usize = 10;

const SERIES_BELOW: f64 = 1e-3;
const RESCALE: f64 = 1e250;

fn check(op: &'static str, l: usize, x: f64, x_max: f64) -> Result<()> {
    if x.is_nan() {
        return Err(Error::domain(op, "NaN argument"));
    }
    if l > BESSEL_MAX_ORDER {
        return Err(Error::domain(op, format!("order {l} > {BESSEL_MAX_ORDER}")));
    }
    if !(x > 0.0) {
        return Err(Error::domain(op, format!("argument {x} must be positive")));
    }
    if x > x_max {
        return Err(Error::domain(op, format!("argument {x} exceeds {x_max}")));
    }
    Ok(())
}

/// Power series `j_l(x) = x^l/(2l+1)!! Σ (-x²/2)^m / (m! (2l+3)(2l+5)…(2l+2m+1))`.
fn j_series(l: usize, x: f64) -> f64 {
    let y = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..60 {
        term *= y / (m as f64 * (2 * (l + m) + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    x.powi(l as i32) / dfact_odd(l) * sum
}

fn j1_direct(x: f64) -> f64 {
    if x < 1.0 {
        j_series(1, x)
    } else {
        x.sin() / (x * x) - x.cos() / x
    }
}

/// `j_0 … j_{l+1}` at `x`.
fn j_orders(l: usize, x: f64) -> Vec<f64> {
    let top = l + 1;
    if x < SERIES_BELOW {
        return (0..=top).map(|m| j_series(m, x)).collect();
    }
    let j0 = x.sin() / x;
    let j1 = j1_direct(x);
    let mut out = vec![0.0; top + 1];
    out[0] = j0;
    out[1] = j1;
    if x > top as f64 {
        // upward recurrence is stable once x exceeds the order
        for m in 1..top {
            out[m + 1] = (2 * m + 1) as f64 / x * out[m] - out[m - 1];
        }
        return out;
    }
    // Miller's downward recurrence, normalised against j0 or j1.
    let start = top + 25 + x.ceil() as usize;
    let (mut above, mut here) = (0.0_f64, 1e-30_f64);
    let mut raw = vec![0.0; top + 1];
    for m in (1..=start).rev() {
        let below = (2 * m + 1) as f64 / x * here - above;
        above = here;
        here = below;
        if m - 1 <= top {
            raw[m - 1] = here;
        }
        if m <= top {
            raw[m] = above;
        }
        if here.abs() > RESCALE {
            here /= RESCALE;
            above /= RESCALE;
            for v in raw.iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    let scale = if j0.abs() >= j1.abs() { j0 / raw[0] } else { j1 / raw[1] };
    for m in 2..=top {
        out[m] = raw[m] * scale;
    }
    out
}

/// `n_0 … n_{l+1}` at `x` by upward recurrence.
fn n_orders(l: usize, x: f64) -> Vec<f64> {
    let top = l + 1;
    let (s, c) = x.sin_cos();
    let mut out = vec![0.0; top + 1];
    out[0] = -c / x;
    out[1] = -c / (x * x) - s / x;
    for m in 1..top {
        out[m + 1] = (2 * m + 1) as f64 / x * out[m] - out[m - 1];
    }
    out
}

/// Spherical Bessel `j_l` and Neumann `n_l` with their derivatives.
///
/// Domain: `0 ≤ l ≤ 10`, `0 < x ≤ 1e3`.
pub fn sph_bessel_jn(l: usize, x: f64) -> Result<(BesselPairValue, BesselPairValue)> {
    check("sph_bessel_jn", l, x, 1e3)?;
    let j = j_orders(l, x);
    let n = n_orders(l, x);
    let lf = l as f64;
    // f_l' = (l/x) f_l - f_{l+1}
    let jv = BesselPairValue { f: j[l], df: lf / x * j[l] - j[l + 1] };
    let nv = BesselPairValue { f: n[l], df: lf / x * n[l] - n[l + 1] };
    Ok((jv, nv))
}

/// Modified spherical Bessel functions `i_l` (`i_0 = sinh x / x`) and
/// `k_l` (`k_0 = e^{-x}/x`) with their derivatives.
///
/// Domain: `0 ≤ l ≤ 10`, `0 < x ≤ 100`; larger arguments are refused rather than
/// overflowing.
pub fn mod_sph_bessel_ik(l: usize, x: f64) -> Result<(BesselPairValue, BesselPairValue)> {
    check("mod_sph_bessel_ik", l, x, 100.0)?;
    let top = l + 1;

    // ratios r_m = i_{m+1}/i_m from the continued fraction
    // r_{m-1} = 1 / ((2m+1)/x + r_m), started far above the needed order
    let start = top + 30 + 2 * x.ceil() as usize;
    let mut ratio = 0.0;
    let mut ratios = vec![0.0; top];
    for m in (1..=start).rev() {
        ratio = 1.0 / ((2 * m + 1) as f64 / x + ratio);
        if m - 1 < top {
            ratios[m - 1] = ratio;
        }
    }
    let i0 = if x < 1e-8 { 1.0 } else { x.sinh() / x };
    let mut i = vec![i0; top + 1];
    for m in 0..top {
        i[m + 1] = i[m] * ratios[m];
    }

    let e = (-x).exp();
    let mut k = vec![0.0; top + 1];
    k[0] = e / x;
    k[1] = e * (1.0 / x + 1.0 / (x * x));
    for m in 1..top {
        k[m + 1] = k[m - 1] + (2 * m + 1) as f64 / x * k[m];
    }

    let lf = l as f64;
    let iv = BesselPairValue { f: i[l], df: lf / x * i[l] + i[l + 1] };
    let kv = BesselPairValue { f: k[l], df: lf / x * k[l] - k[l + 1] };
    Ok((iv, kv))
}
