use super::{gamma_real, reciprocal_gamma, KummerValue};
use crate::error::{Error, Result};

/// Maximum number of Taylor terms summed for `M`.
pub const KUMMER_TERM_CAP: usize = 500;

const EPS: f64 = f64::EPSILON;
const M_TOL: f64 = 1e-9;
const CONNECTION_TOL: f64 = 1e-6;
const ASYMPTOTIC_FROM: f64 = 10.0;

fn validate_m(op: &'static str, a: f64, b: f64, z: f64) -> Result<()> {
    if a.is_nan() || b.is_nan() || z.is_nan() {
        return Err(Error::domain(op, "NaN argument"));
    }
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::domain(op, format!("b = {b} is a non-positive integer")));
    }
    if !(0.0..=100.0).contains(&z) {
        return Err(Error::domain(op, format!("z = {z} outside [0, 100]")));
    }
    Ok(())
}

/// Taylor series of `M(a, b, z)` with Neumaier-compensated summation.
///
/// Returns the value and a running estimate of its absolute rounding error.
pub fn kummer_m_estimate(a: f64, b: f64, z: f64) -> Result<(f64, f64)> {
    validate_m("kummer_m", a, b, z)?;
    if z == 0.0 {
        return Ok((1.0, 0.0));
    }
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut comp = 0.0_f64;
    let mut weighted_abs = 1.0_f64;
    for k in 0..KUMMER_TERM_CAP {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        weighted_abs += (kf + 2.0) * term.abs();
        if term == 0.0 || (term.abs() <= 0.25 * EPS * (sum + comp).abs() && kf > z) {
            let value = sum + comp;
            return Ok((value, EPS * weighted_abs));
        }
    }
    Err(Error::Precision { op: "kummer_m", estimate: f64::INFINITY })
}

fn m_checked(a: f64, b: f64, z: f64) -> Result<f64> {
    let (v, err) = kummer_m_estimate(a, b, z)?;
    if err > M_TOL * v.abs().max(1.0) {
        return Err(Error::Precision { op: "kummer_m", estimate: err / v.abs().max(1.0) });
    }
    Ok(v)
}

/// Kummer's function `M(a, b, z)` and `dM/dz = (a/b) M(a+1, b+1, z)` for `0 ≤ z ≤ 100`.
///
/// Fails with [`Error::Precision`] when the summation error estimate exceeds `1e-9`
/// relative to `max(|M|, 1)`.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<KummerValue> {
    let f = m_checked(a, b, z)?;
    let df = if a == 0.0 { 0.0 } else { a / b * m_checked(a + 1.0, b + 1.0, z)? };
    Ok(KummerValue { f, df })
}

fn validate_u(op: &'static str, a: f64, b: f64, z: f64) -> Result<()> {
    if a.is_nan() || b.is_nan() || z.is_nan() {
        return Err(Error::domain(op, "NaN argument"));
    }
    if !(b > 0.0 && (b - 0.5).fract() == 0.0) {
        return Err(Error::domain(op, format!("b = {b} is not a positive half-integer")));
    }
    if !(z > 0.0) {
        return Err(Error::domain(op, format!("z = {z} must be positive")));
    }
    Ok(())
}

/// Two-term connection formula
/// `U = Γ(1-b)/Γ(a+1-b) M(a,b,z) + Γ(b-1)/Γ(a) z^{1-b} M(a+1-b, 2-b, z)`.
/// Returns `(U, absolute error estimate)`.
fn connection_value(a: f64, b: f64, z: f64) -> Result<(f64, f64)> {
    let c1 = gamma_real(1.0 - b)? * reciprocal_gamma(a + 1.0 - b);
    let c2 = gamma_real(b - 1.0)? * reciprocal_gamma(a) * z.powf(1.0 - b);
    let (t1, e1) = if c1 == 0.0 { (0.0, 0.0) } else {
        let (m, e) = kummer_m_estimate(a, b, z)?;
        (c1 * m, (c1 * e).abs())
    };
    let (t2, e2) = if c2 == 0.0 { (0.0, 0.0) } else {
        let (m, e) = kummer_m_estimate(a + 1.0 - b, 2.0 - b, z)?;
        (c2 * m, (c2 * e).abs())
    };
    let v = t1 + t2;
    Ok((v, e1 + e2 + 4.0 * EPS * (t1.abs() + t2.abs())))
}

/// Tricomi's `U` from the connection formula alone, refusing results whose estimated
/// cancellation error exceeds `1e-6` relative.
pub fn tricomi_u_connection(a: f64, b: f64, z: f64) -> Result<KummerValue> {
    validate_u("tricomi_u", a, b, z)?;
    let strict = |a: f64, b: f64| -> Result<f64> {
        let (v, e) = connection_value(a, b, z)?;
        if e > CONNECTION_TOL * v.abs() {
            return Err(Error::Precision { op: "tricomi_u", estimate: e / v.abs() });
        }
        Ok(v)
    };
    let f = strict(a, b)?;
    let df = if a == 0.0 { 0.0 } else { -a * strict(a + 1.0, b + 1.0)? };
    Ok(KummerValue { f, df })
}

/// Large-`z` expansion `U ~ z^{-a} Σ (a)_k (a-b+1)_k / k! (-z)^{-k}`, truncated at
/// its smallest term. Returns `(U, relative error estimate)`.
fn asymptotic_value(a: f64, b: f64, z: f64) -> (f64, f64) {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut est = 0.0;
    for k in 0..400 {
        let kf = k as f64;
        let next = term * (a + kf) * (a - b + 1.0 + kf) / ((kf + 1.0) * -z);
        if next == 0.0 {
            est = 0.0;
            break;
        }
        if k > 0 && next.abs() >= term.abs() {
            est = next.abs();
            break;
        }
        sum += next;
        term = next;
        est = next.abs();
        if next.abs() <= EPS * sum.abs() {
            break;
        }
    }
    ((-a * z.ln()).exp() * sum, est / sum.abs())
}

/// Integrates Kummer's equation `z w'' + (b - z) w' - a w = 0` inward from a point
/// where the asymptotic expansion is accurate. Inward, `U` is the growing solution,
/// so the integration is stable.
fn ode_value(a: f64, b: f64, z: f64) -> Result<(f64, f64)> {
    let mut start = None;
    let mut zf = (2.0 * z).max(20.0);
    while zf <= 400.0 {
        let (w, e0) = asymptotic_value(a, b, zf);
        let (w1, e1) = asymptotic_value(a + 1.0, b + 1.0, zf);
        if e0 <= 1e-13 && e1 <= 1e-13 {
            start = Some((zf, w, -a * w1));
            break;
        }
        zf += 10.0;
    }
    let (mut x, mut w, mut dw) =
        start.ok_or(Error::Precision { op: "tricomi_u", estimate: f64::INFINITY })?;
    let rhs = |x: f64, w: f64, dw: f64| ((x - b) * dw + a * w) / x;
    while x > z {
        let h = (0.01_f64).min(0.005 * x).min(x - z);
        let h = -h;
        let (k1w, k1d) = (dw, rhs(x, w, dw));
        let (k2w, k2d) = (dw + 0.5 * h * k1d, rhs(x + 0.5 * h, w + 0.5 * h * k1w, dw + 0.5 * h * k1d));
        let (k3w, k3d) = (dw + 0.5 * h * k2d, rhs(x + 0.5 * h, w + 0.5 * h * k2w, dw + 0.5 * h * k2d));
        let (k4w, k4d) = (dw + h * k3d, rhs(x + h, w + h * k3w, dw + h * k3d));
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        dw += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        x += h;
        if x - z < 1e-14 * z {
            break;
        }
    }
    Ok((w, dw))
}

/// `U(-n, b, z) = (-1)^n n! L_n^{(b-1)}(z)` by the Laguerre recurrence.
fn laguerre_u(n: usize, b: f64, z: f64) -> f64 {
    let alpha = b - 1.0;
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = -(2.0 * kf + 1.0 + alpha - z) * cur - (kf + alpha) * kf * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Tricomi's function `U(a, b, z)` and `dU/dz = -a U(a+1, b+1, z)` for half-integer `b`
/// and any `z > 0`.
///
/// Non-positive integer `a` gives a Laguerre polynomial, evaluated by recurrence.
/// Otherwise the connection formula is used where its cancellation error is acceptable; for
/// larger `z` the asymptotic expansion takes over, and the gap between the two is
/// bridged by integrating Kummer's equation inward from the asymptotic region.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<KummerValue> {
    validate_u("tricomi_u", a, b, z)?;
    if a <= 0.0 && a.fract() == 0.0 && a >= -150.0 {
        let n = (-a) as usize;
        let df = if n == 0 { 0.0 } else { n as f64 * laguerre_u(n - 1, b + 1.0, z) };
        return Ok(KummerValue { f: laguerre_u(n, b, z), df });
    }
    let conn_tol = if z <= ASYMPTOTIC_FROM { CONNECTION_TOL } else { 1e-10 };
    let try_conn = |a: f64, b: f64| -> Result<Option<f64>> {
        if z > 100.0 {
            return Ok(None);
        }
        let (v, e) = connection_value(a, b, z)?;
        Ok((e <= conn_tol * v.abs()).then_some(v))
    };
    if let Some(f) = try_conn(a, b)? {
        if a == 0.0 {
            return Ok(KummerValue { f, df: 0.0 });
        }
        if let Some(g) = try_conn(a + 1.0, b + 1.0)? {
            return Ok(KummerValue { f, df: -a * g });
        }
    }
    if z >= ASYMPTOTIC_FROM {
        let (f, e0) = asymptotic_value(a, b, z);
        let (g, e1) = asymptotic_value(a + 1.0, b + 1.0, z);
        if e0 <= 1e-12 && e1 <= 1e-12 {
            return Ok(KummerValue { f, df: -a * g });
        }
    }
    let (f, df) = ode_value(a, b, z)?;
    Ok(KummerValue { f, df })
}
