//! Special-function kernels used by every other module.
//!
//! Conventions:
//!
//! * `j_l`, `n_l` are the spherical Bessel and Neumann functions with
//!   `j_0(x) = sin x / x` and `n_0(x) = -cos x / x`.
//! * `i_l`, `k_l` are modified spherical Bessel functions normalised so that
//!   `i_0(x) = sinh x / x` and `k_0(x) = e^{-x} / x`. With this choice
//!   `j_l(ix) = i^l i_l(x)` and `h_l^{(1)}(ix) = -i^{-l} k_l(x)`.
//! * `M(a, b, z)` is Kummer's function and `U(a, b, z)` Tricomi's function.
//!
//! All derivatives are taken with respect to the function's own argument.

mod bessel;
mod gamma;
mod kummer;

pub use bessel::{mod_sph_bessel_ik, sph_bessel_jn, BESSEL_MAX_ORDER};
pub use gamma::{gamma_real, reciprocal_gamma, sin_pi};
pub use kummer::{kummer_m, kummer_m_estimate, tricomi_u, tricomi_u_connection, KUMMER_TERM_CAP};

use crate::error::{Error, Result};

/// A function value together with its derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPairValue {
    pub f: f64,
    pub df: f64,
}

/// Value of `M` or `U` and its derivative with respect to `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerValue {
    pub f: f64,
    pub df: f64,
}

/// `n!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<f64> {
    if n < -1 {
        return Err(Error::domain("double_factorial", format!("n = {n} < -1")));
    }
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    Ok(acc)
}

/// `(2l+1)!!` for a non-negative order; infallible helper.
pub(crate) fn dfact_odd(l: usize) -> f64 {
    (1..=(2 * l + 1)).step_by(2).map(|k| k as f64).product()
}

/// `(2l)!!` for a non-negative order; infallible helper.
pub(crate) fn dfact_even(l: usize) -> f64 {
    (1..=l).map(|k| (2 * k) as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorial_conventions() {
        assert_eq!(double_factorial(-1).unwrap(), 1.0);
        assert_eq!(double_factorial(0).unwrap(), 1.0);
        assert_eq!(double_factorial(7).unwrap(), 105.0);
        assert_eq!(double_factorial(8).unwrap(), 384.0);
        assert_eq!(double_factorial(30).unwrap(), 42_849_873_690_624_000.0);
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn helpers_agree_with_double_factorial() {
        for l in 0..8usize {
            let li = l as i64;
            assert_eq!(dfact_odd(l), double_factorial(2 * li + 1).unwrap());
            assert_eq!(dfact_even(l), double_factorial(2 * li).unwrap());
        }
    }
}
