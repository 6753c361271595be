use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation with g = 671/128 and 14 terms; ~1e-15 relative for x > 0.
const LANCZOS_G: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// `sin(πx)`, exactly zero at integers.
pub fn sin_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        return 0.0;
    }
    // reduce to r in [-1, 1]
    let mut r = x - 2.0 * (0.5 * x).round();
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

fn gamma_positive(x: f64) -> f64 {
    #[allow(clippy::excessive_precision)]
    let mut ser = 0.999_999_999_999_997_092;
    let mut y = x;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    let t = x + LANCZOS_G;
    let p = t.powf(0.5 * (x + 0.5));
    SQRT_2PI * ser / x * p * ((-t).exp() * p)
}

/// The gamma function for real arguments; non-positive integers are rejected.
pub fn gamma_real(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("gamma_real", "NaN argument"));
    }
    if x <= 0.0 && x.fract() == 0.0 {
        return Err(Error::domain("gamma_real", format!("pole at x = {x}")));
    }
    Ok(if x < 0.5 {
        PI / (sin_pi(x) * gamma_positive(1.0 - x))
    } else {
        gamma_positive(x)
    })
}

/// `1/Γ(x)`, entire; zero at the poles of Γ. NaN maps to NaN.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if x < 0.5 {
        sin_pi(x) * gamma_positive(1.0 - x) / PI
    } else {
        1.0 / gamma_positive(x)
    }
}
