mod common;

use common::{factorial, gamma_oracle, jn_closed, kummer_m_dd, laguerre};
use deltashell::specfun::{
    gamma_real, kummer_m, mod_sph_bessel_ik, reciprocal_gamma, sph_bessel_jn, tricomi_u,
};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn kummer_m_against_double_double_series() {
    let cases = [
        (-4.3, 3.5, 7.1),
        (-17.8, 1.5, 3.3),
        (2.25, 2.5, 12.0),
        (-0.5, 0.5, 0.9),
        (-40.2, 2.5, 0.16),
        (0.7, 4.5, 25.0),
    ];
    for &(a, b, z) in &cases {
        let got = kummer_m(a, b, z).unwrap().f;
        let want = kummer_m_dd(a, b, z);
        assert!(rel(got, want) < 1e-11, "M({a}, {b}, {z}) = {got}, oracle {want}");
    }
}

#[test]
fn gamma_against_stirling_oracle() {
    for &x in &[0.1, 0.5, 1.5, 2.5, 3.7, 7.25, 12.5, 20.5, -0.3, -1.75, -4.5] {
        let got = gamma_real(x).unwrap();
        assert!(rel(got, gamma_oracle(x)) < 1e-13, "Γ({x})");
        assert!(rel(reciprocal_gamma(x), 1.0 / gamma_oracle(x)) < 1e-13);
    }
}

#[test]
fn bessel_against_closed_forms() {
    for l in 0..3 {
        for &x in &[0.7, 2.0, 9.3, 40.0] {
            let (j, n) = sph_bessel_jn(l, x).unwrap();
            let (jc, nc) = jn_closed(l, x);
            assert!((j.f - jc).abs() < 1e-13 * jc.abs().max(1.0 / x), "j_{l}({x})");
            assert!(rel(n.f, nc) < 1e-12, "n_{l}({x})");
        }
    }
}

#[test]
fn bessel_small_argument_series() {
    for l in 0..6usize {
        for &x in &[1e-3f64, 0.01, 0.05] {
            let dfact: f64 = (1..=2 * l + 1).step_by(2).map(|k| k as f64).product();
            let c = x * x / 2.0;
            let series = x.powi(l as i32) / dfact
                * (1.0 - c / (2 * l + 3) as f64 + c * c / (2.0 * ((2 * l + 3) * (2 * l + 5)) as f64)
                    - c * c * c / (6.0 * ((2 * l + 3) * (2 * l + 5) * (2 * l + 7)) as f64));
            let (j, _) = sph_bessel_jn(l, x).unwrap();
            assert!(rel(j.f, series) < 1e-13, "j_{l}({x}) = {} vs {series}", j.f);
        }
    }
}

#[test]
fn modified_bessel_closed_forms() {
    for &x in &[0.2, 1.0, 5.0, 30.0] {
        let (i, k) = mod_sph_bessel_ik(0, x).unwrap();
        assert!(rel(i.f, x.sinh() / x) < 1e-14);
        assert!(rel(k.f, (-x).exp() / x) < 1e-14);
        let (i1, k1) = mod_sph_bessel_ik(1, x).unwrap();
        assert!(rel(i1.f, x.cosh() / x - x.sinh() / (x * x)) < 1e-12);
        assert!(rel(k1.f, (-x).exp() * (1.0 / x + 1.0 / (x * x))) < 1e-13);
    }
}

#[test]
fn tricomi_u_reduces_to_laguerre() {
    for l in 0..4usize {
        let b = l as f64 + 1.5;
        for n in 0..8usize {
            for &z in &[0.05, 0.8, 3.0, 9.5, 16.0, 30.0] {
                let want = if n % 2 == 0 { 1.0 } else { -1.0 } * factorial(n) * laguerre(n, b - 1.0, z);
                let got = tricomi_u(-(n as f64), b, z).unwrap().f;
                let scale = want.abs().max(factorial(n) * 1e-6);
                assert!((got - want).abs() < 1e-10 * scale, "U(-{n}, {b}, {z}) = {got} vs {want}");
            }
        }
    }
}

#[test]
fn tricomi_u_small_cases() {
    assert_eq!(tricomi_u(0.0, 1.5, 2.0).unwrap().f, 1.0);
    assert!((tricomi_u(-1.0, 1.5, 2.0).unwrap().f - 0.5).abs() < 1e-14);
    // 2! L_2^{(2.5)}(z) = z² - 2(α+2) z + (α+1)(α+2) with α = 2.5
    let z = 1.3;
    let want = z * z - 9.0 * z + 3.5 * 4.5;
    assert!(((tricomi_u(-2.0, 3.5, z).unwrap().f - want) / want).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kummer_m_over_the_working_domain(a in -25.0f64..25.0, l in 0usize..4, z in 0.0f64..40.0) {
        let b = l as f64 + 1.5;
        if let Ok(m) = kummer_m(a, b, z) {
            let want = kummer_m_dd(a, b, z);
            prop_assert!((m.f - want).abs() <= 1e-9 * want.abs().max(1.0), "M({}, {}, {}) = {} vs {}", a, b, z, m.f, want);
        }
    }

    #[test]
    fn spherical_wronskian(l in 0usize..8, x in 0.01f64..200.0) {
        let (j, n) = sph_bessel_jn(l, x).unwrap();
        let w = j.f * n.df - j.df * n.f;
        prop_assert!(rel(w, 1.0 / (x * x)) < 1e-12, "l={} x={} w={}", l, x, w);
    }

    #[test]
    fn modified_wronskian(l in 0usize..8, x in 0.01f64..60.0) {
        let (i, k) = mod_sph_bessel_ik(l, x).unwrap();
        let w = i.f * k.df - i.df * k.f;
        prop_assert!(rel(w, -1.0 / (x * x)) < 1e-12, "l={} x={} w={}", l, x, w);
    }

    #[test]
    fn spherical_recurrence(l in 1usize..9, x in 0.5f64..80.0) {
        let (jm, nm) = sph_bessel_jn(l - 1, x).unwrap();
        let (j, n) = sph_bessel_jn(l, x).unwrap();
        let (jp, np) = sph_bessel_jn(l + 1, x).unwrap();
        let c = (2 * l + 1) as f64 / x;
        let scale_j = jm.f.abs() + jp.f.abs() + (c * j.f).abs();
        prop_assert!((jm.f + jp.f - c * j.f).abs() < 1e-12 * scale_j);
        let scale_n = nm.f.abs() + np.f.abs() + (c * n.f).abs();
        prop_assert!((nm.f + np.f - c * n.f).abs() < 1e-12 * scale_n);
    }

    #[test]
    fn kummer_equation_holds(a in -12.0f64..6.0, l in 0usize..4, z in 0.0f64..12.0) {
        // z M'' + (b - z) M' - a M = 0 with M'' from the derivative identity applied twice
        let b = l as f64 + 1.5;
        let (m, m2) = match (kummer_m(a, b, z), kummer_m(a + 2.0, b + 2.0, z)) {
            (Ok(m), Ok(m2)) => (m, m2.f),
            _ => return Ok(()),
        };
        let m2 = a * (a + 1.0) / (b * (b + 1.0)) * m2;
        let scale = (z * m2).abs() + ((b - z) * m.df).abs() + (a * m.f).abs();
        prop_assert!((z * m2 + (b - z) * m.df - a * m.f).abs() < 1e-10 * scale.max(1e-300));
    }

    #[test]
    fn kummer_derivative_matches_difference(a in -8.0f64..4.0, l in 0usize..3, z in 0.5f64..8.0) {
        let b = l as f64 + 1.5;
        let h = 1e-3;
        let f = |x: f64| kummer_m_dd(a, b, x);
        let fd = (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h);
        let Ok(m) = kummer_m(a, b, z) else { return Ok(()) };
        let (f0, df) = (m.f, m.df);
        let scale = df.abs().max(f0.abs()).max(1.0);
        prop_assert!((df - fd).abs() < 1e-9 * scale, "a={} b={} z={} df={} fd={}", a, b, z, df, fd);
    }

    #[test]
    fn gamma_recurrence(x in 0.05f64..30.0) {
        prop_assert!(rel(gamma_real(x + 1.0).unwrap(), x * gamma_real(x).unwrap()) < 1e-13);
    }
}
