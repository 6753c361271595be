mod common;

use common::gamma_oracle;
use deltashell::exactref::exact_levels_matching;
use deltashell::freescatter::{calibrate_depth, StepWell};
use deltashell::trapsolver::{
    eigenvalue_lhs, energy_of_nu, fixed_a_residual, levels_fixed_a, prefactor_ratio, pseudo_wavefunction,
    self_consistent_levels, EIGEN_RESIDUAL_TOL,
};
use proptest::prelude::*;

#[test]
fn s_wave_equation_on_fifty_points() {
    // avoid integers and half-integers, where one side has a pole or zero
    for i in 0..50 {
        let nu = -2.93 + 0.2417 * i as f64;
        let got = eigenvalue_lhs(0, nu).unwrap().value();
        let want = 2.0 * gamma_oracle(-nu) / gamma_oracle(-nu - 0.5);
        assert!(((got - want) / want).abs() < 1e-12, "ν={nu}: {got} vs {want}");
    }
}

#[test]
fn unitarity_ladder() {
    for l in 0..3usize {
        let lf = l as f64;
        let window = (-lf - 0.5, 9.0 - lf);
        let levels = levels_fixed_a(l, f64::INFINITY, window).unwrap();
        for m in 0..5 {
            let want = 2.0 * m as f64 - lf + 0.5;
            assert!(
                levels.iter().any(|lv| (lv.energy - want).abs() < 1e-8),
                "l={l} m={m}: {:?}",
                levels.iter().map(|lv| lv.energy).collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn weak_coupling_follows_first_order_shift() {
    // near ν = n: 1/Γ(-ν) ≈ (-1)^n n! (n - ν), so δν = -(-1)^n A a /(n! Γ(-n-l-1/2))
    let a = 1e-6;
    for l in 0..3usize {
        let lf = l as f64;
        let big_a = std::f64::consts::FRAC_PI_2 * (if l % 2 == 0 { 1.0 } else { -1.0 })
            * [1.0f64, 9.0, 225.0][l]
            / gamma_oracle(lf + 1.5).powi(2);
        let levels = levels_fixed_a(l, a, (0.0, 10.0)).unwrap();
        let positive: Vec<f64> = levels.iter().map(|lv| lv.energy).filter(|&e| e > 0.0).collect();
        assert!(positive.len() >= 4, "l={l}");
        for (n, &e) in positive.iter().take(4).enumerate() {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let dnu = -sign * big_a * a / (common::factorial(n) * gamma_oracle(-(n as f64) - lf - 0.5));
            let want = 2.0 * (n as f64 + dnu) + lf + 1.5;
            assert!((e - want).abs() < 20.0 * dnu * dnu + 1e-12, "l={l} n={n}: {e} vs {want}");
        }
    }
}

#[test]
fn self_consistent_levels_solve_the_equation() {
    for l in 0..3 {
        let v0 = calibrate_depth(l, 0.4, -2.0).unwrap();
        let well = StepWell::new(v0, 0.4).unwrap();
        let levels = self_consistent_levels(l, &well, (-10.0, 14.0)).unwrap();
        assert!(levels.len() >= 4, "l={l}");
        for lv in &levels {
            assert!(lv.residual < EIGEN_RESIDUAL_TOL, "l={l}: {lv:?}");
            assert!(!lv.flagged, "l={l}: {lv:?}");
            assert!((lv.level.a_pow - lv.a_pow_at_e).abs() <= 1e-6 * lv.a_pow_at_e.abs().max(1.0));
        }
    }
}

#[test]
fn short_range_s_wave_tracks_exact_levels() {
    let d = 0.05;
    let well = StepWell::new(calibrate_depth(0, d, -2.0).unwrap(), d).unwrap();
    let pseudo: Vec<f64> = self_consistent_levels(0, &well, (0.0, 14.0))
        .unwrap()
        .iter()
        .map(|lv| lv.level.energy)
        .collect();
    let exact: Vec<f64> = exact_levels_matching(0, &well, (0.0, 14.0))
        .unwrap()
        .iter()
        .map(|r| r.energy)
        .collect();
    for n in 0..3 {
        assert!((pseudo[n] - exact[n]).abs() < 0.02, "n={n}: {} vs {}", pseudo[n], exact[n]);
    }
}

#[test]
fn bound_branch_shifted_up_by_trap() {
    let well = StepWell::new(calibrate_depth(1, 0.4, -2.0).unwrap(), 0.4).unwrap();
    let levels = self_consistent_levels(1, &well, (-10.0, 14.0)).unwrap();
    let bound = levels.iter().find(|lv| lv.level.energy < 0.0).unwrap();
    assert!(bound.level.energy > -2.0 && bound.level.energy < -1.5, "{bound:?}");
    assert!(bound.level.branch < 0);
}

#[test]
fn pseudo_wavefunction_is_normalised() {
    let level = levels_fixed_a(1, -0.3, (0.0, 10.0)).unwrap()[0];
    let grid: Vec<f64> = (1..=1200).map(|i| i as f64 * 0.005).collect();
    let u = pseudo_wavefunction(&level, 1e-3, &grid).unwrap();
    let h = 0.005;
    let norm: f64 = u.windows(2).map(|w| 0.5 * h * (w[0].u * w[0].u + w[1].u * w[1].u)).sum();
    assert!((norm - 1.0).abs() < 1e-9, "{norm}");
}

#[test]
fn prefactor_ratio_values() {
    for l in 0..6usize {
        assert_eq!(prefactor_ratio(l), (l + 1) as f64 / (2 * l + 1) as f64, "l={l}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fixed_a_levels_have_small_residual(l in 0usize..4, a in -3.0f64..3.0) {
        prop_assume!(a.abs() > 1e-3);
        let levels = levels_fixed_a(l, a, (-6.0, 12.0)).unwrap();
        prop_assert!(!levels.is_empty());
        for pair in levels.windows(2) {
            prop_assert!(pair[0].energy < pair[1].energy);
        }
        for lv in &levels {
            prop_assert!(lv.residual < EIGEN_RESIDUAL_TOL);
            prop_assert!((fixed_a_residual(l, a, lv.nu) - lv.residual).abs() < 1e-15);
            prop_assert!((energy_of_nu(l, lv.nu) - lv.energy).abs() < 1e-12);
        }
    }

    // for l ≥ 1 the roots below ν = 0 fold back on themselves, so only the
    // region between integer poles is monotone
    #[test]
    fn levels_rise_with_a(l in 0usize..3, a in 0.05f64..2.0, da in 1e-4f64..1e-2, negative in proptest::bool::ANY) {
        let a = if negative { -a - da } else { a };
        let lower = levels_fixed_a(l, a, (-4.0, 12.0)).unwrap();
        let upper = levels_fixed_a(l, a + da, (-4.0, 12.0)).unwrap();
        for lo in lower.iter().filter(|lv| lv.energy < 11.0 && (l == 0 || lv.nu > 0.0)) {
            let up = upper
                .iter()
                .min_by(|x, y| (x.energy - lo.energy).abs().total_cmp(&(y.energy - lo.energy).abs()))
                .unwrap();
            prop_assert!(up.energy > lo.energy, "{} -> {}", lo.energy, up.energy);
        }
    }
}
