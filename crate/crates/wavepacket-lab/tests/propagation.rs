mod common;

use common::fourier_oracle_3d;
use num_complex::Complex64;
use proptest::prelude::*;
use wavepacket_lab::propagator::{
    energy_norms, evaluate_field, make_radial_bump, make_random_localized, make_random_radial, split_half_waves,
    FieldSampler, ModeSet, Propagation,
};

#[test]
fn mode_sum_matches_brute_force_fourier_integral() {
    let data = make_random_localized(3, 2, 4).unwrap();
    let fs = FieldSampler::new(&data, Propagation::Forward, 12.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (t, x) in [(0.0, [0.3, -0.4, 0.5]), (1.5, [1.0, 0.5, -0.2]), (3.0, [-2.0, 1.2, 1.9]), (2.0, [0.0, 0.0, 0.8])] {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) as f64;
        let r = r.sqrt();
        let omega: Vec<f64> = x.iter().map(|v| v / r).collect();
        let a = evaluate_field(&fs, t, r, &omega).unwrap();
        let b = fourier_oracle_3d(&data, t, x, 128, 64);
        worst = worst.max((a - b).norm());
        scale = scale.max(b.norm());
    }
    assert!(scale > 1e-3, "oracle values too small to compare: {scale}");
    assert!(worst <= 1e-8 * scale.max(1.0), "max difference {worst:e} (scale {scale:e})");
}

#[test]
fn half_wave_split_recovers_position_data() {
    // u(0) = h⁺ + h⁻ = f for zero initial velocity.
    let f = make_random_radial(3, 9).unwrap();
    let g = ModeSet::new(3).unwrap();
    let (hp, hm) = split_half_waves(&f, &g).unwrap();
    let sum = hp.add(&hm).unwrap();
    for (k, p) in f.iter() {
        for rho in [0.6, 1.0, 1.7] {
            assert!((sum.get(k).unwrap().eval(rho) - p.eval(rho)).norm() < 1e-14);
        }
    }
}

#[test]
fn forward_and_backward_waves_are_complex_conjugate_for_real_radial_data() {
    let bump = make_radial_bump(3).unwrap();
    let f = FieldSampler::new(&bump, Propagation::Forward, 30.0).unwrap();
    let b = FieldSampler::new(&bump, Propagation::Backward, 30.0).unwrap();
    for (t, r) in [(1.0, 0.5), (6.0, 5.5), (12.0, 13.0)] {
        let u = f.coefficients(t, r).unwrap()[0];
        let v = b.coefficients(t, r).unwrap()[0];
        assert!((u - v.conj()).norm() < 1e-10 * u.norm().max(1e-3), "{u} vs {v}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn energy_is_conserved(seed in 0u64..10_000, t in 0.0f64..24.0) {
        let data = make_random_localized(3, 2, seed).unwrap();
        let fs = FieldSampler::new(&data, Propagation::Forward, 80.0).unwrap();
        let e = energy_norms(&fs, &[t], t + 24.0).unwrap()[0];
        prop_assert!((e / data.l2_norm() - 1.0).abs() < 1e-3, "ratio {}", e / data.l2_norm());
    }

    #[test]
    fn evolution_is_linear(seed in 0u64..10_000, t in 0.0f64..10.0, r in 0.1f64..12.0) {
        let a = make_random_localized(2, 3, seed).unwrap();
        let b = make_random_localized(2, 3, seed + 1).unwrap();
        let c = Complex64::new(0.3, -1.1);
        let sum = a.add(&b.scaled(c)).unwrap();
        let fa = FieldSampler::new(&a, Propagation::Forward, 30.0).unwrap();
        let fb = FieldSampler::new(&b, Propagation::Forward, 30.0).unwrap();
        let fsum = FieldSampler::new(&sum, Propagation::Forward, 30.0).unwrap();
        let w = [0.6, 0.8];
        let lhs = evaluate_field(&fsum, t, r, &w).unwrap();
        let rhs = evaluate_field(&fa, t, r, &w).unwrap() + c * evaluate_field(&fb, t, r, &w).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }
}
