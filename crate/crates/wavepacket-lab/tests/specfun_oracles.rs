mod common;

use common::bessel_series_oracle;
use proptest::prelude::*;
use wavepacket_lab::specfun::{
    bessel_j, bessel_j_halfint_integral, bessel_j_orders, check_bessel_recursion, gegenbauer, BesselOrder,
    QuadratureRule,
};

#[test]
fn bessel_matches_double_double_series() {
    let mut worst: f64 = 0.0;
    for twice in (-1..=21).step_by(2) {
        for k in 1..=400 {
            let y = 0.05 * k as f64;
            let got = bessel_j(BesselOrder::new(twice).unwrap(), y).unwrap();
            worst = worst.max((got - bessel_series_oracle(twice, y)).abs());
        }
    }
    assert!(worst <= 1e-9, "max error {worst:e}");
}

#[test]
fn spherical_bessel_closed_forms() {
    // J_{1/2}(y) = √(2/πy) sin y, J_{3/2}(y) = √(2/πy)(sin y / y − cos y).
    for k in 1..200 {
        let y = 0.1 * k as f64;
        let c = (2.0 / (std::f64::consts::PI * y)).sqrt();
        let j12 = bessel_j(BesselOrder::new(1).unwrap(), y).unwrap();
        let j32 = bessel_j(BesselOrder::new(3).unwrap(), y).unwrap();
        assert!((j12 - c * y.sin()).abs() < 1e-13);
        assert!((j32 - c * (y.sin() / y - y.cos())).abs() < 1e-13);
    }
}

#[test]
fn doubled_interval_integral_reproduces_integer_orders_only() {
    for s in 0..6u32 {
        for y in [0.5, 3.0, 11.0, 19.5] {
            let a = bessel_j_halfint_integral(BesselOrder::integer(s), y).unwrap();
            let b = bessel_j(BesselOrder::integer(s), y).unwrap();
            assert!((a - b).abs() < 1e-9, "s={s} y={y}");
        }
    }
    let v = bessel_j_halfint_integral(BesselOrder::new(3).unwrap(), 4.0).unwrap();
    assert!(v.abs() < 1e-10);
}

#[test]
fn gauss_legendre_integrates_polynomials() {
    let rule = QuadratureRule::gauss_legendre(12, -1.0, 2.0).unwrap();
    for p in 0..24 {
        let exact = (2f64.powi(p + 1) - (-1f64).powi(p + 1)) / (p + 1) as f64;
        let got = rule.integrate(|x| x.powi(p));
        assert!((got - exact).abs() < 1e-12 * exact.abs().max(1.0), "degree {p}");
    }
}

fn gegenbauer_explicit(l: usize, lambda: f64, x: f64) -> f64 {
    // Σ_k (−1)^k (λ)_{l−k} / (k! (l−2k)!) (2x)^{l−2k}
    let poch = |m: usize| (0..m).fold(1.0, |a, j| a * (lambda + j as f64));
    let fact = |m: usize| (1..=m).fold(1.0, |a, j| a * j as f64);
    (0..=l / 2)
        .map(|k| {
            (-1f64).powi(k as i32) * poch(l - k) / (fact(k) * fact(l - 2 * k)) * (2.0 * x).powi((l - 2 * k) as i32)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bessel_recursion_holds(twice in (0i32..20).prop_map(|k| 2 * k + 1), y in 0.5f64..40.0) {
        prop_assert!(check_bessel_recursion(BesselOrder::new(twice).unwrap(), &[y]).unwrap() < 1e-7);
    }

    #[test]
    fn order_ladder_matches_single_evaluations(twice in (-1i32..10).prop_map(|k| 2 * k + 1), y in 0.1f64..60.0) {
        let first = BesselOrder::new(twice).unwrap();
        let mut out = vec![0.0; 16];
        bessel_j_orders(first, y, &mut out).unwrap();
        for (k, v) in out.iter().enumerate() {
            let direct = bessel_j(first.shifted(k as i32).unwrap(), y).unwrap();
            prop_assert!((v - direct).abs() < 1e-11, "k={} {} vs {}", k, v, direct);
        }
    }

    #[test]
    fn gegenbauer_matches_explicit_sum(l in 0usize..16, lambda in prop::sample::select(vec![0.5, 1.0, 1.5, 2.0]), x in -1.0f64..1.0) {
        let a = gegenbauer(l, lambda, x).unwrap();
        let b = gegenbauer_explicit(l, lambda, x);
        prop_assert!((a - b).abs() < 1e-9 * b.abs().max(1.0));
    }

    #[test]
    fn bessel_is_bounded_by_one(twice in (0i32..30).prop_map(|k| 2 * k + 1), y in 0.0f64..100.0) {
        prop_assert!(bessel_j(BesselOrder::new(twice).unwrap(), y).unwrap().abs() <= 1.0);
    }
}
