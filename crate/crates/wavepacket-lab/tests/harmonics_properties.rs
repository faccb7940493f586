use num_complex::Complex64;
use proptest::prelude::*;
use wavepacket_lab::harmonics::{
    addition_theorem_residual, all_indices, dim_y, dyadic_project, eval_basis, hs_omega_norm, omega_power, point_s2,
    AngularQuadrature, DyadicLevel, SphereFunction,
};

fn gram_error(n: usize, l_max: usize) -> f64 {
    let quad = AngularQuadrature::new(n, 2 * l_max + 2).unwrap();
    let idx = all_indices(n, l_max);
    let vals: Vec<Vec<f64>> =
        idx.iter().map(|k| quad.nodes.iter().map(|w| eval_basis(*k, w).unwrap()).collect()).collect();
    let area: f64 = quad.weights.iter().sum();
    let mut worst: f64 = 0.0;
    for a in 0..idx.len() {
        for b in a..idx.len() {
            let g: f64 = (0..quad.weights.len()).map(|j| quad.weights[j] * vals[a][j] * vals[b][j]).sum::<f64>() / area;
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g - want).abs());
        }
    }
    worst
}

#[test]
fn gram_matrix_is_identity() {
    assert!(gram_error(2, 24) < 1e-12);
    assert!(gram_error(3, 12) < 1e-12);
    assert!(gram_error(4, 20) < 1e-12);
}

#[test]
fn dimensions_match_the_closed_form() {
    // dim Y_l = C(n+l−1, l) − C(n+l−3, l−2)
    let binom = |a: i64, b: i64| -> i64 {
        if b < 0 || a < b {
            return 0;
        }
        (0..b).fold(1, |acc, j| acc * (a - j) / (j + 1))
    };
    for n in 2..=4i64 {
        for l in 0..40i64 {
            let want = binom(n + l - 1, l) - binom(n + l - 3, l - 2);
            assert_eq!(dim_y(n as usize, l as usize) as i64, want, "n={n} l={l}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn addition_theorem_holds(l in 0usize..33, th in 0.0f64..std::f64::consts::PI, ph in 0.0f64..std::f64::consts::TAU) {
        let p3 = vec![point_s2(th, ph).to_vec()];
        prop_assert!(addition_theorem_residual(3, l, &p3).unwrap() < 1e-9);
        let p2 = vec![vec![ph.cos(), ph.sin()]];
        prop_assert!(addition_theorem_residual(2, l, &p2).unwrap() < 1e-9);
    }

    #[test]
    fn omega_powers_compose(seed in 0u64..1000, s in 0.1f64..2.0, t in 0.1f64..2.0) {
        let f = random_function(seed, 12);
        let a = omega_power(&omega_power(&f, s).unwrap(), t).unwrap();
        let b = omega_power(&f, s + t).unwrap();
        for (k, v) in &b.coefficients {
            prop_assert!((a.get(k) - v).norm() <= 1e-10 * v.norm().max(1.0));
        }
        prop_assert!(hs_omega_norm(&f, s).unwrap() >= f.l2_norm());
    }

    #[test]
    fn dyadic_pieces_square_sum_within_partition_bounds(seed in 0u64..1000) {
        let f = random_function(seed, 40);
        let no_zero = f.map_coefficients(|k, c| if k.l == 0 { Complex64::new(0.0, 0.0) } else { c });
        let pieces: f64 = (0..8).map(|j| dyadic_project(&no_zero, DyadicLevel::Level(j)).l2_norm().powi(2)).sum();
        let (lo, hi) = wavepacket_lab::harmonics::partition_constants(40);
        let total = no_zero.l2_norm().powi(2);
        prop_assert!(pieces >= lo * total * (1.0 - 1e-12) && pieces <= hi * total * (1.0 + 1e-12));
    }
}

fn random_function(seed: u64, l_max: usize) -> SphereFunction {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = all_indices(3, l_max)
        .into_iter()
        .map(|k| (k, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
        .collect();
    SphereFunction::from_pairs(3, pairs).unwrap()
}
