//! Real spherical harmonics: dimension counts, the addition theorem, angular
//! quadrature, the |Ω|^s calculus, dyadic projections and Bernstein's
//! inequality.
//!
//! cargo run --example spherical_harmonics

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavepacket_lab::harmonics::{
    addition_theorem_residual, all_indices, bernstein_ratio, dim_y, dyadic_project, hs_omega_norm, omega_power,
    partition_constants, point_s2, AngularQuadrature, DyadicLevel, SphereFunction,
};

fn main() -> wavepacket_lab::Result<()> {
    for n in [2, 3, 4] {
        let dims: Vec<usize> = (0..6).map(|l| dim_y(n, l)).collect();
        println!("n = {n}: dim Y_l for l = 0..5: {dims:?}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let points: Vec<Vec<f64>> = (0..20)
        .map(|_| point_s2(rng.random_range(0.0..std::f64::consts::PI), rng.random_range(0.0..std::f64::consts::TAU)).to_vec())
        .collect();
    for l in [1, 8, 32] {
        println!("addition theorem residual, n = 3, l = {l}: {:.2e}", addition_theorem_residual(3, l, &points)?);
    }

    // A random function with degrees 8..=31, its norm by coefficients and by quadrature.
    let pairs = all_indices(3, 31)
        .into_iter()
        .filter(|k| k.l >= 8)
        .map(|k| (k, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
    let f = SphereFunction::from_pairs(3, pairs)?;
    let quad = AngularQuadrature::new(3, 2 * f.l_max() + 2)?;
    println!("\n|F|_2 = {:.12} (coefficients), {:.12} (quadrature)", f.l2_norm(), f.l2_norm_quadrature(&quad)?);

    for s in [0.5, 1.0] {
        let g = omega_power(&f, s)?;
        println!("s = {s}: ||Ω|^s F| = {:.4}, |F|_(H^s) = {:.4}", g.l2_norm(), hs_omega_norm(&f, s)?);
    }

    let (lo, hi) = partition_constants(256);
    println!("\nΣ θ0(l/2^j)^2 lies in [{lo:.4}, {hi:.4}]");
    for j in 2..=5 {
        let fj = dyadic_project(&f, DyadicLevel::Level(j));
        if fj.is_zero() {
            continue;
        }
        let nl = DyadicLevel::Level(j).n_value();
        println!("N = {nl:>3}: |F_N|_2 = {:.4}, Bernstein ratio {:.4}", fj.l2_norm(), bernstein_ratio(&fj, nl, &quad)?);
    }
    Ok(())
}
