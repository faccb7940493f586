//! Dual-scale norms ℓ^p_μ(L²) over cube partitions for zonal data at angular
//! frequency N, and their dependence on N and the cube size 1/μ.
//!
//! cargo run --example dual_scale

use wavepacket_lab::analysis::{dual_scale_norm, dual_scale_ratios, r_eta, CubeSampler, DualScaleConfig};
use wavepacket_lab::propagator::{make_random_family, Propagation, RandomFamily};

fn main() -> wavepacket_lab::Result<()> {
    let data = make_random_family(3, 8, 1, RandomFamily::Zonal)?;
    let cs = CubeSampler::new(&data, Propagation::Forward, 16, 8.0)?;
    let p = r_eta(3, 0.125)?;
    println!("N = 8, p = r_η = {p:.4}");
    for t in [0.0, 4.0, 8.0] {
        let masses = cs.masses(t);
        let row: Vec<String> =
            [1.0, 0.5, 0.25].iter().map(|&mu| format!("{:.5}", dual_scale_norm(&cs, t, mu, p).unwrap())).collect();
        println!("  t = {t}: box mass {:.6}, ℓ^p_μ(L²) for μ = 1, 1/2, 1/4: {}", masses.total(), row.join(" "));
    }
    println!("  p = 2 recovers the L² norm: {:.6}", dual_scale_norm(&cs, 4.0, 0.5, 2.0)?.powi(2));

    let cfg = DualScaleConfig { t_max: 8.0, half_extent: 16, ..DualScaleConfig::default() };
    println!("\nwindow [0, 8], seed 1:");
    for big_n in [4, 8] {
        let d = make_random_family(3, big_n, 1, RandomFamily::Zonal)?;
        let v = dual_scale_ratios(&d, &cfg.mus, p, &cfg)?;
        println!("  N = {big_n}: {v:.5?}");
    }
    Ok(())
}
