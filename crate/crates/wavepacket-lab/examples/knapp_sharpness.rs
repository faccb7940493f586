//! Knapp data f^ε concentrated in an angular cap of width ε: the L²(L^r)
//! ratio as ε shrinks and the growth of its angular Sobolev norm.
//!
//! cargo run --example knapp_sharpness

use wavepacket_lab::analysis::{knapp_ratio, log_log_fit, KnappConfig};
use wavepacket_lab::propagator::make_knapp;

fn main() -> wavepacket_lab::Result<()> {
    let cfg = KnappConfig::default();
    println!("n = {}, r = {}, expected ε-exponent {:.3}", cfg.n, cfg.r, cfg.expected_exponent());
    let mut ratios = Vec::new();
    for &eps in &cfg.eps {
        let (ratio, mass) = knapp_ratio(eps, &cfg)?;
        println!("  ε = {eps:<7} |u|_(L2 L^r)/|f|_2 = {ratio:.5}  (window mass fraction {mass:.6})");
        ratios.push(ratio);
    }
    let fit = log_log_fit(&cfg.eps, &ratios)?;
    println!("fitted slope {:.4} (R² {:.3})", fit.slopes[0], fit.r_squared);

    println!("\n|Ω|^s f^ε / |f^ε| grows like ε^(-s):");
    for s in [0.5, 1.0] {
        let mut v = Vec::new();
        for &eps in &cfg.eps {
            let k = make_knapp(cfg.n, eps, None)?;
            v.push(k.omega_power_norm(s) / k.l2_norm());
        }
        let fit = log_log_fit(&cfg.eps, &v)?;
        println!("  s = {s}: {v:.4?}, slope {:.4}", fit.slopes[0]);
    }
    Ok(())
}
