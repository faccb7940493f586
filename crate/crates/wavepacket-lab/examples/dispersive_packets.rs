//! The packet form of the dispersive bound: sup over the sphere of |u(t, r·)|
//! against N^((n−1)/2) (Σ |c_k|² (1+|t−k/4|)^(1−n))^(1/2).
//!
//! cargo run --example dispersive_packets

use wavepacket_lab::analysis::dispersive_scan;
use wavepacket_lab::propagator::make_random_localized;

fn main() -> wavepacket_lab::Result<()> {
    let samples: Vec<(f64, f64)> = [0.0f64, 8.0, 32.0]
        .iter()
        .flat_map(|&t| (0..=8).map(move |j| (t, (t - 2.0).max(0.0) + 0.5 * j as f64)))
        .collect();
    for big_n in [4, 8] {
        let data = make_random_localized(3, big_n, 11)?;
        let pts = dispersive_scan(&data, &samples, 512)?;
        println!("N = {big_n}");
        for t in [0.0, 8.0, 32.0] {
            let best = pts.iter().filter(|p| p.t == Some(t)).max_by(|a, b| a.ratio.total_cmp(&b.ratio)).unwrap();
            println!(
                "  t = {t:>4}: max sup|u| = {:.5} at r = {:.1}, bound {:.5}, ratio {:.4}",
                best.measured,
                best.r.unwrap(),
                best.reference,
                best.ratio
            );
        }
    }
    Ok(())
}
