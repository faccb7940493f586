//! Radial Fourier-series localisation into translated packets ψ^l_m, the
//! packet-sum reconstruction of a mode, and fitted decay constants.
//!
//! cargo run --example wave_packets

use wavepacket_lab::propagator::{hankel_mode, make_random_localized};
use wavepacket_lab::wavepackets::{
    asymptotic_bound, fit_constants, psi, reconstruct_mode, ConstantsTable, PacketCoefficients, ScanGrid,
};

fn main() -> wavepacket_lab::Result<()> {
    let data = make_random_localized(3, 4, 3)?;
    let pc = PacketCoefficients::from_modes(&data, 512);
    let (a, b) = pc.energy_equivalence();
    println!(
        "{} modes, Σ|c|² = {:.6}, |f|² = {:.6}, equivalence constants [{a:.3}, {b:.3}], max tail {:.1e}",
        data.len(),
        pc.l2_sq(),
        data.l2_norm_sq(),
        pc.max_tail()
    );

    let (idx, profile) = data.iter().nth(5).unwrap();
    println!("\nmode l = {}, i = {}:", idx.l, idx.i);
    println!("{:>5} {:>5} {:>28} {:>10}", "t", "r", "packet sum", "error");
    for (t, r) in [(0.0, 0.7), (3.0, 2.5), (12.0, 11.25), (30.0, 29.0)] {
        let direct = hankel_mode(*idx, profile, t, r)?;
        let packed = reconstruct_mode(&pc, *idx, t, r)?;
        println!("{t:>5} {r:>5} {packed:>28.12} {:>10.2e}", (packed - direct).norm());
    }

    println!("\n|ψ^l_m(r)| is concentrated near r = |m|:");
    for l in [0, 4, 16] {
        let row: Vec<String> = [0.5, 10.0, 19.0, 20.0, 21.0, 30.0]
            .iter()
            .map(|&r| format!("{:.2e}", psi(l, 20.0, r, 3).unwrap().norm()))
            .collect();
        println!("  l = {l:>2}, m = 20, r ∈ {{0.5, 10, 19, 20, 21, 30}}: {}", row.join(" "));
    }

    // A coarse scan; `wavepacket-lab fit-constants` uses the full grid.
    let grid = ScanGrid { ls: vec![0, 4], m_max: 8.0, m_step: 1.0, r_max: 16.0, r_step: 0.5, seam_levels: 3 };
    let mut table = ConstantsTable::default();
    table.extend(fit_constants(3, &[(2, 2)], &grid)?);
    println!("\nfitted constants on grid {}:", grid.hash());
    for row in &table.rows {
        println!("  N1 = {}, N2 = {}, {:?}: C = {:.4}", row.n1, row.n2, row.regime, row.c);
    }
    for (m, r) in [(4.0, 0.5), (4.0, 4.5), (4.0, 12.0)] {
        let (bound, regime) = asymptotic_bound(4, m, r, 3, 2, 2, &table)?;
        println!("  |ψ^4_{m}({r})| = {:.3e} <= {bound:.3e} ({regime:?})", psi(4, m, r, 3)?.norm());
    }
    Ok(())
}
