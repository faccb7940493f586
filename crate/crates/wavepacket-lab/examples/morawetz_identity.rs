//! The Morawetz weight f = r/(ε+r): tr π, both closed forms of Δ(tr π), the
//! divergence identity on an exact solution (and on a frozen non-solution),
//! and the weighted space-time integral.
//!
//! cargo run --example morawetz_identity

use wavepacket_lab::analysis::morawetz::{
    cone_samples, delta_tr_pi, delta_tr_pi_fd, delta_tr_pi_printed, negativity_scan, tr_pi, FrozenWave, TrPiLaplacian,
    ZonalWave,
};
use wavepacket_lab::analysis::{
    morawetz_integral, morawetz_negativity_scan, verify_energy_momentum_identity, GridSpec, RadialWindow,
};
use wavepacket_lab::propagator::make_radial_bump;

fn main() -> wavepacket_lab::Result<()> {
    println!("n = 3, ε = 1, r = 1:");
    println!("  tr π                  = {}", tr_pi(3, 1.0, 1.0));
    println!("  Δ(tr π), printed form = {}", delta_tr_pi_printed(3, 1.0, 1.0));
    println!("  Δ(tr π), direct       = {}", delta_tr_pi(3, 1.0, 1.0));
    println!("  Δ(tr π), differences  = {:.10}", delta_tr_pi_fd(3, 1.0, 1.0, 1e-3));

    let grid: Vec<f64> = (1..=4000).map(|k| 0.025 * k as f64).collect();
    println!("\nmax of printed Δ(tr π) over (0, 100]: {:.3e}", morawetz_negativity_scan(3, 1.0, &grid)?);
    println!("max of direct Δ(tr π), n = 4, ε = 0.1: {:.3e}", negativity_scan(4, 0.1, &grid, TrPiLaplacian::Direct)?);

    let bump = make_radial_bump(3)?;
    let wave = ZonalWave::new(&bump, 40.0)?;
    let samples = cone_samples(3, 20, (1.0, 16.0), 5);
    for form in [TrPiLaplacian::Direct, TrPiLaplacian::Printed] {
        let c = verify_energy_momentum_identity(&wave, 1.0, form, &samples)?;
        println!("identity residual with the {form:?} form: {:.2e}", c.max_residual);
    }
    let frozen = FrozenWave { inner: &wave, t0: 6.0 };
    let c = verify_energy_momentum_identity(&frozen, 1.0, TrPiLaplacian::Direct, &samples)?;
    println!("frozen (non-solution) control:        {:.2e}", c.max_residual);

    let spec = GridSpec {
        t_max: 16.0,
        t_panel: 1.0,
        t_nodes: 8,
        r_max: 32.0,
        window: Some(RadialWindow { margin: 10.0, impact: 2.0 }),
        ..GridSpec::default()
    };
    let ts = [4.0, 8.0, 16.0];
    let vals = morawetz_integral(&bump, 0.5, &ts, &spec)?;
    println!("\n∫∫ (1+r)^(-3/2) |u|² for the radial bump, η = 1/2:");
    for (t, v) in ts.iter().zip(&vals) {
        println!("  T = {t:>4}: {v:.6}");
    }
    Ok(())
}
