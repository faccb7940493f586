//! Half-wave evolution of unit-frequency data mode by mode: energy
//! conservation, the outgoing profile along a ray, and Knapp data.
//!
//! cargo run --example propagate_wave

use wavepacket_lab::propagator::{
    energy_norms, evaluate_field, hankel_mode, make_knapp, make_radial_bump, make_random_localized, FieldSampler,
    Propagation,
};

fn main() -> wavepacket_lab::Result<()> {
    let bump = make_radial_bump(3)?;
    let times = [0.0, 4.0, 16.0, 32.0];
    let fs = FieldSampler::new(&bump, Propagation::Forward, 90.0)?;
    let e = energy_norms(&fs, &times, 56.0)?;
    println!("radial bump, n = 3, |f|_2 = {:.12}", bump.l2_norm());
    for (t, v) in times.iter().zip(&e) {
        println!("  t = {t:>4}: |u(t)|_(L2(B_56)) = {v:.12}");
    }

    // Along the ray ω = e_1 the bump travels outward at unit speed with amplitude ~ 1/r.
    println!("\n  t      r        |u|      r|u|");
    for t in [8.0, 16.0, 32.0] {
        let (r, v) = (0..=160)
            .map(|k| t - 4.0 + 0.05 * k as f64)
            .map(|r| (r, evaluate_field(&fs, t, r, &[1.0, 0.0, 0.0]).unwrap().norm()))
            .fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        println!("{t:>5} {r:>6.2} {v:>10.6} {:>8.5}", r * v);
    }

    // The engine agrees with direct oscillatory quadrature of one mode.
    let (idx, p) = bump.iter().next().unwrap();
    let direct = hankel_mode(*idx, p, 10.0, 9.5)?;
    let engine = fs.coefficients(10.0, 9.5)?[0];
    println!("\nmode l = 0 at (t, r) = (10, 9.5): engine {engine:.10}, direct {direct:.10}");

    let loc = make_random_localized(3, 8, 1)?;
    let fs = FieldSampler::new(&loc, Propagation::Backward, 40.0)?;
    let e = energy_norms(&fs, &[0.0, 12.0], 28.0)?;
    println!("\nrandom data N = 8 ({} modes): energy {:.10} -> {:.10}", loc.len(), e[0], e[1]);

    let k = make_knapp(3, 0.25, None)?;
    println!(
        "Knapp data ε = 1/4: {} zonal modes, l_max = {}, harmonic tail {:.1e}",
        k.len(),
        k.l_max(),
        k.truncation_tail
    );
    Ok(())
}
