//! Bessel functions of half-integer order, the Gegenbauer recurrence and the
//! oscillatory quadrature driver.
//!
//! cargo run --example bessel_functions

use num_complex::Complex64;
use wavepacket_lab::specfun::{
    bessel_j, bessel_j_asymptotic, bessel_j_orders, bessel_j_poisson, check_bessel_recursion, gegenbauer,
    oscillatory_integrate, BesselOrder, OscillatoryOptions, QuadratureRule,
};

fn main() -> wavepacket_lab::Result<()> {
    println!("{:>6} {:>8} {:>22} {:>22} {:>22}", "s", "y", "J_s(y)", "Poisson", "asymptotic");
    for twice in [1, 3, 7, 21] {
        let s = BesselOrder::new(twice)?;
        for y in [0.5, 5.0, 20.0, 60.0] {
            let j = bessel_j(s, y)?;
            // The Poisson form loses about s digits; skip it at large order.
            let p = if s.value() < 6.0 { format!("{:.15e}", bessel_j_poisson(s, y)?) } else { "-".into() };
            println!("{:>6} {:>8} {:>22.15e} {:>22} {:>22.15e}", s.value(), y, j, p, bessel_j_asymptotic(s, y)?);
        }
    }

    // A whole ladder J_{1/2}, J_{3/2}, ... at one argument.
    let mut ladder = vec![0.0; 12];
    bessel_j_orders(BesselOrder::new(1)?, 7.5, &mut ladder)?;
    println!("\nJ_(k+1/2)(7.5), k = 0..11: {ladder:.6?}");
    let rec = check_bessel_recursion(BesselOrder::new(5)?, &[0.5, 3.0, 12.0, 40.0])?;
    println!("three-term recursion residual at s = 5/2: {rec:.2e}");

    println!("C^(3/2)_5(0.3) = {:.12}", gegenbauer(5, 1.5, 0.3)?);

    // ∫_0^4 ρ² J_{1/2}(2πρr) e^{-2πiρt} dρ at t = 30: the driver handles the phase.
    let rule = QuadratureRule::composite(0.0, 4.0, 8, 16)?;
    let amp = |rho: f64| {
        Complex64::new(
            rho * rho * bessel_j(BesselOrder::new(1).unwrap(), 2.0 * std::f64::consts::PI * rho * 3.0).unwrap(),
            0.0,
        )
    };
    let opts = OscillatoryOptions { amplitude_bandwidth: 3.0, ..OscillatoryOptions::default() };
    let res = oscillatory_integrate(amp, -30.0, &rule, opts)?;
    println!("oscillatory integral: {:.10e} ({} nodes, last change {:.1e})", res.value, res.nodes, res.last_change);
    Ok(())
}
