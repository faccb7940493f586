use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::QuadratureRule;
use crate::{LabError, Result};

/// Controls for [`oscillatory_integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryOptions {
    /// Relative change tolerated between successive node doublings.
    pub tol: f64,
    /// Number of doublings allowed after the initial panel choice.
    pub max_depth: usize,
    /// Additional bandwidth (cycles per unit) carried by the amplitude itself.
    pub amplitude_bandwidth: f64,
    /// Minimum number of nodes per oscillation of the combined phase.
    pub nodes_per_cycle: f64,
}

impl Default for OscillatoryOptions {
    fn default() -> Self {
        OscillatoryOptions { tol: 1e-10, max_depth: 10, amplitude_bandwidth: 0.0, nodes_per_cycle: 8.0 }
    }
}

/// Outcome of an oscillatory quadrature with its convergence record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryResult {
    pub value: Complex64,
    /// |I_{2m} − I_m| at the accepted level.
    pub last_change: f64,
    /// Σ w|a| at the accepted level, the scale used for the relative test.
    pub scale: f64,
    pub nodes: usize,
}

/// ∫_a^b amplitude(ρ) e^{2πi·frequency·ρ} dρ.
///
/// `rule` fixes the interval (a, b) and the per-panel node count (its length is
/// taken as the panel size). Panels are sized so each oscillation of
/// frequency + amplitude_bandwidth sees at least `nodes_per_cycle` nodes; the
/// panel count then doubles until the result changes by at most
/// `tol · max(|I|, Σ w|a|)`.
pub fn oscillatory_integrate<F>(
    amplitude: F,
    frequency: f64,
    rule: &QuadratureRule,
    opts: OscillatoryOptions,
) -> Result<OscillatoryResult>
where
    F: Fn(f64) -> Complex64,
{
    if !frequency.is_finite() {
        return Err(LabError::InvalidArgument("frequency not finite".into()));
    }
    let (a, b) = rule.interval;
    let per_panel = rule.len().clamp(2, 64);
    let bw = frequency.abs() + opts.amplitude_bandwidth.abs();
    let cycles = bw * (b - a);
    let min_nodes = (cycles * opts.nodes_per_cycle).ceil().max(per_panel as f64);
    let mut panels = (min_nodes / per_panel as f64).ceil().max(1.0) as usize;
    let eval = |panels: usize| -> Result<(Complex64, f64)> {
        let r = QuadratureRule::composite(a, b, panels, per_panel)?;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (&x, &w) in r.nodes.iter().zip(&r.weights) {
            let v = amplitude(x);
            scale += w * v.norm();
            sum += v * Complex64::from_polar(w, 2.0 * PI * frequency * x);
        }
        Ok((sum, scale))
    };
    let (mut prev, _) = eval(panels)?;
    for _ in 0..opts.max_depth {
        panels *= 2;
        let (cur, scale) = eval(panels)?;
        let change = (cur - prev).norm();
        if change <= opts.tol * cur.norm().max(scale) {
            return Ok(OscillatoryResult { value: cur, last_change: change, scale, nodes: panels * per_panel });
        }
        prev = cur;
    }
    Err(LabError::NonConvergence(format!(
        "oscillatory integral at frequency {frequency} after {} doublings",
        opts.max_depth
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_amplitude() {
        let rule = QuadratureRule::gauss_legendre(32, 0.0, 1.0).unwrap();
        let one = |_x: f64| Complex64::new(1.0, 0.0);
        let r = oscillatory_integrate(one, 0.0, &rule, Default::default()).unwrap();
        assert!((r.value - 1.0).norm() < 1e-14);
        let r = oscillatory_integrate(one, 1.0, &rule, Default::default()).unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let rule = QuadratureRule::gauss_legendre(4, 0.0, 1.0).unwrap();
        let rough = |x: f64| Complex64::new(if x < 0.5 { 0.0 } else { 1.0 }, 0.0);
        let opts = OscillatoryOptions { max_depth: 2, ..Default::default() };
        assert!(matches!(oscillatory_integrate(rough, 3.0, &rule, opts), Err(LabError::NonConvergence(_))));
    }
}
