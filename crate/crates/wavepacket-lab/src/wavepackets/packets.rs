use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::psi::scaled_psi_grid;
use crate::harmonics::{sphere_area, HarmonicIndex};
use crate::propagator::{ModeSet, RadialProfile, PROFILE_SUPPORT};
use crate::specfun::QuadratureRule;
use crate::{LabError, Result};

/// Default truncation |k| ≤ K_max of the packet lattice.
pub const DEFAULT_K_MAX: usize = 512;
/// Relative ℓ² tail above which a packet expansion is reported as truncated.
pub const PACKET_TAIL_TOLERANCE: f64 = 1e-8;

fn dense_rule() -> &'static QuadratureRule {
    static R: OnceLock<QuadratureRule> = OnceLock::new();
    R.get_or_init(|| QuadratureRule::composite(PROFILE_SUPPORT.0, PROFILE_SUPPORT.1, 64, 32).unwrap())
}

/// c_k = (1/4) ∫₀⁴ ĉ(ρ) e^{−iπkρ/2} dρ for k = −K..=K (entry k + K).
pub fn to_packets(profile: &RadialProfile, k_max: usize) -> Vec<Complex64> {
    let rule = dense_rule();
    let vals: Vec<Complex64> = rule.nodes.iter().map(|&x| profile.eval(x)).collect();
    series_coefficients(&rule.nodes, &rule.weights, &vals, k_max)
}

/// [`to_packets`] for a profile given as a function; it must vanish off (1/2, 2).
pub fn to_packets_fn<F: Fn(f64) -> Complex64>(profile: F, k_max: usize) -> Result<Vec<Complex64>> {
    let probe = QuadratureRule::composite(0.0, 4.0, 64, 8)?;
    for &x in &probe.nodes {
        if !(x > PROFILE_SUPPORT.0 && x < PROFILE_SUPPORT.1) && profile(x).norm() != 0.0 {
            return Err(LabError::Support(format!("profile nonzero at ρ = {x}")));
        }
    }
    let rule = dense_rule();
    let vals: Vec<Complex64> = rule.nodes.iter().map(|&x| profile(x)).collect();
    Ok(series_coefficients(&rule.nodes, &rule.weights, &vals, k_max))
}

fn series_coefficients(nodes: &[f64], weights: &[f64], vals: &[Complex64], k_max: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * k_max + 1];
    for ((&x, &w), &v) in nodes.iter().zip(weights).zip(vals) {
        if v.norm() == 0.0 {
            continue;
        }
        let step = Complex64::from_polar(1.0, -0.5 * PI * x);
        let base = v * (0.25 * w);
        // e^{−iπkρ/2} for k ≥ 0 by repeated multiplication, re-anchored every 64 steps
        let mut ph = Complex64::new(1.0, 0.0);
        for k in 0..=k_max {
            if k % 64 == 0 {
                ph = Complex64::from_polar(1.0, -0.5 * PI * k as f64 * x);
            }
            out[k_max + k] += base * ph;
            if k > 0 {
                out[k_max - k] += base * ph.conj();
            }
            ph *= step;
        }
    }
    out
}

/// Σ_k c_k e^{iπkρ/2}.
pub fn eval_series(coeffs: &[Complex64], rho: f64) -> Complex64 {
    let k_max = (coeffs.len() - 1) / 2;
    coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c * Complex64::from_polar(1.0, 0.5 * PI * (j as f64 - k_max as f64) * rho))
        .sum()
}

/// Packet coefficients c^l_{i,k} of a [`ModeSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct PacketCoefficients {
    pub n: usize,
    pub k_max: usize,
    pub coeffs: BTreeMap<HarmonicIndex, Vec<Complex64>>,
    /// Relative ℓ² mass beyond K_max per mode, from Parseval.
    pub tails: BTreeMap<HarmonicIndex, f64>,
}

impl PacketCoefficients {
    pub fn from_modes(modes: &ModeSet, k_max: usize) -> Self {
        let rule = dense_rule();
        let mut coeffs = BTreeMap::new();
        let mut tails = BTreeMap::new();
        for (k, p) in modes.iter() {
            let c = to_packets(p, k_max);
            let total = 0.25 * rule.integrate(|x| p.eval(x).norm_sqr());
            let kept: f64 = c.iter().map(|v| v.norm_sqr()).sum();
            tails.insert(*k, if total > 0.0 { ((total - kept) / total).max(0.0) } else { 0.0 });
            coeffs.insert(*k, c);
        }
        PacketCoefficients { n: modes.n, k_max, coeffs, tails }
    }

    /// Σ |c^l_{i,k}|².
    pub fn l2_sq(&self) -> f64 {
        self.coeffs.values().flatten().map(|c| c.norm_sqr()).sum()
    }

    /// Constants (a, b) with a Σ|c|² ≤ ‖f‖² ≤ b Σ|c|² for unit-frequency data.
    pub fn energy_equivalence(&self) -> (f64, f64) {
        let w = 4.0 * sphere_area(self.n);
        let p = self.n as i32 - 1;
        (w * 0.5f64.powi(p), w * 2.0f64.powi(p))
    }

    pub fn max_tail(&self) -> f64 {
        self.tails.values().copied().fold(0.0, f64::max)
    }
}

/// Packet-sum evaluation 2π i^l r^{(2−n)/2} Σ_k c_k ψ^l_{t−k/4}(r).
pub fn reconstruct_mode(coeffs: &PacketCoefficients, idx: HarmonicIndex, t: f64, r: f64) -> Result<Complex64> {
    let Some(c) = coeffs.coeffs.get(&idx) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let tail = coeffs.tails.get(&idx).copied().unwrap_or(0.0);
    if tail > PACKET_TAIL_TOLERANCE {
        return Err(LabError::Truncation(format!("packet tail {tail:e} for {idx:?}")));
    }
    if c.iter().all(|v| v.norm() == 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let k_max = coeffs.k_max as i64;
    let ms: Vec<f64> = (-k_max..=k_max).map(|k| t - k as f64 / 4.0).collect();
    let psi = scaled_psi_grid(coeffs.n, &[idx.l], &ms, &[r])?;
    let sum: Complex64 = c.iter().zip(&psi[0]).map(|(a, b)| a * b).sum();
    Ok(sum * Complex64::new(0.0, 1.0).powu(idx.l as u32) * (2.0 * PI))
}
