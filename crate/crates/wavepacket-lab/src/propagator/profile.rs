use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::specfun::{gauss_legendre_reference, QuadratureRule};
use crate::{LabError, Result};

/// Open interval carrying every unit-frequency profile.
pub const PROFILE_SUPPORT: (f64, f64) = (0.5, 2.0);
/// Sharpness κ of the radial bump exp(κ − κ/(1 − x²)).
pub const BUMP_KAPPA: f64 = 4.0;
const BUMP_CENTER: f64 = 1.25;
const BUMP_HALF_WIDTH: f64 = 0.75;

/// The fixed C^∞ radial bump on (1/2, 2), equal to 1 at ρ = 5/4.
pub fn radial_bump(rho: f64) -> f64 {
    let x = (rho - BUMP_CENTER) / BUMP_HALF_WIDTH;
    if x.abs() >= 1.0 {
        0.0
    } else {
        (BUMP_KAPPA - BUMP_KAPPA / (1.0 - x * x)).exp()
    }
}

fn smooth_step(u: f64) -> f64 {
    let g = |v: f64| if v <= 0.0 { 0.0 } else { (-1.0 / v).exp() };
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        g(u) / (g(u) + g(1.0 - u))
    }
}

/// Smooth plateau: ≡ 1 on [1/2, 2], supported in (1/4, 4).
pub fn plateau(rho: f64) -> f64 {
    if rho <= 0.25 || rho >= 4.0 {
        0.0
    } else if rho < 0.5 {
        smooth_step((rho - 0.25) / 0.25)
    } else if rho <= 2.0 {
        1.0
    } else {
        smooth_step((4.0 - rho) / 2.0)
    }
}

/// One term b(ρ) ρ^p Σ_j a_j e^{iπ(j − J)ρ/2} of a bump-type profile, with
/// `trig.len() = 2J + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTerm {
    pub rho_power: i32,
    pub trig: Vec<Complex64>,
}

impl ProfileTerm {
    pub fn constant(c: Complex64) -> Self {
        ProfileTerm { rho_power: 0, trig: vec![c] }
    }

    fn half(&self) -> i64 {
        (self.trig.len() as i64 - 1) / 2
    }

    fn eval_trig(&self, rho: f64) -> Complex64 {
        let jj = self.half();
        self.trig
            .iter()
            .enumerate()
            .map(|(k, a)| a * Complex64::from_polar(1.0, 0.5 * PI * (k as i64 - jj) as f64 * rho))
            .sum()
    }
}

/// Nodes shared by every sampled profile: 48 Gauss–Legendre panels of 16 nodes on (1/2, 2).
pub fn canonical_profile_rule() -> Arc<QuadratureRule> {
    static RULE: OnceLock<Arc<QuadratureRule>> = OnceLock::new();
    RULE.get_or_init(|| {
        Arc::new(QuadratureRule::composite(PROFILE_SUPPORT.0, PROFILE_SUPPORT.1, PANELS, PER_PANEL).unwrap())
    })
    .clone()
}
const PANELS: usize = 48;
const PER_PANEL: usize = 16;

/// Radial Fourier profile ĉ(ρ) of one harmonic mode, supported in (1/2, 2).
#[derive(Debug, Clone, PartialEq)]
pub enum RadialProfile {
    /// Sum of bump × power × trigonometric-polynomial terms.
    Bump(Vec<ProfileTerm>),
    /// Values at the nodes of [`canonical_profile_rule`], interpolated panelwise.
    Sampled(Vec<Complex64>),
}

impl RadialProfile {
    pub fn bump(c: Complex64) -> Self {
        RadialProfile::Bump(vec![ProfileTerm::constant(c)])
    }

    pub fn zero() -> Self {
        RadialProfile::Bump(Vec::new())
    }

    /// Bump times a trigonometric polynomial with coefficients for j = −J..=J.
    pub fn bump_trig(trig: Vec<Complex64>) -> Result<Self> {
        if trig.len() % 2 == 0 {
            return Err(LabError::InvalidArgument("trig coefficient count must be odd".into()));
        }
        Ok(RadialProfile::Bump(vec![ProfileTerm { rho_power: 0, trig }]))
    }

    /// Samples at the canonical nodes (values off (1/2, 2) are never stored).
    pub fn sampled(values: Vec<Complex64>) -> Result<Self> {
        if values.len() != PANELS * PER_PANEL {
            return Err(LabError::InvalidArgument(format!("sampled profile needs {} values", PANELS * PER_PANEL)));
        }
        Ok(RadialProfile::Sampled(values))
    }

    pub fn eval(&self, rho: f64) -> Complex64 {
        let (a, b) = PROFILE_SUPPORT;
        if !(rho > a && rho < b) {
            return Complex64::new(0.0, 0.0);
        }
        match self {
            RadialProfile::Bump(terms) => {
                let bv = radial_bump(rho);
                if bv == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                terms.iter().map(|t| t.eval_trig(rho) * rho.powi(t.rho_power)).sum::<Complex64>() * bv
            }
            RadialProfile::Sampled(v) => interpolate_sampled(v, rho),
        }
    }

    /// Frequency content beyond the bump, in cycles per unit ρ.
    pub fn bandwidth(&self) -> f64 {
        match self {
            RadialProfile::Bump(terms) => terms.iter().map(|t| t.half() as f64 / 4.0).fold(0.0, f64::max),
            RadialProfile::Sampled(_) => 8.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RadialProfile::Bump(t) => t.iter().all(|t| t.trig.iter().all(|c| c.norm() == 0.0)),
            RadialProfile::Sampled(v) => v.iter().all(|c| c.norm() == 0.0),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        match self {
            RadialProfile::Bump(terms) => RadialProfile::Bump(
                terms
                    .iter()
                    .map(|t| ProfileTerm { rho_power: t.rho_power, trig: t.trig.iter().map(|a| a * c).collect() })
                    .collect(),
            ),
            RadialProfile::Sampled(v) => RadialProfile::Sampled(v.iter().map(|a| a * c).collect()),
        }
    }

    /// Multiplication by c·ρ^p.
    pub fn times_rho_power(&self, c: Complex64, p: i32) -> Self {
        match self {
            RadialProfile::Bump(terms) => RadialProfile::Bump(
                terms
                    .iter()
                    .map(|t| ProfileTerm { rho_power: t.rho_power + p, trig: t.trig.iter().map(|a| a * c).collect() })
                    .collect(),
            ),
            RadialProfile::Sampled(v) => {
                let rule = canonical_profile_rule();
                RadialProfile::Sampled(v.iter().zip(&rule.nodes).map(|(a, &r)| a * c * r.powi(p)).collect())
            }
        }
    }

    pub fn add(&self, other: &RadialProfile) -> Self {
        match (self, other) {
            (RadialProfile::Bump(a), RadialProfile::Bump(b)) => {
                let mut t = a.clone();
                t.extend(b.iter().cloned());
                RadialProfile::Bump(t)
            }
            _ => {
                let x = self.sample_canonical();
                let y = other.sample_canonical();
                RadialProfile::Sampled(x.iter().zip(&y).map(|(a, b)| a + b).collect())
            }
        }
    }

    /// Complex conjugate of the profile.
    pub fn conj(&self) -> Self {
        match self {
            RadialProfile::Bump(terms) => RadialProfile::Bump(
                terms
                    .iter()
                    .map(|t| ProfileTerm {
                        rho_power: t.rho_power,
                        trig: t.trig.iter().rev().map(|a| a.conj()).collect(),
                    })
                    .collect(),
            ),
            RadialProfile::Sampled(v) => RadialProfile::Sampled(v.iter().map(|a| a.conj()).collect()),
        }
    }

    pub fn sample(&self, nodes: &[f64]) -> Vec<Complex64> {
        nodes.iter().map(|&r| self.eval(r)).collect()
    }

    pub fn sample_canonical(&self) -> Vec<Complex64> {
        match self {
            RadialProfile::Sampled(v) => v.clone(),
            _ => self.sample(&canonical_profile_rule().nodes),
        }
    }

    /// ∫ |ĉ(ρ)|² ρ^{n−1} dρ.
    pub fn weighted_l2_sq(&self, n: usize) -> f64 {
        let rule = canonical_profile_rule();
        let vals = self.sample_canonical();
        vals.iter()
            .zip(rule.nodes.iter().zip(&rule.weights))
            .map(|(v, (&r, &w))| w * v.norm_sqr() * r.powi(n as i32 - 1))
            .sum()
    }
}

fn interpolate_sampled(values: &[Complex64], rho: f64) -> Complex64 {
    let (a, b) = PROFILE_SUPPORT;
    let h = (b - a) / PANELS as f64;
    let p = (((rho - a) / h).floor() as usize).min(PANELS - 1);
    let lo = a + p as f64 * h;
    let base = gauss_legendre_reference(PER_PANEL);
    let x = 2.0 * (rho - lo) / h - 1.0;
    let nodes = &base.0;
    // barycentric Lagrange on the panel's Gauss nodes
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (k, &xk) in nodes.iter().enumerate() {
        let d = x - xk;
        if d == 0.0 {
            return values[p * PER_PANEL + k];
        }
        let mut wk = 1.0;
        for (j, &xj) in nodes.iter().enumerate() {
            if j != k {
                wk /= xk - xj;
            }
        }
        let c = wk / d;
        num += values[p * PER_PANEL + k] * c;
        den += c;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_support_and_peak() {
        assert_eq!(radial_bump(0.5), 0.0);
        assert_eq!(radial_bump(2.0), 0.0);
        assert!((radial_bump(1.25) - 1.0).abs() < 1e-15);
        assert_eq!(plateau(1.0), 1.0);
        assert_eq!(plateau(0.25), 0.0);
        assert!(plateau(3.0) > 0.0);
    }

    #[test]
    fn sampled_interpolation_is_accurate() {
        let p = RadialProfile::bump_trig(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.2, 0.4),
        ])
        .unwrap();
        let s = RadialProfile::sampled(p.sample_canonical()).unwrap();
        for k in 0..200 {
            let r = 0.5 + 1.5 * (k as f64 + 0.31) / 200.0;
            assert!((p.eval(r) - s.eval(r)).norm() < 1e-9, "r={r}");
        }
    }

    #[test]
    fn conjugation() {
        let p = RadialProfile::bump_trig(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(1.0, -0.5),
            Complex64::new(-0.2, 0.4),
        ])
        .unwrap();
        let c = p.conj();
        for r in [0.7, 1.1, 1.9] {
            assert!((p.eval(r).conj() - c.eval(r)).norm() < 1e-14);
        }
    }
}
