use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::modeset::ModeSet;
use super::profile::{radial_bump, RadialProfile};
use crate::harmonics::{dim_y, sphere_area, zonal_table, HarmonicIndex};
use crate::specfun::QuadratureRule;
use crate::{LabError, Result};

/// Half-degree J of the random trigonometric factor in generated profiles.
pub const RANDOM_TRIG_HALF_DEGREE: usize = 2;

/// Unit-norm radial data: one l = 0 mode with the fixed bump profile.
pub fn make_radial_bump(n: usize) -> Result<ModeSet> {
    let mut m = ModeSet::new(n)?;
    m.insert(HarmonicIndex::zonal(n, 0), RadialProfile::bump(Complex64::new(1.0, 0.0)))?;
    Ok(m.normalized())
}

/// Which harmonics a random family occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomFamily {
    /// Every supported (l, i) with N < l < 2N.
    Full,
    /// Zonal modes only (axisymmetric data).
    Zonal,
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    Complex64::new(a, b) / std::f64::consts::SQRT_2
}

fn random_profile(rng: &mut ChaCha8Rng) -> RadialProfile {
    let trig = (0..2 * RANDOM_TRIG_HALF_DEGREE + 1).map(|_| complex_normal(rng)).collect();
    RadialProfile::bump_trig(trig).expect("odd length")
}

/// Unit-norm data at angular frequency N: modes with N < l < 2N, profiles
/// bump × random trigonometric polynomial, deterministic in `seed`.
pub fn make_random_localized(n: usize, big_n: usize, seed: u64) -> Result<ModeSet> {
    make_random_family(n, big_n, seed, RandomFamily::Full)
}

pub fn make_random_family(n: usize, big_n: usize, seed: u64, family: RandomFamily) -> Result<ModeSet> {
    if big_n < 2 {
        return Err(LabError::InvalidArgument("N must be at least 2 so that (N, 2N) holds a degree".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = ModeSet::localized(n, big_n)?;
    for l in big_n + 1..2 * big_n {
        let count = match (family, n) {
            (RandomFamily::Zonal, _) | (_, 4) => 1,
            _ => dim_y(n, l),
        };
        for i in 0..count {
            m.insert(HarmonicIndex::new(n, l, i)?, random_profile(&mut rng))?;
        }
    }
    Ok(m.normalized())
}

/// Unit-norm radial data with a random trigonometric profile.
pub fn make_random_radial(n: usize, seed: u64) -> Result<ModeSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = ModeSet::new(n)?;
    m.insert(HarmonicIndex::zonal(n, 0), random_profile(&mut rng))?;
    Ok(m.normalized())
}

/// Smooth angular cap: 1 for x ≤ 3/8, 0 for x ≥ 5/8.
pub fn knapp_cap(x: f64) -> f64 {
    let u = (5.0 / 8.0 - x) * 4.0;
    let g = |v: f64| if v <= 0.0 { 0.0 } else { (-1.0 / v).exp() };
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        g(u) / (g(u) + g(1.0 - u))
    }
}

/// Fourier data of the Knapp block: b(|ξ|)·cap(α/ε), α the angle to the ξ₁ axis.
pub fn knapp_fourier(eps: f64, rho: f64, alpha: f64) -> f64 {
    radial_bump(rho) * knapp_cap(alpha / eps)
}

/// Default angular truncation for Knapp data.
pub fn knapp_default_l_max(eps: f64) -> usize {
    (48.0 / eps).ceil() as usize
}

// (1/|S^{n-1}|) ∫ g(α) dω for zonal g supported in α ≤ α_max
fn zonal_measure(n: usize, alpha: f64) -> f64 {
    match n {
        2 => 2.0,
        3 => 2.0 * PI * alpha.sin(),
        _ => 4.0 * PI * alpha.sin().powi(2),
    }
}

/// ∫ f̂ dξ for the Knapp block, which is u(0, 0).
pub fn knapp_fourier_volume(n: usize, eps: f64) -> f64 {
    let rad = QuadratureRule::composite(0.5, 2.0, 24, 32).unwrap();
    let radial = rad.integrate(|r| radial_bump(r) * r.powi(n as i32 - 1));
    let ang = QuadratureRule::composite(0.0, 5.0 * eps / 8.0, 16, 32).unwrap();
    radial * ang.integrate(|a| knapp_cap(a / eps) * zonal_measure(n, a))
}

/// Knapp data projected onto zonal harmonics of degree ≤ l_max
/// (default ⌈48/ε⌉). Requires l_max ≥ 4/ε.
pub fn make_knapp(n: usize, eps: f64, l_max: Option<usize>) -> Result<ModeSet> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(LabError::InvalidArgument(format!("eps = {eps} outside (0, 1/2]")));
    }
    let l_max = l_max.unwrap_or_else(|| knapp_default_l_max(eps));
    let floor = 4.0 / l_max as f64;
    if (l_max as f64) < 4.0 / eps {
        return Err(LabError::EpsFloor { eps, floor, l_max });
    }
    let mut m = ModeSet::new(n)?;
    let a_max = 5.0 * eps / 8.0;
    let nodes = 2 * l_max + 8;
    let rule = QuadratureRule::composite(0.0, a_max, nodes.div_ceil(32).max(4), 32)?;
    let area = sphere_area(n);
    let cap: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&a, &w)| w * knapp_cap(a / eps) * zonal_measure(n, a) / area)
        .collect();
    let total: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&a, &w)| w * knapp_cap(a / eps).powi(2) * zonal_measure(n, a) / area)
        .sum();
    let mut coef = vec![0.0; l_max + 1];
    let mut z = vec![0.0; l_max + 1];
    for (&a, &c) in rule.nodes.iter().zip(&cap) {
        zonal_table(n, l_max, a.cos(), &mut z);
        coef.iter_mut().zip(&z).for_each(|(k, v)| *k += c * v);
    }
    let mut kept = 0.0;
    for (l, &c) in coef.iter().enumerate() {
        kept += c * c;
        m.insert(HarmonicIndex::zonal(n, l), RadialProfile::bump(Complex64::new(c, 0.0)))?;
    }
    m.truncation_tail = ((total - kept) / total).max(0.0);
    Ok(m)
}

/// Split position/velocity data into h⁺, h⁻ with
/// u(t) = e^{it√−Δ} h⁺ + e^{−it√−Δ} h⁻: h^± = ±g/(4πiρ) + f/2.
pub fn split_half_waves(f: &ModeSet, g: &ModeSet) -> Result<(ModeSet, ModeSet)> {
    if f.n != g.n {
        return Err(LabError::InvalidArgument("dimension mismatch".into()));
    }
    let half = Complex64::new(0.5, 0.0);
    let k = Complex64::new(0.0, 4.0 * PI).inv();
    let fh = f.scaled(half);
    let gp = g.map_profiles(|_, p| p.times_rho_power(k, -1));
    let gm = g.map_profiles(|_, p| p.times_rho_power(-k, -1));
    Ok((fh.add(&gp)?, fh.add(&gm)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_data_is_normalised_and_deterministic() {
        let a = make_random_localized(3, 4, 7).unwrap();
        let b = make_random_localized(3, 4, 7).unwrap();
        assert_eq!(a, b);
        assert!((a.l2_norm() - 1.0).abs() < 1e-12);
        assert_eq!(a.len(), 11 + 13 + 15);
    }

    #[test]
    fn knapp_floor_is_enforced() {
        assert!(matches!(make_knapp(3, 0.125, Some(16)), Err(LabError::EpsFloor { .. })));
        let k = make_knapp(3, 0.25, None).unwrap();
        assert!(k.truncation_tail < 1e-4, "{}", k.truncation_tail);
    }
}
