use num_complex::Complex64;

use super::basis::eigenvalue;
use super::quadrature::{AngularLayout, AngularQuadrature};
use super::sphere_function::SphereFunction;
use super::synth::sup_norm;
use crate::{LabError, Result};

/// Bernstein constant C_B: ‖F‖_∞ ≤ C_B N^{(n-1)/2} ‖F‖_2 for F at dyadic degree N
/// (normalised L²). The Cauchy–Schwarz bound over l < 4N with the addition
/// theorem gives about √7, 4 and 4.6 for n = 2, 3, 4.
pub const BERNSTEIN_CONSTANT: f64 = 5.0;

/// Coefficients scaled by [l(n+l−2)]^{s/2}.
pub fn omega_power(f: &SphereFunction, s: f64) -> Result<SphereFunction> {
    if !s.is_finite() {
        return Err(LabError::InvalidArgument("exponent not finite".into()));
    }
    if s < 0.0 && f.coefficients.iter().any(|(k, c)| k.l == 0 && c.norm() != 0.0) {
        return Err(LabError::InvalidArgument("negative power of |Ω| applied to a nonzero l = 0 coefficient".into()));
    }
    if s == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.map_coefficients(
        |k, c| {
            if k.l == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                c * eigenvalue(k.n, k.l).powf(0.5 * s)
            }
        },
    ))
}

/// ‖F‖_{H^s_Ω} = (‖F‖² + ‖|Ω|^s F‖²)^{1/2}.
pub fn hs_omega_norm(f: &SphereFunction, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(LabError::InvalidArgument(format!("H^s_Ω needs s >= 0, got {s}")));
    }
    let mut acc = 0.0;
    for (k, c) in &f.coefficients {
        let w = if s == 0.0 {
            1.0
        } else if k.l == 0 {
            0.0
        } else {
            eigenvalue(k.n, k.l).powf(s)
        };
        acc += (1.0 + w) * c.norm_sqr();
    }
    Ok(acc.sqrt())
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

/// Dyadic cutoff θ_0: C^∞, ≡ 1 on [1, 2], supported in (1/2, 4).
pub fn theta0(x: f64) -> f64 {
    if x <= 0.5 || x >= 4.0 {
        0.0
    } else if x < 1.0 {
        smooth_step((x - 0.5) / 0.5)
    } else if x <= 2.0 {
        1.0
    } else {
        smooth_step((4.0 - x) / 2.0)
    }
}

/// Dyadic level of an angular projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DyadicLevel {
    /// The l = 0 part.
    Zero,
    /// N = 2^j.
    Level(u32),
}

impl DyadicLevel {
    pub fn n_value(self) -> f64 {
        match self {
            DyadicLevel::Zero => 1.0,
            DyadicLevel::Level(j) => 2f64.powi(j as i32),
        }
    }
}

/// F_N: coefficients multiplied by θ_0(l/N), or the l = 0 part for `Zero`.
pub fn dyadic_project(f: &SphereFunction, level: DyadicLevel) -> SphereFunction {
    match level {
        DyadicLevel::Zero => f.map_coefficients(|k, c| if k.l == 0 { c } else { Complex64::new(0.0, 0.0) }),
        DyadicLevel::Level(j) => {
            let nn = 2f64.powi(j as i32);
            f.map_coefficients(|k, c| c * theta0(k.l as f64 / nn))
        }
    }
}

/// (min, max) over l ≥ 1 of Σ_j θ_0(l/2^j)², i.e. (δ², δ^{-2}) bounds of the partition.
pub fn partition_constants(l_max: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for l in 1..=l_max {
        let mut s = 0.0;
        for j in 0..40 {
            s += theta0(l as f64 / 2f64.powi(j)).powi(2);
        }
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (lo, hi)
}

/// ‖F‖_∞ / (N^{(n-1)/2} ‖F‖_2), sup over the quadrature nodes plus local refinement.
pub fn bernstein_ratio(f: &SphereFunction, n_level: f64, quad: &AngularQuadrature) -> Result<f64> {
    if f.is_zero() {
        return Err(LabError::InvalidArgument("zero function".into()));
    }
    if quad.n != f.n {
        return Err(LabError::InvalidArgument("quadrature dimension mismatch".into()));
    }
    if let AngularLayout::ZonalS3 { .. } = quad.layout {
        if f.coefficients.keys().any(|k| k.i != 0) {
            return Err(LabError::Unsupported("non-zonal function on S³".into()));
        }
    }
    let sup = sup_norm(f, quad)?;
    Ok(sup / (n_level.powf((f.n as f64 - 1.0) / 2.0) * f.l2_norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::HarmonicIndex;

    #[test]
    fn theta0_support() {
        assert_eq!(theta0(0.5), 0.0);
        assert_eq!(theta0(1.5), 1.0);
        assert_eq!(theta0(1.0), 1.0);
        assert_eq!(theta0(2.0), 1.0);
        assert_eq!(theta0(4.0), 0.0);
        assert!(theta0(3.0) > 0.0 && theta0(3.0) < 1.0);
    }

    #[test]
    fn partition_bounds() {
        let (lo, hi) = partition_constants(4096);
        assert!(lo >= 1.0 - 1e-12 && hi <= 3.0 + 1e-12);
    }

    #[test]
    fn omega_examples() {
        let one = Complex64::new(1.0, 0.0);
        let f0 = SphereFunction::from_pairs(3, [(HarmonicIndex::zonal(3, 0), one)]).unwrap();
        assert!(omega_power(&f0, 1.0).unwrap().is_zero());
        assert!(omega_power(&f0, -1.0).is_err());
        let f1 = SphereFunction::from_pairs(3, [(HarmonicIndex::zonal(3, 1), one)]).unwrap();
        assert_eq!(omega_power(&f1, 2.0).unwrap().get(&HarmonicIndex::zonal(3, 1)), 2.0 * one);
        assert_eq!(omega_power(&f1, 0.0).unwrap(), f1);
        assert!((hs_omega_norm(&f1, 1.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!((hs_omega_norm(&f0, 2.5).unwrap() - 1.0).abs() < 1e-15);
    }
}
