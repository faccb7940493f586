use std::f64::consts::PI;

use super::basis::{point_s2, sphere_area};
use crate::specfun::gauss_legendre_reference;
use crate::{LabError, Result};

/// Layout of an angular rule; all rules are products in (θ, φ) or θ alone.
#[derive(Debug, Clone, PartialEq)]
pub enum AngularLayout {
    /// Uniform θ_k = 2πk/m on S¹.
    Circle { m: usize },
    /// Gauss–Legendre in cos θ times uniform φ on S².
    Sphere { cos_theta: Vec<f64>, theta_weights: Vec<f64>, n_phi: usize },
    /// Zonal rule on S³ in cos θ (Gauss–Chebyshev of the second kind).
    ZonalS3 { cos_theta: Vec<f64> },
}

/// Nodes on S^{n-1} with positive weights summing to |S^{n-1}|.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularQuadrature {
    pub n: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
    pub layout: AngularLayout,
}

impl AngularQuadrature {
    /// Rule integrating harmonic products of total degree ≤ `degree` exactly
    /// (zonal products only for n = 4).
    pub fn new(n: usize, degree: usize) -> Result<Self> {
        match n {
            2 => {
                let m = degree + 1;
                let nodes = (0..m)
                    .map(|k| {
                        let th = 2.0 * PI * k as f64 / m as f64;
                        vec![th.cos(), th.sin()]
                    })
                    .collect();
                Ok(AngularQuadrature {
                    n,
                    nodes,
                    weights: vec![2.0 * PI / m as f64; m],
                    exactness_degree: degree,
                    layout: AngularLayout::Circle { m },
                })
            }
            3 => {
                let nt = degree / 2 + 1;
                let n_phi = degree + 1;
                let gl = gauss_legendre_reference(nt);
                let mut nodes = Vec::with_capacity(nt * n_phi);
                let mut weights = Vec::with_capacity(nt * n_phi);
                for (x, w) in gl.0.iter().zip(&gl.1) {
                    let th = x.clamp(-1.0, 1.0).acos();
                    for k in 0..n_phi {
                        let phi = 2.0 * PI * k as f64 / n_phi as f64;
                        nodes.push(point_s2(th, phi).to_vec());
                        weights.push(w * 2.0 * PI / n_phi as f64);
                    }
                }
                Ok(AngularQuadrature {
                    n,
                    nodes,
                    weights,
                    exactness_degree: degree,
                    layout: AngularLayout::Sphere { cos_theta: gl.0.clone(), theta_weights: gl.1.clone(), n_phi },
                })
            }
            4 => {
                // ∫_{S³} F dω = 4π ∫_{-1}^{1} F(x) √(1-x²) dx for zonal F.
                let nn = degree / 2 + 1;
                let mut cos_theta = Vec::with_capacity(nn);
                let mut weights = Vec::with_capacity(nn);
                let mut nodes = Vec::with_capacity(nn);
                for j in 1..=nn {
                    let a = j as f64 * PI / (nn as f64 + 1.0);
                    let x = a.cos();
                    cos_theta.push(x);
                    weights.push(4.0 * PI * PI / (nn as f64 + 1.0) * a.sin().powi(2));
                    nodes.push(vec![x, a.sin(), 0.0, 0.0]);
                }
                Ok(AngularQuadrature {
                    n,
                    nodes,
                    weights,
                    exactness_degree: degree,
                    layout: AngularLayout::ZonalS3 { cos_theta },
                })
            }
            _ => Err(LabError::Unsupported(format!("angular quadrature for n={n}"))),
        }
    }

    pub fn area(&self) -> f64 {
        sphere_area(self.n)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_area() {
        for n in [2, 3, 4] {
            for d in [0, 5, 24] {
                let q = AngularQuadrature::new(n, d).unwrap();
                let s: f64 = q.weights.iter().sum();
                assert!((s - q.area()).abs() < 1e-12 * q.area(), "n={n} d={d}");
            }
        }
    }
}
