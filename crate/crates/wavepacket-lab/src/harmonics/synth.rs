//! Fast evaluation of expansions on product grids.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::basis::{flat_offset, legendre_slot, legendre_table_into, point_s2, polar_angles, zonal};
use super::quadrature::{AngularLayout, AngularQuadrature};
use super::sphere_function::SphereFunction;
use crate::{LabError, Result};

/// Synthesis of flat-ordered coefficient vectors (see [`super::HarmonicIndex::flat`])
/// onto the nodes of an [`AngularQuadrature`], node order identical to `quad.nodes`.
pub struct GridSynthesizer {
    n: usize,
    l_max: usize,
    kind: Kind,
}

enum Kind {
    Circle { m: usize, fft: Arc<dyn Fft<f64>> },
    Sphere { n_theta: usize, n_phi: usize, ptab: Vec<f64>, fft: Arc<dyn Fft<f64>> },
    Zonal { ztab: Vec<f64>, n_nodes: usize },
}

impl GridSynthesizer {
    pub fn new(quad: &AngularQuadrature, l_max: usize) -> Result<Self> {
        let n = quad.n;
        let kind = match &quad.layout {
            AngularLayout::Circle { m } => {
                if *m <= 2 * l_max {
                    return Err(LabError::InvalidArgument("circle grid too coarse for l_max".into()));
                }
                Kind::Circle { m: *m, fft: FftPlanner::new().plan_fft_inverse(*m) }
            }
            AngularLayout::Sphere { cos_theta, n_phi, .. } => {
                if *n_phi <= 2 * l_max {
                    return Err(LabError::InvalidArgument("φ grid too coarse for l_max".into()));
                }
                let slots = legendre_slot(l_max + 1, 0);
                let mut ptab = vec![0.0; slots * cos_theta.len()];
                for (j, &x) in cos_theta.iter().enumerate() {
                    legendre_table_into(l_max, x, &mut ptab[j * slots..(j + 1) * slots]);
                }
                Kind::Sphere {
                    n_theta: cos_theta.len(),
                    n_phi: *n_phi,
                    ptab,
                    fft: FftPlanner::new().plan_fft_inverse(*n_phi),
                }
            }
            AngularLayout::ZonalS3 { cos_theta } => {
                let mut ztab = vec![0.0; (l_max + 1) * cos_theta.len()];
                for (j, &x) in cos_theta.iter().enumerate() {
                    for l in 0..=l_max {
                        ztab[j * (l_max + 1) + l] = zonal(4, l, x);
                    }
                }
                Kind::Zonal { ztab, n_nodes: cos_theta.len() }
            }
        };
        Ok(GridSynthesizer { n, l_max, kind })
    }

    /// Number of coefficients expected (all modes of degree ≤ l_max; zonal only for n = 4).
    pub fn n_coefficients(&self) -> usize {
        flat_offset(self.n, self.l_max + 1)
    }

    pub fn n_nodes(&self) -> usize {
        match &self.kind {
            Kind::Circle { m, .. } => *m,
            Kind::Sphere { n_theta, n_phi, .. } => n_theta * n_phi,
            Kind::Zonal { n_nodes, .. } => *n_nodes,
        }
    }

    pub fn synthesize(&self, coeffs: &[Complex64], out: &mut [Complex64]) {
        assert_eq!(coeffs.len(), self.n_coefficients());
        assert_eq!(out.len(), self.n_nodes());
        let zero = Complex64::new(0.0, 0.0);
        match &self.kind {
            Kind::Circle { m, fft } => {
                out.iter_mut().for_each(|v| *v = zero);
                out[0] = coeffs[0];
                for l in 1..=self.l_max {
                    let a = coeffs[2 * l - 1];
                    let b = coeffs[2 * l];
                    // √2(a cos lθ + b sin lθ) = (a − ib)/√2 e^{ilθ} + (a + ib)/√2 e^{−ilθ}
                    let i = Complex64::new(0.0, 1.0);
                    out[l % m] += (a - i * b) / SQRT_2;
                    out[(m - l % m) % m] += (a + i * b) / SQRT_2;
                }
                fft.process(out);
            }
            Kind::Sphere { n_theta, n_phi, ptab, fft } => {
                let slots = legendre_slot(self.l_max + 1, 0);
                let i = Complex64::new(0.0, 1.0);
                for j in 0..*n_theta {
                    let p = &ptab[j * slots..(j + 1) * slots];
                    let row = &mut out[j * n_phi..(j + 1) * n_phi];
                    row.iter_mut().for_each(|v| *v = zero);
                    for m in 0..=self.l_max {
                        let mut a = zero;
                        let mut b = zero;
                        for l in m..=self.l_max {
                            let pv = p[legendre_slot(l, m)];
                            let base = l * l;
                            if m == 0 {
                                a += coeffs[base] * pv;
                            } else {
                                a += coeffs[base + 2 * m - 1] * pv;
                                b += coeffs[base + 2 * m] * pv;
                            }
                        }
                        if m == 0 {
                            row[0] += a;
                        } else {
                            row[m % n_phi] += (a - i * b) / SQRT_2;
                            row[(n_phi - m % n_phi) % n_phi] += (a + i * b) / SQRT_2;
                        }
                    }
                    fft.process(row);
                }
            }
            Kind::Zonal { ztab, n_nodes } => {
                for j in 0..*n_nodes {
                    let z = &ztab[j * (self.l_max + 1)..(j + 1) * (self.l_max + 1)];
                    out[j] = coeffs.iter().zip(z).map(|(c, v)| c * v).sum();
                }
            }
        }
    }
}

/// Flat coefficient vector of a sphere function up to degree l_max.
pub fn flatten(f: &SphereFunction, l_max: usize) -> Result<Vec<Complex64>> {
    let len = flat_offset(f.n, l_max + 1);
    let mut v = vec![Complex64::new(0.0, 0.0); len];
    for (k, c) in &f.coefficients {
        if k.l > l_max {
            return Err(LabError::InvalidArgument("coefficient above l_max".into()));
        }
        if f.n == 4 && k.i != 0 {
            return Err(LabError::Unsupported("non-zonal function on S³".into()));
        }
        v[k.flat()] = *c;
    }
    Ok(v)
}

/// sup |F| over the quadrature nodes, then a pattern-search refinement around the
/// largest node values.
pub fn sup_norm(f: &SphereFunction, quad: &AngularQuadrature) -> Result<f64> {
    let l_max = f.l_max();
    let synth = GridSynthesizer::new(quad, l_max)?;
    let coeffs = flatten(f, l_max)?;
    let mut vals = vec![Complex64::new(0.0, 0.0); synth.n_nodes()];
    synth.synthesize(&coeffs, &mut vals);
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[b].norm().partial_cmp(&vals[a].norm()).unwrap());
    let mut best = vals[order[0]].norm();
    let spacing = PI / (quad.exactness_degree as f64 / 2.0 + 1.0);
    let eval = |a: f64, b: f64| -> Result<f64> {
        let p: Vec<f64> = match f.n {
            2 => vec![a.cos(), a.sin()],
            3 => point_s2(a, b).to_vec(),
            _ => vec![a.cos(), a.sin(), 0.0, 0.0],
        };
        Ok(f.eval(&p)?.norm())
    };
    for &k in order.iter().take(8) {
        let p = &quad.nodes[k];
        let (c, phi) = polar_angles(p);
        let (mut a, mut b) = match f.n {
            2 => (c, 0.0),
            _ => (c.clamp(-1.0, 1.0).acos(), phi),
        };
        let mut v = eval(a, b)?;
        let mut step = spacing;
        while step > 1e-7 {
            let mut moved = false;
            let dirs: &[(f64, f64)] =
                if f.n == 3 { &[(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] } else { &[(1.0, 0.0), (-1.0, 0.0)] };
            for &(da, db) in dirs {
                let (na, nb) = (a + da * step, b + db * step);
                let nv = eval(na, nb)?;
                if nv > v {
                    a = na;
                    b = nb;
                    v = nv;
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        best = best.max(v);
    }
    Ok(best)
}
