use std::f64::consts::PI;

use num_complex::Complex64;

use super::modeset::ModeSet;
use super::sampler::Propagation;
use crate::harmonics::zonal_table;
use crate::linalg::{complex_times_complex, complex_times_real, CMat};
use crate::specfun::{bessel_j, BesselOrder, QuadratureRule};
use crate::{LabError, Result};

/// Evaluator for data axisymmetric about the first axis, in cylindrical
/// frequency coordinates ξ = (ξ₁, q·θ):
/// u(t, z, p) = ∫∫ f̂(ξ₁, q) e^{2πi(zξ₁ ∓ t|ξ|)} q^{n−2} S_n(pq) dq dξ₁,
/// with S_n(pq) = ∫_{S^{n−2}} e^{2πipq e·θ} dθ.
pub struct AxisymmetricSampler {
    n: usize,
    sign: f64,
    xi: Vec<f64>,
    q: Vec<f64>,
    /// f̂ · weights · q^{n−2}, |ξ₁ nodes| × |q nodes|.
    fw: Vec<Complex64>,
    rho: Vec<f64>,
}

/// Precomputed spatial factors for a (z, p) product grid.
pub struct AxisymmetricGrid {
    pub z: Vec<f64>,
    pub p: Vec<f64>,
    e: CMat,
    k: Vec<f64>,
}

/// ∫_{S^{n−2}} e^{2πi y e·θ} dθ as a function of y = pq.
pub fn transverse_kernel(n: usize, y: f64) -> f64 {
    let a = 2.0 * PI * y;
    match n {
        2 => 2.0 * a.cos(),
        3 => 2.0 * PI * bessel_j(BesselOrder::integer(0), a.abs()).unwrap_or(0.0),
        _ => {
            if a.abs() < 1e-8 {
                4.0 * PI
            } else {
                4.0 * PI * a.sin() / a
            }
        }
    }
}

impl AxisymmetricSampler {
    /// `fhat(ρ, cos α)` is the data at |ξ| = ρ, angle α to the first axis.
    pub fn new<F>(
        n: usize,
        dir: Propagation,
        fhat: F,
        xi_rule: &QuadratureRule,
        q_rule: &QuadratureRule,
    ) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        if !(2..=4).contains(&n) {
            return Err(LabError::Unsupported(format!("dimension {n}")));
        }
        if q_rule.interval.0 < 0.0 {
            return Err(LabError::InvalidArgument("transverse frequency must be non-negative".into()));
        }
        let (na, nb) = (xi_rule.len(), q_rule.len());
        let mut fw = vec![Complex64::new(0.0, 0.0); na * nb];
        let mut rho = vec![0.0; na * nb];
        for (a, (&x, &wx)) in xi_rule.nodes.iter().zip(&xi_rule.weights).enumerate() {
            for (b, (&q, &wq)) in q_rule.nodes.iter().zip(&q_rule.weights).enumerate() {
                let r = x.hypot(q);
                rho[a * nb + b] = r;
                if r > 0.0 {
                    fw[a * nb + b] = fhat(r, x / r) * (wx * wq * q.powi(n as i32 - 2));
                }
            }
        }
        Ok(AxisymmetricSampler { n, sign: dir.sign(), xi: xi_rule.nodes.clone(), q: q_rule.nodes.clone(), fw, rho })
    }

    /// Sampler for zonal data.
    pub fn from_modes(
        modes: &ModeSet,
        dir: Propagation,
        xi_rule: &QuadratureRule,
        q_rule: &QuadratureRule,
    ) -> Result<Self> {
        if modes.iter().any(|(k, _)| !k.is_zonal()) {
            return Err(LabError::InvalidArgument("axisymmetric sampler needs zonal data".into()));
        }
        let n = modes.n;
        let l_max = modes.l_max();
        let profiles: Vec<_> = modes.iter().map(|(k, p)| (k.l, p.clone())).collect();
        let f = move |rho: f64, c: f64| {
            let mut z = vec![0.0; l_max + 1];
            zonal_table(n, l_max, c, &mut z);
            profiles.iter().map(|(l, p)| p.eval(rho) * z[*l]).sum::<Complex64>()
        };
        Self::new(n, dir, f, xi_rule, q_rule)
    }

    /// Composite Gauss–Legendre rules with panels no wider than
    /// min(1/8, 8/bandwidth) in each variable.
    pub fn rules(
        xi_range: (f64, f64),
        q_range: (f64, f64),
        xi_bandwidth: f64,
        q_bandwidth: f64,
    ) -> Result<(QuadratureRule, QuadratureRule)> {
        let w = |bw: f64| (8.0 / bw.max(1.0)).min(0.125);
        Ok((
            QuadratureRule::with_max_width(xi_range.0, xi_range.1, w(xi_bandwidth), 32)?,
            QuadratureRule::with_max_width(q_range.0, q_range.1, w(q_bandwidth), 32)?,
        ))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> (usize, usize) {
        (self.xi.len(), self.q.len())
    }

    pub fn grid(&self, z: &[f64], p: &[f64]) -> AxisymmetricGrid {
        let mut e = CMat::zeros(z.len(), self.xi.len());
        for (i, &zz) in z.iter().enumerate() {
            for (a, &x) in self.xi.iter().enumerate() {
                e.set(i, a, Complex64::from_polar(1.0, 2.0 * PI * zz * x));
            }
        }
        let mut k = vec![0.0; self.q.len() * p.len()];
        for (b, &q) in self.q.iter().enumerate() {
            for (j, &pp) in p.iter().enumerate() {
                k[b * p.len() + j] = transverse_kernel(self.n, pp * q);
            }
        }
        AxisymmetricGrid { z: z.to_vec(), p: p.to_vec(), e, k }
    }

    /// u(t, z_c + z, p) on the grid, row-major in (z, p). With `comoving` the
    /// axial origin z_c follows the wave front (z_c = t forward, −t backward);
    /// otherwise z_c = 0.
    pub fn field(&self, t: f64, grid: &AxisymmetricGrid, comoving: bool) -> Vec<Complex64> {
        let nb = self.q.len();
        let mut m = CMat::zeros(self.xi.len(), nb);
        let shift = if comoving { 1.0 } else { 0.0 };
        for (a, &x) in self.xi.iter().enumerate() {
            for b in 0..nb {
                let k = a * nb + b;
                let ph = self.sign * 2.0 * PI * t * (self.rho[k] - shift * x);
                let v = self.fw[k] * Complex64::from_polar(1.0, ph);
                m.re[k] = v.re;
                m.im[k] = v.im;
            }
        }
        let zq = complex_times_complex(&grid.e, &m);
        let out = complex_times_real(&zq, &grid.k, grid.p.len());
        out.re.iter().zip(&out.im).map(|(&a, &b)| Complex64::new(a, b)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::HarmonicIndex;
    use crate::propagator::{evaluate_field, FieldSampler, RadialProfile};

    #[test]
    fn agrees_with_mode_sum() {
        for n in [2usize, 3, 4] {
            let mut m = ModeSet::new(n).unwrap();
            m.insert(HarmonicIndex::zonal(n, 0), RadialProfile::bump(Complex64::new(1.0, 0.0))).unwrap();
            m.insert(HarmonicIndex::zonal(n, 3), RadialProfile::bump(Complex64::new(0.3, -0.7))).unwrap();
            let fs = FieldSampler::new(&m, Propagation::Forward, 20.0).unwrap();
            let (xr, qr) = AxisymmetricSampler::rules((-2.0, 2.0), (0.0, 2.0), 20.0, 20.0).unwrap();
            let ax = AxisymmetricSampler::from_modes(&m, Propagation::Forward, &xr, &qr).unwrap();
            let z = [-1.5, 0.0, 2.5];
            let p = [0.0, 0.75, 4.0];
            let g = ax.grid(&z, &p);
            for &t in &[0.0, 3.0] {
                let u = ax.field(t, &g, false);
                for (i, &zz) in z.iter().enumerate() {
                    for (j, &pp) in p.iter().enumerate() {
                        let r = zz.hypot(pp);
                        let mut om = vec![0.0; n];
                        if r > 0.0 {
                            om[0] = zz / r;
                            om[1] = pp / r;
                        } else {
                            om[0] = 1.0;
                        }
                        let want = evaluate_field(&fs, t, r, &om).unwrap();
                        let got = u[i * p.len() + j];
                        assert!((want - got).norm() < 1e-9, "n={n} t={t} z={zz} p={pp}: {want} {got}");
                    }
                }
                let uc = ax.field(t, &ax.grid(&[zz_shift(t)], &[0.5]), true)[0];
                let un = ax.field(t, &ax.grid(&[t + zz_shift(t)], &[0.5]), false)[0];
                assert!((uc - un).norm() < 1e-10);
            }
        }
    }

    fn zz_shift(t: f64) -> f64 {
        0.25 - 0.1 * t
    }
}
