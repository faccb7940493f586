use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::{complex_times_complex, CMat};
use crate::specfun::{bessel_j, bessel_j_orders, ln_gamma_half, BesselOrder, QuadratureRule};
use crate::{LabError, Result};

use super::profile::{RadialProfile, PROFILE_SUPPORT};

const SMALL_R: f64 = 1e-3;

/// r^{(2−n)/2} J_{(n−2)/2+l}(2πrρ), continuous at r = 0.
pub fn radial_kernel(n: usize, l: usize, r: f64, rho: f64) -> f64 {
    if r < SMALL_R {
        return small_r_kernel(n, l, r, rho);
    }
    let order = BesselOrder::for_mode(n, l);
    let j = bessel_j(order, 2.0 * PI * r * rho).unwrap_or(0.0);
    j * r.powf(1.0 - 0.5 * n as f64)
}

// (πρ)^s r^l / Γ(s+1) · (1 − x + x²/(2(s+2))), x = (πrρ)²/(s+1)
fn small_r_kernel(n: usize, l: usize, r: f64, rho: f64) -> f64 {
    if l > 0 && r == 0.0 {
        return 0.0;
    }
    let s = 0.5 * (n as f64 - 2.0) + l as f64;
    let lead = (s * (PI * rho).ln() - ln_gamma_half(n + 2 * l)).exp() * r.powi(l as i32);
    let y2 = (PI * r * rho).powi(2);
    lead * (1.0 - y2 / (s + 1.0) + y2 * y2 / (2.0 * (s + 1.0) * (s + 2.0)))
}

/// Fills `out[l]` with r^{(2−n)/2} J_{(n−2)/2+l}(2πrρ) for l = 0..out.len().
pub fn radial_kernel_orders(n: usize, r: f64, rho: f64, out: &mut [f64]) -> Result<()> {
    if r < SMALL_R {
        for (l, o) in out.iter_mut().enumerate() {
            *o = small_r_kernel(n, l, r, rho);
        }
        return Ok(());
    }
    bessel_j_orders(BesselOrder::for_mode(n, 0), 2.0 * PI * r * rho, out)?;
    let f = r.powf(1.0 - 0.5 * n as f64);
    out.iter_mut().for_each(|v| *v *= f);
    Ok(())
}

/// Tuning of the ρ quadrature used by [`RadialEngine`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineOptions {
    pub per_panel: usize,
    /// Oscillations of the combined phase allowed per panel.
    pub cycles_per_panel: f64,
    pub max_panel_width: f64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { per_panel: 32, cycles_per_panel: 8.0, max_panel_width: 0.125 }
    }
}

/// Time-phase table e^{σ2πitρ_q} for a fixed list of times.
pub struct TimePhases {
    pub times: Vec<f64>,
    mat: CMat,
}

struct Block {
    l: usize,
    col0: usize,
    rank: usize,
    outputs: Vec<usize>,
    /// rank × outputs.len(), row-major.
    mix: Vec<Complex64>,
    prefactor: Complex64,
}

/// Batched evaluation of many Hankel modes
/// c(t, r) = 2π i^l r^{(2−n)/2} ∫ J_s(2πrρ) e^{σ2πitρ} ĉ(ρ) ρ^{n/2} dρ.
///
/// Profiles of equal degree are compressed to an orthonormal basis on the ρ
/// nodes, so one GEMM per radius serves every mode and every time.
pub struct RadialEngine {
    n: usize,
    sign: f64,
    rho: QuadratureRule,
    l_max: usize,
    n_outputs: usize,
    blocks: Vec<Block>,
    /// Q × total rank, row-major; weights and ρ^{n/2} folded in.
    basis: CMat,
}

impl RadialEngine {
    /// `reach` bounds r + |t| over all later evaluations; `sign` is −1 for e^{−it√−Δ}.
    pub fn new(
        n: usize,
        profiles: &[(usize, &RadialProfile)],
        sign: f64,
        reach: f64,
        opts: EngineOptions,
    ) -> Result<Self> {
        if !(2..=4).contains(&n) {
            return Err(LabError::Unsupported(format!("dimension {n}")));
        }
        if !(reach.is_finite() && reach >= 0.0) {
            return Err(LabError::InvalidArgument("reach must be finite and non-negative".into()));
        }
        let bw = reach + profiles.iter().map(|(_, p)| p.bandwidth()).fold(0.0, f64::max) + 2.0;
        let width = (opts.cycles_per_panel / bw).min(opts.max_panel_width);
        let rho = QuadratureRule::with_max_width(PROFILE_SUPPORT.0, PROFILE_SUPPORT.1, width, opts.per_panel)?;
        let q = rho.len();
        let l_max = profiles.iter().map(|p| p.0).max().unwrap_or(0);
        let mut by_l: Vec<Vec<usize>> = vec![Vec::new(); l_max + 1];
        for (k, (l, _)) in profiles.iter().enumerate() {
            by_l[*l].push(k);
        }
        let halfn = 0.5 * n as f64;
        let mut blocks = Vec::new();
        let mut columns: Vec<Vec<Complex64>> = Vec::new();
        for (l, outs) in by_l.into_iter().enumerate() {
            if outs.is_empty() {
                continue;
            }
            let vecs: Vec<Vec<Complex64>> = outs
                .iter()
                .map(|&k| {
                    rho.nodes
                        .iter()
                        .zip(&rho.weights)
                        .map(|(&x, &w)| profiles[k].1.eval(x) * (w * x.powf(halfn)))
                        .collect()
                })
                .collect();
            let (basis, mix) = gram_schmidt(&vecs);
            let rank = basis.len();
            let prefactor = Complex64::new(0.0, 1.0).powu(l as u32) * (2.0 * PI);
            blocks.push(Block { l, col0: columns.len(), rank, outputs: outs, mix, prefactor });
            columns.extend(basis);
        }
        let mut basis = CMat::zeros(q, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (qq, v) in col.iter().enumerate() {
                basis.set(qq, c, *v);
            }
        }
        Ok(RadialEngine { n, sign, rho, l_max, n_outputs: profiles.len(), blocks, basis })
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn rho_nodes(&self) -> usize {
        self.rho.len()
    }

    pub fn total_rank(&self) -> usize {
        self.basis.cols
    }

    pub fn phases(&self, times: &[f64]) -> TimePhases {
        let q = self.rho.len();
        let mut mat = CMat::zeros(times.len(), q);
        for (ti, &t) in times.iter().enumerate() {
            for (qq, &x) in self.rho.nodes.iter().enumerate() {
                mat.set(ti, qq, Complex64::from_polar(1.0, self.sign * 2.0 * PI * t * x));
            }
        }
        TimePhases { times: times.to_vec(), mat }
    }

    /// Mode values at radius r for every time in `phases`; `out` is times × outputs.
    pub fn evaluate(&self, phases: &TimePhases, r: f64, out: &mut [Complex64]) -> Result<()> {
        let nt = phases.times.len();
        assert_eq!(out.len(), nt * self.n_outputs);
        let q = self.rho.len();
        let mut g = CMat::zeros(q, self.basis.cols);
        let mut ktab = vec![0.0; self.l_max + 1];
        for (qq, &x) in self.rho.nodes.iter().enumerate() {
            radial_kernel_orders(self.n, r, x, &mut ktab)?;
            for b in &self.blocks {
                let kv = ktab[b.l];
                for c in b.col0..b.col0 + b.rank {
                    let k = qq * self.basis.cols + c;
                    g.re[k] = kv * self.basis.re[k];
                    g.im[k] = kv * self.basis.im[k];
                }
            }
        }
        let res = complex_times_complex(&phases.mat, &g);
        for ti in 0..nt {
            let row = &mut out[ti * self.n_outputs..(ti + 1) * self.n_outputs];
            for b in &self.blocks {
                let m = b.outputs.len();
                for (j, &o) in b.outputs.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for bb in 0..b.rank {
                        acc += res.get(ti, b.col0 + bb) * b.mix[bb * m + j];
                    }
                    row[o] = acc * b.prefactor;
                }
            }
        }
        Ok(())
    }
}

// Modified Gram–Schmidt (twice) on complex vectors; returns the orthonormal
// basis and coefficients mix[b][m] with v_m = Σ_b mix[b][m] e_b.
fn gram_schmidt(vecs: &[Vec<Complex64>]) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let scale = vecs.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vecs {
        let mut w = v.clone();
        for _ in 0..2 {
            for e in &basis {
                let d: Complex64 = e.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                w.iter_mut().zip(e).for_each(|(x, a)| *x -= d * a);
            }
        }
        let nw = norm(&w);
        if nw > 1e-13 * scale && nw > 0.0 {
            w.iter_mut().for_each(|x| *x /= nw);
            basis.push(w);
        }
    }
    let m = vecs.len();
    let mut mix = vec![Complex64::new(0.0, 0.0); basis.len() * m];
    for (b, e) in basis.iter().enumerate() {
        for (j, v) in vecs.iter().enumerate() {
            mix[b * m + j] = e.iter().zip(v).map(|(a, x)| a.conj() * x).sum();
        }
    }
    (basis, mix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_small_r_branch_is_continuous() {
        for n in [2, 3, 4] {
            for l in 0..4 {
                let r = 0.999e-3;
                let a = radial_kernel(n, l, r, 1.3);
                let b =
                    bessel_j(BesselOrder::for_mode(n, l), 2.0 * PI * r * 1.3).unwrap() * r.powf(1.0 - 0.5 * n as f64);
                assert!((a - b).abs() < 1e-13 * (1.0 + a.abs()), "n={n} l={l} {a} {b}");
            }
        }
        assert_eq!(radial_kernel(3, 2, 0.0, 1.0), 0.0);
    }

    #[test]
    fn kernel_orders_match_scalar() {
        let mut out = vec![0.0; 40];
        for &r in &[0.0005, 0.3, 7.0, 60.0] {
            for n in [2, 3, 4] {
                radial_kernel_orders(n, r, 1.7, &mut out).unwrap();
                for (l, v) in out.iter().enumerate() {
                    let s = radial_kernel(n, l, r, 1.7);
                    assert!((v - s).abs() < 1e-11 * (1.0 + s.abs()), "n={n} l={l} r={r}");
                }
            }
        }
    }

    #[test]
    fn engine_matches_direct_quadrature() {
        let p0 = RadialProfile::bump(Complex64::new(1.0, 0.0));
        let p1 = RadialProfile::bump_trig(vec![
            Complex64::new(0.2, 0.1),
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.4, 0.3),
        ])
        .unwrap();
        let profs = vec![(0, &p0), (3, &p1), (3, &p0), (7, &p1)];
        let eng = RadialEngine::new(3, &profs, -1.0, 40.0, EngineOptions::default()).unwrap();
        let times = [0.0, 3.5, 17.0];
        let ph = eng.phases(&times);
        let mut out = vec![Complex64::new(0.0, 0.0); times.len() * profs.len()];
        let fine = QuadratureRule::composite(0.5, 2.0, 400, 16).unwrap();
        for &r in &[0.0, 0.7, 5.0, 19.0] {
            eng.evaluate(&ph, r, &mut out).unwrap();
            for (ti, &t) in times.iter().enumerate() {
                for (k, (l, p)) in profs.iter().enumerate() {
                    let direct = fine.integrate_complex(|x| {
                        p.eval(x)
                            * radial_kernel(3, *l, r, x)
                            * x.powf(1.5)
                            * Complex64::from_polar(1.0, -2.0 * PI * t * x)
                    }) * Complex64::new(0.0, 1.0).powu(*l as u32)
                        * (2.0 * PI);
                    let got = out[ti * profs.len() + k];
                    assert!((got - direct).norm() < 1e-10, "r={r} t={t} k={k} {got} {direct}");
                }
            }
        }
    }
}
