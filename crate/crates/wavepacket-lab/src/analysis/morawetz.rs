use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::grid::{EvaluationGrid, GridSpec};
use crate::harmonics::{sphere_area, HarmonicIndex};
use crate::propagator::{time_derivative_data, FieldSampler, ModeSet, Propagation};
use crate::specfun::gegenbauer_unchecked;
use crate::{LabError, Result};

/// f(r) = r/(ε + r); ε = 0 gives the unit field X = ∂_r.
pub fn weight_f(eps: f64, r: f64) -> f64 {
    r / (eps + r)
}

/// f′(r) = ε/(ε + r)².
pub fn weight_f_prime(eps: f64, r: f64) -> f64 {
    eps / (eps + r).powi(2)
}

/// tr π = f′ + (n−1) f/r = ε/(ε+r)² + (n−1)/(ε+r).
pub fn tr_pi(n: usize, eps: f64, r: f64) -> f64 {
    let s = eps + r;
    eps / (s * s) + (n as f64 - 1.0) / s
}

/// ∂_r tr π.
pub fn tr_pi_prime(n: usize, eps: f64, r: f64) -> f64 {
    let s = eps + r;
    -2.0 * eps / s.powi(3) - (n as f64 - 1.0) / (s * s)
}

/// Closed form of Δ(tr π) as printed with the weight f = r/(ε+r):
/// −(r s³)^{−1} ((n−3) r + 3(n−3) εr/s + 3ε²(n−1)/s), s = ε + r.
/// It does not equal the Laplacian of [`tr_pi`]; see [`delta_tr_pi`].
pub fn delta_tr_pi_printed(n: usize, eps: f64, r: f64) -> f64 {
    let s = eps + r;
    let nf = n as f64;
    -((nf - 3.0) * r + 3.0 * (nf - 3.0) * eps * r / s + 3.0 * eps * eps * (nf - 1.0) / s) / (r * s.powi(3))
}

/// Δ(tr π) = g″ + (n−1)g′/r for g = tr π:
/// [6εr + 2(n−1)(r² − ε²) − (n−1)²(ε+r)²] / (r (ε+r)⁴).
pub fn delta_tr_pi(n: usize, eps: f64, r: f64) -> f64 {
    let s = eps + r;
    let k = n as f64 - 1.0;
    (6.0 * eps * r + 2.0 * k * (r * r - eps * eps) - k * k * s * s) / (r * s.powi(4))
}

/// Which closed form of Δ(tr π) to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrPiLaplacian {
    Printed,
    Direct,
}

impl TrPiLaplacian {
    pub fn eval(self, n: usize, eps: f64, r: f64) -> f64 {
        match self {
            TrPiLaplacian::Printed => delta_tr_pi_printed(n, eps, r),
            TrPiLaplacian::Direct => delta_tr_pi(n, eps, r),
        }
    }
}

/// Δ(tr π) by fourth-order central differences of [`tr_pi`] with step h.
pub fn delta_tr_pi_fd(n: usize, eps: f64, r: f64, h: f64) -> f64 {
    let g = |x: f64| tr_pi(n, eps, x);
    let d1 = (g(r - 2.0 * h) - 8.0 * g(r - h) + 8.0 * g(r + h) - g(r + 2.0 * h)) / (12.0 * h);
    let d2 = (-g(r - 2.0 * h) + 16.0 * g(r - h) - 30.0 * g(r) + 16.0 * g(r + h) - g(r + 2.0 * h)) / (12.0 * h * h);
    d2 + (n as f64 - 1.0) * d1 / r
}

/// Maximum of the printed closed-form Δ(tr π) over `r_grid` (pass iff ≤ 0).
pub fn morawetz_negativity_scan(n: usize, eps: f64, r_grid: &[f64]) -> Result<f64> {
    negativity_scan(n, eps, r_grid, TrPiLaplacian::Printed)
}

/// As [`morawetz_negativity_scan`] for either closed form.
pub fn negativity_scan(n: usize, eps: f64, r_grid: &[f64], form: TrPiLaplacian) -> Result<f64> {
    if !(3..=4).contains(&n) {
        return Err(LabError::Unsupported(format!("negativity scan for n = {n}")));
    }
    if !(eps > 0.0) || r_grid.is_empty() || r_grid.iter().any(|r| !(*r > 0.0)) {
        return Err(LabError::InvalidArgument("need ε > 0 and a non-empty grid of r > 0".into()));
    }
    Ok(r_grid.iter().map(|&r| form.eval(n, eps, r)).fold(f64::NEG_INFINITY, f64::max))
}

/// ∫_0^T ∫ (1+|x|)^{−1−η} |u|² dx dt for u = cos(t√−Δ) f, at each T in `t_ends`
/// (time-panel boundaries of `spec`). Radii follow the window of `spec`; the
/// energy of each half-wave outside the sampled radii is checked.
pub fn morawetz_integral(modes: &ModeSet, eta: f64, t_ends: &[f64], spec: &GridSpec) -> Result<Vec<f64>> {
    if !(eta > 0.0) {
        return Err(LabError::InvalidArgument(format!("η = {eta} must be positive")));
    }
    let t_max = t_ends.iter().copied().fold(0.0, f64::max);
    if t_max > spec.t_max * (1.0 + 1e-12) {
        return Err(LabError::InvalidArgument("window end beyond the grid".into()));
    }
    if modes.is_empty() {
        return Ok(vec![0.0; t_ends.len()]);
    }
    let n = modes.n;
    let grid = EvaluationGrid::new(n, 0, spec)?;
    let reach = spec.t_max + spec.r_max;
    let fwd = FieldSampler::new(modes, Propagation::Forward, reach)?;
    let bwd = FieldSampler::new(modes, Propagation::Backward, reach)?;
    let total = modes.l2_norm_sq();
    let area = sphere_area(n);
    let nm = fwd.indices().len();
    let per = spec.t_nodes;
    let blocks = grid.times.len() / per;
    let mut density = vec![0.0; grid.times.len()];
    for b in 0..blocks {
        let times = &grid.times[b * per..(b + 1) * per];
        let pf = fwd.phases(times)?;
        let pb = bwd.phases(times)?;
        let ranges: Vec<(usize, usize)> = times
            .iter()
            .map(|&t| {
                let v = grid.radial_nodes_at(t);
                (v.first().copied().unwrap_or(0), v.last().map(|x| x + 1).unwrap_or(0))
            })
            .collect();
        let lo = ranges.iter().map(|r| r.0).min().unwrap_or(0);
        let hi = ranges.iter().map(|r| r.1).max().unwrap_or(0);
        let rows: Vec<Result<Vec<f64>>> = (lo..hi)
            .into_par_iter()
            .map_init(
                || (vec![Complex64::new(0.0, 0.0); per * nm], vec![Complex64::new(0.0, 0.0); per * nm]),
                |(cf, cb), ri| {
                    let r = grid.radii[ri];
                    fwd.coefficients_into(&pf, r, cf)?;
                    bwd.coefficients_into(&pb, r, cb)?;
                    let w = grid.radial_weights[ri] * r.powi(n as i32 - 1) * area;
                    let mut out = vec![0.0; 3 * per];
                    for ti in 0..per {
                        if ri < ranges[ti].0 || ri >= ranges[ti].1 {
                            continue;
                        }
                        let (mut full, mut mf, mut mb) = (0.0, 0.0, 0.0);
                        for k in ti * nm..(ti + 1) * nm {
                            full += (0.5 * (cf[k] + cb[k])).norm_sqr();
                            mf += cf[k].norm_sqr();
                            mb += cb[k].norm_sqr();
                        }
                        out[ti] = w * full * (1.0 + r).powf(-1.0 - eta);
                        out[per + ti] = w * mf;
                        out[2 * per + ti] = w * mb;
                    }
                    Ok(out)
                },
            )
            .collect();
        let mut acc = vec![0.0; 3 * per];
        for row in rows {
            for (a, v) in acc.iter_mut().zip(row?) {
                *a += v;
            }
        }
        for ti in 0..per {
            let lost = 1.0 - acc[per + ti].min(acc[2 * per + ti]) / total;
            if lost > spec.truncation_tol {
                return Err(LabError::Truncation(format!(
                    "{lost:.3e} of a half-wave's energy outside the sampled radii at t = {}",
                    times[ti]
                )));
            }
            density[b * per + ti] = acc[ti];
        }
    }
    t_ends
        .iter()
        .map(|&te| {
            let idx = grid.times_until(te)?;
            Ok(idx.iter().map(|&i| grid.time_weights[i] * density[i]).sum())
        })
        .collect()
}

/// φ, ∂_tφ and ∇φ at a space-time point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub phi: f64,
    pub phi_t: f64,
    pub grad: Vec<f64>,
}

/// A real scalar field with pointwise first derivatives.
pub trait ScalarWave {
    fn n(&self) -> usize;
    fn jet(&self, t: f64, x: &[f64]) -> Result<Jet>;
}

/// φ = Re cos(t√−Δ) f for zonal data f, with ∂_t and ∂_r differentiated
/// inside the Hankel integrals and ∂_θ through the zonal harmonics.
pub struct ZonalWave {
    n: usize,
    ls: Vec<usize>,
    /// (value, ∂_t, degree-raised) samplers for the two half-waves
    parts: Vec<[FieldSampler; 3]>,
}

impl ZonalWave {
    pub fn new(modes: &ModeSet, reach: f64) -> Result<Self> {
        if modes.iter().any(|(k, _)| !k.is_zonal()) {
            return Err(LabError::Unsupported("ZonalWave needs zonal data".into()));
        }
        let n = modes.n;
        let ls: Vec<usize> = modes.iter().map(|(k, _)| k.l).collect();
        // ∂_r [r^{(2−n)/2} J_s(2πrρ)] = (l/r)·kernel_l − 2πρ·kernel_{l+1}
        let mut raised = ModeSet::new(n)?;
        for (k, p) in modes.iter() {
            raised.insert(
                HarmonicIndex::zonal(n, k.l + 1),
                p.times_rho_power(Complex64::new(2.0 * std::f64::consts::PI, 0.0), 1),
            )?;
        }
        let mut parts = Vec::new();
        for dir in [Propagation::Forward, Propagation::Backward] {
            parts.push([
                FieldSampler::new(modes, dir, reach)?,
                FieldSampler::new(&time_derivative_data(modes, dir), dir, reach)?,
                FieldSampler::new(&raised, dir, reach)?,
            ]);
        }
        Ok(ZonalWave { n, ls, parts })
    }
}

fn zonal_and_derivative(n: usize, l: usize, x: f64) -> (f64, f64) {
    let v = crate::harmonics::zonal(n, l, x);
    if l == 0 {
        return (v, 0.0);
    }
    let lf = l as f64;
    let d = match n {
        2 => std::f64::consts::SQRT_2 * lf * gegenbauer_unchecked(l - 1, 1.0, x),
        3 => (2.0 * lf + 1.0).sqrt() * gegenbauer_unchecked(l - 1, 1.5, x),
        _ => 2.0 * gegenbauer_unchecked(l - 1, 2.0, x),
    };
    (v, d)
}

impl ScalarWave for ZonalWave {
    fn n(&self) -> usize {
        self.n
    }

    fn jet(&self, t: f64, x: &[f64]) -> Result<Jet> {
        let n = self.n;
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(r > 0.0) {
            return Err(LabError::InvalidArgument("jet at the origin".into()));
        }
        let c = (x[0] / r).clamp(-1.0, 1.0);
        let s = (1.0 - c * c).sqrt();
        let i = Complex64::new(0.0, 1.0);
        let (mut u, mut ut, mut ur, mut uth) =
            (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
        for [base, dt, raised] in &self.parts {
            let cb = base.coefficients(t, r)?;
            let ct = dt.coefficients(t, r)?;
            let cr = raised.coefficients(t, r)?;
            for (k, &l) in self.ls.iter().enumerate() {
                let (z, dz) = zonal_and_derivative(n, l, c);
                u += 0.5 * cb[k] * z;
                ut += 0.5 * ct[k] * z;
                ur += 0.5 * (cb[k] * (l as f64 / r) + i * cr[k]) * z;
                uth += 0.5 * cb[k] * (-s * dz);
            }
        }
        let mut grad: Vec<f64> = x.iter().map(|v| ur.re * v / r).collect();
        if s > 1e-12 {
            // e_θ = (cos θ ω − e₁)/sin θ
            for (j, g) in grad.iter_mut().enumerate() {
                let e1 = if j == 0 { 1.0 } else { 0.0 };
                *g += uth.re / r * (c * x[j] / r - e1) / s;
            }
        }
        Ok(Jet { phi: u.re, phi_t: ut.re, grad })
    }
}

/// A wave frozen at time t0: φ(t, x) = φ(t0, x), ∂_tφ = 0. Not a solution
/// unless φ(t0) is harmonic; used as a negative control.
pub struct FrozenWave<'a, W: ScalarWave> {
    pub inner: &'a W,
    pub t0: f64,
}

impl<W: ScalarWave> ScalarWave for FrozenWave<'_, W> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn jet(&self, _t: f64, x: &[f64]) -> Result<Jet> {
        let mut j = self.inner.jet(self.t0, x)?;
        j.phi_t = 0.0;
        Ok(j)
    }
}

/// Default finite-difference step of the divergence check.
pub const FD_STEP: f64 = 2.5e-3;

/// (P̃_0, P̃_1..P̃_n) for X = f(r)∂_r, with P_α = ½ Q_{αβ} X^β so that the
/// correction terms ¼ tr π φ∂_αφ − ⅛ ∂_α(tr π) φ² close the identity.
fn modified_momentum(j: &Jet, x: &[f64], n: usize, eps: f64) -> Vec<f64> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let f = weight_f(eps, r);
    let tp = tr_pi(n, eps, r);
    let dtp = tr_pi_prime(n, eps, r);
    let dr: f64 = j.grad.iter().zip(x).map(|(g, v)| g * v / r).sum();
    let lag = -j.phi_t * j.phi_t + j.grad.iter().map(|g| g * g).sum::<f64>();
    let mut p = Vec::with_capacity(n + 1);
    p.push(0.5 * j.phi_t * f * dr + 0.25 * tp * j.phi * j.phi_t);
    for i in 0..n {
        let om = x[i] / r;
        p.push(
            0.5 * (j.grad[i] * f * dr - 0.5 * f * om * lag) + 0.25 * tp * j.phi * j.grad[i]
                - 0.125 * dtp * om * j.phi * j.phi,
        );
    }
    p
}

/// Outcome of the divergence-identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    /// Largest residual relative to the local density ½(φ_t² + |∇φ|²) + φ².
    pub max_residual: f64,
    pub points: Vec<(f64, Vec<f64>, f64)>,
}

/// Compares D^α P̃_α (fourth-order finite differences of the modified momentum
/// density) with ½(f′|∂_rφ|² + (f/r)|∇̸φ|²) − ⅛Δ(tr π)φ² at each sample point.
/// Points with r < 1/2 are skipped.
pub fn verify_energy_momentum_identity<W: ScalarWave + Sync>(
    wave: &W,
    eps: f64,
    form: TrPiLaplacian,
    samples: &[(f64, Vec<f64>)],
) -> Result<IdentityCheck> {
    identity_residuals(wave, eps, form, samples, FD_STEP)
}

/// As [`verify_energy_momentum_identity`] with finite-difference step `h`.
pub fn identity_residuals<W: ScalarWave + Sync>(
    wave: &W,
    eps: f64,
    form: TrPiLaplacian,
    samples: &[(f64, Vec<f64>)],
    h: f64,
) -> Result<IdentityCheck> {
    let n = wave.n();
    if !(eps >= 0.0) {
        return Err(LabError::InvalidArgument("ε must be non-negative".into()));
    }
    if !(h > 0.0) {
        return Err(LabError::InvalidArgument("finite-difference step must be positive".into()));
    }
    let res: Vec<Result<Option<(f64, Vec<f64>, f64)>>> = samples
        .par_iter()
        .map(|(t, x)| {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if x.len() != n {
                return Err(LabError::InvalidArgument("sample dimension mismatch".into()));
            }
            if r < 0.5 {
                return Ok(None);
            }
            let d4 = |g: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
                Ok((g(-2.0 * h)? - 8.0 * g(-h)? + 8.0 * g(h)? - g(2.0 * h)?) / (12.0 * h))
            };
            let dt = d4(&|s| Ok(modified_momentum(&wave.jet(t + s, x)?, x, n, eps)[0]))?;
            let mut div = -dt;
            for i in 0..n {
                div += d4(&|s| {
                    let mut y = x.clone();
                    y[i] += s;
                    Ok(modified_momentum(&wave.jet(*t, &y)?, &y, n, eps)[i + 1])
                })?;
            }
            let j = wave.jet(*t, x)?;
            let dr: f64 = j.grad.iter().zip(x).map(|(g, v)| g * v / r).sum();
            let g2: f64 = j.grad.iter().map(|g| g * g).sum();
            let ang = (g2 - dr * dr).max(0.0);
            let rhs = 0.5 * (weight_f_prime(eps, r) * dr * dr + weight_f(eps, r) / r * ang)
                - 0.125 * form.eval(n, eps, r) * j.phi * j.phi;
            let dens = 0.5 * (j.phi_t * j.phi_t + g2) + j.phi * j.phi;
            let rel = if dens > 0.0 { (div - rhs).abs() / dens } else { (div - rhs).abs() };
            Ok(Some((*t, x.clone(), rel)))
        })
        .collect();
    let mut points = Vec::new();
    let mut max_residual: f64 = 0.0;
    for p in res {
        if let Some(p) = p? {
            max_residual = max_residual.max(p.2);
            points.push(p);
        }
    }
    Ok(IdentityCheck { max_residual, points })
}

/// Deterministic sample points near the light cone |x| ≈ t: t ∈ [t_lo, t_hi],
/// |x| = t + U(−2, 2) kept ≥ 1/2, uniform direction.
pub fn cone_samples(n: usize, count: usize, t_range: (f64, f64), seed: u64) -> Vec<(f64, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let t = rng.random_range(t_range.0..=t_range.1);
            let r = (t + rng.random_range(-2.0..=2.0)).max(0.5 + rng.random_range(0.0..1.0));
            let mut d: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let nd = d.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            d.iter_mut().for_each(|v| *v *= r / nd);
            (t, d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::make_radial_bump;

    #[test]
    fn spot_values() {
        assert_eq!(tr_pi(3, 1.0, 1.0), 1.25);
        assert_eq!(delta_tr_pi_printed(3, 1.0, 1.0), -0.375);
        assert!((delta_tr_pi(3, 1.0, 1.0) + 0.625).abs() < 1e-15);
    }

    #[test]
    fn direct_form_matches_differences() {
        for n in [2usize, 3, 4] {
            for &(eps, r) in &[(1.0, 1.0), (0.1, 3.0), (2.0, 0.7), (0.0, 2.0)] {
                let fd = delta_tr_pi_fd(n, eps, r, 1e-3);
                let cf = delta_tr_pi(n, eps, r);
                assert!((fd - cf).abs() < 1e-7 * (1.0 + cf.abs()), "n={n} eps={eps} r={r}: {fd} {cf}");
            }
        }
    }

    #[test]
    fn both_forms_negative() {
        let grid: Vec<f64> = (1..=4000).map(|k| k as f64 * 0.025).collect();
        for (n, eps) in [(3, 1.0), (4, 0.1), (3, 0.01)] {
            assert!(morawetz_negativity_scan(n, eps, &grid).unwrap() < 0.0);
            assert!(negativity_scan(n, eps, &grid, TrPiLaplacian::Direct).unwrap() < 0.0);
        }
        assert!(morawetz_negativity_scan(2, 1.0, &grid).is_err());
    }

    #[test]
    fn zonal_wave_derivatives() {
        let mut m = make_radial_bump(3).unwrap();
        m.insert(HarmonicIndex::zonal(3, 2), crate::propagator::RadialProfile::bump(Complex64::new(0.4, 0.0))).unwrap();
        let w = ZonalWave::new(&m, 30.0).unwrap();
        let (t, x) = (2.5, vec![1.2, -0.7, 1.9]);
        let j = w.jet(t, &x).unwrap();
        let h = 1e-4;
        let ft = (w.jet(t + h, &x).unwrap().phi - w.jet(t - h, &x).unwrap().phi) / (2.0 * h);
        assert!((ft - j.phi_t).abs() < 1e-6);
        for i in 0..3 {
            let mut a = x.clone();
            let mut b = x.clone();
            a[i] += h;
            b[i] -= h;
            let g = (w.jet(t, &a).unwrap().phi - w.jet(t, &b).unwrap().phi) / (2.0 * h);
            assert!((g - j.grad[i]).abs() < 1e-6, "i={i}: {g} {}", j.grad[i]);
        }
    }
}
