use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::EvaluationGrid;
use crate::harmonics::{sup_norm, AngularQuadrature, GridSynthesizer};
use crate::propagator::{FieldSampler, TimePhases};
use crate::specfun::QuadratureRule;
use crate::{LabError, Result};

/// Local maxima in r refined per time slice for sup norms.
const SUP_CANDIDATES: usize = 3;

/// ‖u(t)‖_{L^p} for every grid time and every exponent, with p = ∞ allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeProfile {
    pub times: Vec<f64>,
    pub weights: Vec<f64>,
    pub exponents: Vec<f64>,
    /// values[time][exponent]
    pub values: Vec<Vec<f64>>,
    /// Fraction of ‖u(t)‖₂² outside the sampled radii, per time.
    pub outside: Vec<f64>,
    pub t_panel: f64,
}

impl TimeProfile {
    /// (∫_0^{t_end} ‖u(t)‖_{L^p}^q dt)^{1/q} for exponent slot `e`; `t_end` must
    /// be a time-panel boundary (None: the whole grid).
    pub fn mixed(&self, q: f64, e: usize, t_end: Option<f64>) -> Result<f64> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(LabError::InvalidArgument(format!("time exponent {q} not in [1, ∞)")));
        }
        let end = match t_end {
            Some(t) => {
                let k = t / self.t_panel;
                if (k - k.round()).abs() > 1e-9 || t <= 0.0 {
                    return Err(LabError::InvalidArgument(format!("window end {t} is not a panel boundary")));
                }
                t
            }
            None => f64::INFINITY,
        };
        let mut acc = 0.0;
        for ((t, w), v) in self.times.iter().zip(&self.weights).zip(&self.values) {
            if *t < end {
                acc += w * v[e].powf(q);
            }
        }
        Ok(acc.powf(1.0 / q))
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 2.0 {
        Ok(())
    } else {
        Err(LabError::InvalidArgument(format!("spatial exponent {p} not in [2, ∞]")))
    }
}

fn check_sampler(fs: &FieldSampler, grid: &EvaluationGrid) -> Result<()> {
    if fs.n() != grid.n {
        return Err(LabError::InvalidArgument("grid and sampler dimensions differ".into()));
    }
    if fs.n() == 4 && fs.indices().iter().any(|k| !k.is_zonal()) {
        return Err(LabError::Unsupported("L^p norms on ℝ⁴ need zonal data".into()));
    }
    Ok(())
}

/// ‖u(t)‖_{L^p(ℝⁿ)} for each time and exponent on the grid's radial and
/// angular nodes. The energy outside the sampled radii is compared with
/// ‖u(0)‖₂² and reported as an error above the grid tolerance.
pub fn slice_norms(fs: &FieldSampler, times: &[f64], exponents: &[f64], grid: &EvaluationGrid) -> Result<TimeProfile> {
    check_sampler(fs, grid)?;
    for &p in exponents {
        check_exponent(p)?;
    }
    let n = fs.n();
    let nt = times.len();
    let ne = exponents.len();
    let l_max = fs.modes().l_max();
    let synth = GridSynthesizer::new(&grid.angular, l_max)?;
    let phases = fs.phases(times)?;
    // contiguous node range per time
    let ranges: Vec<(usize, usize)> = times
        .iter()
        .map(|&t| {
            let v = grid.radial_nodes_at(t);
            (v.first().copied().unwrap_or(0), v.last().map(|x| x + 1).unwrap_or(0))
        })
        .collect();
    let lo = ranges.iter().map(|r| r.0).min().unwrap_or(0);
    let hi = ranges.iter().map(|r| r.1).max().unwrap_or(0);
    let nm = fs.indices().len();
    let aw = &grid.angular.weights;
    // per node: [time][exponent or mass] sums and per-time angular max
    let per_node: Vec<Result<(Vec<f64>, Vec<f64>)>> = (lo..hi)
        .into_par_iter()
        .map_init(
            || {
                (
                    vec![Complex64::new(0.0, 0.0); nt * nm],
                    vec![Complex64::new(0.0, 0.0); synth.n_coefficients()],
                    vec![Complex64::new(0.0, 0.0); synth.n_nodes()],
                )
            },
            |(buf, flat, vals), ri| {
                let r = grid.radii[ri];
                fs.coefficients_into(&phases, r, buf)?;
                let mut sums = vec![0.0; nt * (ne + 1)];
                let mut maxes = vec![0.0; nt];
                for ti in 0..nt {
                    if ri < ranges[ti].0 || ri >= ranges[ti].1 {
                        continue;
                    }
                    fs.scatter_flat(&buf[ti * nm..(ti + 1) * nm], l_max, flat);
                    synth.synthesize(flat, vals);
                    let s = &mut sums[ti * (ne + 1)..(ti + 1) * (ne + 1)];
                    let mut mx: f64 = 0.0;
                    for (v, w) in vals.iter().zip(aw) {
                        let a2 = v.norm_sqr();
                        mx = mx.max(a2);
                        s[ne] += w * a2;
                        for (e, &p) in exponents.iter().enumerate() {
                            if p == 2.0 {
                                s[e] += w * a2;
                            } else if p.is_finite() {
                                s[e] += w * a2.powf(0.5 * p);
                            }
                        }
                    }
                    maxes[ti] = mx.sqrt();
                }
                Ok((sums, maxes))
            },
        )
        .collect();
    let per_node = per_node.into_iter().collect::<Result<Vec<_>>>()?;
    let mut acc = vec![0.0; nt * (ne + 1)];
    for (k, (sums, _)) in per_node.iter().enumerate() {
        let ri = lo + k;
        let wr = grid.radial_weights[ri] * grid.radii[ri].powi(n as i32 - 1);
        for (a, s) in acc.iter_mut().zip(sums) {
            *a += wr * s;
        }
    }
    let total = fs.modes().l2_norm_sq();
    let mut values = vec![vec![0.0; ne]; nt];
    let mut outside = vec![0.0; nt];
    for ti in 0..nt {
        let mass = acc[ti * (ne + 1) + ne];
        outside[ti] = if total > 0.0 { (1.0 - mass / total).max(0.0) } else { 0.0 };
        if outside[ti] > grid.spec.truncation_tol {
            return Err(LabError::Truncation(format!(
                "{:.3e} of the energy lies outside the sampled radii at t = {}",
                outside[ti], times[ti]
            )));
        }
        for (e, &p) in exponents.iter().enumerate() {
            values[ti][e] = if p.is_finite() {
                acc[ti * (ne + 1) + e].powf(1.0 / p)
            } else {
                let profile: Vec<(usize, f64)> =
                    (ranges[ti].0..ranges[ti].1).map(|ri| (ri, per_node[ri - lo].1[ti])).collect();
                refined_sup(fs, times[ti], &profile, grid, &synth)?
            };
        }
    }
    Ok(TimeProfile {
        times: times.to_vec(),
        weights: vec![0.0; nt],
        exponents: exponents.to_vec(),
        values,
        outside,
        t_panel: grid.spec.t_panel,
    })
}

/// Time profile over the grid's time nodes (weights filled in).
pub fn time_profile(fs: &FieldSampler, exponents: &[f64], grid: &EvaluationGrid) -> Result<TimeProfile> {
    let mut p = slice_norms(fs, &grid.times, exponents, grid)?;
    p.weights = grid.time_weights.clone();
    Ok(p)
}

/// ‖u(t)‖_{L^p(ℝⁿ)}, p ∈ [2, ∞].
pub fn lr_norm(fs: &FieldSampler, t: f64, exponent: f64, grid: &EvaluationGrid) -> Result<f64> {
    Ok(slice_norms(fs, &[t], &[exponent], grid)?.values[0][0])
}

/// (∫_0^{t_max} ‖u(t)‖_{L^p}^q dt)^{1/q} over the grid's time window.
pub fn mixed_norm(fs: &FieldSampler, q: f64, exponent: f64, grid: &EvaluationGrid) -> Result<f64> {
    if !(q >= 2.0 && q.is_finite()) {
        return Err(LabError::InvalidArgument(format!("time exponent {q} not in [2, ∞)")));
    }
    time_profile(fs, &[exponent], grid)?.mixed(q, 0, None)
}

/// Grid max of |u(t)| refined by golden-section search in r around the largest
/// local maxima of the per-radius angular maximum, then on the sphere.
fn refined_sup(
    fs: &FieldSampler,
    t: f64,
    profile: &[(usize, f64)],
    grid: &EvaluationGrid,
    synth: &GridSynthesizer,
) -> Result<f64> {
    let mut best = profile.iter().fold(0.0f64, |a, p| a.max(p.1));
    if best == 0.0 {
        return Ok(0.0);
    }
    let mut peaks: Vec<usize> = (0..profile.len())
        .filter(|&k| {
            let v = profile[k].1;
            (k == 0 || profile[k - 1].1 <= v) && (k + 1 == profile.len() || profile[k + 1].1 <= v)
        })
        .collect();
    peaks.sort_by(|&a, &b| profile[b].1.total_cmp(&profile[a].1));
    let phases = fs.phases(&[t])?;
    let l_max = fs.modes().l_max();
    let nm = fs.indices().len();
    let mut buf = vec![Complex64::new(0.0, 0.0); nm];
    let mut flat = vec![Complex64::new(0.0, 0.0); synth.n_coefficients()];
    let mut vals = vec![Complex64::new(0.0, 0.0); synth.n_nodes()];
    let mut node_max = |r: f64, phases: &TimePhases| -> Result<f64> {
        fs.coefficients_into(phases, r, &mut buf)?;
        fs.scatter_flat(&buf, l_max, &mut flat);
        synth.synthesize(&flat, &mut vals);
        Ok(vals.iter().fold(0.0f64, |a, v| a.max(v.norm())))
    };
    for &k in peaks.iter().take(SUP_CANDIDATES) {
        let a = grid.radii[profile[k.saturating_sub(1)].0];
        let b = grid.radii[profile[(k + 1).min(profile.len() - 1)].0];
        let r = golden_max(a, b, |r| node_max(r, &phases))?;
        let f = fs.sphere_function(t, r)?;
        if !f.is_zero() {
            best = best.max(sup_norm(&f, &grid.angular)?);
        }
    }
    Ok(best)
}

fn golden_max<F: FnMut(f64) -> Result<f64>>(mut a: f64, mut b: f64, mut f: F) -> Result<f64> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..30 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { c } else { d })
}

/// (∫ r^{n−1} ∫_{S^{n−1}} |F(r, ω)|^p dω dr)^{1/p} for an explicit integrand
/// (p = ∞: max over the nodes).
pub fn lr_norm_fn<F>(f: F, exponent: f64, radial: &QuadratureRule, quad: &AngularQuadrature) -> Result<f64>
where
    F: Fn(f64, &[f64]) -> Complex64,
{
    check_exponent(exponent)?;
    let n = quad.n as i32;
    let mut acc = 0.0f64;
    for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
        for (om, &wo) in quad.nodes.iter().zip(&quad.weights) {
            let v = f(r, om).norm();
            if exponent.is_finite() {
                acc += wr * r.powi(n - 1) * wo * v.powf(exponent);
            } else {
                acc = acc.max(v);
            }
        }
    }
    Ok(if exponent.is_finite() { acc.powf(1.0 / exponent) } else { acc })
}
