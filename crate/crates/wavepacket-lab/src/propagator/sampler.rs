use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use super::kernel::{radial_kernel, EngineOptions, RadialEngine, TimePhases};
use super::modeset::ModeSet;
use super::profile::{RadialProfile, PROFILE_SUPPORT};
use crate::harmonics::{eval_basis, flat_offset, AngularQuadrature, GridSynthesizer, HarmonicIndex, SphereFunction};
use crate::specfun::{oscillatory_integrate, OscillatoryOptions, OscillatoryResult, QuadratureRule};
use crate::{LabError, Result};

/// Direction of the half-wave group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    /// e^{−it√−Δ}: phase e^{−2πitρ} on frequency ρ.
    Forward,
    /// e^{+it√−Δ}.
    Backward,
}

impl Propagation {
    pub fn sign(self) -> f64 {
        match self {
            Propagation::Forward => -1.0,
            Propagation::Backward => 1.0,
        }
    }
}

/// Forward Hankel evolution of one mode,
/// 2π i^l r^{(2−n)/2} ∫ J_{(n−2)/2+l}(2πrρ) e^{−2πitρ} ĉ(ρ) ρ^{n/2} dρ.
pub fn hankel_mode(idx: HarmonicIndex, profile: &RadialProfile, t: f64, r: f64) -> Result<Complex64> {
    Ok(hankel_mode_with(idx, profile, t, r, Propagation::Forward, OscillatoryOptions::default())?.value)
}

/// [`hankel_mode`] with explicit direction and quadrature controls; the
/// returned record carries the convergence data of the unscaled integral.
pub fn hankel_mode_with(
    idx: HarmonicIndex,
    profile: &RadialProfile,
    t: f64,
    r: f64,
    dir: Propagation,
    opts: OscillatoryOptions,
) -> Result<OscillatoryResult> {
    if !(r >= 0.0 && r.is_finite() && t.is_finite()) {
        return Err(LabError::InvalidArgument(format!("bad evaluation point t={t}, r={r}")));
    }
    let n = idx.n;
    let rule = QuadratureRule::gauss_legendre(32, PROFILE_SUPPORT.0, PROFILE_SUPPORT.1)?;
    let amp = |x: f64| profile.eval(x) * (radial_kernel(n, idx.l, r, x) * x.powf(0.5 * n as f64));
    let opts =
        OscillatoryOptions { amplitude_bandwidth: opts.amplitude_bandwidth.max(r + profile.bandwidth() + 2.0), ..opts };
    let mut res = oscillatory_integrate(amp, dir.sign() * t, &rule, opts)?;
    res.value *= Complex64::new(0.0, 1.0).powu(idx.l as u32) * (2.0 * PI);
    Ok(res)
}

/// Evaluator of u(t, rω) = Σ c^l_i(t, r) Y^l_i(ω) for one half-wave.
pub struct FieldSampler {
    modes: ModeSet,
    dir: Propagation,
    indices: Vec<HarmonicIndex>,
    engine: RadialEngine,
    reach: f64,
}

impl FieldSampler {
    /// `reach` bounds r + |t| at every later evaluation.
    pub fn new(modes: &ModeSet, dir: Propagation, reach: f64) -> Result<Self> {
        Self::with_options(modes, dir, reach, EngineOptions::default())
    }

    pub fn with_options(modes: &ModeSet, dir: Propagation, reach: f64, opts: EngineOptions) -> Result<Self> {
        let indices: Vec<HarmonicIndex> = modes.iter().map(|(k, _)| *k).collect();
        let profs: Vec<(usize, &RadialProfile)> = modes.iter().map(|(k, p)| (k.l, p)).collect();
        let engine = RadialEngine::new(modes.n, &profs, dir.sign(), reach, opts)?;
        Ok(FieldSampler { modes: modes.clone(), dir, indices, engine, reach })
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    pub fn n(&self) -> usize {
        self.modes.n
    }

    pub fn direction(&self) -> Propagation {
        self.dir
    }

    pub fn indices(&self) -> &[HarmonicIndex] {
        &self.indices
    }

    pub fn reach(&self) -> f64 {
        self.reach
    }

    pub fn engine(&self) -> &RadialEngine {
        &self.engine
    }

    pub fn phases(&self, times: &[f64]) -> Result<TimePhases> {
        if times.iter().any(|t| !t.is_finite() || t.abs() > self.reach) {
            return Err(LabError::InvalidArgument("time outside the sampler reach".into()));
        }
        Ok(self.engine.phases(times))
    }

    /// Mode values c(t, r), times × indices, for every time in `phases`.
    pub fn coefficients_into(&self, phases: &TimePhases, r: f64, out: &mut [Complex64]) -> Result<()> {
        let tmax = phases.times.iter().fold(0.0f64, |a, t| a.max(t.abs()));
        if !(r >= 0.0) || r + tmax > self.reach * (1.0 + 1e-12) {
            return Err(LabError::Truncation(format!("r + |t| = {} beyond sampler reach {}", r + tmax, self.reach)));
        }
        self.engine.evaluate(phases, r, out)
    }

    pub fn coefficients(&self, t: f64, r: f64) -> Result<Vec<Complex64>> {
        let ph = self.phases(&[t])?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.indices.len()];
        self.coefficients_into(&ph, r, &mut out)?;
        Ok(out)
    }

    pub fn sphere_function(&self, t: f64, r: f64) -> Result<SphereFunction> {
        let c = self.coefficients(t, r)?;
        SphereFunction::from_pairs(self.modes.n, self.indices.iter().copied().zip(c))
    }

    /// Coefficient vector in the flat harmonic ordering up to `l_max`.
    pub fn scatter_flat(&self, coeffs: &[Complex64], l_max: usize, out: &mut [Complex64]) {
        assert_eq!(out.len(), flat_offset(self.modes.n, l_max + 1));
        out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (k, c) in self.indices.iter().zip(coeffs) {
            if k.l <= l_max {
                out[k.flat()] = *c;
            }
        }
    }
}

/// u(t, rω) from a sampler.
pub fn evaluate_field(fs: &FieldSampler, t: f64, r: f64, omega: &[f64]) -> Result<Complex64> {
    let c = fs.coefficients(t, r)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, v) in fs.indices().iter().zip(c) {
        acc += v * eval_basis(*k, omega)?;
    }
    Ok(acc)
}

/// Data whose evolution is ∂_t of the evolution of `modes` (multiplication by ∓2πiρ).
pub fn time_derivative_data(modes: &ModeSet, dir: Propagation) -> ModeSet {
    let c = Complex64::new(0.0, dir.sign() * 2.0 * PI);
    modes.map_profiles(|_, p| p.times_rho_power(c, 1))
}

/// ‖u(t)‖_{L²(B_R)} for each time, by Gauss–Legendre in r (16 nodes per unit).
pub fn energy_norms(fs: &FieldSampler, times: &[f64], r_max: f64) -> Result<Vec<f64>> {
    let rule = QuadratureRule::with_max_width(0.0, r_max, 1.0, 16)?;
    let ph = fs.phases(times)?;
    let m = fs.indices().len();
    let mut buf = vec![Complex64::new(0.0, 0.0); times.len() * m];
    let mut acc = vec![0.0; times.len()];
    let n = fs.n() as i32;
    for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
        fs.coefficients_into(&ph, r, &mut buf)?;
        for (ti, a) in acc.iter_mut().enumerate() {
            let s: f64 = buf[ti * m..(ti + 1) * m].iter().map(|c| c.norm_sqr()).sum();
            *a += w * s * r.powi(n - 1);
        }
    }
    let area = crate::harmonics::sphere_area(fs.n());
    Ok(acc.into_iter().map(|a| (a * area).sqrt()).collect())
}

/// Field dump rows (t, r, ω-index, re, im) on an angular rule.
pub fn write_field_dump<W: Write>(
    w: W,
    fs: &FieldSampler,
    times: &[f64],
    radii: &[f64],
    quad: &AngularQuadrature,
) -> Result<()> {
    let l_max = fs.modes().l_max();
    let synth = GridSynthesizer::new(quad, l_max)?;
    let ph = fs.phases(times)?;
    let m = fs.indices().len();
    let mut buf = vec![Complex64::new(0.0, 0.0); times.len() * m];
    let mut flat = vec![Complex64::new(0.0, 0.0); synth.n_coefficients()];
    let mut vals = vec![Complex64::new(0.0, 0.0); synth.n_nodes()];
    let mut rows: Vec<(usize, usize, usize, Complex64)> = Vec::new();
    for (ri, &r) in radii.iter().enumerate() {
        fs.coefficients_into(&ph, r, &mut buf)?;
        for ti in 0..times.len() {
            fs.scatter_flat(&buf[ti * m..(ti + 1) * m], l_max, &mut flat);
            synth.synthesize(&flat, &mut vals);
            rows.extend(vals.iter().enumerate().map(|(k, v)| (ti, ri, k, *v)));
        }
    }
    rows.sort_by_key(|r| (r.0, r.1, r.2));
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["t", "r", "omega_index", "re", "im"])?;
    for (ti, ri, k, v) in rows {
        wr.write_record(&[
            format!("{}", times[ti]),
            format!("{}", radii[ri]),
            k.to_string(),
            format!("{:.12e}", v.re),
            format!("{:.12e}", v.im),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::make_radial_bump;

    #[test]
    fn sampler_matches_hankel_mode() {
        let m = crate::propagator::make_random_localized(3, 2, 3).unwrap();
        let fs = FieldSampler::new(&m, Propagation::Forward, 30.0).unwrap();
        for &(t, r) in &[(0.0, 0.5), (4.0, 3.0), (12.0, 15.0)] {
            let c = fs.coefficients(t, r).unwrap();
            for (k, v) in fs.indices().iter().zip(&c) {
                let h = hankel_mode(*k, m.get(k).unwrap(), t, r).unwrap();
                assert!((h - v).norm() < 1e-10, "{k:?} t={t} r={r}");
            }
        }
    }

    #[test]
    fn energy_is_conserved_for_bump() {
        let m = make_radial_bump(3).unwrap();
        let fs = FieldSampler::new(&m, Propagation::Forward, 60.0).unwrap();
        let e = energy_norms(&fs, &[0.0, 8.0, 20.0], 40.0).unwrap();
        for v in e {
            assert!((v - 1.0).abs() < 1e-6, "{v}");
        }
    }
}
