use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cubes::CubeSampler;
use super::grid::{EvaluationGrid, GridSpec, RadialWindow};
use super::morawetz::{
    cone_samples, delta_tr_pi, delta_tr_pi_fd, delta_tr_pi_printed, identity_residuals, morawetz_integral,
    negativity_scan, tr_pi, FrozenWave, TrPiLaplacian, ZonalWave, FD_STEP,
};
use super::norms::time_profile;
use super::report::{least_squares, log_log_fit, short_hash, EstimateReport, ScanPoint, Verdict};
use crate::harmonics::{sphere_area, sup_norm, AngularQuadrature};
use crate::propagator::{
    knapp_fourier, make_knapp, make_radial_bump, make_random_family, make_random_localized, make_random_radial,
    AxisymmetricSampler, FieldSampler, ModeSet, Propagation, RandomFamily,
};
use crate::specfun::QuadratureRule;
use crate::wavepackets::PacketCoefficients;
use crate::{LabError, Result};

fn config_hash<T: Serialize>(cfg: &T) -> String {
    short_hash(serde_json::to_string(cfg).unwrap_or_default().as_bytes())
}

fn positive(v: f64, what: &str) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(LabError::InvalidArgument(format!("{what} must be positive, got {v}")))
    }
}

fn nonempty<T>(v: &[T], what: &str) -> Result<()> {
    if v.is_empty() {
        Err(LabError::InvalidArgument(format!("{what} must not be empty")))
    } else {
        Ok(())
    }
}

/// Space exponent r_η from (1/2 − 1/r)(n−1) = (1+2η)/2, clipped to
/// (2(n−1)/(n−2), 2(n−1)/(n−3)] (∞ for n = 3).
pub fn r_eta(n: usize, eta: f64) -> Result<f64> {
    if n < 3 || !(eta > 0.0) {
        return Err(LabError::InvalidArgument(format!("r_η needs n >= 3 and η > 0 (n = {n}, η = {eta})")));
    }
    let k = (n - 1) as f64;
    let inv = 0.5 - (1.0 + 2.0 * eta) / (2.0 * k);
    let lo = 2.0 * k / (n as f64 - 2.0);
    let hi = if n == 3 { f64::INFINITY } else { 2.0 * k / (n as f64 - 3.0) };
    let r = if inv > 0.0 { 1.0 / inv } else { f64::INFINITY };
    Ok(if r <= lo { lo * (1.0 + 1e-9) } else { r.min(hi) })
}

// ---------------------------------------------------------------- dispersive

/// Calibration/holdout scan of sup_ω|u(t, rω)| against the packet sum
/// N^{(n−1)/2} (Σ_{l,i,k} |c^l_{i,k}|² (1+|t−k/4|)^{1−n})^{1/2}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DispersiveConfig {
    pub n: usize,
    pub calibration_n: usize,
    pub calibration_seeds: Vec<u64>,
    pub holdout_ns: Vec<usize>,
    pub holdout_seeds: Vec<u64>,
    /// Sample times; at each, r runs over [t − r_before, t + r_after] in steps of r_step.
    pub times: Vec<f64>,
    pub r_before: f64,
    pub r_after: f64,
    pub r_step: f64,
    pub k_max: usize,
}

impl Default for DispersiveConfig {
    fn default() -> Self {
        DispersiveConfig {
            n: 3,
            calibration_n: 4,
            calibration_seeds: (1001..=1005).collect(),
            holdout_ns: vec![8, 16],
            holdout_seeds: (1..=20).collect(),
            times: vec![0.0, 4.0, 8.0, 16.0, 32.0, 200.0],
            r_before: 8.0,
            r_after: 16.0,
            r_step: 0.5,
            k_max: 512,
        }
    }
}

impl DispersiveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n != 3 {
            return Err(LabError::Unsupported("the dispersive scan runs in n = 3".into()));
        }
        nonempty(&self.calibration_seeds, "dispersive.calibration_seeds")?;
        nonempty(&self.holdout_seeds, "dispersive.holdout_seeds")?;
        nonempty(&self.holdout_ns, "dispersive.holdout_ns")?;
        nonempty(&self.times, "dispersive.times")?;
        positive(self.r_step, "dispersive.r_step")?;
        if self.r_before < 0.0 || self.r_after < 0.0 || self.times.iter().any(|t| !(*t >= 0.0)) {
            return Err(LabError::InvalidArgument("dispersive sample ranges must be non-negative".into()));
        }
        if self.k_max == 0 {
            return Err(LabError::InvalidArgument("dispersive.k_max must be positive".into()));
        }
        Ok(())
    }

    pub fn samples(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &t in &self.times {
            let a = (t - self.r_before).max(0.0);
            let steps = ((t + self.r_after - a) / self.r_step).round() as usize;
            out.extend((0..=steps).map(|j| (t, a + j as f64 * self.r_step)));
        }
        out
    }
}

/// Per-sample LHS/RHS of the packet dispersive bound for `modes`.
pub fn dispersive_scan(modes: &ModeSet, samples: &[(f64, f64)], k_max: usize) -> Result<Vec<ScanPoint>> {
    let n = modes.n;
    let big_n = modes.localization.map(|v| v as f64);
    if modes.is_empty() {
        return Ok(samples
            .iter()
            .map(|&(t, r)| ScanPoint { t: Some(t), r: Some(r), big_n, ..ScanPoint::new(0.0, 0.0) })
            .collect());
    }
    let packets = PacketCoefficients::from_modes(modes, k_max);
    let scale = big_n.unwrap_or(1.0).powf(0.5 * (n as f64 - 1.0));
    let rhs = |t: f64| {
        let mut acc = 0.0;
        for c in packets.coeffs.values() {
            for (j, v) in c.iter().enumerate() {
                let k = j as f64 - k_max as f64;
                acc += v.norm_sqr() / (1.0 + (t - 0.25 * k).abs()).powi(n as i32 - 1);
            }
        }
        scale * acc.sqrt()
    };
    let reach = samples.iter().map(|(t, r)| t + r).fold(1.0, f64::max) + 1.0;
    let fs = FieldSampler::new(modes, Propagation::Forward, reach)?;
    let quad = AngularQuadrature::new(n, 3 * modes.l_max() + 16)?;
    samples
        .par_iter()
        .map(|&(t, r)| {
            let f = fs.sphere_function(t, r)?;
            let lhs = if f.is_zero() { 0.0 } else { sup_norm(&f, &quad)? };
            Ok(ScanPoint { t: Some(t), r: Some(r), big_n, ..ScanPoint::new(lhs, rhs(t)) })
        })
        .collect()
}

/// C_disp = max ratio over calibration seeds at N = calibration_n; pass iff
/// every holdout ratio is ≤ C_disp.
pub fn verify_dispersive(cfg: &DispersiveConfig) -> Result<EstimateReport> {
    cfg.validate()?;
    let samples = cfg.samples();
    let mut rep = EstimateReport::new("dispersive");
    rep.config_hash = Some(config_hash(cfg));
    let scan = |big_n: usize, seed: u64| -> Result<Vec<ScanPoint>> {
        let m = make_random_localized(cfg.n, big_n, seed)?;
        let mut pts = dispersive_scan(&m, &samples, cfg.k_max)?;
        pts.iter_mut().for_each(|p| p.seed = Some(seed));
        Ok(pts)
    };
    let mut c_disp: f64 = 0.0;
    for &s in &cfg.calibration_seeds {
        let pts = scan(cfg.calibration_n, s)?;
        c_disp = pts.iter().fold(c_disp, |a, p| a.max(p.ratio));
        rep.points.extend(pts);
    }
    let mut worst: f64 = 0.0;
    for &big_n in &cfg.holdout_ns {
        let mut worst_n: f64 = 0.0;
        for &s in &cfg.holdout_seeds {
            let pts = scan(big_n, s)?;
            worst_n = pts.iter().fold(worst_n, |a, p| a.max(p.ratio));
            rep.points.extend(pts);
        }
        rep.notes.push(format!("N = {big_n}: max holdout ratio {worst_n:.4}"));
        worst = worst.max(worst_n);
    }
    rep.notes.insert(0, format!("C_disp = {c_disp:.4} calibrated at N = {}", cfg.calibration_n));
    rep.seeds = cfg.calibration_seeds.iter().chain(&cfg.holdout_seeds).copied().collect();
    rep.grid_hash = short_hash(format!("{:?}", samples.len()).as_bytes());
    rep.judge_upper(worst, c_disp, "max holdout LHS/RHS");
    Ok(rep)
}

// ---------------------------------------------------------------- endpoint

/// Data family for the endpoint and dual-scale scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataFamily {
    /// Every harmonic with N < l < 2N.
    Localized,
    /// Zonal harmonics with N < l < 2N.
    Zonal,
    /// Radial data; no angular frequency to scan.
    Radial,
}

impl DataFamily {
    pub fn make(self, n: usize, big_n: usize, seed: u64) -> Result<ModeSet> {
        match self {
            DataFamily::Localized => make_random_family(n, big_n, seed, RandomFamily::Full),
            DataFamily::Zonal => make_random_family(n, big_n, seed, RandomFamily::Zonal),
            DataFamily::Radial => make_random_radial(n, seed),
        }
    }
}

/// ‖u‖_{L^q([0,T]; L^r)}/‖u(0)‖₂ over dyadic N, max over seeds, log-log slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EndpointConfig {
    pub n: usize,
    pub family: DataFamily,
    pub ns: Vec<usize>,
    pub seeds: Vec<u64>,
    pub q: f64,
    /// Space exponent; `inf` in TOML is not valid, so ∞ is written as 0.
    pub r: f64,
    pub t_max: f64,
    pub t_panel: f64,
    pub t_nodes: usize,
    pub r_nodes: usize,
    pub margin: f64,
    /// Pass iff slope ≤ this.
    pub slope_tol: f64,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            n: 3,
            family: DataFamily::Localized,
            ns: vec![2, 4, 8, 16, 32],
            seeds: (1..=10).collect(),
            q: 2.0,
            r: 4.5,
            t_max: 32.0,
            t_panel: 4.0,
            t_nodes: 6,
            r_nodes: 12,
            margin: 12.0,
            slope_tol: 0.725,
        }
    }
}

impl EndpointConfig {
    /// The (2+1)-dimensional variant L^{2.25}(L^∞).
    pub fn planar() -> Self {
        EndpointConfig { n: 2, q: 2.25, r: 0.0, slope_tol: 0.6, ..Self::default() }
    }

    pub fn space_exponent(&self) -> f64 {
        if self.r == 0.0 {
            f64::INFINITY
        } else {
            self.r
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=4).contains(&self.n) {
            return Err(LabError::Unsupported(format!("endpoint scan in dimension {}", self.n)));
        }
        if self.n == 4 && self.family == DataFamily::Localized {
            return Err(LabError::Unsupported("n = 4 norms need zonal data".into()));
        }
        if self.family != DataFamily::Radial && self.ns.len() < 3 {
            return Err(LabError::InvalidArgument(format!(
                "endpoint scan needs at least 3 dyadic N values, got {}",
                self.ns.len()
            )));
        }
        if self.ns.iter().any(|&v| v < 2 || !v.is_power_of_two()) {
            return Err(LabError::InvalidArgument("endpoint N values must be dyadic and >= 2".into()));
        }
        nonempty(&self.seeds, "endpoint.seeds")?;
        if !(self.q >= 2.0 && self.q.is_finite()) {
            return Err(LabError::InvalidArgument(format!("endpoint.q = {} not in [2, ∞)", self.q)));
        }
        if !(self.r == 0.0 || self.r >= 2.0) {
            return Err(LabError::InvalidArgument(format!("endpoint.r = {} not in [2, ∞] (0 = ∞)", self.r)));
        }
        positive(self.t_max, "endpoint.t_max")?;
        positive(self.t_panel, "endpoint.t_panel")?;
        positive(self.margin, "endpoint.margin")?;
        if self.t_nodes == 0 || self.r_nodes == 0 {
            return Err(LabError::InvalidArgument("endpoint node counts must be positive".into()));
        }
        Ok(())
    }

    /// Windowed grid for data of angular degree ≤ l_max.
    pub fn grid_spec(&self, l_max: usize) -> GridSpec {
        let impact = l_max as f64 / PI + 2.0;
        GridSpec {
            t_max: self.t_max,
            t_panel: self.t_panel,
            t_nodes: self.t_nodes,
            r_max: (self.t_max.hypot(impact) + self.margin + 2.0).ceil(),
            r_panel: 1.0,
            r_nodes: self.r_nodes,
            window: Some(RadialWindow { margin: self.margin, impact }),
            ..GridSpec::default()
        }
    }
}

/// ‖u‖_{L^q([0,T]; L^r)}/‖u(0)‖₂ for u = e^{−it√−Δ} f.
pub fn strichartz_ratio(modes: &ModeSet, q: f64, r: f64, spec: &GridSpec) -> Result<f64> {
    if modes.is_empty() {
        return Ok(0.0);
    }
    let fs = FieldSampler::new(modes, Propagation::Forward, spec.t_max + spec.r_max)?;
    let grid = EvaluationGrid::new(modes.n, modes.l_max(), spec)?;
    Ok(time_profile(&fs, &[r], &grid)?.mixed(q, 0, None)? / modes.l2_norm())
}

pub fn verify_endpoint(cfg: &EndpointConfig) -> Result<EstimateReport> {
    cfg.validate()?;
    let r = cfg.space_exponent();
    let name = if cfg.n == 2 { "endpoint-planar" } else { "endpoint" };
    let mut rep = EstimateReport::new(name);
    rep.config_hash = Some(config_hash(cfg));
    rep.seeds = cfg.seeds.clone();
    let ns: Vec<usize> = if cfg.family == DataFamily::Radial { vec![0] } else { cfg.ns.clone() };
    let mut maxima = Vec::new();
    for &big_n in &ns {
        let mut best: f64 = 0.0;
        for &seed in &cfg.seeds {
            let m = cfg.family.make(cfg.n, big_n.max(2), seed)?;
            let spec = cfg.grid_spec(m.l_max());
            let v = strichartz_ratio(&m, cfg.q, r, &spec)?;
            best = best.max(v);
            rep.points.push(ScanPoint {
                big_n: (big_n > 0).then_some(big_n as f64),
                q: Some(cfg.q),
                r: Some(r),
                window: Some(cfg.t_max),
                seed: Some(seed),
                ..ScanPoint::new(v, 1.0)
            });
            if rep.grid_hash.is_empty() {
                rep.grid_hash = short_hash(serde_json::to_string(&spec).unwrap_or_default().as_bytes());
            }
        }
        maxima.push(best);
    }
    if cfg.family == DataFamily::Radial {
        rep.statistic = maxima[0];
        rep.criterion = "no angular frequency to scan".into();
        rep.verdict = Verdict::NotApplicable;
        return Ok(rep);
    }
    let xs: Vec<f64> = ns.iter().map(|&v| v as f64).collect();
    let fit = log_log_fit(&xs, &maxima)?;
    let slope = fit.slopes[0];
    rep.notes.push(format!("max ratios over seeds: {maxima:?}"));
    rep.fit = Some(fit);
    rep.judge_upper(slope, cfg.slope_tol, "log-log slope in N");
    Ok(rep)
}

// ---------------------------------------------------------------- spherical threshold

/// L²(L^r) of the radial bump under T-doubling above and below r = 2(n−1)/(n−2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdConfig {
    pub n: usize,
    pub t_short: f64,
    pub r_above: f64,
    pub r_below: f64,
    /// Largest relative growth (T → 2T) counted as saturation above the threshold.
    pub saturation_tol: f64,
    /// Smallest relative growth counted as divergence below it.
    pub divergence_min: f64,
    pub t_panel: f64,
    pub t_nodes: usize,
    pub margin: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            n: 3,
            t_short: 16.0,
            r_above: 4.5,
            r_below: 3.0,
            saturation_tol: 0.02,
            divergence_min: 0.10,
            t_panel: 1.0,
            t_nodes: 4,
            margin: 12.0,
        }
    }
}

impl ThresholdConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n != 3 && self.n != 4 {
            return Err(LabError::Unsupported(format!("threshold scan in dimension {}", self.n)));
        }
        positive(self.t_short, "threshold.t_short")?;
        positive(self.t_panel, "threshold.t_panel")?;
        positive(self.margin, "threshold.margin")?;
        if !(self.r_above >= 2.0 && self.r_below >= 2.0) || self.t_nodes == 0 {
            return Err(LabError::InvalidArgument("threshold exponents must be >= 2".into()));
        }
        let k = self.t_short / self.t_panel;
        if (k - k.round()).abs() > 1e-9 {
            return Err(LabError::InvalidArgument("threshold.t_short must be a multiple of t_panel".into()));
        }
        Ok(())
    }
}

/// Two reports: saturation for r_above, growth for r_below.
pub fn verify_spherical_threshold(cfg: &ThresholdConfig) -> Result<Vec<EstimateReport>> {
    cfg.validate()?;
    let m = make_radial_bump(cfg.n)?;
    let t_long = 2.0 * cfg.t_short;
    let spec = GridSpec {
        t_max: t_long,
        t_panel: cfg.t_panel,
        t_nodes: cfg.t_nodes,
        r_max: t_long + cfg.margin + 4.0,
        window: Some(RadialWindow { margin: cfg.margin, impact: 2.0 }),
        ..GridSpec::default()
    };
    let fs = FieldSampler::new(&m, Propagation::Forward, spec.t_max + spec.r_max)?;
    let grid = EvaluationGrid::new(cfg.n, 0, &spec)?;
    let prof = time_profile(&fs, &[cfg.r_above, cfg.r_below], &grid)?;
    let hash = grid.hash();
    let mut out = Vec::new();
    for (e, r) in [cfg.r_above, cfg.r_below].into_iter().enumerate() {
        let a = prof.mixed(2.0, e, Some(cfg.t_short))?;
        let b = prof.mixed(2.0, e, Some(t_long))?;
        let growth = b / a - 1.0;
        let mut rep = EstimateReport::new(if e == 0 { "threshold-saturation" } else { "threshold-divergence" });
        rep.config_hash = Some(config_hash(cfg));
        rep.grid_hash = hash.clone();
        for (t, v) in [(cfg.t_short, a), (t_long, b)] {
            rep.points.push(ScanPoint { r: Some(r), q: Some(2.0), window: Some(t), ..ScanPoint::new(v, 1.0) });
        }
        if e == 0 {
            rep.judge_upper(growth, cfg.saturation_tol, &format!("L2(L^{r}) growth T={}->{t_long}", cfg.t_short));
        } else {
            rep.statistic = growth;
            rep.tolerance = cfg.divergence_min;
            rep.criterion = format!("L2(L^{r}) growth T={}->{t_long} >= {}", cfg.t_short, cfg.divergence_min);
            rep.verdict = Verdict::from_bool(growth >= cfg.divergence_min);
        }
        out.push(rep);
    }
    Ok(out)
}

// ---------------------------------------------------------------- dual scale

/// ‖(Σ_α ‖u‖^{r_η}_{L²(Q_α)})^{1/r_η}‖_{L²([0,T])}/‖u(0)‖₂ over N and μ,
/// zonal data in n = 3, with a bilinear log-log fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DualScaleConfig {
    pub ns: Vec<usize>,
    pub mus: Vec<f64>,
    pub seeds: Vec<u64>,
    pub eta: f64,
    /// Cube-sum exponent; 0 selects r_η from η.
    pub p: f64,
    pub t_max: f64,
    pub t_panel: f64,
    pub t_nodes: usize,
    /// Sampled box [−R, R]³.
    pub half_extent: usize,
    pub truncation_tol: f64,
}

impl Default for DualScaleConfig {
    fn default() -> Self {
        DualScaleConfig {
            ns: vec![4, 8, 16],
            mus: vec![1.0, 0.5, 0.25],
            seeds: (1..=4).collect(),
            eta: 0.125,
            p: 0.0,
            t_max: 16.0,
            t_panel: 2.0,
            t_nodes: 4,
            half_extent: 28,
            truncation_tol: 1e-3,
        }
    }
}

impl DualScaleConfig {
    pub fn exponent(&self) -> Result<f64> {
        if self.p == 0.0 {
            r_eta(3, self.eta)
        } else {
            Ok(self.p)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ns.len() < 2 || self.mus.len() < 2 {
            return Err(LabError::InvalidArgument("dual-scale scan needs at least 2 N and 2 μ values".into()));
        }
        nonempty(&self.seeds, "dual_scale.seeds")?;
        positive(self.eta, "dual_scale.eta")?;
        for &mu in &self.mus {
            let side = 1.0 / mu;
            if !(mu > 0.0 && mu <= 1.0) || (side - side.round()).abs() > 1e-9 {
                return Err(LabError::InvalidArgument(format!("μ = {mu} must be in (0, 1] with 1/μ an integer")));
            }
            if self.half_extent % side.round() as usize != 0 {
                return Err(LabError::InvalidArgument(format!(
                    "1/μ = {side} does not divide R = {}",
                    self.half_extent
                )));
            }
        }
        if !(self.p == 0.0 || self.p >= 1.0) {
            return Err(LabError::InvalidArgument("dual_scale.p must be >= 1 (0 = r_η)".into()));
        }
        positive(self.t_max, "dual_scale.t_max")?;
        positive(self.t_panel, "dual_scale.t_panel")?;
        positive(self.truncation_tol, "dual_scale.truncation_tol")?;
        if self.t_nodes == 0 || self.half_extent == 0 || self.ns.iter().any(|&v| v < 2) {
            return Err(LabError::InvalidArgument("dual-scale counts must be positive and N >= 2".into()));
        }
        Ok(())
    }
}

/// Normalised dual-scale norms of u = e^{−it√−Δ} f, one per μ.
pub fn dual_scale_ratios(modes: &ModeSet, mus: &[f64], p: f64, cfg: &DualScaleConfig) -> Result<Vec<f64>> {
    if modes.is_empty() {
        return Ok(vec![0.0; mus.len()]);
    }
    let cs = CubeSampler::new(modes, Propagation::Forward, cfg.half_extent, cfg.t_max)?;
    let panels = (cfg.t_max / cfg.t_panel).ceil().max(1.0) as usize;
    let rule = QuadratureRule::composite(0.0, cfg.t_max, panels, cfg.t_nodes)?;
    let total = modes.l2_norm_sq();
    let rows: Vec<Result<Vec<f64>>> = rule
        .nodes
        .par_iter()
        .map(|&t| {
            let masses = cs.masses(t);
            let lost = 1.0 - masses.total() / total;
            if lost > cfg.truncation_tol {
                return Err(LabError::Truncation(format!("{lost:.3e} of the mass outside the box at t = {t}")));
            }
            mus.iter().map(|&mu| masses.dual_norm(mu, p)).collect()
        })
        .collect();
    let mut acc = vec![0.0; mus.len()];
    for (row, w) in rows.into_iter().zip(&rule.weights) {
        for (a, v) in acc.iter_mut().zip(row?) {
            *a += w * v * v;
        }
    }
    Ok(acc.iter().map(|a| a.sqrt() / total.sqrt()).collect())
}

/// Fits log ratio = c + a log N + b log(1/μ); pass iff a ≤ 1/2+η+0.1 and b ≤ 1/2+2η+0.1.
pub fn verify_dual_scale(cfg: &DualScaleConfig) -> Result<EstimateReport> {
    cfg.validate()?;
    let p = cfg.exponent()?;
    let mut rep = EstimateReport::new("dual-scale");
    rep.config_hash = Some(config_hash(cfg));
    rep.seeds = cfg.seeds.clone();
    rep.grid_hash = short_hash(format!("{}/{}/{}/{}", cfg.half_extent, cfg.t_max, cfg.t_panel, cfg.t_nodes).as_bytes());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &big_n in &cfg.ns {
        let mut best = vec![0.0f64; cfg.mus.len()];
        for &seed in &cfg.seeds {
            let m = DataFamily::Zonal.make(3, big_n, seed)?;
            let v = dual_scale_ratios(&m, &cfg.mus, p, cfg)?;
            for (k, (&mu, &val)) in cfg.mus.iter().zip(&v).enumerate() {
                best[k] = best[k].max(val);
                rep.points.push(ScanPoint {
                    big_n: Some(big_n as f64),
                    mu: Some(mu),
                    eta: Some(cfg.eta),
                    r: Some(p),
                    q: Some(2.0),
                    window: Some(cfg.t_max),
                    seed: Some(seed),
                    ..ScanPoint::new(val, 1.0)
                });
            }
        }
        for (&mu, &v) in cfg.mus.iter().zip(&best) {
            xs.push(vec![(big_n as f64).ln(), (1.0 / mu).ln()]);
            ys.push(v.ln());
        }
    }
    let fit = least_squares(&xs, &ys)?;
    let (a, b) = (fit.slopes[0], fit.slopes[1]);
    let tol_a = 0.5 + cfg.eta + 0.1;
    let tol_b = 0.5 + 2.0 * cfg.eta + 0.1;
    rep.notes.push(format!("a (N) = {a:.4} <= {tol_a}; b (1/μ) = {b:.4} <= {tol_b}; r = {p:.4}"));
    rep.fit = Some(fit);
    rep.judge_upper(a, tol_a, "slope a in N");
    if b > tol_b && rep.verdict == Verdict::Pass {
        rep.verdict = Verdict::Fail;
    }
    rep.criterion = format!("a <= {tol_a} and b <= {tol_b}");
    Ok(rep)
}

// ---------------------------------------------------------------- Knapp

/// ‖u^ε‖_{L²([0, T_ε]; L^r)}/‖f^ε‖₂ for Knapp data, T_ε = window_factor·ε^{−2},
/// sampled in the frame comoving with the block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KnappConfig {
    pub n: usize,
    pub r: f64,
    pub eps: Vec<f64>,
    /// Angular truncation for the |Ω|^s lines (default ⌈48/ε⌉).
    pub l_max: Option<usize>,
    pub window_factor: f64,
    pub time_panels: usize,
    pub time_nodes: usize,
    pub z_half: f64,
    pub z_panel: f64,
    pub z_nodes: usize,
    /// Transverse extent p ≤ p_factor/ε, panels of 1/ε.
    pub p_factor: f64,
    pub p_nodes: usize,
    pub slope_tol: f64,
    /// Exponents s for the ‖|Ω|^s f^ε‖ ~ ε^{−s} lines.
    pub omega_s: Vec<f64>,
    pub omega_tol: f64,
    pub truncation_tol: f64,
}

impl Default for KnappConfig {
    fn default() -> Self {
        KnappConfig {
            n: 4,
            r: 6.0,
            eps: vec![0.25, 0.125, 0.0625],
            l_max: None,
            window_factor: 2.0,
            time_panels: 8,
            time_nodes: 8,
            z_half: 12.0,
            z_panel: 0.5,
            z_nodes: 16,
            p_factor: 10.0,
            p_nodes: 24,
            slope_tol: 0.15,
            omega_s: vec![0.5, 1.0],
            omega_tol: 0.1,
            truncation_tol: 1e-3,
        }
    }
}

impl KnappConfig {
    pub fn validate(&self) -> Result<()> {
        if !(3..=4).contains(&self.n) {
            return Err(LabError::Unsupported(format!("Knapp scan in dimension {}", self.n)));
        }
        if self.eps.len() < 2 {
            return Err(LabError::InvalidArgument("Knapp scan needs at least 2 ε values".into()));
        }
        for &e in &self.eps {
            if !(e > 0.0 && e <= 0.5) {
                return Err(LabError::InvalidArgument(format!("ε = {e} outside (0, 1/2]")));
            }
            if let Some(l) = self.l_max {
                if (l as f64) < 4.0 / e {
                    return Err(LabError::EpsFloor { eps: e, floor: 4.0 / l as f64, l_max: l });
                }
            }
        }
        if !(self.r >= 2.0) {
            return Err(LabError::InvalidArgument(format!("knapp.r = {} below 2", self.r)));
        }
        for (v, w) in [
            (self.window_factor, "knapp.window_factor"),
            (self.z_half, "knapp.z_half"),
            (self.z_panel, "knapp.z_panel"),
            (self.p_factor, "knapp.p_factor"),
            (self.slope_tol, "knapp.slope_tol"),
            (self.omega_tol, "knapp.omega_tol"),
            (self.truncation_tol, "knapp.truncation_tol"),
        ] {
            positive(v, w)?;
        }
        if self.time_panels == 0 || self.time_nodes == 0 || self.z_nodes == 0 || self.p_nodes == 0 {
            return Err(LabError::InvalidArgument("Knapp node counts must be positive".into()));
        }
        if self.omega_s.iter().any(|s| !(*s > 0.0)) {
            return Err(LabError::InvalidArgument("knapp.omega_s entries must be positive".into()));
        }
        Ok(())
    }

    /// σ = (n−1)/2; the ratio is expected to scale like ε^{2(σ/2 − 1/2 − σ/r)}.
    pub fn expected_exponent(&self) -> f64 {
        let sigma = 0.5 * (self.n as f64 - 1.0);
        2.0 * (0.5 * sigma - 0.5 - sigma / self.r)
    }
}

/// Knapp ratio and the smallest sampled fraction of ‖u(t)‖₂² over the window.
pub fn knapp_ratio(eps: f64, cfg: &KnappConfig) -> Result<(f64, f64)> {
    let n = cfg.n;
    let t_end = cfg.window_factor / (eps * eps);
    let a_max = 5.0 * eps / 8.0;
    let (xi_lo, q_max) = (0.5 * a_max.cos() - 1e-3, 2.0 * a_max.sin() + 1e-3);
    let p_max = cfg.p_factor / eps;
    let bw_xi = cfg.z_half + 2.0 + t_end * q_max * q_max / (2.0 * xi_lo * xi_lo);
    let bw_q = p_max + t_end * q_max / xi_lo + 2.0;
    let (xr, qr) = AxisymmetricSampler::rules((xi_lo, 2.0), (0.0, q_max), bw_xi, bw_q)?;
    let fhat = |rho: f64, c: f64| Complex64::new(knapp_fourier(eps, rho, c.clamp(-1.0, 1.0).acos()), 0.0);
    let ax = AxisymmetricSampler::new(n, Propagation::Forward, fhat, &xr, &qr)?;
    let trans = sphere_area(n - 1);
    // Plancherel on the same frequency rule
    let mut data = 0.0;
    for (&x, &wx) in xr.nodes.iter().zip(&xr.weights) {
        for (&q, &wq) in qr.nodes.iter().zip(&qr.weights) {
            data += wx * wq * q.powi(n as i32 - 2) * fhat(x.hypot(q), x / x.hypot(q)).norm_sqr();
        }
    }
    data *= trans;
    let zp = ((2.0 * cfg.z_half / cfg.z_panel).ceil() as usize).max(1);
    let zr = QuadratureRule::composite(-cfg.z_half, cfg.z_half, zp, cfg.z_nodes)?;
    let pp = (cfg.p_factor.ceil() as usize).max(1);
    let pr = QuadratureRule::composite(0.0, pp as f64 / eps, pp, cfg.p_nodes)?;
    let grid = ax.grid(&zr.nodes, &pr.nodes);
    let tr = QuadratureRule::composite(0.0, t_end, cfg.time_panels, cfg.time_nodes)?;
    let np = pr.nodes.len();
    let rows: Vec<(f64, f64)> = tr
        .nodes
        .par_iter()
        .map(|&t| {
            let u = ax.field(t, &grid, true);
            let (mut lr, mut l2) = (0.0, 0.0);
            for (iz, wz) in zr.weights.iter().enumerate() {
                for (ip, (&p, wp)) in pr.nodes.iter().zip(&pr.weights).enumerate() {
                    let w = wz * wp * p.powi(n as i32 - 2);
                    let a = u[iz * np + ip].norm();
                    lr += w * a.powf(cfg.r);
                    l2 += w * a * a;
                }
            }
            ((trans * lr).powf(1.0 / cfg.r), trans * l2 / data)
        })
        .collect();
    let mut acc = 0.0;
    let mut kept: f64 = 1.0;
    for ((v, frac), w) in rows.iter().zip(&tr.weights) {
        acc += w * v * v;
        kept = kept.min(*frac);
    }
    if 1.0 - kept > cfg.truncation_tol {
        return Err(LabError::Truncation(format!("ε = {eps}: only {kept:.5} of ‖u(t)‖² inside the comoving window")));
    }
    Ok((acc.sqrt() / data.sqrt(), kept))
}

/// Reports: the ε-slope against the σ-formula, the H^s_Ω-compensated slope,
/// and ‖|Ω|^s f^ε‖/‖f^ε‖ ~ ε^{−s} for each configured s.
pub fn verify_knapp_sharpness(cfg: &KnappConfig) -> Result<Vec<EstimateReport>> {
    cfg.validate()?;
    let target = cfg.expected_exponent();
    let s_comp = target.max(0.0);
    let hash = config_hash(cfg);
    let mut ratios = Vec::new();
    let mut comp = Vec::new();
    let mut omega: Vec<Vec<f64>> = vec![Vec::new(); cfg.omega_s.len()];
    let mut slope_rep = EstimateReport::new("knapp-slope");
    let mut comp_rep = EstimateReport::new("knapp-compensated");
    for &eps in &cfg.eps {
        let (ratio, kept) = knapp_ratio(eps, cfg)?;
        let modes = make_knapp(cfg.n, eps, cfg.l_max)?;
        let l2 = modes.l2_norm();
        let hs = modes.hs_omega_norm(s_comp)? / l2;
        ratios.push(ratio);
        comp.push(ratio / hs);
        for (k, &s) in cfg.omega_s.iter().enumerate() {
            omega[k].push(modes.omega_power_norm(s) / l2);
        }
        let t_end = cfg.window_factor / (eps * eps);
        let base =
            ScanPoint { eps: Some(eps), r: Some(cfg.r), q: Some(2.0), window: Some(t_end), ..Default::default() };
        slope_rep.points.push(ScanPoint { measured: ratio, reference: 1.0, ratio, ..base.clone() });
        slope_rep.notes.push(format!("ε = {eps}: min in-window mass fraction {kept:.6}"));
        comp_rep.points.push(ScanPoint { measured: ratio, reference: hs, ratio: ratio / hs, ..base });
    }
    let fit = log_log_fit(&cfg.eps, &ratios)?;
    slope_rep.notes.insert(0, format!("expected exponent 2(σ/2 − 1/2 − σ/r) = {target:.4}"));
    slope_rep.fit = Some(fit.clone());
    slope_rep.judge_band(fit.slopes[0], target, cfg.slope_tol, "ε-slope");
    let fit_c = log_log_fit(&cfg.eps, &comp)?;
    comp_rep.notes.push(format!("compensation exponent s = {s_comp:.4}"));
    comp_rep.fit = Some(fit_c.clone());
    comp_rep.judge_band(fit_c.slopes[0], 0.0, cfg.slope_tol, "compensated ε-slope");
    let mut out = vec![slope_rep, comp_rep];
    for (k, &s) in cfg.omega_s.iter().enumerate() {
        let mut rep = EstimateReport::new(&format!("knapp-omega-{s}"));
        for (&eps, &v) in cfg.eps.iter().zip(&omega[k]) {
            rep.points.push(ScanPoint { eps: Some(eps), ..ScanPoint::new(v, 1.0) });
        }
        let fit = log_log_fit(&cfg.eps, &omega[k])?;
        rep.fit = Some(fit.clone());
        rep.judge_band(fit.slopes[0], -s, cfg.omega_tol, &format!("ε-slope of ‖|Ω|^{s} f‖/‖f‖"));
        out.push(rep);
    }
    for rep in &mut out {
        rep.config_hash = Some(hash.clone());
        rep.grid_hash = hash.clone();
    }
    Ok(out)
}

// ---------------------------------------------------------------- Morawetz

/// Weighted local-energy integral I(T) = ∫_0^T∫(1+|x|)^{−1−η}|u|² for the full
/// wave cos(t√−Δ)f, its saturation, and the calibrated constant C_M.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MorawetzConfig {
    pub eta: f64,
    pub t_list: Vec<f64>,
    /// Time at which C_M = max I(T)/‖f‖² is calibrated.
    pub calibration_t: f64,
    pub calibration_seeds: Vec<u64>,
    pub holdout_ns: Vec<usize>,
    pub holdout_seeds: Vec<u64>,
    pub growth_tol: f64,
    pub t_nodes: usize,
    pub r_nodes: usize,
    pub margin: f64,
    /// Identity check: sample count, seed, weight parameter ε and time range.
    pub identity_points: usize,
    pub identity_seed: u64,
    pub identity_eps: f64,
    pub identity_times: (f64, f64),
    pub identity_tol: f64,
}

impl Default for MorawetzConfig {
    fn default() -> Self {
        MorawetzConfig {
            eta: 0.5,
            t_list: vec![8.0, 16.0, 32.0, 64.0],
            calibration_t: 8.0,
            calibration_seeds: (101..=105).collect(),
            holdout_ns: vec![2, 4],
            holdout_seeds: vec![1],
            growth_tol: 0.05,
            t_nodes: 8,
            r_nodes: 16,
            margin: 10.0,
            identity_points: 50,
            identity_seed: 11,
            identity_eps: 1.0,
            identity_times: (1.0, 16.0),
            identity_tol: 1e-3,
        }
    }
}

impl MorawetzConfig {
    pub fn validate(&self) -> Result<()> {
        positive(self.eta, "morawetz.eta")?;
        if self.t_list.len() < 2 || self.t_list.iter().any(|t| !(*t > 0.0) || (t - t.round()).abs() > 1e-9) {
            return Err(LabError::InvalidArgument("morawetz.t_list needs >= 2 positive integer times".into()));
        }
        if (self.calibration_t - self.calibration_t.round()).abs() > 1e-9 || !(self.calibration_t > 0.0) {
            return Err(LabError::InvalidArgument("morawetz.calibration_t must be a positive integer".into()));
        }
        nonempty(&self.calibration_seeds, "morawetz.calibration_seeds")?;
        positive(self.growth_tol, "morawetz.growth_tol")?;
        positive(self.margin, "morawetz.margin")?;
        positive(self.identity_tol, "morawetz.identity_tol")?;
        if self.t_nodes == 0 || self.r_nodes == 0 || self.identity_points == 0 {
            return Err(LabError::InvalidArgument("morawetz node counts must be positive".into()));
        }
        if !(self.identity_eps >= 0.0)
            || !(self.identity_times.0 >= 0.0 && self.identity_times.1 > self.identity_times.0)
        {
            return Err(LabError::InvalidArgument("morawetz identity parameters out of range".into()));
        }
        if self.holdout_ns.iter().any(|&v| v < 2) {
            return Err(LabError::InvalidArgument("morawetz.holdout_ns must be >= 2".into()));
        }
        Ok(())
    }

    fn spec(&self, l_max: usize, t_max: f64) -> GridSpec {
        let impact = l_max as f64 / PI + 2.0;
        GridSpec {
            t_max,
            t_panel: 1.0,
            t_nodes: self.t_nodes,
            r_max: (t_max.hypot(impact) + self.margin + 2.0).ceil(),
            r_panel: 1.0,
            r_nodes: self.r_nodes,
            window: Some(RadialWindow { margin: self.margin, impact }),
            ..GridSpec::default()
        }
    }
}

/// I(T)/‖f‖² for each T.
pub fn morawetz_ratios(modes: &ModeSet, cfg: &MorawetzConfig, t_list: &[f64]) -> Result<Vec<f64>> {
    let t_max = t_list.iter().copied().fold(0.0, f64::max);
    let vals = morawetz_integral(modes, cfg.eta, t_list, &cfg.spec(modes.l_max(), t_max))?;
    let norm = modes.l2_norm_sq();
    Ok(vals.iter().map(|v| if norm > 0.0 { v / norm } else { 0.0 }).collect())
}

/// Reports: saturation of the radial bump between the last two windows, and
/// the holdout bound I(T_max) ≤ C_M‖f‖² with C_M calibrated on random radial data.
pub fn verify_morawetz(cfg: &MorawetzConfig) -> Result<Vec<EstimateReport>> {
    cfg.validate()?;
    let hash = config_hash(cfg);
    let mut t_list = cfg.t_list.clone();
    t_list.sort_by(f64::total_cmp);
    let t_last = t_list[t_list.len() - 1];
    let t_prev = t_list[t_list.len() - 2];
    let bump = make_radial_bump(3)?;
    let ib = morawetz_ratios(&bump, cfg, &t_list)?;
    let mut sat = EstimateReport::new("morawetz-saturation");
    for (&t, &v) in t_list.iter().zip(&ib) {
        sat.points.push(ScanPoint { eta: Some(cfg.eta), window: Some(t), ..ScanPoint::new(v, 1.0) });
    }
    let growth = ib[ib.len() - 1] / ib[ib.len() - 2] - 1.0;
    sat.judge_upper(growth, cfg.growth_tol, &format!("radial bump I({t_last})/I({t_prev}) - 1"));

    let mut hold = EstimateReport::new("morawetz-constant");
    let mut c_m: f64 = 0.0;
    for &seed in &cfg.calibration_seeds {
        let v = morawetz_ratios(&make_random_radial(3, seed)?, cfg, &[cfg.calibration_t])?[0];
        c_m = c_m.max(v);
        hold.points.push(ScanPoint {
            eta: Some(cfg.eta),
            window: Some(cfg.calibration_t),
            seed: Some(seed),
            ..ScanPoint::new(v, 1.0)
        });
    }
    let mut worst = ib[ib.len() - 1];
    hold.points.push(ScanPoint { eta: Some(cfg.eta), window: Some(t_last), ..ScanPoint::new(worst, 1.0) });
    for &big_n in &cfg.holdout_ns {
        for &seed in &cfg.holdout_seeds {
            let v = morawetz_ratios(&make_random_localized(3, big_n, seed)?, cfg, &[t_last])?[0];
            worst = worst.max(v);
            hold.points.push(ScanPoint {
                big_n: Some(big_n as f64),
                eta: Some(cfg.eta),
                window: Some(t_last),
                seed: Some(seed),
                ..ScanPoint::new(v, 1.0)
            });
        }
    }
    hold.notes.push(format!("C_M = {c_m:.5} from random radial data at T = {}", cfg.calibration_t));
    hold.seeds = cfg.calibration_seeds.iter().chain(&cfg.holdout_seeds).copied().collect();
    hold.judge_upper(worst, c_m, &format!("max holdout I({t_last})/|f|^2"));
    let mut out = vec![sat, hold];
    for rep in &mut out {
        rep.config_hash = Some(hash.clone());
        rep.grid_hash = short_hash(serde_json::to_string(&cfg.spec(0, t_last)).unwrap_or_default().as_bytes());
    }
    Ok(out)
}

/// Closed-form checks on the weight f = r/(ε+r): tr π and Δ(tr π) spot values,
/// agreement of each Δ(tr π) form with finite differences, and negativity.
pub fn verify_morawetz_weights() -> Result<Vec<EstimateReport>> {
    let mut out = Vec::new();
    let mut spot = EstimateReport::new("morawetz-trpi-spot");
    let v = tr_pi(3, 1.0, 1.0);
    spot.points.push(ScanPoint { eps: Some(1.0), r: Some(1.0), ..ScanPoint::new(v, 1.25) });
    spot.judge_band(v, 1.25, 0.0, "tr π(n=3, ε=1, r=1)");
    out.push(spot);
    let mut spot = EstimateReport::new("morawetz-laplacian-spot");
    let v = delta_tr_pi_printed(3, 1.0, 1.0);
    spot.points.push(ScanPoint { eps: Some(1.0), r: Some(1.0), ..ScanPoint::new(v, -0.375) });
    spot.judge_band(v, -0.375, 0.0, "printed Δ(tr π)(n=3, ε=1, r=1)");
    spot.notes.push(format!("Laplacian of tr π at the same point: {:.6}", delta_tr_pi(3, 1.0, 1.0)));
    out.push(spot);
    let cases = [(3usize, 1.0), (3, 0.1), (4, 1.0), (4, 0.1)];
    let fd_grid: Vec<f64> = (0..=400).map(|k| 0.25 * 1.0125f64.powi(k)).filter(|r| *r <= 100.0).collect();
    for (name, form) in
        [("morawetz-laplacian-fd-printed", TrPiLaplacian::Printed), ("morawetz-laplacian-fd", TrPiLaplacian::Direct)]
    {
        let mut rep = EstimateReport::new(name);
        let mut worst: f64 = 0.0;
        for &(n, eps) in &cases {
            let mut w: f64 = 0.0;
            let mut at = 0.0;
            for &r in &fd_grid {
                let e = (form.eval(n, eps, r) - delta_tr_pi_fd(n, eps, r, 1e-3)).abs();
                if e > w {
                    w = e;
                    at = r;
                }
            }
            rep.points.push(ScanPoint { eps: Some(eps), r: Some(at), big_n: None, ..ScanPoint::new(w, 1.0) });
            rep.notes.push(format!("n = {n}, ε = {eps}: max |closed − FD| = {w:.3e} at r = {at:.3}"));
            worst = worst.max(w);
        }
        rep.judge_upper(worst, 1e-6, "max |closed form - finite differences|");
        out.push(rep);
    }
    let mut rep = EstimateReport::new("morawetz-negativity");
    let grid: Vec<f64> = (1..=100_000).map(|k| k as f64 * 1e-3).collect();
    let mut worst = f64::NEG_INFINITY;
    for &(n, eps) in &cases {
        let v = negativity_scan(n, eps, &grid, TrPiLaplacian::Printed)?;
        let d = negativity_scan(n, eps, &grid, TrPiLaplacian::Direct)?;
        rep.points.push(ScanPoint { eps: Some(eps), ..ScanPoint::new(v, 1.0) });
        rep.notes.push(format!("n = {n}, ε = {eps}: max printed {v:.3e}, max direct {d:.3e}"));
        worst = worst.max(v).max(d);
    }
    rep.judge_upper(worst, 0.0, "max Δ(tr π) over r in (0, 100]");
    out.push(rep);
    Ok(out)
}

/// The divergence identity on the radial bump (weight ε and ε = 0), the same
/// with the printed Δ(tr π), and the frozen-field negative control.
pub fn verify_morawetz_identity(cfg: &MorawetzConfig) -> Result<Vec<EstimateReport>> {
    cfg.validate()?;
    let bump = make_radial_bump(3)?;
    let wave = ZonalWave::new(&bump, cfg.identity_times.1 + 2.0 * cfg.margin + 40.0)?;
    let samples = cone_samples(3, cfg.identity_points, cfg.identity_times, cfg.identity_seed);
    let hash = config_hash(cfg);
    let mut out = Vec::new();
    let runs: [(&str, f64, TrPiLaplacian, bool); 4] = [
        ("morawetz-identity", cfg.identity_eps, TrPiLaplacian::Direct, false),
        ("morawetz-identity-unit-field", 0.0, TrPiLaplacian::Direct, false),
        ("morawetz-identity-printed", cfg.identity_eps, TrPiLaplacian::Printed, false),
        ("morawetz-identity-control", cfg.identity_eps, TrPiLaplacian::Direct, true),
    ];
    for (name, eps, form, frozen) in runs {
        let check = if frozen {
            let t0 = 0.5 * (cfg.identity_times.0 + cfg.identity_times.1);
            identity_residuals(&FrozenWave { inner: &wave, t0 }, eps, form, &samples, FD_STEP)?
        } else {
            identity_residuals(&wave, eps, form, &samples, FD_STEP)?
        };
        let mut rep = EstimateReport::new(name);
        for (t, x, res) in &check.points {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            rep.points.push(ScanPoint { t: Some(*t), r: Some(r), eps: Some(eps), ..ScanPoint::new(*res, 1.0) });
        }
        rep.seeds = vec![cfg.identity_seed];
        rep.config_hash = Some(hash.clone());
        rep.grid_hash = short_hash(format!("{FD_STEP}/{}", cfg.identity_points).as_bytes());
        rep.notes.push(format!("{} samples with r >= 1/2, step h = {FD_STEP}", check.points.len()));
        if frozen {
            rep.statistic = check.max_residual;
            rep.tolerance = cfg.identity_tol;
            rep.criterion = format!("frozen field residual > {} (identity must fail)", cfg.identity_tol);
            rep.verdict = Verdict::from_bool(check.max_residual > cfg.identity_tol);
        } else {
            rep.judge_upper(check.max_residual, cfg.identity_tol, "max relative residual");
        }
        out.push(rep);
    }
    Ok(out)
}
