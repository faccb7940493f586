//! Configuration and orchestration behind the `wavepacket-lab` binary.
//!
//! Every command writes into its own subdirectory of the output directory:
//! per-report CSVs and JSON summaries under `reports/`, two-column plot data
//! under `plots/`, and a `summary.json` carrying the config hash and the
//! combined verdict. `fit-constants` also writes `constants.csv` at the top
//! of the output directory, where `verify` looks for it.

mod config;

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use config::{DataSpec, Estimate, ExperimentConfig, FitConfig};

use crate::analysis::{
    dispersive_scan, short_hash, verify_dispersive, verify_dual_scale, verify_endpoint, verify_knapp_sharpness,
    verify_morawetz, verify_morawetz_identity, verify_morawetz_weights, verify_spherical_threshold, EstimateReport,
    ScanPoint, Verdict,
};
use crate::harmonics::AngularQuadrature;
use crate::propagator::{energy_norms, hankel_mode, write_field_dump, FieldSampler, ModeSet, Propagation};
use crate::wavepackets::{fit_constants, reconstruct_mode, ConstantsTable, PacketCoefficients};
use crate::{LabError, Result};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "WAVEPACKET_LAB_OUT";
/// Output directory used when neither `--out`, the environment nor the config names one.
pub const DEFAULT_OUT: &str = "wavepacket-out";

/// Largest relative drift of ‖u(t)‖_{L²(B_R)} accepted by `propagate`.
pub const ENERGY_TOL: f64 = 1e-3;
/// Largest relative packet-reconstruction error accepted by `packets`.
pub const RECONSTRUCTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Propagate,
    Packets,
    FitConstants,
    Verify,
    KnappScan,
    Morawetz,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Propagate => "propagate",
            Command::Packets => "packets",
            Command::FitConstants => "fit-constants",
            Command::Verify => "verify",
            Command::KnappScan => "knapp-scan",
            Command::Morawetz => "morawetz",
            Command::Report => "report",
        }
    }
}

pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const INVALID_CONFIG: i32 = 3;
    pub const MISSING_PREREQUISITE: i32 = 4;
}

pub fn verdict_exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Fail => exit::FAIL,
        Verdict::Inconclusive => exit::INCONCLUSIVE,
        Verdict::Pass | Verdict::NotApplicable => exit::PASS,
    }
}

/// Exit code for an error: configuration problems are 3, missing inputs 4,
/// anything raised while computing counts as a failure.
pub fn error_exit_code(e: &LabError) -> i32 {
    match e {
        LabError::InvalidArgument(_) | LabError::EpsFloor { .. } | LabError::Parse(_) | LabError::Unsupported(_) => {
            exit::INVALID_CONFIG
        }
        LabError::MissingPrerequisite(_) => exit::MISSING_PREREQUISITE,
        _ => exit::FAIL,
    }
}

/// Output directory by precedence: explicit flag, environment, config, default.
pub fn resolve_out_dir(flag: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(p);
    }
    cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportLine {
    pub name: String,
    pub verdict: Verdict,
    pub statistic: f64,
    pub criterion: String,
}

/// Contents of `<out>/<command>/summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub command: Command,
    pub config_hash: String,
    pub verdict: Verdict,
    pub reports: Vec<ReportLine>,
    pub notes: Vec<String>,
}

/// Runs one command with an already loaded configuration. The config is
/// validated first, so invalid input fails before any numerical work.
pub fn run(cmd: Command, cfg: &ExperimentConfig, out: &Path) -> Result<RunSummary> {
    cfg.validate()?;
    let hash = short_hash(cfg.to_toml()?.as_bytes());
    let dir = out.join(cmd.name());
    let mut notes = Vec::new();
    let reports = match cmd {
        Command::Propagate => propagate(cfg, &dir, &mut notes)?,
        Command::Packets => packets(cfg, &dir, &mut notes)?,
        Command::FitConstants => fit(cfg, out, &mut notes)?,
        Command::Verify => verify(cfg, out, &mut notes)?,
        Command::KnappScan => verify_knapp_sharpness(&cfg.knapp())?,
        Command::Morawetz => {
            let mut v = verify_morawetz_weights()?;
            v.extend(verify_morawetz_identity(&cfg.morawetz)?);
            v.extend(verify_morawetz(&cfg.morawetz)?);
            v
        }
        Command::Report => return report(out, &hash),
    };
    let summary = RunSummary {
        command: cmd,
        config_hash: hash,
        verdict: Verdict::combine(reports.iter().map(|r| r.verdict)),
        reports: reports
            .iter()
            .map(|r| ReportLine {
                name: r.name.clone(),
                verdict: r.verdict,
                statistic: r.statistic,
                criterion: r.criterion.clone(),
            })
            .collect(),
        notes,
    };
    write_reports(&dir, &reports)?;
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(summary)
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| LabError::Io(e.to_string()))?;
    fs::write(path, s + "\n")?;
    Ok(())
}

fn write_reports(dir: &Path, reports: &[EstimateReport]) -> Result<()> {
    let rdir = dir.join("reports");
    let pdir = dir.join("plots");
    fs::create_dir_all(&rdir)?;
    fs::create_dir_all(&pdir)?;
    for r in reports {
        r.write_csv(fs::File::create(rdir.join(format!("{}.csv", r.name)))?)?;
        fs::write(rdir.join(format!("{}.json", r.name)), r.summary_json()? + "\n")?;
        write_plot(&pdir.join(format!("{}.csv", r.name)), r)?;
    }
    Ok(())
}

/// Two columns: the first scan parameter that varies, against the ratio.
fn write_plot(path: &Path, r: &EstimateReport) -> Result<()> {
    type Get = fn(&ScanPoint) -> Option<f64>;
    let axes: [(&str, Get); 7] = [
        ("N", |p| p.big_n),
        ("eps", |p| p.eps),
        ("mu", |p| p.mu),
        ("T", |p| p.window),
        ("t", |p| p.t),
        ("r", |p| p.r),
        ("q", |p| p.q),
    ];
    let varies = |g: Get| {
        let mut v = r.points.iter().filter_map(g);
        match v.next() {
            Some(first) => v.any(|x| x != first),
            None => false,
        }
    };
    let (label, get) = axes.iter().find(|(_, g)| varies(*g)).copied().unwrap_or(("index", |_| None));
    let mut wr = csv::Writer::from_path(path)?;
    wr.write_record([label, "ratio"])?;
    for (i, p) in r.points.iter().enumerate() {
        let x = get(p).unwrap_or(i as f64);
        wr.write_record([x.to_string(), p.ratio.to_string()])?;
    }
    wr.flush()?;
    Ok(())
}

fn data(cfg: &ExperimentConfig) -> Result<ModeSet> {
    cfg.data.build(cfg.n, cfg.l_max)
}

fn time_nodes(t_max: f64, step: f64) -> Vec<f64> {
    let k = (t_max / step).round().max(1.0) as usize;
    (0..=k).map(|i| t_max * i as f64 / k as f64).collect()
}

/// Field dump at t ∈ {0, T/2, T} and an energy CSV on the time panels; the
/// verdict checks conservation of ‖u(t)‖_{L²(B_R)} with R = grid.r_max.
fn propagate(cfg: &ExperimentConfig, dir: &Path, notes: &mut Vec<String>) -> Result<Vec<EstimateReport>> {
    fs::create_dir_all(dir)?;
    let modes = data(cfg)?;
    let g = &cfg.grid;
    let times = time_nodes(g.t_max, g.t_panel);
    let mut rep = EstimateReport::new("energy");
    rep.seeds = seeds_of(&cfg.data);
    if modes.is_empty() {
        rep.points = times.iter().map(|&t| ScanPoint { t: Some(t), ..ScanPoint::new(0.0, 0.0) }).collect();
        rep.judge_upper(0.0, ENERGY_TOL, "max |E(t)/E0 - 1|");
        notes.push("zero data".into());
        return Ok(vec![rep]);
    }
    let fs_ = FieldSampler::new(&modes, Propagation::Forward, g.r_max + g.t_max + 1.0)?;
    let norm0 = modes.l2_norm();
    let e = energy_norms(&fs_, &times, g.r_max)?;
    let mut drift: f64 = 0.0;
    for (&t, &v) in times.iter().zip(&e) {
        rep.points.push(ScanPoint { t: Some(t), ..ScanPoint::new(v, norm0) });
        drift = drift.max((v / norm0 - 1.0).abs());
    }
    rep.judge_upper(drift, ENERGY_TOL, "max |E(t)/E0 - 1|");
    rep.notes.push(format!("ball radius {}", g.r_max));

    let radii = time_nodes(g.r_max.min(g.t_max + 4.0), g.r_panel);
    let quad = AngularQuadrature::new(cfg.n, 2 * modes.l_max() + 2)?;
    let dump = [0.0, 0.5 * g.t_max, g.t_max];
    write_field_dump(fs::File::create(dir.join("field.csv"))?, &fs_, &dump, &radii, &quad)?;
    modes.write_csv(fs::File::create(dir.join("data.csv"))?)?;
    notes.push(format!("{} modes, l_max {}", modes.len(), modes.l_max()));
    Ok(vec![rep])
}

/// Packet coefficients of the data, and packet-sum reconstruction against
/// direct Hankel evaluation at a few (t, r).
fn packets(cfg: &ExperimentConfig, dir: &Path, notes: &mut Vec<String>) -> Result<Vec<EstimateReport>> {
    fs::create_dir_all(dir)?;
    let modes = data(cfg)?;
    let pc = PacketCoefficients::from_modes(&modes, cfg.k_max);
    let mut wr = csv::Writer::from_path(dir.join("coefficients.csv"))?;
    wr.write_record(["l", "i", "k", "re", "im"])?;
    for (idx, c) in &pc.coeffs {
        for (j, v) in c.iter().enumerate() {
            if v.norm() > 0.0 {
                let k = j as i64 - cfg.k_max as i64;
                wr.write_record([
                    idx.l.to_string(),
                    idx.i.to_string(),
                    k.to_string(),
                    v.re.to_string(),
                    v.im.to_string(),
                ])?;
            }
        }
    }
    wr.flush()?;
    notes.push(format!("max relative tail beyond K_max: {:e}", pc.max_tail()));

    let mut rep = EstimateReport::new("packet-reconstruction");
    rep.seeds = seeds_of(&cfg.data);
    let ts = [0.0, 0.5 * cfg.grid.t_max.min(8.0), cfg.grid.t_max.min(8.0)];
    let rs = [0.5, 2.0, 6.0];
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut pts = Vec::new();
    for (idx, p) in modes.iter() {
        for &t in &ts {
            for &r in &rs {
                let direct = hankel_mode(*idx, p, t, r)?;
                let packed: Complex64 = reconstruct_mode(&pc, *idx, t, r)?;
                let err = (direct - packed).norm();
                scale = scale.max(direct.norm());
                worst = worst.max(err);
                pts.push(ScanPoint { t: Some(t), r: Some(r), ..ScanPoint::new(err, direct.norm()) });
            }
        }
    }
    rep.points = pts;
    let rel = if scale > 0.0 { worst / scale } else { 0.0 };
    rep.judge_upper(rel, RECONSTRUCTION_TOL, "max reconstruction error / max |c|");
    Ok(vec![rep])
}

fn seeds_of(d: &DataSpec) -> Vec<u64> {
    match *d {
        DataSpec::Radial { seed } | DataSpec::Localized { seed, .. } | DataSpec::Zonal { seed, .. } => vec![seed],
        _ => Vec::new(),
    }
}

fn constants_path(cfg: &ExperimentConfig, out: &Path) -> PathBuf {
    if cfg.constants.is_absolute() {
        cfg.constants.clone()
    } else {
        out.join(&cfg.constants)
    }
}

/// Fits the ψ constants, optionally refits on the refined grid and compares.
fn fit(cfg: &ExperimentConfig, out: &Path, notes: &mut Vec<String>) -> Result<Vec<EstimateReport>> {
    fs::create_dir_all(out)?;
    let rows = fit_constants(cfg.n, &cfg.fit.orders, &cfg.fit.grid)?;
    let path = constants_path(cfg, out);
    let mut table = match fs::File::open(&path) {
        Ok(f) => ConstantsTable::read_csv(f).unwrap_or_default(),
        Err(_) => ConstantsTable::default(),
    };
    table.extend(rows.clone());
    table.write_csv(fs::File::create(&path)?)?;
    notes.push(format!("wrote {} rows to {}", rows.len(), path.display()));

    let mut rep = EstimateReport::new("constants-stability");
    rep.grid_hash = cfg.fit.grid.hash();
    if !cfg.fit.refine {
        rep.points = rows.iter().map(|r| ScanPoint::new(r.c, r.c)).collect();
        rep.verdict = Verdict::from_bool(rows.iter().all(|r| r.c.is_finite()));
        rep.criterion = "finite constants".into();
        return Ok(vec![rep]);
    }
    let fine = fit_constants(cfg.n, &cfg.fit.orders, &cfg.fit.grid.refined())?;
    let mut worst: f64 = 0.0;
    for (a, b) in rows.iter().zip(&fine) {
        let change = if a.c > 0.0 { (b.c - a.c).abs() / a.c } else { b.c.abs() };
        worst = worst.max(change);
        rep.points.push(ScanPoint::new(b.c, a.c));
        rep.notes.push(format!("N1={} N2={} {:?}: C {:.6} -> {:.6}", a.n1, a.n2, a.regime, a.c, b.c));
    }
    rep.judge_upper(worst, cfg.fit.stability_tol, "relative change under 2x refinement");
    Ok(vec![rep])
}

fn verify(cfg: &ExperimentConfig, out: &Path, notes: &mut Vec<String>) -> Result<Vec<EstimateReport>> {
    if cfg.data.is_zero() {
        notes.push("zero data: every estimate holds trivially".into());
        return cfg.estimates.iter().map(|e| trivial_report(cfg, *e)).collect();
    }
    let mut reports = Vec::new();
    for e in &cfg.estimates {
        match e {
            Estimate::Dispersive => {
                let path = constants_path(cfg, out);
                let table = match fs::File::open(&path) {
                    Ok(f) => ConstantsTable::read_csv(f)?,
                    Err(_) => {
                        return Err(LabError::MissingPrerequisite(format!(
                            "constants table {} not found; run fit-constants first",
                            path.display()
                        )))
                    }
                };
                let n = cfg.dispersive.n;
                let Some(row) = table.rows.iter().find(|r| r.n == n) else {
                    return Err(LabError::MissingPrerequisite(format!(
                        "constants table {} has no rows for n = {n}",
                        path.display()
                    )));
                };
                let mut rep = verify_dispersive(&cfg.dispersive)?;
                rep.notes.push(format!("packet constants from grid {}", row.grid_hash));
                reports.push(rep);
            }
            Estimate::Endpoint => reports.push(verify_endpoint(&cfg.endpoint)?),
            Estimate::EndpointPlanar => {
                let mut rep = verify_endpoint(&cfg.endpoint_planar)?;
                rep.name = "endpoint-planar".into();
                reports.push(rep);
            }
            Estimate::Threshold => reports.extend(verify_spherical_threshold(&cfg.threshold)?),
            Estimate::DualScale => reports.push(verify_dual_scale(&cfg.dual_scale())?),
            Estimate::Knapp => reports.extend(verify_knapp_sharpness(&cfg.knapp())?),
            Estimate::Morawetz => reports.extend(verify_morawetz(&cfg.morawetz)?),
        }
    }
    Ok(reports)
}

fn trivial_report(cfg: &ExperimentConfig, e: Estimate) -> Result<EstimateReport> {
    let name = serde_json::to_value(e).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let mut rep = EstimateReport::new(&name);
    rep.points = match e {
        Estimate::Dispersive => {
            dispersive_scan(&ModeSet::new(cfg.dispersive.n)?, &cfg.dispersive.samples(), cfg.dispersive.k_max)?
        }
        _ => vec![ScanPoint::new(0.0, 0.0)],
    };
    let stat = rep.points.iter().map(|p| p.ratio).fold(0.0, f64::max);
    rep.judge_upper(stat, 0.0, "ratio on zero data");
    Ok(rep)
}

/// Collects every `<out>/<command>/summary.json` into `<out>/report.json`
/// and a Markdown table `<out>/report.md`.
fn report(out: &Path, hash: &str) -> Result<RunSummary> {
    let mut lines = Vec::new();
    let mut notes = Vec::new();
    let mut found = Vec::new();
    let entries = fs::read_dir(out)
        .map_err(|_| LabError::MissingPrerequisite(format!("output directory {} does not exist", out.display())))?;
    let mut dirs: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.is_dir()).collect();
    dirs.sort();
    for d in dirs {
        let p = d.join("summary.json");
        let Ok(text) = fs::read_to_string(&p) else { continue };
        let s: RunSummary =
            serde_json::from_str(&text).map_err(|e| LabError::Parse(format!("{}: {e}", p.display())))?;
        if s.command == Command::Report {
            continue;
        }
        notes.push(format!("{}: {} (config {})", s.command.name(), s.verdict, s.config_hash));
        for mut l in s.reports.clone() {
            l.name = format!("{}/{}", s.command.name(), l.name);
            lines.push(l);
        }
        found.push(s);
    }
    if found.is_empty() {
        return Err(LabError::MissingPrerequisite(format!("no command summaries under {}", out.display())));
    }
    let summary = RunSummary {
        command: Command::Report,
        config_hash: hash.to_string(),
        verdict: Verdict::combine(lines.iter().map(|l| l.verdict)),
        reports: lines,
        notes,
    };
    let mut md = String::from("| check | verdict | statistic | criterion |\n|---|---|---|---|\n");
    for l in &summary.reports {
        md.push_str(&format!("| {} | {} | {:.6} | {} |\n", l.name, l.verdict, l.statistic, l.criterion));
    }
    md.push_str(&format!("\nOverall: {}\n", summary.verdict));
    fs::write(out.join("report.md"), md)?;
    write_json(&out.join("report.json"), &summary)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(verdict_exit_code(Verdict::Pass), 0);
        assert_eq!(verdict_exit_code(Verdict::Fail), 1);
        assert_eq!(verdict_exit_code(Verdict::Inconclusive), 2);
        assert_eq!(verdict_exit_code(Verdict::NotApplicable), 0);
        assert_eq!(error_exit_code(&LabError::EpsFloor { eps: 0.01, floor: 0.1, l_max: 40 }), 3);
        assert_eq!(error_exit_code(&LabError::MissingPrerequisite("x".into())), 4);
        assert_eq!(error_exit_code(&LabError::Truncation("x".into())), 1);
    }

    #[test]
    fn out_dir_precedence() {
        let mut cfg = ExperimentConfig::default();
        cfg.output_dir = Some(PathBuf::from("from-config"));
        assert_eq!(resolve_out_dir(Some(Path::new("flag")), &cfg), PathBuf::from("flag"));
        if std::env::var_os(OUT_ENV).is_none() {
            assert_eq!(resolve_out_dir(None, &cfg), PathBuf::from("from-config"));
        }
    }
}
