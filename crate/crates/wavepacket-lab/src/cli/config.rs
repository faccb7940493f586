use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{
    DispersiveConfig, DualScaleConfig, EndpointConfig, GridSpec, KnappConfig, MorawetzConfig, ThresholdConfig,
};
use crate::propagator::{make_knapp, make_radial_bump, make_random_family, make_random_radial, ModeSet, RandomFamily};
use crate::wavepackets::ScanGrid;
use crate::{LabError, Result};

/// Initial data for `propagate` and `packets`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataSpec {
    Zero,
    Bump,
    Radial { seed: u64 },
    Localized { big_n: usize, seed: u64 },
    Zonal { big_n: usize, seed: u64 },
    Knapp { eps: f64 },
}

impl DataSpec {
    pub fn build(&self, n: usize, l_max: usize) -> Result<ModeSet> {
        match *self {
            DataSpec::Zero => ModeSet::new(n),
            DataSpec::Bump => make_radial_bump(n),
            DataSpec::Radial { seed } => make_random_radial(n, seed),
            DataSpec::Localized { big_n, seed } => make_random_family(n, big_n, seed, RandomFamily::Full),
            DataSpec::Zonal { big_n, seed } => make_random_family(n, big_n, seed, RandomFamily::Zonal),
            DataSpec::Knapp { eps } => make_knapp(n, eps, Some(l_max)),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, DataSpec::Zero)
    }
}

/// ψ constant fitting: orders (N1, N2), the scan grid, and whether to repeat
/// on the 2× refined grid as a stability check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitConfig {
    pub orders: Vec<(u32, u32)>,
    pub grid: ScanGrid,
    pub refine: bool,
    /// Largest relative change under refinement counted as stable.
    pub stability_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig { orders: vec![(2, 2), (3, 2)], grid: ScanGrid::standard(), refine: true, stability_tol: 0.10 }
    }
}

/// Estimates run by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimate {
    Dispersive,
    Endpoint,
    EndpointPlanar,
    Threshold,
    DualScale,
    Knapp,
    Morawetz,
}

impl Estimate {
    pub const ALL: [Estimate; 7] = [
        Estimate::Dispersive,
        Estimate::Endpoint,
        Estimate::EndpointPlanar,
        Estimate::Threshold,
        Estimate::DualScale,
        Estimate::Knapp,
        Estimate::Morawetz,
    ];
}

/// One experiment, read from TOML. Every section has defaults, so an empty
/// file is a valid configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Dimension for `propagate`, `packets` and `fit-constants`.
    pub n: usize,
    /// Angular truncation: cap for generated data, Knapp truncation.
    pub l_max: usize,
    /// Packet lattice truncation |k| ≤ K_max.
    pub k_max: usize,
    /// η of the endpoint and dual-scale estimates.
    pub eta: f64,
    pub estimates: Vec<Estimate>,
    pub output_dir: Option<PathBuf>,
    /// Constants table read by `verify`; relative paths are taken inside the output directory.
    pub constants: PathBuf,
    pub data: DataSpec,
    pub grid: GridSpec,
    pub fit: FitConfig,
    pub dispersive: DispersiveConfig,
    pub endpoint: EndpointConfig,
    pub endpoint_planar: EndpointConfig,
    pub threshold: ThresholdConfig,
    pub dual_scale: DualScaleConfig,
    pub knapp: KnappConfig,
    pub morawetz: MorawetzConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 3,
            l_max: 1024,
            k_max: 512,
            eta: 0.125,
            estimates: Estimate::ALL.to_vec(),
            output_dir: None,
            constants: PathBuf::from("constants.csv"),
            data: DataSpec::Bump,
            grid: GridSpec::default(),
            fit: FitConfig::default(),
            dispersive: DispersiveConfig::default(),
            endpoint: EndpointConfig::default(),
            endpoint_planar: EndpointConfig::planar(),
            threshold: ThresholdConfig::default(),
            dual_scale: DualScaleConfig::default(),
            knapp: KnappConfig::default(),
            morawetz: MorawetzConfig::default(),
        }
    }
}

fn field<T>(r: Result<T>, name: &str) -> Result<T> {
    r.map_err(|e| match e {
        LabError::InvalidArgument(m) => LabError::InvalidArgument(format!("[{name}] {m}")),
        LabError::Unsupported(m) => LabError::InvalidArgument(format!("[{name}] {m}")),
        other => other,
    })
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) if k != "data" => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

impl ExperimentConfig {
    /// Parses TOML laid over the defaults, so a partial section keeps the
    /// default of every field it leaves out.
    pub fn from_toml(text: &str) -> Result<Self> {
        let parse = |e: toml::de::Error| LabError::Parse(e.to_string());
        let user: toml::Table = toml::from_str(text).map_err(parse)?;
        let base = toml::Value::try_from(Self::default()).map_err(|e| LabError::Parse(e.to_string()))?;
        let toml::Value::Table(mut base) = base else { unreachable!("config serialises to a table") };
        merge(&mut base, user);
        toml::Value::Table(base).try_into().map_err(parse)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| LabError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    /// Field-level validation of every section, plus the settings the
    /// top level forwards (η, L_max).
    pub fn validate(&self) -> Result<()> {
        if !(2..=4).contains(&self.n) {
            return Err(LabError::InvalidArgument(format!("n = {} not in {{2, 3, 4}}", self.n)));
        }
        if self.l_max == 0 || self.k_max == 0 {
            return Err(LabError::InvalidArgument("l_max and k_max must be positive".into()));
        }
        if !(self.eta > 0.0 && self.eta < 0.5) {
            return Err(LabError::InvalidArgument(format!("eta = {} not in (0, 1/2)", self.eta)));
        }
        match self.data {
            DataSpec::Localized { big_n, .. } | DataSpec::Zonal { big_n, .. } => {
                if big_n < 2 || 2 * big_n - 1 > self.l_max {
                    return Err(LabError::InvalidArgument(format!(
                        "[data] big_n = {big_n} needs 2 <= N and 2N - 1 <= l_max = {}",
                        self.l_max
                    )));
                }
                if self.n == 4 && matches!(self.data, DataSpec::Localized { .. }) {
                    return Err(LabError::InvalidArgument("[data] n = 4 supports zonal data only".into()));
                }
            }
            DataSpec::Knapp { eps } => {
                if !(eps > 0.0 && eps <= 0.5) {
                    return Err(LabError::InvalidArgument(format!("[data] eps = {eps} outside (0, 1/2]")));
                }
                if (self.l_max as f64) < 4.0 / eps {
                    return Err(LabError::EpsFloor { eps, floor: 4.0 / self.l_max as f64, l_max: self.l_max });
                }
            }
            _ => {}
        }
        field(self.grid.validate(), "grid")?;
        if self.fit.orders.is_empty() || !(self.fit.stability_tol > 0.0) {
            return Err(LabError::InvalidArgument("[fit] needs orders and a positive stability_tol".into()));
        }
        if self.fit.grid.ls.is_empty() || !(self.fit.grid.m_step > 0.0 && self.fit.grid.r_step > 0.0) {
            return Err(LabError::InvalidArgument("[fit.grid] needs degrees and positive steps".into()));
        }
        field(self.dispersive.validate(), "dispersive")?;
        field(self.endpoint.validate(), "endpoint")?;
        field(self.endpoint_planar.validate(), "endpoint_planar")?;
        field(self.threshold.validate(), "threshold")?;
        field(self.dual_scale().validate(), "dual_scale")?;
        field(self.knapp().validate(), "knapp")?;
        field(self.morawetz.validate(), "morawetz")?;
        Ok(())
    }

    pub fn dual_scale(&self) -> DualScaleConfig {
        DualScaleConfig { eta: self.eta, ..self.dual_scale.clone() }
    }

    /// Knapp settings with the top-level L_max as the angular truncation
    /// unless the section sets its own.
    pub fn knapp(&self) -> KnappConfig {
        KnappConfig { l_max: self.knapp.l_max.or(Some(self.l_max)), ..self.knapp.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default() {
        let c = ExperimentConfig::from_toml("").unwrap();
        assert_eq!(c, ExperimentConfig::default());
        c.validate().unwrap();
    }

    #[test]
    fn round_trip() {
        let mut c = ExperimentConfig::default();
        c.data = DataSpec::Localized { big_n: 4, seed: 9 };
        c.estimates = vec![Estimate::Knapp, Estimate::Morawetz];
        c.output_dir = Some(PathBuf::from("somewhere"));
        let back = ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_fields_and_bad_values_are_rejected() {
        assert!(matches!(ExperimentConfig::from_toml("nn = 3"), Err(LabError::Parse(_))));
        assert!(matches!(ExperimentConfig::from_toml("[knapp]\nepsilon = 1.0"), Err(LabError::Parse(_))));
        let c = ExperimentConfig::from_toml("[endpoint_planar]\nseeds = [3]").unwrap();
        assert_eq!(c.endpoint_planar, EndpointConfig { seeds: vec![3], ..EndpointConfig::planar() });
        let c = ExperimentConfig::from_toml("[grid]\nt_max = -1.0").unwrap();
        let e = c.validate().unwrap_err().to_string();
        assert!(e.contains("[grid]") && e.contains("t_max"), "{e}");
        let c = ExperimentConfig::from_toml("l_max = 32\n[knapp]\neps = [0.25, 0.0625]").unwrap();
        assert!(matches!(c.validate(), Err(LabError::EpsFloor { .. })));
    }
}
