use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::report::short_hash;
use crate::harmonics::AngularQuadrature;
use crate::specfun::QuadratureRule;
use crate::{LabError, Result};

/// Time-dependent radial window [max(0, t − margin), √(t² + impact²) + margin]
/// outside which the field is not sampled; the energy left outside is checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialWindow {
    pub margin: f64,
    pub impact: f64,
}

impl RadialWindow {
    pub fn bounds(&self, t: f64) -> (f64, f64) {
        let t = t.abs();
        ((t - self.margin).max(0.0), t.hypot(self.impact) + self.margin)
    }
}

/// Discretisation parameters; [`EvaluationGrid::new`] turns them into nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    /// Time window [0, t_max].
    pub t_max: f64,
    pub t_panel: f64,
    pub t_nodes: usize,
    /// Radial range [0, r_max].
    pub r_max: f64,
    pub r_panel: f64,
    pub r_nodes: usize,
    /// Angular rule degree = ⌈angular_factor · l_max⌉ + angular_extra.
    pub angular_factor: f64,
    pub angular_extra: usize,
    pub window: Option<RadialWindow>,
    /// Largest tolerated fraction of ‖u‖₂² outside the sampled radii.
    pub truncation_tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            t_max: 48.0,
            t_panel: 1.0,
            t_nodes: 4,
            r_max: 64.0,
            r_panel: 1.0,
            r_nodes: 16,
            angular_factor: 3.0,
            angular_extra: 16,
            window: None,
            truncation_tol: 1e-4,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, name: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(LabError::InvalidArgument(format!("grid.{name} must be positive, got {v}")))
            }
        };
        pos(self.t_max, "t_max")?;
        pos(self.t_panel, "t_panel")?;
        pos(self.r_max, "r_max")?;
        pos(self.r_panel, "r_panel")?;
        pos(self.angular_factor, "angular_factor")?;
        pos(self.truncation_tol, "truncation_tol")?;
        if self.t_nodes == 0 || self.r_nodes == 0 {
            return Err(LabError::InvalidArgument("grid node counts must be positive".into()));
        }
        if let Some(w) = self.window {
            if !(w.margin > 0.0 && w.impact >= 0.0) {
                return Err(LabError::InvalidArgument("grid.window needs margin > 0, impact >= 0".into()));
            }
        }
        Ok(())
    }
}

/// Unit-frequency-resolving nodes for space-time norms: a composite
/// Gauss–Legendre rule in t and in r, an angular rule, and optionally a
/// partition of the sampled box into cubes.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationGrid {
    pub n: usize,
    pub spec: GridSpec,
    pub times: Vec<f64>,
    pub time_weights: Vec<f64>,
    pub radii: Vec<f64>,
    pub radial_weights: Vec<f64>,
    /// (a, b, node range) per radial panel.
    pub radial_panels: Vec<(f64, f64, Range<usize>)>,
    pub angular: AngularQuadrature,
    pub cubes: Option<CubePartition>,
}

impl EvaluationGrid {
    /// Grid for data of angular degree ≤ `l_max` in dimension n.
    pub fn new(n: usize, l_max: usize, spec: &GridSpec) -> Result<Self> {
        spec.validate()?;
        let time = panel_rule(spec.t_max, spec.t_panel, spec.t_nodes)?;
        let radial = panel_rule(spec.r_max, spec.r_panel, spec.r_nodes)?;
        let degree = (spec.angular_factor * l_max as f64).ceil() as usize + spec.angular_extra;
        let angular = AngularQuadrature::new(n, degree.max(2 * l_max + 2))?;
        let panels = radial.1;
        Ok(EvaluationGrid {
            n,
            spec: spec.clone(),
            times: time.0.nodes,
            time_weights: time.0.weights,
            radii: radial.0.nodes,
            radial_weights: radial.0.weights,
            radial_panels: panels,
            angular,
            cubes: None,
        })
    }

    pub fn with_cubes(mut self, cubes: CubePartition) -> Result<Self> {
        if !(2..=3).contains(&self.n) || cubes.n != self.n {
            return Err(LabError::Unsupported("cube partitions exist for n = 2, 3".into()));
        }
        self.cubes = Some(cubes);
        Ok(self)
    }

    /// Radial node indices sampled at time t (whole panels meeting the window).
    pub fn radial_nodes_at(&self, t: f64) -> Vec<usize> {
        let (lo, hi) = match self.spec.window {
            Some(w) => w.bounds(t),
            None => (0.0, f64::INFINITY),
        };
        self.radial_panels.iter().filter(|(a, b, _)| *b > lo && *a < hi).flat_map(|(_, _, r)| r.clone()).collect()
    }

    /// Time node indices in [0, t_end]; `t_end` must be a panel boundary.
    pub fn times_until(&self, t_end: f64) -> Result<Vec<usize>> {
        let k = t_end / self.spec.t_panel;
        if (k - k.round()).abs() > 1e-9 || t_end > self.spec.t_max * (1.0 + 1e-12) || t_end <= 0.0 {
            return Err(LabError::InvalidArgument(format!("window end {t_end} is not a time panel boundary")));
        }
        Ok((0..self.times.len()).filter(|&i| self.times[i] < t_end).collect())
    }

    pub fn hash(&self) -> String {
        let desc = serde_json::json!({ "n": self.n, "spec": self.spec, "angular": self.angular.exactness_degree,
            "cubes": self.cubes.as_ref().map(|c| (c.side, c.half_extent)) });
        short_hash(desc.to_string().as_bytes())
    }
}

fn panel_rule(len: f64, panel: f64, nodes: usize) -> Result<(QuadratureRule, Vec<(f64, f64, Range<usize>)>)> {
    let k = (len / panel).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=k).map(|i| (i as f64 * panel).min(len)).collect();
    let rule = QuadratureRule::from_breakpoints(&breaks, nodes)?;
    let panels = (0..k).map(|i| (breaks[i], breaks[i + 1], i * nodes..(i + 1) * nodes)).collect();
    Ok((rule, panels))
}

/// Cubes of side `side` tiling [−R, R]^n (R = half_extent, a multiple of side),
/// aligned so that the coordinate hyperplanes are cube faces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubePartition {
    pub n: usize,
    pub side: f64,
    pub half_extent: f64,
}

impl CubePartition {
    pub fn new(n: usize, side: f64, half_extent: f64) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(LabError::Unsupported(format!("cube partition in dimension {n}")));
        }
        let k = half_extent / side;
        if !(side > 0.0 && k >= 1.0 && (k - k.round()).abs() < 1e-9) {
            return Err(LabError::InvalidArgument(format!(
                "half extent {half_extent} is not a positive multiple of the side {side}"
            )));
        }
        Ok(CubePartition { n, side, half_extent })
    }

    pub fn per_axis(&self) -> usize {
        (2.0 * self.half_extent / self.side).round() as usize
    }

    pub fn count(&self) -> usize {
        self.per_axis().pow(self.n as u32)
    }

    /// Flat index of the cube containing x, or None outside the box.
    pub fn index_of(&self, x: &[f64]) -> Option<usize> {
        let k = self.per_axis();
        let mut idx = 0;
        for &c in x.iter().take(self.n) {
            let j = ((c + self.half_extent) / self.side).floor();
            if j < 0.0 || j >= k as f64 {
                return None;
            }
            idx = idx * k + j as usize;
        }
        Some(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_select_whole_panels() {
        let spec =
            GridSpec { r_max: 40.0, window: Some(RadialWindow { margin: 4.0, impact: 3.0 }), ..GridSpec::default() };
        let g = EvaluationGrid::new(3, 4, &spec).unwrap();
        let nodes = g.radial_nodes_at(20.0);
        assert_eq!(nodes.len(), 16 * (25 - 16));
        let w: f64 = nodes.iter().map(|&i| g.radial_weights[i]).sum();
        assert!((w - 9.0).abs() < 1e-12);
        assert!(g.weights_positive());
    }

    #[test]
    fn cube_partition_covers_once() {
        let c = CubePartition::new(2, 0.5, 2.0).unwrap();
        assert_eq!(c.count(), 64);
        assert_eq!(c.index_of(&[-2.0, -2.0]), Some(0));
        assert_eq!(c.index_of(&[1.99, 1.99]), Some(63));
        assert_eq!(c.index_of(&[2.0, 0.0]), None);
        assert!(CubePartition::new(3, 0.3, 1.0).is_err());
    }

    impl EvaluationGrid {
        fn weights_positive(&self) -> bool {
            self.time_weights.iter().chain(&self.radial_weights).chain(&self.angular.weights).all(|w| *w > 0.0)
        }
    }
}
