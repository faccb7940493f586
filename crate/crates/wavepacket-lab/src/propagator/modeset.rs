use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_complex::Complex64;

use super::profile::{canonical_profile_rule, RadialProfile};
use crate::harmonics::{eigenvalue, sphere_area, HarmonicIndex, SphereFunction};
use crate::{LabError, Result};

/// Unit-frequency data f̂(ρω) = Σ ĉ^l_i(ρ) Y^l_i(ω).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    pub n: usize,
    /// Dyadic angular localisation N, if any; profiles then live at l ∈ (N/2, 4N).
    pub localization: Option<usize>,
    /// Relative L² mass lost when the data were projected onto finitely many harmonics.
    pub truncation_tail: f64,
    modes: BTreeMap<HarmonicIndex, RadialProfile>,
}

impl ModeSet {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=4).contains(&n) {
            return Err(LabError::Unsupported(format!("dimension {n}")));
        }
        Ok(ModeSet { n, localization: None, truncation_tail: 0.0, modes: BTreeMap::new() })
    }

    pub fn localized(n: usize, big_n: usize) -> Result<Self> {
        let mut m = Self::new(n)?;
        if big_n == 0 {
            return Err(LabError::InvalidArgument("localisation N must be positive".into()));
        }
        m.localization = Some(big_n);
        Ok(m)
    }

    pub fn insert(&mut self, idx: HarmonicIndex, profile: RadialProfile) -> Result<()> {
        if idx.n != self.n || !idx.supported() {
            return Err(LabError::Unsupported(format!("{idx:?} in dimension {}", self.n)));
        }
        if let Some(nn) = self.localization {
            let l = idx.l as f64;
            if !(l > nn as f64 / 2.0 && l < 4.0 * nn as f64) && !profile.is_zero() {
                return Err(LabError::InvalidArgument(format!(
                    "degree {} outside the localisation window of N = {nn}",
                    idx.l
                )));
            }
        }
        if profile.is_zero() {
            self.modes.remove(&idx);
        } else {
            self.modes.insert(idx, profile);
        }
        Ok(())
    }

    pub fn get(&self, idx: &HarmonicIndex) -> Option<&RadialProfile> {
        self.modes.get(idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HarmonicIndex, &RadialProfile)> {
        self.modes.iter()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn l_max(&self) -> usize {
        self.modes.keys().map(|k| k.l).max().unwrap_or(0)
    }

    /// ‖f‖²_{L²(ℝⁿ)} = |S^{n−1}| Σ ∫ |ĉ|² ρ^{n−1} dρ.
    pub fn l2_norm_sq(&self) -> f64 {
        sphere_area(self.n) * self.modes.values().map(|p| p.weighted_l2_sq(self.n)).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// (‖f‖² + ‖|Ω|^s f‖²)^{1/2} over ℝⁿ.
    pub fn hs_omega_norm(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(LabError::InvalidArgument(format!("H^s_Ω needs s >= 0, got {s}")));
        }
        Ok(self.weighted_norm(|l| 1.0 + if s == 0.0 { 1.0 } else { eigenvalue(self.n, l).powf(s) }))
    }

    /// ‖|Ω|^s f‖ over ℝⁿ.
    pub fn omega_power_norm(&self, s: f64) -> f64 {
        self.weighted_norm(|l| if s == 0.0 { 1.0 } else { eigenvalue(self.n, l).powf(s) })
    }

    fn weighted_norm<F: Fn(usize) -> f64>(&self, w: F) -> f64 {
        let acc: f64 = self.modes.iter().map(|(k, p)| w(k.l) * p.weighted_l2_sq(self.n)).sum();
        (sphere_area(self.n) * acc).sqrt()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        self.map_profiles(|_, p| p.scaled(c))
    }

    /// Copy with unit L² norm; zero data are returned unchanged.
    pub fn normalized(&self) -> Self {
        let nrm = self.l2_norm();
        if nrm == 0.0 {
            return self.clone();
        }
        self.scaled(Complex64::new(1.0 / nrm, 0.0))
    }

    pub fn map_profiles<F: Fn(&HarmonicIndex, &RadialProfile) -> RadialProfile>(&self, f: F) -> Self {
        let mut out = ModeSet { modes: BTreeMap::new(), ..self.clone() };
        for (k, p) in &self.modes {
            let q = f(k, p);
            if !q.is_zero() {
                out.modes.insert(*k, q);
            }
        }
        out
    }

    /// Mode-wise sum; localisation is kept only when both agree.
    pub fn add(&self, other: &ModeSet) -> Result<Self> {
        if self.n != other.n {
            return Err(LabError::InvalidArgument("dimension mismatch".into()));
        }
        let mut out = self.clone();
        if self.localization != other.localization {
            out.localization = None;
        }
        out.truncation_tail = self.truncation_tail.max(other.truncation_tail);
        for (k, p) in &other.modes {
            let q = match out.modes.get(k) {
                Some(a) => a.add(p),
                None => p.clone(),
            };
            out.modes.insert(*k, q);
        }
        Ok(out)
    }

    /// Restriction to a single mode.
    pub fn project(&self, idx: &HarmonicIndex) -> Self {
        let mut out = ModeSet { modes: BTreeMap::new(), ..self.clone() };
        if let Some(p) = self.modes.get(idx) {
            out.modes.insert(*idx, p.clone());
        }
        out
    }

    /// The angular function ω ↦ f̂(ρω).
    pub fn angular_at(&self, rho: f64) -> SphereFunction {
        let mut f = SphereFunction::new(self.n);
        for (k, p) in &self.modes {
            let _ = f.insert(*k, p.eval(rho));
        }
        f
    }

    /// f̂(ξ) at a frequency point.
    pub fn fourier_value(&self, xi: &[f64]) -> Result<Complex64> {
        let rho = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rho == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let omega: Vec<f64> = xi.iter().map(|v| v / rho).collect();
        self.angular_at(rho).eval(&omega)
    }

    /// CSV records (n, l, i, rho, re, im) at the canonical profile nodes.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["n", "l", "i", "rho", "re", "im"])?;
        let rule = canonical_profile_rule();
        for (k, p) in &self.modes {
            for (rho, v) in rule.nodes.iter().zip(p.sample_canonical()) {
                wr.write_record(&[
                    k.n.to_string(),
                    k.l.to_string(),
                    k.i.to_string(),
                    format!("{rho:.17e}"),
                    format!("{:.17e}", v.re),
                    format!("{:.17e}", v.im),
                ])?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    /// Inverse of [`ModeSet::write_csv`]; profiles come back as sampled profiles.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let rule = canonical_profile_rule();
        let mut rd = csv::Reader::from_reader(r);
        let mut acc: BTreeMap<HarmonicIndex, Vec<Complex64>> = BTreeMap::new();
        let mut n_seen = None;
        for rec in rd.records() {
            let rec = rec?;
            let field =
                |j: usize| -> Result<&str> { rec.get(j).ok_or_else(|| LabError::Parse(format!("missing column {j}"))) };
            let int = |j: usize| -> Result<usize> {
                field(j)?.trim().parse().map_err(|e| LabError::Parse(format!("column {j}: {e}")))
            };
            let real = |j: usize| -> Result<f64> {
                field(j)?.trim().parse().map_err(|e| LabError::Parse(format!("column {j}: {e}")))
            };
            let idx = HarmonicIndex::new(int(0)?, int(1)?, int(2)?)?;
            if *n_seen.get_or_insert(idx.n) != idx.n {
                return Err(LabError::Parse("mixed dimensions".into()));
            }
            let v = acc.entry(idx).or_default();
            let rho = real(3)?;
            let expect = rule.nodes.get(v.len()).copied().unwrap_or(f64::NAN);
            if !((rho - expect).abs() <= 1e-12) {
                return Err(LabError::Parse(format!("unexpected radial node {rho} for {idx:?}")));
            }
            v.push(Complex64::new(real(4)?, real(5)?));
        }
        let mut out = ModeSet::new(n_seen.unwrap_or(3))?;
        for (k, v) in acc {
            out.insert(k, RadialProfile::sampled(v)?)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn localisation_window_enforced() {
        let mut m = ModeSet::localized(3, 4).unwrap();
        let p = RadialProfile::bump(Complex64::new(1.0, 0.0));
        assert!(m.insert(HarmonicIndex::new(3, 5, 2).unwrap(), p.clone()).is_ok());
        assert!(m.insert(HarmonicIndex::new(3, 2, 0).unwrap(), p.clone()).is_err());
        assert!(m.insert(HarmonicIndex::new(3, 16, 0).unwrap(), p).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut m = ModeSet::new(3).unwrap();
        m.insert(HarmonicIndex::new(3, 2, 3).unwrap(), RadialProfile::bump(Complex64::new(0.5, -1.0))).unwrap();
        m.insert(HarmonicIndex::zonal(3, 0), RadialProfile::bump(Complex64::new(1.0, 0.0))).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let back = ModeSet::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 2);
        assert!((back.l2_norm() - m.l2_norm()).abs() < 1e-13 * m.l2_norm());
        for r in [0.6, 1.0, 1.77] {
            let k = HarmonicIndex::new(3, 2, 3).unwrap();
            assert!((back.get(&k).unwrap().eval(r) - m.get(&k).unwrap().eval(r)).norm() < 1e-9);
        }
    }
}
