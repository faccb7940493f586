use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::psi::psi_grid;
use crate::{LabError, Result};

/// Largest N1, N2 for which constants are fitted.
pub const MAX_DECAY_ORDER: u32 = 4;

/// Region of the (m, r) plane governing the packet bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// 0 ≤ r < 1.
    Inner,
    /// 1 ≤ r ≤ |m| + 1.
    Propagating,
    /// |m| + 1 < r.
    Outer,
}

impl Regime {
    pub fn of(m: f64, r: f64) -> Regime {
        if r < 1.0 {
            Regime::Inner
        } else if r <= m.abs() + 1.0 {
            Regime::Propagating
        } else {
            Regime::Outer
        }
    }

    pub const ALL: [Regime; 3] = [Regime::Inner, Regime::Propagating, Regime::Outer];
}

/// The bound for |ψ^l_m(r)| without its constant.
///
/// * inner: r^{(n−2)/2} (1+|m|)^{−N1} (1+l)^{−N2}
/// * propagating: (1+r+|m|)^{−1/2} (1+|r−|m||)^{−N1} (r^{1/2}/(1+l))^{N2}
/// * outer: (r²−m²)^{−1/2} [(1+|r−|m||)^{−N1} + min_± (l/√(r²−m²))^{±N2}]
pub fn bound_shape(l: usize, m: f64, r: f64, n: usize, n1: u32, n2: u32) -> Result<(f64, Regime)> {
    if !(r >= 0.0 && r.is_finite() && m.is_finite()) {
        return Err(LabError::InvalidArgument(format!("bad point m={m}, r={r}")));
    }
    if n1 > MAX_DECAY_ORDER || n2 > MAX_DECAY_ORDER {
        return Err(LabError::InvalidArgument(format!("decay orders (N1, N2) = ({n1}, {n2}) above {MAX_DECAY_ORDER}")));
    }
    if !(2..=4).contains(&n) {
        return Err(LabError::Unsupported(format!("dimension {n}")));
    }
    let am = m.abs();
    let lf = l as f64;
    let regime = Regime::of(m, r);
    let b = match regime {
        Regime::Inner => r.powf(0.5 * (n as f64 - 2.0)) * (1.0 + am).powi(-(n1 as i32)) * (1.0 + lf).powi(-(n2 as i32)),
        Regime::Propagating => {
            (1.0 + r + am).powf(-0.5)
                * (1.0 + (r - am).abs()).powi(-(n1 as i32))
                * (r.sqrt() / (1.0 + lf)).powi(n2 as i32)
        }
        Regime::Outer => {
            let d = (r * r - m * m).sqrt();
            let x = lf / d;
            let near = (1.0 + (am - r).abs()).powi(-(n1 as i32));
            let coh = if n2 == 0 { 1.0 } else { x.powi(n2 as i32).min(x.powi(-(n2 as i32))) };
            (near + coh) / d
        }
    };
    Ok((b, regime))
}

/// Fitted bound C·shape for |ψ^l_m(r)| with its regime.
pub fn asymptotic_bound(
    l: usize,
    m: f64,
    r: f64,
    n: usize,
    n1: u32,
    n2: u32,
    table: &ConstantsTable,
) -> Result<(f64, Regime)> {
    let (shape, regime) = bound_shape(l, m, r, n, n1, n2)?;
    let c = table.get(n, n1, n2, regime).ok_or_else(|| {
        LabError::InvalidArgument(format!("no fitted constant for n={n}, N1={n1}, N2={n2}, {regime:?}"))
    })?;
    Ok((c * shape, regime))
}

/// Scan grid for constant fitting: uniform steps in m ≥ 0 (|ψ^l_{−m}| = |ψ^l_m|)
/// and r, plus dyadically refined points around r = 1, r = |m|, r = |m| + 1 and r = l.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanGrid {
    pub ls: Vec<usize>,
    pub m_max: f64,
    pub m_step: f64,
    pub r_max: f64,
    pub r_step: f64,
    pub seam_levels: u32,
}

impl ScanGrid {
    pub fn standard() -> Self {
        ScanGrid { ls: vec![0, 1, 4, 16, 64], m_max: 64.0, m_step: 1.0, r_max: 128.0, r_step: 0.5, seam_levels: 6 }
    }

    /// Twice as fine in every direction.
    pub fn refined(&self) -> Self {
        ScanGrid {
            m_step: self.m_step / 2.0,
            r_step: self.r_step / 2.0,
            seam_levels: self.seam_levels + 1,
            ..self.clone()
        }
    }

    pub fn ms(&self) -> Vec<f64> {
        let k = (self.m_max / self.m_step).round() as usize;
        (0..=k).map(|i| i as f64 * self.m_step).collect()
    }

    pub fn rs(&self) -> Vec<f64> {
        let k = (self.r_max / self.r_step).round() as usize;
        let mut v: Vec<f64> = (0..=k).map(|i| i as f64 * self.r_step).collect();
        let mut seams: Vec<f64> = vec![1.0];
        for m in self.ms() {
            seams.push(m);
            seams.push(m + 1.0);
        }
        seams.extend(self.ls.iter().map(|&l| l as f64));
        for s in seams {
            for j in 1..=self.seam_levels {
                let d = 0.5f64.powi(j as i32);
                v.push(s - d);
                v.push(s + d);
            }
        }
        v.retain(|r| *r >= 0.0 && *r <= self.r_max);
        v.sort_by(|a, b| a.total_cmp(b));
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        v
    }

    /// Short hex digest identifying the grid.
    pub fn hash(&self) -> String {
        let desc = serde_json::to_string(self).unwrap_or_default();
        let d = Sha256::digest(desc.as_bytes());
        d.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// One fitted constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantRow {
    pub n: usize,
    #[serde(rename = "N1")]
    pub n1: u32,
    #[serde(rename = "N2")]
    pub n2: u32,
    pub regime: Regime,
    #[serde(rename = "C")]
    pub c: f64,
    pub grid_hash: String,
}

/// Fitted constants, persisted as CSV (n, N1, N2, regime, C, grid_hash).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConstantsTable {
    pub rows: Vec<ConstantRow>,
}

impl ConstantsTable {
    pub fn get(&self, n: usize, n1: u32, n2: u32, regime: Regime) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n && r.n1 == n1 && r.n2 == n2 && r.regime == regime).map(|r| r.c)
    }

    /// Adds rows, replacing any with the same key.
    pub fn extend(&mut self, rows: impl IntoIterator<Item = ConstantRow>) {
        for row in rows {
            self.rows.retain(|r| !(r.n == row.n && r.n1 == row.n1 && r.n2 == row.n2 && r.regime == row.regime));
            self.rows.push(row);
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.rows {
            wr.serialize(r)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let rows = rd.deserialize().collect::<std::result::Result<Vec<ConstantRow>, _>>()?;
        Ok(ConstantsTable { rows })
    }
}

/// Grid candidates per (degree, regime) passed to the local maximiser.
const POLISH_CANDIDATES: usize = 6;

/// Smallest C per regime with |ψ| ≤ C·shape on the grid, for each (N1, N2)
/// in `orders`. The grid maximum is followed by zoomed patch searches around
/// the best points of each degree and regime, so C approximates the supremum
/// over the scanned region rather than over the grid nodes alone.
pub fn fit_constants(n: usize, orders: &[(u32, u32)], grid: &ScanGrid) -> Result<Vec<ConstantRow>> {
    let ms = grid.ms();
    let rs = grid.rs();
    let vals = psi_grid(n, &grid.ls, &ms, &rs)?;
    let hash = grid.hash();
    let mut rows = Vec::new();
    for &(n1, n2) in orders {
        let mut best = [0.0f64; 3];
        let mut starts = Vec::new();
        for (li, &l) in grid.ls.iter().enumerate() {
            let mut cands: [Vec<(f64, f64, f64)>; 3] = Default::default();
            for (mi, &m) in ms.iter().enumerate() {
                for (ri, &r) in rs.iter().enumerate() {
                    let v = vals[li][mi * rs.len() + ri].norm();
                    let (shape, regime) = bound_shape(l, m, r, n, n1, n2)?;
                    if v == 0.0 || shape == 0.0 {
                        continue;
                    }
                    let k = regime as usize;
                    best[k] = best[k].max(v / shape);
                    cands[k].push((v / shape, m, r));
                }
            }
            for (k, mut c) in cands.into_iter().enumerate() {
                c.sort_by(|a, b| b.0.total_cmp(&a.0));
                for &(_, m, r) in c.iter().take(POLISH_CANDIDATES) {
                    starts.push((k, l, m, r));
                }
            }
        }
        let polished: Vec<Result<(usize, f64)>> =
            starts.par_iter().map(|&(k, l, m, r)| Ok((k, polish(n, l, m, r, Regime::ALL[k], n1, n2, grid)?))).collect();
        for p in polished {
            let (k, v) = p?;
            best[k] = best[k].max(v);
        }
        for regime in Regime::ALL {
            rows.push(ConstantRow { n, n1, n2, regime, c: best[regime as usize], grid_hash: hash.clone() });
        }
    }
    Ok(rows)
}

/// Largest |ψ|/shape near (m, r) in `regime` and inside the grid box, by
/// successively zoomed 9 × 9 patches.
#[allow(clippy::too_many_arguments)]
fn polish(n: usize, l: usize, m: f64, r: f64, regime: Regime, n1: u32, n2: u32, grid: &ScanGrid) -> Result<f64> {
    const SIDE: usize = 9;
    let (mut m, mut r) = (m, r);
    let mut half = (grid.m_step, grid.r_step);
    let mut best = 0.0f64;
    for _ in 0..5 {
        let axis = |c: f64, h: f64, hi: f64| -> Vec<f64> {
            (0..SIDE)
                .map(|i| c + h * (2.0 * i as f64 / (SIDE - 1) as f64 - 1.0))
                .filter(|x| (0.0..=hi).contains(x))
                .collect()
        };
        let ms = axis(m, half.0, grid.m_max);
        let rs = axis(r, half.1, grid.r_max);
        let vals = psi_grid(n, &[l], &ms, &rs)?;
        for (mi, &mm) in ms.iter().enumerate() {
            for (ri, &rr) in rs.iter().enumerate() {
                let (shape, reg) = bound_shape(l, mm, rr, n, n1, n2)?;
                if reg != regime || shape == 0.0 {
                    continue;
                }
                let q = vals[0][mi * rs.len() + ri].norm() / shape;
                if q > best {
                    best = q;
                    m = mm;
                    r = rr;
                }
            }
        }
        half = (half.0 / 4.0, half.1 / 4.0);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes_from_examples() {
        assert_eq!(bound_shape(3, 7.0, 0.5, 3, 2, 2).unwrap().1, Regime::Inner);
        assert_eq!(bound_shape(3, 40.0, 10.0, 3, 2, 2).unwrap().1, Regime::Propagating);
        let (b, reg) = bound_shape(5, 40.0, 100.0, 3, 2, 2).unwrap();
        assert_eq!(reg, Regime::Outer);
        let d = (100.0f64 * 100.0 - 1600.0).sqrt();
        let want = ((1.0f64 + 60.0).powi(-2) + (5.0 / d).powi(2)) / d;
        assert!((b - want).abs() < 1e-15);
        assert!(bound_shape(0, 0.0, 1.0, 3, 5, 0).is_err());
    }

    #[test]
    fn table_round_trip() {
        let mut t = ConstantsTable::default();
        t.extend([ConstantRow { n: 3, n1: 2, n2: 2, regime: Regime::Outer, c: 1.5, grid_hash: "ab".into() }]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,N1,N2,regime,C,grid_hash"));
        assert_eq!(ConstantsTable::read_csv(buf.as_slice()).unwrap(), t);
    }
}
