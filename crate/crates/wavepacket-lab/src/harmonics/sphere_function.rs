use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_complex::Complex64;

use super::basis::{eval_basis_unchecked, legendre_slot, legendre_table_into, polar_angles, HarmonicIndex};
use super::quadrature::AngularQuadrature;
use crate::{LabError, Result};

/// Finitely supported expansion F = Σ c^l_i Y^l_i on S^{n-1}.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SphereFunction {
    pub n: usize,
    pub coefficients: BTreeMap<HarmonicIndex, Complex64>,
}

impl SphereFunction {
    pub fn new(n: usize) -> Self {
        SphereFunction { n, coefficients: BTreeMap::new() }
    }

    pub fn from_pairs<I: IntoIterator<Item = (HarmonicIndex, Complex64)>>(n: usize, pairs: I) -> Result<Self> {
        let mut f = SphereFunction::new(n);
        for (idx, c) in pairs {
            f.insert(idx, c)?;
        }
        Ok(f)
    }

    pub fn insert(&mut self, idx: HarmonicIndex, c: Complex64) -> Result<()> {
        if idx.n != self.n {
            return Err(LabError::InvalidArgument(format!("index dimension {} != {}", idx.n, self.n)));
        }
        HarmonicIndex::new(idx.n, idx.l, idx.i)?;
        if c != Complex64::new(0.0, 0.0) {
            self.coefficients.insert(idx, c);
        } else {
            self.coefficients.remove(&idx);
        }
        Ok(())
    }

    pub fn get(&self, idx: &HarmonicIndex) -> Complex64 {
        self.coefficients.get(idx).copied().unwrap_or_default()
    }

    /// Truncation degree L_max (0 for the zero function).
    pub fn l_max(&self) -> usize {
        self.coefficients.keys().map(|k| k.l).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(|c| c.norm() == 0.0)
    }

    /// ‖F‖ in the normalised L²(S^{n-1}) (Σ|c|²)^{1/2}.
    pub fn l2_norm(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, omega: &[f64]) -> Result<Complex64> {
        if omega.len() != self.n {
            return Err(LabError::InvalidArgument("point dimension mismatch".into()));
        }
        if let Some(bad) = self.coefficients.keys().find(|k| !k.supported()) {
            return Err(LabError::Unsupported(format!("{bad:?}")));
        }
        if self.n == 3 && self.coefficients.len() > 8 {
            return Ok(self.eval_s2_tabulated(omega));
        }
        let mut s = Complex64::new(0.0, 0.0);
        for (idx, c) in &self.coefficients {
            s += c * eval_basis_unchecked(*idx, omega);
        }
        Ok(s)
    }

    /// One Legendre table and one azimuthal ladder shared by all coefficients.
    fn eval_s2_tabulated(&self, omega: &[f64]) -> Complex64 {
        let l_max = self.l_max();
        let (x, phi) = polar_angles(omega);
        let mut table = vec![0.0; legendre_slot(l_max + 1, 0)];
        legendre_table_into(l_max, x, &mut table);
        let (cos, sin): (Vec<f64>, Vec<f64>) =
            (0..=l_max).map(|m| ((m as f64 * phi).cos(), (m as f64 * phi).sin())).unzip();
        let mut s = Complex64::new(0.0, 0.0);
        for (idx, c) in &self.coefficients {
            let (m, is_sin) = idx.azimuth();
            let p = table[legendre_slot(idx.l, m)];
            let y = if m == 0 {
                p
            } else if is_sin {
                std::f64::consts::SQRT_2 * p * sin[m]
            } else {
                std::f64::consts::SQRT_2 * p * cos[m]
            };
            s += c * y;
        }
        s
    }

    /// Normalised L² norm by quadrature: ((1/|S|) Σ w |F|²)^{1/2}.
    pub fn l2_norm_quadrature(&self, quad: &AngularQuadrature) -> Result<f64> {
        let mut acc = 0.0;
        for (p, w) in quad.nodes.iter().zip(&quad.weights) {
            acc += w * self.eval(p)?.norm_sqr();
        }
        Ok((acc / quad.area()).sqrt())
    }

    pub fn map_coefficients<F: Fn(&HarmonicIndex, Complex64) -> Complex64>(&self, f: F) -> Self {
        let mut out = SphereFunction::new(self.n);
        for (k, v) in &self.coefficients {
            let w = f(k, *v);
            if w != Complex64::new(0.0, 0.0) {
                out.coefficients.insert(*k, w);
            }
        }
        out
    }

    /// CSV records (n, l, i, re, im).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["n", "l", "i", "re", "im"])?;
        for (k, c) in &self.coefficients {
            wr.write_record(&[
                k.n.to_string(),
                k.l.to_string(),
                k.i.to_string(),
                format!("{:e}", c.re),
                format!("{:e}", c.im),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut out: Option<SphereFunction> = None;
        for rec in rd.records() {
            let rec = rec?;
            let parse_u = |k: usize| -> Result<usize> {
                rec.get(k)
                    .ok_or_else(|| LabError::Parse("short record".into()))?
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| LabError::Parse(e.to_string()))
            };
            let parse_f = |k: usize| -> Result<f64> {
                rec.get(k)
                    .ok_or_else(|| LabError::Parse("short record".into()))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| LabError::Parse(e.to_string()))
            };
            let idx = HarmonicIndex::new(parse_u(0)?, parse_u(1)?, parse_u(2)?)?;
            let f = out.get_or_insert_with(|| SphereFunction::new(idx.n));
            f.insert(idx, Complex64::new(parse_f(3)?, parse_f(4)?))?;
        }
        out.ok_or_else(|| LabError::Parse("empty sphere-function file".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::{all_indices, point_s2};

    #[test]
    fn tabulated_evaluation_matches_basis_sum() {
        let pairs = all_indices(3, 20).into_iter().enumerate().map(|(j, k)| (k, Complex64::new((j as f64).sin(), 0.3)));
        let f = SphereFunction::from_pairs(3, pairs).unwrap();
        for (th, ph) in [(0.0, 0.0), (0.4, 2.0), (1.9, -1.2), (std::f64::consts::PI, 0.5)] {
            let p = point_s2(th, ph);
            let direct: Complex64 = f.coefficients.iter().map(|(k, c)| c * eval_basis_unchecked(*k, &p)).sum();
            assert!((f.eval(&p).unwrap() - direct).norm() < 1e-11);
        }
    }
}
