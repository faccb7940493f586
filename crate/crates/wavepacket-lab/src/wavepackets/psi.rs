use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::linalg::{complex_times_real, CMat};
use crate::propagator::{plateau, radial_kernel_orders};
use crate::specfun::{
    bessel_j, bessel_j_orders, oscillatory_integrate, BesselOrder, OscillatoryOptions, QuadratureRule,
};
use crate::{LabError, Result};

/// Support of the packet window χ.
pub const CHI_SUPPORT: (f64, f64) = (0.25, 4.0);

/// χ(ρ) = plateau(ρ)·ρ^{n/2}: equal to ρ^{n/2} on (1/2, 2), supported in (1/4, 4).
pub fn chi(n: usize, rho: f64) -> f64 {
    plateau(rho) * rho.powf(0.5 * n as f64)
}

/// ψ^l_m(r) = ∫ J_{(n−2)/2+l}(2πrρ) e^{−2πimρ} χ(ρ) dρ.
pub fn psi(l: usize, m: f64, r: f64, n: usize) -> Result<Complex64> {
    Ok(psi_with(l, m, r, n, OscillatoryOptions::default())?.0)
}

/// [`psi`] with quadrature controls; also returns the final doubling change.
pub fn psi_with(l: usize, m: f64, r: f64, n: usize, opts: OscillatoryOptions) -> Result<(Complex64, f64)> {
    if !(r >= 0.0 && r.is_finite() && m.is_finite()) {
        return Err(LabError::InvalidArgument(format!("bad ψ arguments m={m}, r={r}")));
    }
    let order = BesselOrder::for_mode(n, l);
    let rule = QuadratureRule::gauss_legendre(32, CHI_SUPPORT.0, CHI_SUPPORT.1)?;
    let amp = |x: f64| Complex64::new(bessel_j(order, 2.0 * PI * r * x).unwrap_or(0.0) * chi(n, x), 0.0);
    let opts = OscillatoryOptions { amplitude_bandwidth: opts.amplitude_bandwidth.max(r + 4.0), ..opts };
    let res = oscillatory_integrate(amp, -m, &rule, opts)?;
    Ok((res.value, res.last_change))
}

fn chi_rule(band: f64) -> Result<QuadratureRule> {
    let width = (8.0 / (band + 4.0)).min(1.0 / 16.0);
    QuadratureRule::with_max_width(CHI_SUPPORT.0, CHI_SUPPORT.1, width, 32)
}

/// ψ^l_m(r) for every l in `ls`, m in `ms`, r in `rs`; one m-major matrix
/// (ms.len() × rs.len()) per degree.
pub fn psi_grid(n: usize, ls: &[usize], ms: &[f64], rs: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    grid_impl(n, ls, ms, rs, false)
}

/// As [`psi_grid`] with the factor r^{(2−n)/2} included (finite at r = 0).
pub(crate) fn scaled_psi_grid(n: usize, ls: &[usize], ms: &[f64], rs: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    grid_impl(n, ls, ms, rs, true)
}

fn grid_impl(n: usize, ls: &[usize], ms: &[f64], rs: &[f64], scaled: bool) -> Result<Vec<Vec<Complex64>>> {
    if rs.iter().any(|r| !(*r >= 0.0 && r.is_finite())) || ms.iter().any(|m| !m.is_finite()) {
        return Err(LabError::InvalidArgument("ψ grid needs finite m and r ≥ 0".into()));
    }
    let r_max = rs.iter().fold(0.0f64, |a, &b| a.max(b));
    let m_max = ms.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let rule = chi_rule(r_max + m_max)?;
    let q = rule.len();
    let l_top = ls.iter().copied().max().unwrap_or(0);
    let nr = rs.len();
    // g[l][q × r] = kernel · χ · w
    let cols: Vec<Result<Vec<f64>>> = rs
        .par_iter()
        .map(|&r| {
            let mut tab = vec![0.0; l_top + 1];
            let mut col = vec![0.0; ls.len() * q];
            for (qq, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
                let cw = chi(n, x) * w;
                if cw == 0.0 {
                    continue;
                }
                if scaled {
                    radial_kernel_orders(n, r, x, &mut tab)?;
                } else {
                    bessel_j_orders(BesselOrder::for_mode(n, 0), 2.0 * PI * r * x, &mut tab)?;
                }
                for (li, &l) in ls.iter().enumerate() {
                    col[li * q + qq] = tab[l] * cw;
                }
            }
            Ok(col)
        })
        .collect();
    let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
    let mut e = CMat::zeros(ms.len(), q);
    for (i, &m) in ms.iter().enumerate() {
        for (qq, &x) in rule.nodes.iter().enumerate() {
            e.set(i, qq, Complex64::from_polar(1.0, -2.0 * PI * m * x));
        }
    }
    let mut out = Vec::with_capacity(ls.len());
    for li in 0..ls.len() {
        let mut g = vec![0.0; q * nr];
        for (ri, col) in cols.iter().enumerate() {
            for qq in 0..q {
                g[qq * nr + ri] = col[li * q + qq];
            }
        }
        let res = complex_times_real(&e, &g, nr);
        out.push(res.re.iter().zip(&res.im).map(|(&a, &b)| Complex64::new(a, b)).collect());
    }
    Ok(out)
}

/// Cached ψ^l_m on a radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketEnvelope {
    pub n: usize,
    pub l: usize,
    pub m: f64,
    pub radii: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl PacketEnvelope {
    pub fn new(n: usize, l: usize, m: f64, radii: &[f64]) -> Result<Self> {
        let v = psi_grid(n, &[l], &[m], radii)?.pop().unwrap_or_default();
        Ok(PacketEnvelope { n, l, m, radii: radii.to_vec(), values: v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_matches_scalar() {
        let ls = [0, 3, 16];
        let ms = [-7.25, 0.0, 12.5];
        let rs = [0.0, 0.4, 6.0, 30.0];
        for n in [2, 3, 4] {
            let g = psi_grid(n, &ls, &ms, &rs).unwrap();
            for (li, &l) in ls.iter().enumerate() {
                for (mi, &m) in ms.iter().enumerate() {
                    for (ri, &r) in rs.iter().enumerate() {
                        let want = psi(l, m, r, n).unwrap();
                        let got = g[li][mi * rs.len() + ri];
                        assert!((want - got).norm() < 1e-10, "n={n} l={l} m={m} r={r}: {want} {got}");
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_symmetry() {
        for &(l, m, r) in &[(0, 3.5, 2.0), (4, 10.0, 9.0)] {
            let a = psi(l, m, r, 3).unwrap();
            let b = psi(l, -m, r, 3).unwrap();
            assert!((a - b.conj()).norm() < 1e-10);
        }
    }
}
