use num_complex::Complex64;

use crate::propagator::{AxisymmetricSampler, ModeSet, Propagation};
use crate::{LabError, Result};

/// Cartesian cells per unit length; |u|² has frequencies below 4, so the
/// midpoint rule at spacing 1/5 integrates it without aliasing.
pub const CELLS_PER_UNIT: usize = 5;

/// Transverse-radius table spacing for interpolation.
const P_STEP: f64 = 1.0 / 16.0;
const STENCIL: usize = 10;

/// L² masses of u(t) on the unit cubes of [−R, R]^n for axisymmetric data,
/// from which every coarser aligned cube partition is aggregated.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeMasses {
    pub n: usize,
    pub half_extent: usize,
    /// Masses of the unit cubes with all transverse coordinates positive,
    /// indexed [axial][transverse...]; each stands for 2^{n−1} mirror cubes.
    pub masses: Vec<f64>,
}

impl CubeMasses {
    /// ‖u‖²_{L²} of the sampled box.
    pub fn total(&self) -> f64 {
        self.masses.iter().sum::<f64>() * (1 << (self.n - 1)) as f64
    }

    /// Masses of the cubes of side `side` (a divisor of R), positive-transverse ones.
    pub fn aggregate(&self, side: usize) -> Result<Vec<f64>> {
        let r = self.half_extent;
        if side == 0 || r % side != 0 {
            return Err(LabError::InvalidArgument(format!("cube side {side} does not divide {r}")));
        }
        let (za, ta) = (2 * r, r);
        let (zc, tc) = (za / side, ta / side);
        let d = self.n - 1;
        let mut out = vec![0.0; zc * tc.pow(d as u32)];
        for iz in 0..za {
            for it in 0..ta.pow(d as u32) {
                let mut tidx = 0;
                let mut rest = it;
                let mut mult = 1;
                for _ in 0..d {
                    tidx += (rest % ta / side) * mult;
                    rest /= ta;
                    mult *= tc;
                }
                out[(iz / side) * tc.pow(d as u32) + tidx] += self.masses[iz * ta.pow(d as u32) + it];
            }
        }
        Ok(out)
    }

    /// (Σ_α ‖u‖^p_{L²(Q_α)})^{1/p} over cubes of side 1/μ; p = ∞ gives the max.
    pub fn dual_norm(&self, mu: f64, p: f64) -> Result<f64> {
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(LabError::InvalidArgument(format!("μ = {mu} outside (0, 1]")));
        }
        if !(p >= 1.0) {
            return Err(LabError::InvalidArgument(format!("ℓ^p exponent {p} below 1")));
        }
        let side = (1.0 / mu).round();
        if (side - 1.0 / mu).abs() > 1e-9 {
            return Err(LabError::InvalidArgument(format!("1/μ = {} is not an integer", 1.0 / mu)));
        }
        let cubes = self.aggregate(side as usize)?;
        if p.is_infinite() {
            return Ok(cubes.iter().fold(0.0f64, |a, m| a.max(m.sqrt())));
        }
        let mult = (1 << (self.n - 1)) as f64;
        Ok((mult * cubes.iter().map(|m| m.powf(0.5 * p)).sum::<f64>()).powf(1.0 / p))
    }
}

/// Cartesian sampling of zonal (axisymmetric) data on [−R, R]^n, n ∈ {2, 3}.
pub struct CubeSampler {
    n: usize,
    half_extent: usize,
    ax: AxisymmetricSampler,
    /// axial cell centres
    z: Vec<f64>,
    /// transverse-radius table nodes
    p: Vec<f64>,
    /// interpolation start and weights per positive transverse cell
    stencils: Vec<(usize, [f64; STENCIL])>,
    grid: crate::propagator::AxisymmetricGrid,
}

impl CubeSampler {
    /// `half_extent` R (an integer) must contain the solution on the time window of interest;
    /// `t_max` sets the quadrature resolution.
    pub fn new(modes: &ModeSet, dir: Propagation, half_extent: usize, t_max: f64) -> Result<Self> {
        let n = modes.n;
        if !(2..=3).contains(&n) {
            return Err(LabError::Unsupported(format!("cube sampling in dimension {n}")));
        }
        if half_extent == 0 {
            return Err(LabError::InvalidArgument("half extent must be positive".into()));
        }
        if modes.iter().any(|(k, _)| !k.is_zonal()) {
            return Err(LabError::Unsupported("cube sampling needs zonal data".into()));
        }
        let r = half_extent as f64;
        let h = 1.0 / CELLS_PER_UNIT as f64;
        let nz = 2 * half_extent * CELLS_PER_UNIT;
        let z: Vec<f64> = (0..nz).map(|i| -r + (i as f64 + 0.5) * h).collect();
        let nt = half_extent * CELLS_PER_UNIT;
        let d = n - 1;
        let p_max = r * (d as f64).sqrt() + STENCIL as f64 * P_STEP;
        let np = (p_max / P_STEP).ceil() as usize + 1;
        let p: Vec<f64> = (0..np).map(|j| j as f64 * P_STEP).collect();
        let centres: Vec<f64> = (0..nt).map(|i| (i as f64 + 0.5) * h).collect();
        let mut stencils = Vec::with_capacity(nt.pow(d as u32));
        for it in 0..nt.pow(d as u32) {
            let pp = if d == 1 { centres[it] } else { centres[it / nt].hypot(centres[it % nt]) };
            stencils.push(lagrange_stencil(pp));
        }
        let bw = r * 2f64.sqrt() + t_max + 4.0;
        let (xr, qr) = AxisymmetricSampler::rules((-2.0, 2.0), (0.0, 2.0), bw, bw)?;
        let ax = AxisymmetricSampler::from_modes(modes, dir, &xr, &qr)?;
        let grid = ax.grid(&z, &p);
        Ok(CubeSampler { n, half_extent, ax, z, p, stencils, grid })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Unit-cube masses of u(t) by the midpoint rule at spacing 1/5.
    pub fn masses(&self, t: f64) -> CubeMasses {
        let table = self.ax.field(t, &self.grid, false);
        let np = self.p.len();
        let d = self.n - 1;
        let nt = self.half_extent * CELLS_PER_UNIT;
        let cell = (1.0 / CELLS_PER_UNIT as f64).powi(self.n as i32);
        let ta = self.half_extent;
        let mut masses = vec![0.0; 2 * ta * ta.pow(d as u32)];
        for (iz, _) in self.z.iter().enumerate() {
            let row = &table[iz * np..(iz + 1) * np];
            let cz = iz / CELLS_PER_UNIT;
            for (it, (j0, w)) in self.stencils.iter().enumerate() {
                let mut u = Complex64::new(0.0, 0.0);
                for k in 0..STENCIL {
                    u += row[(*j0 as isize + k as isize - (STENCIL / 2 - 1) as isize).unsigned_abs()] * w[k];
                }
                let tcell = if d == 1 {
                    it / CELLS_PER_UNIT
                } else {
                    (it / nt / CELLS_PER_UNIT) * ta + (it % nt) / CELLS_PER_UNIT
                };
                masses[cz * ta.pow(d as u32) + tcell] += u.norm_sqr() * cell;
            }
        }
        CubeMasses { n: self.n, half_extent: self.half_extent, masses }
    }
}

/// Base index j0 and weights so that U(p) ≈ Σ_k w_k U(|j0 + k − 4|·δ), the
/// table being even in p.
fn lagrange_stencil(p: f64) -> (usize, [f64; STENCIL]) {
    let j0 = (p / P_STEP).floor() as usize;
    let first = j0 as f64 - (STENCIL / 2 - 1) as f64;
    let nodes: Vec<f64> = (0..STENCIL).map(|k| (first + k as f64) * P_STEP).collect();
    let mut w = [0.0; STENCIL];
    for k in 0..STENCIL {
        let mut v = 1.0;
        for m in 0..STENCIL {
            if m != k {
                v *= (p - nodes[m]) / (nodes[k] - nodes[m]);
            }
        }
        w[k] = v;
    }
    (j0, w)
}

/// ‖u(t)‖_{ℓ^p(L²_μ)} for axisymmetric data.
pub fn dual_scale_norm(sampler: &CubeSampler, t: f64, mu: f64, p: f64) -> Result<f64> {
    sampler.masses(t).dual_norm(mu, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{lr_norm, EvaluationGrid, GridSpec};
    use crate::propagator::{make_random_family, FieldSampler, RandomFamily};

    #[test]
    fn l2_cube_additivity_and_monotonicity() {
        let m = make_random_family(3, 2, 7, RandomFamily::Zonal).unwrap();
        let cs = CubeSampler::new(&m, Propagation::Forward, 12, 4.0).unwrap();
        let fs = FieldSampler::new(&m, Propagation::Forward, 30.0).unwrap();
        let spec = GridSpec { r_max: 24.0, t_max: 4.0, ..GridSpec::default() };
        let grid = EvaluationGrid::new(3, m.l_max(), &spec).unwrap();
        for t in [0.0, 3.0] {
            let masses = cs.masses(t);
            let l2 = lr_norm(&fs, t, 2.0, &grid).unwrap();
            for mu in [1.0, 0.5, 0.25] {
                let d2 = masses.dual_norm(mu, 2.0).unwrap();
                assert!((d2 - l2).abs() < 1e-6 * l2, "t={t} mu={mu}: {d2} {l2}");
                let d4 = masses.dual_norm(mu, 4.0).unwrap();
                let dinf = masses.dual_norm(mu, f64::INFINITY).unwrap();
                assert!(dinf <= d4 && d4 <= d2);
            }
        }
        assert!(cs.masses(0.0).dual_norm(1.5, 2.0).is_err());
    }

    #[test]
    fn interpolation_is_exact_for_polynomials() {
        let (j0, w) = lagrange_stencil(1.03);
        let first = j0 as f64 - 4.0;
        let v: f64 = (0..STENCIL).map(|k| w[k] * ((first + k as f64) * P_STEP).powi(5)).sum();
        assert!((v - 1.03f64.powi(5)).abs() < 1e-12);
    }
}
