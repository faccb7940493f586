use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::{LabError, Result};

/// Supported dimensions n of R^n (so the sphere is S^{n-1}).
pub const SUPPORTED_DIMS: [usize; 3] = [2, 3, 4];

/// Dimension of the space of degree-l spherical harmonics on S^{n-1}.
pub fn dim_y(n: usize, l: usize) -> usize {
    assert!(n >= 2, "dimension must be at least 2");
    if l == 0 {
        return 1;
    }
    // (1/l)(n + 2l - 2) binomial(n + l - 3, l - 1)
    (n + 2 * l - 2) * binomial(n + l - 3, l - 1) / l
}

fn binomial(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut r: u128 = 1;
    for k in 0..b {
        r = r * (a - k) as u128 / (k + 1) as u128;
    }
    r as usize
}

/// Eigenvalue l(n + l - 2) of -Δ_sph on degree-l harmonics.
pub fn eigenvalue(n: usize, l: usize) -> f64 {
    (l * (n + l - 2)) as f64
}

/// Surface area |S^{n-1}|.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        _ => {
            // 2 π^{n/2} / Γ(n/2)
            2.0 * PI.powf(n as f64 / 2.0) / crate::specfun::ln_gamma_half(n).exp()
        }
    }
}

/// Mode (n, l, i) of the real orthonormal basis.
///
/// * n = 2: i = 0 → √2 cos lθ (1 when l = 0), i = 1 → √2 sin lθ.
/// * n = 3: i = 0 → zonal, i = 2k−1 → cos kφ, i = 2k → sin kφ.
/// * n = 4: only the zonal index i = 0 is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HarmonicIndex {
    pub n: usize,
    pub l: usize,
    pub i: usize,
}

impl HarmonicIndex {
    pub fn new(n: usize, l: usize, i: usize) -> Result<Self> {
        if !SUPPORTED_DIMS.contains(&n) {
            return Err(LabError::Unsupported(format!("dimension {n}")));
        }
        if i >= dim_y(n, l) {
            return Err(LabError::InvalidArgument(format!("index i={i} out of range for n={n}, l={l}")));
        }
        Ok(HarmonicIndex { n, l, i })
    }

    pub fn zonal(n: usize, l: usize) -> Self {
        HarmonicIndex { n, l, i: 0 }
    }

    pub fn is_zonal(&self) -> bool {
        self.i == 0
    }

    /// Azimuthal number m and whether the φ-factor is a sine (n = 2, 3).
    pub fn azimuth(&self) -> (usize, bool) {
        match self.n {
            2 => (self.l, self.i == 1),
            3 => {
                if self.i == 0 {
                    (0, false)
                } else {
                    (self.i.div_ceil(2), self.i % 2 == 0)
                }
            }
            _ => (0, false),
        }
    }

    /// Position in the canonical flattened ordering of all modes with degree ≤ l.
    pub fn flat(&self) -> usize {
        flat_offset(self.n, self.l) + self.i
    }

    pub fn eigenvalue(&self) -> f64 {
        eigenvalue(self.n, self.l)
    }

    /// Whether the basis function is implemented.
    pub fn supported(&self) -> bool {
        match self.n {
            2 | 3 => self.i < dim_y(self.n, self.l),
            4 => self.i == 0,
            _ => false,
        }
    }
}

/// Number of modes of degree < l in the canonical ordering.
pub fn flat_offset(n: usize, l: usize) -> usize {
    match n {
        2 => {
            if l == 0 {
                0
            } else {
                2 * l - 1
            }
        }
        3 => l * l,
        4 => l,
        _ => (0..l).map(|k| dim_y(n, k)).sum(),
    }
}

/// Every supported index of degree ≤ l_max in canonical order.
pub fn all_indices(n: usize, l_max: usize) -> Vec<HarmonicIndex> {
    let mut out = Vec::new();
    for l in 0..=l_max {
        let d = if n == 4 { 1 } else { dim_y(n, l) };
        for i in 0..d {
            out.push(HarmonicIndex { n, l, i });
        }
    }
    out
}

/// Normalised associated Legendre functions P̃_l^m(x) for 0 ≤ m ≤ l ≤ l_max,
/// scaled so that (1/2)∫_{-1}^{1} |P̃_l^m|² dx = 1, without the Condon–Shortley
/// phase. Returned in a flat vector indexed by `legendre_slot(l, m)`.
pub fn legendre_table(l_max: usize, x: f64) -> Vec<f64> {
    let mut t = vec![0.0; legendre_slot(l_max + 1, 0)];
    legendre_table_into(l_max, x, &mut t);
    t
}

#[inline]
pub fn legendre_slot(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

pub(crate) fn legendre_table_into(l_max: usize, x: f64, t: &mut [f64]) {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for m in 0..=l_max {
        if m > 0 {
            pmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        t[legendre_slot(m, m)] = pmm;
        if m == l_max {
            break;
        }
        let mut p_prev = pmm;
        let mut p = (2 * m + 3) as f64;
        p = p.sqrt() * x * pmm;
        t[legendre_slot(m + 1, m)] = p;
        for l in (m + 2)..=l_max {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            let next = a * (x * p - b * p_prev);
            p_prev = p;
            p = next;
            t[legendre_slot(l, m)] = p;
        }
    }
}

/// Angle coordinates of a unit vector: n = 2 → (θ), n = 3 → (cos θ, φ) with the
/// pole along the first axis, n = 4 → (cos θ) to the first axis.
pub(crate) fn polar_angles(omega: &[f64]) -> (f64, f64) {
    match omega.len() {
        2 => (omega[1].atan2(omega[0]), 0.0),
        3 => (omega[0].clamp(-1.0, 1.0), omega[2].atan2(omega[1])),
        _ => (omega[0].clamp(-1.0, 1.0), 0.0),
    }
}

/// Unit vector with polar angle θ to the first axis and azimuth φ (n = 3).
pub fn point_s2(theta: f64, phi: f64) -> [f64; 3] {
    [theta.cos(), theta.sin() * phi.cos(), theta.sin() * phi.sin()]
}

fn check_point(n: usize, omega: &[f64]) -> Result<()> {
    if omega.len() != n {
        return Err(LabError::InvalidArgument(format!("point has {} coordinates, expected {n}", omega.len())));
    }
    let r2: f64 = omega.iter().map(|v| v * v).sum();
    if (r2 - 1.0).abs() > 1e-9 {
        return Err(LabError::InvalidArgument(format!("point not on the sphere (|ω|² = {r2})")));
    }
    Ok(())
}

/// Y^l_i(ω), orthonormal for the normalised measure dω/|S^{n-1}|.
pub fn eval_basis(idx: HarmonicIndex, omega: &[f64]) -> Result<f64> {
    if !idx.supported() {
        return Err(LabError::Unsupported(format!("{idx:?}")));
    }
    check_point(idx.n, omega)?;
    Ok(eval_basis_unchecked(idx, omega))
}

pub(crate) fn eval_basis_unchecked(idx: HarmonicIndex, omega: &[f64]) -> f64 {
    match idx.n {
        2 => {
            let (th, _) = polar_angles(omega);
            if idx.l == 0 {
                1.0
            } else if idx.i == 0 {
                SQRT_2 * (idx.l as f64 * th).cos()
            } else {
                SQRT_2 * (idx.l as f64 * th).sin()
            }
        }
        3 => {
            let (x, phi) = polar_angles(omega);
            let (m, is_sin) = idx.azimuth();
            let p = legendre_single(idx.l, m, x);
            if m == 0 {
                p
            } else if is_sin {
                SQRT_2 * p * (m as f64 * phi).sin()
            } else {
                SQRT_2 * p * (m as f64 * phi).cos()
            }
        }
        _ => zonal_s3(idx.l, polar_angles(omega).0),
    }
}

/// Single P̃_l^m(x).
pub fn legendre_single(l: usize, m: usize, x: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= ((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * s;
    }
    if l == m {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p = ((2 * m + 3) as f64).sqrt() * x * pmm;
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let mf = m as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
        let next = a * (x * p - b * p_prev);
        p_prev = p;
        p = next;
    }
    p
}

/// Normalised zonal harmonic of degree l on S³: U_l(cos θ) = sin((l+1)θ)/sin θ.
pub fn zonal_s3(l: usize, cos_theta: f64) -> f64 {
    crate::specfun::gegenbauer_unchecked(l, 1.0, cos_theta.clamp(-1.0, 1.0))
}

/// Normalised zonal harmonic of degree l about the first axis, for n ∈ {2,3,4},
/// as a function of cos θ.
pub fn zonal(n: usize, l: usize, cos_theta: f64) -> f64 {
    match n {
        2 => {
            if l == 0 {
                1.0
            } else {
                SQRT_2 * (l as f64 * cos_theta.clamp(-1.0, 1.0).acos()).cos()
            }
        }
        3 => legendre_single(l, 0, cos_theta),
        _ => zonal_s3(l, cos_theta),
    }
}

/// max over points of |Σ_i |Y^l_i(ω)|² − dim_Y| / dim_Y.
pub fn addition_theorem_residual(n: usize, l: usize, points: &[Vec<f64>]) -> Result<f64> {
    if n != 2 && n != 3 {
        return Err(LabError::Unsupported(format!("full basis not available for n={n}")));
    }
    let d = dim_y(n, l) as f64;
    let mut worst: f64 = 0.0;
    for p in points {
        check_point(n, p)?;
        let mut s = 0.0;
        for i in 0..dim_y(n, l) {
            let y = eval_basis_unchecked(HarmonicIndex { n, l, i }, p);
            s += y * y;
        }
        worst = worst.max((s - d).abs() / d);
    }
    Ok(worst)
}

/// Normalised zonal harmonics of degrees 0..=l_max at cos θ = x, by recurrence.
pub(crate) fn zonal_table(n: usize, l_max: usize, x: f64, out: &mut [f64]) {
    let x = x.clamp(-1.0, 1.0);
    match n {
        2 => {
            // √2 T_l
            let (mut a, mut b) = (1.0, x);
            out[0] = 1.0;
            for l in 1..=l_max {
                out[l] = SQRT_2 * b;
                let c = 2.0 * x * b - a;
                a = b;
                b = c;
            }
        }
        3 => {
            let (mut a, mut b) = (1.0, x);
            out[0] = 1.0;
            for l in 1..=l_max {
                out[l] = ((2 * l + 1) as f64).sqrt() * b;
                let lf = l as f64;
                let c = ((2.0 * lf + 1.0) * x * b - lf * a) / (lf + 1.0);
                a = b;
                b = c;
            }
        }
        _ => {
            let (mut a, mut b) = (1.0, 2.0 * x);
            out[0] = 1.0;
            for l in 1..=l_max {
                out[l] = b;
                let c = 2.0 * x * b - a;
                a = b;
                b = c;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(dim_y(3, 2), 5);
        assert_eq!(dim_y(4, 1), 4);
        for n in 2..=6 {
            assert_eq!(dim_y(n, 0), 1);
        }
        for l in 0..20 {
            assert_eq!(dim_y(2, l), if l == 0 { 1 } else { 2 });
            assert_eq!(dim_y(3, l), 2 * l + 1);
            assert_eq!(dim_y(4, l), (l + 1) * (l + 1));
        }
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(eigenvalue(3, 1), 2.0);
        assert_eq!(eigenvalue(4, 2), 8.0);
        assert_eq!(eigenvalue(5, 0), 0.0);
    }

    #[test]
    fn flat_ordering_is_dense() {
        for n in [2, 3, 4] {
            for (k, idx) in all_indices(n, 9).iter().enumerate() {
                assert_eq!(idx.flat(), k);
            }
        }
    }

    #[test]
    fn legendre_table_matches_single() {
        let t = legendre_table(30, 0.37);
        for l in 0..=30 {
            for m in 0..=l {
                assert!((t[legendre_slot(l, m)] - legendre_single(l, m, 0.37)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn low_degree_closed_forms() {
        let x: f64 = 0.3;
        assert!((legendre_single(1, 0, x) - 3f64.sqrt() * x).abs() < 1e-15);
        assert!((legendre_single(2, 0, x) - 5f64.sqrt() * 0.5 * (3.0 * x * x - 1.0)).abs() < 1e-15);
        // P̃_1^1 = sqrt(3/2) sin θ
        assert!((legendre_single(1, 1, x) - 1.5f64.sqrt() * (1.0 - x * x).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_unsupported() {
        assert!(eval_basis(HarmonicIndex { n: 4, l: 2, i: 3 }, &[1.0, 0.0, 0.0, 0.0]).is_err());
        assert!(HarmonicIndex::new(3, 2, 5).is_err());
        assert!(eval_basis(HarmonicIndex::zonal(3, 1), &[1.0, 1.0, 0.0]).is_err());
    }
}
