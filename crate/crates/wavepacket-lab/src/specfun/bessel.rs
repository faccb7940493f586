use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{gauss_legendre_reference, QuadratureRule};
use crate::{LabError, Result};

/// Half-integer Bessel order s = twice_order / 2, with s ≥ -1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BesselOrder {
    twice_order: i32,
}

impl BesselOrder {
    pub fn new(twice_order: i32) -> Result<Self> {
        if twice_order < -1 {
            return Err(LabError::InvalidArgument(format!("Bessel order {}/2 below -1/2", twice_order)));
        }
        Ok(BesselOrder { twice_order })
    }

    pub fn integer(s: u32) -> Self {
        BesselOrder { twice_order: 2 * s as i32 }
    }

    /// Order (n-2)/2 + l attached to degree l harmonics in dimension n.
    pub fn for_mode(n: usize, l: usize) -> Self {
        BesselOrder { twice_order: n as i32 - 2 + 2 * l as i32 }
    }

    pub fn twice_order(self) -> i32 {
        self.twice_order
    }

    pub fn value(self) -> f64 {
        self.twice_order as f64 * 0.5
    }

    pub fn is_integer(self) -> bool {
        self.twice_order % 2 == 0
    }

    pub fn shifted(self, k: i32) -> Result<Self> {
        Self::new(self.twice_order + 2 * k)
    }
}

const LN_GAMMA_TABLE: usize = 8192;

/// ln Γ(m/2) for integer m ≥ 1.
pub(crate) fn ln_gamma_half(m: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let mut v = vec![0.0; LN_GAMMA_TABLE];
        // v[m] = ln Γ(m/2)
        v[1] = 0.5 * PI.ln();
        v[2] = 0.0;
        for m in 3..LN_GAMMA_TABLE {
            v[m] = v[m - 2] + ((m - 2) as f64 * 0.5).ln();
        }
        v
    });
    if m < LN_GAMMA_TABLE {
        t[m]
    } else {
        let mut acc = t[LN_GAMMA_TABLE - 2 + (m % 2)];
        let mut k = LN_GAMMA_TABLE - 2 + (m % 2);
        while k < m {
            acc += (k as f64 * 0.5).ln();
            k += 2;
        }
        acc
    }
}

fn check_args(order: BesselOrder, y: f64) -> Result<()> {
    if !y.is_finite() {
        return Err(LabError::InvalidArgument(format!("argument {y} not finite")));
    }
    if y < 0.0 {
        return Err(LabError::InvalidArgument(format!("negative argument {y}")));
    }
    if order.twice_order < -1 {
        return Err(LabError::InvalidArgument("order below -1/2".into()));
    }
    Ok(())
}

/// Power series Σ (-1)^k (y/2)^{2k+s} / (k! Γ(k+s+1)).
pub(crate) fn series(order: BesselOrder, y: f64) -> f64 {
    let s = order.value();
    if y == 0.0 {
        return match order.twice_order {
            0 => 1.0,
            -1 => f64::INFINITY,
            _ => 0.0,
        };
    }
    let half = 0.5 * y;
    let lead = (s * half.ln() - ln_gamma_half((order.twice_order + 2) as usize)).exp();
    if lead == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut term = lead;
    let mut sum = lead;
    let mut k = 1.0;
    loop {
        term *= -q / (k * (k + s));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || term == 0.0 {
            break;
        }
        k += 1.0;
        if k > 2000.0 {
            break;
        }
    }
    sum
}

fn panels_for_span(span: f64) -> usize {
    (span / 8.0).ceil().max(1.0) as usize
}

/// Bessel–Schläfli integral, accurate in absolute terms for all y > 0.
pub(crate) fn schlafli(order: BesselOrder, y: f64) -> f64 {
    let s = order.value();
    let gl = gauss_legendre_reference(32);
    let panels = panels_for_span((s.abs() + y) * PI);
    let h = PI / panels as f64;
    let mut first = 0.0;
    for p in 0..panels {
        let lo = p as f64 * h;
        let mut acc = 0.0;
        for (x, w) in gl.0.iter().zip(&gl.1) {
            let tau = lo + 0.5 * h * (x + 1.0);
            acc += w * (s * tau - y * tau.sin()).cos();
        }
        first += 0.5 * h * acc;
    }
    first /= PI;
    if order.is_integer() {
        return first;
    }
    // sin(sπ) = (-1)^m for s = m + 1/2 (m = -1 for s = -1/2).
    let m = (order.twice_order - 1) / 2;
    let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let g = |t: f64| y * t.sinh() + s * t;
    let mut t_max = 1.0;
    while g(t_max) < 45.0 {
        t_max *= 2.0;
    }
    let c = 1.0 / (y + s.max(0.0));
    let mut breaks = vec![0.0];
    let mut b = c.min(t_max);
    while b < t_max {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(t_max);
    let mut second = 0.0;
    for win in breaks.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        let hh = hi - lo;
        let mut acc = 0.0;
        for (x, w) in gl.0.iter().zip(&gl.1) {
            let t = lo + 0.5 * hh * (x + 1.0);
            acc += w * (-g(t)).exp();
        }
        second += 0.5 * hh * acc;
    }
    first - sign * second / PI
}

/// J_s(y) for half-integer s ≥ -1/2 and y ≥ 0.
///
/// Power series when the terms decrease monotonically or y < 8, otherwise the
/// Bessel–Schläfli integral; J_{-1/2} uses its closed form.
pub fn bessel_j(order: BesselOrder, y: f64) -> Result<f64> {
    check_args(order, y)?;
    if order.twice_order == -1 {
        if y == 0.0 {
            return Ok(f64::INFINITY);
        }
        return Ok((2.0 / (PI * y)).sqrt() * y.cos());
    }
    let s = order.value();
    if y < 8.0 || y * y < 4.0 * (s + 1.0) {
        Ok(series(order, y))
    } else {
        Ok(schlafli(order, y))
    }
}

/// Poisson integral (y/2)^s / (Γ(s+1/2)√π) ∫_0^π sin^{2s}φ cos(y cos φ) dφ, for s ≥ 0.
///
/// Loses about log10((e y / 2s)^s) digits for large s; kept as a cross-check.
pub fn bessel_j_poisson(order: BesselOrder, y: f64) -> Result<f64> {
    check_args(order, y)?;
    if order.twice_order < 0 {
        return Err(LabError::InvalidArgument("Poisson integral needs s >= 0".into()));
    }
    let s = order.value();
    if y == 0.0 {
        return Ok(if order.twice_order == 0 { 1.0 } else { 0.0 });
    }
    let panels = panels_for_span(y * PI + 2.0 * s) + 1;
    let rule = QuadratureRule::composite(0.0, PI, panels, 32)?;
    let integral = rule.integrate(|phi| {
        let sn = phi.sin();
        let p = if order.twice_order == 0 { 1.0 } else { sn.powf(2.0 * s) };
        p * (y * phi.cos()).cos()
    });
    let pref = (s * (0.5 * y).ln() - ln_gamma_half((order.twice_order + 1) as usize)).exp() / PI.sqrt();
    Ok(pref * integral)
}

/// Leading large-argument asymptotic with the first two Hankel corrections.
pub fn bessel_j_asymptotic(order: BesselOrder, y: f64) -> Result<f64> {
    check_args(order, y)?;
    if y == 0.0 {
        return Err(LabError::InvalidArgument("asymptotic form needs y > 0".into()));
    }
    let s = order.value();
    let mu = 4.0 * s * s;
    let p = 1.0 - (mu - 1.0) * (mu - 9.0) / (2.0 * (8.0 * y).powi(2));
    let q = (mu - 1.0) / (8.0 * y);
    let chi = y - (0.5 * s + 0.25) * PI;
    Ok((2.0 / (PI * y)).sqrt() * (p * chi.cos() - q * chi.sin()))
}

/// (−i)^s/(4π) ∫_{−2π}^{2π} e^{iy cosθ} e^{−isθ} dθ by composite Gauss–Legendre with
/// node doubling. For integer s this is J_s(y); for half-integer s the two
/// halves of the interval cancel and the value is 0.
pub fn bessel_j_halfint_integral_complex(order: BesselOrder, y: f64) -> Result<Complex64> {
    check_args(order, y)?;
    if order.twice_order < 0 {
        return Err(LabError::InvalidArgument("doubled-interval form needs s >= 0".into()));
    }
    let s = order.value();
    let integrand = |theta: f64| Complex64::from_polar(1.0, y * theta.cos() - s * theta);
    let span = 4.0 * PI * (y + s + 1.0);
    let mut panels = panels_for_span(span);
    let mut prev: Option<Complex64> = None;
    for _ in 0..8 {
        let rule = QuadratureRule::composite(-2.0 * PI, 2.0 * PI, panels, 32)?;
        let v = rule.integrate_complex(integrand);
        if let Some(p) = prev {
            if (v - p).norm() <= 1e-10 * (4.0 * PI) {
                let phase = Complex64::from_polar(1.0, -0.5 * PI * s);
                return Ok(phase * v / (4.0 * PI));
            }
        }
        prev = Some(v);
        panels *= 2;
    }
    Err(LabError::NonConvergence(format!("doubled-interval integral at s={s}, y={y}")))
}

/// Real part of [`bessel_j_halfint_integral_complex`].
pub fn bessel_j_halfint_integral(order: BesselOrder, y: f64) -> Result<f64> {
    Ok(bessel_j_halfint_integral_complex(order, y)?.re)
}

/// Max over samples of |d/dy(y^{-s} J_s) + y^{-s} J_{s+1}| with central differences (step 1e-5).
pub fn check_bessel_recursion(order: BesselOrder, y_samples: &[f64]) -> Result<f64> {
    let h = 1e-5;
    let s = order.value();
    let next = order.shifted(1)?;
    let mut worst: f64 = 0.0;
    for &y in y_samples {
        if !(y > h && y < 100.0) {
            return Err(LabError::InvalidArgument(format!("sample {y} outside (0, 100)")));
        }
        let g = |x: f64| -> Result<f64> { Ok(x.powf(-s) * bessel_j(order, x)?) };
        let d = (g(y + h)? - g(y - h)?) / (2.0 * h);
        let rhs = -y.powf(-s) * bessel_j(next, y)?;
        worst = worst.max((d - rhs).abs());
    }
    Ok(worst)
}

/// J_{s0}(y), J_{s0+1}(y), …, J_{s0+count-1}(y) written into `out`.
///
/// Miller backward recurrence normalised with the closed forms of J_{±1/2}
/// (half-integer orders) or the Neumann sum J_0 + 2ΣJ_{2k} = 1 (integer orders);
/// direct power series for y < 2.
pub fn bessel_j_orders(first: BesselOrder, y: f64, out: &mut [f64]) -> Result<()> {
    check_args(first, y)?;
    let count = out.len();
    if count == 0 {
        return Ok(());
    }
    if y < 2.0 {
        for (k, o) in out.iter_mut().enumerate() {
            *o = bessel_j(first.shifted(k as i32)?, y)?;
        }
        return Ok(());
    }
    let half = !first.is_integer();
    let frac = if half { 0.5 } else { 0.0 };
    // j indexes order ν = frac + j; first order has j0 (j0 = -1 for s = -1/2).
    let j0 = (first.twice_order - if half { 1 } else { 0 }) / 2;
    let j_top = j0 + count as i32 - 1;
    let big = (j_top as f64 + frac).max(y);
    let j_start = (big + 15.0 + (40.0 * big).sqrt()).ceil() as i32 + 1;
    let mut above = 0.0f64;
    let mut cur = 1e-280f64;
    let mut neumann = 0.0f64;
    let mut jm_half = 0.0; // J_{-1/2}
    let mut j_half = 0.0; // J_{1/2}
    let mut j = j_start;
    loop {
        // cur = J_{frac+j}
        if j >= j0 && j <= j_top {
            out[(j - j0) as usize] = cur;
        }
        if !half && j >= 0 {
            neumann += if j == 0 {
                cur
            } else if j % 2 == 0 {
                2.0 * cur
            } else {
                0.0
            };
        }
        if half && j == 0 {
            j_half = cur;
        }
        if half && j == -1 {
            jm_half = cur;
        }
        let stop = if half { -1 } else { 0 };
        if j == stop {
            break;
        }
        let nu = frac + j as f64;
        let lower = (2.0 * nu / y) * cur - above;
        above = cur;
        cur = lower;
        j -= 1;
        if cur.abs() > 1e250 {
            let sc = 1e-250;
            cur *= sc;
            above *= sc;
            neumann *= sc;
            j_half *= sc;
            for v in out.iter_mut() {
                *v *= sc;
            }
        }
    }
    let scale = if half {
        let a = (2.0 / (PI * y)).sqrt();
        let (sj, cj) = (a * y.sin(), a * y.cos());
        if sj.abs() >= cj.abs() {
            sj / j_half
        } else {
            cj / jm_half
        }
    } else {
        1.0 / neumann
    };
    for v in out.iter_mut() {
        *v *= scale;
    }
    Ok(())
}
