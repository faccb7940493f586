use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::{LabError, Result};

/// Nodes and positive weights on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

/// Gauss–Legendre nodes and weights on [-1, 1], ascending.
pub fn gauss_legendre_reference(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(r) = cache.read().unwrap().get(&n) {
        return r.clone();
    }
    let rule = Arc::new(compute_gauss_legendre(n));
    cache.write().unwrap().insert(n, rule.clone());
    rule
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

impl QuadratureRule {
    /// n-point Gauss–Legendre rule on [a, b].
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::composite(a, b, 1, n)
    }

    /// Composite Gauss–Legendre rule with `panels` equal panels of `per_panel` nodes.
    pub fn composite(a: f64, b: f64, panels: usize, per_panel: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(LabError::InvalidArgument(format!("interval ({a}, {b})")));
        }
        if panels == 0 || per_panel == 0 {
            return Err(LabError::InvalidArgument("empty quadrature rule".into()));
        }
        let base = gauss_legendre_reference(per_panel);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (x, w) in base.0.iter().zip(&base.1) {
                nodes.push(lo + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Ok(QuadratureRule { nodes, weights, interval: (a, b) })
    }

    /// Composite rule with panels no wider than `max_width`.
    pub fn with_max_width(a: f64, b: f64, max_width: f64, per_panel: usize) -> Result<Self> {
        if max_width <= 0.0 {
            return Err(LabError::InvalidArgument("max_width must be positive".into()));
        }
        let panels = ((b - a) / max_width).ceil().max(1.0) as usize;
        Self::composite(a, b, panels, per_panel)
    }

    /// Composite rule over explicit breakpoints.
    pub fn from_breakpoints(breaks: &[f64], per_panel: usize) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(LabError::InvalidArgument("need at least two breakpoints".into()));
        }
        let base = gauss_legendre_reference(per_panel);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for win in breaks.windows(2) {
            let (lo, hi) = (win[0], win[1]);
            if hi <= lo {
                return Err(LabError::InvalidArgument("breakpoints must increase".into()));
            }
            let h = hi - lo;
            for (x, w) in base.0.iter().zip(&base.1) {
                nodes.push(lo + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Ok(QuadratureRule { nodes, weights, interval: (breaks[0], breaks[breaks.len() - 1]) })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> num_complex::Complex64>(&self, mut f: F) -> num_complex::Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| f(x) * w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_length() {
        for n in [1, 2, 5, 16, 32, 64] {
            let r = QuadratureRule::gauss_legendre(n, -1.0, 3.0).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - 4.0).abs() < 1e-12 * 4.0, "n={n} s={s}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(r.nodes.iter().all(|&x| x > -1.0 && x < 3.0));
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let r = QuadratureRule::gauss_legendre(32, 0.0, 1.0).unwrap();
        for k in 0..64 {
            let v = r.integrate(|x| x.powi(k));
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn composite_integrates_oscillation() {
        let r = QuadratureRule::composite(0.0, 1.0, 8, 32).unwrap();
        let v = r.integrate(|x| (40.0 * x).cos());
        assert!((v - 40f64.sin() / 40.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_interval() {
        assert!(QuadratureRule::composite(1.0, 1.0, 1, 4).is_err());
    }
}
