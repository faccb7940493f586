//! Independent oracles shared by the integration and acceptance tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use wavepacket_lab::propagator::ModeSet;
use wavepacket_lab::specfun::QuadratureRule;

/// Double-double number hi + lo, enough to sum the Bessel power series
/// through its cancellation at y = 20 with ~1e-25 relative precision.
#[derive(Debug, Clone, Copy)]
pub struct Dd(pub f64, pub f64);

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl Dd {
    pub fn from(a: f64) -> Dd {
        Dd(a, 0.0)
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.0, o.0);
        let e = e + self.1 + o.1;
        let (h, l) = two_sum(s, e);
        Dd(h, l)
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        let e = e + self.0 * o.1 + self.1 * o.0;
        let (h, l) = two_sum(p, e);
        Dd(h, l)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.0 / o.0;
        let r = self.add(o.mul(Dd::from(-q1)));
        let q2 = r.0 / o.0;
        let r = r.add(o.mul(Dd::from(-q2)));
        let q3 = r.0 / o.0;
        Dd::from(q1).add(Dd::from(q2)).add(Dd::from(q3))
    }

    pub fn sqrt(self) -> Dd {
        let x = Dd::from(self.0.sqrt());
        // One Newton step in double-double: x + (a − x²)/(2x).
        let r = self.add(x.mul(x).mul(Dd::from(-1.0)));
        x.add(r.div(x.mul(Dd::from(2.0))))
    }

    pub fn value(self) -> f64 {
        self.0 + self.1
    }
}

/// π in double-double.
pub const PI_DD: Dd = Dd(PI, 1.2246467991473532e-16);

/// J_s(y) for half-integer s = twice/2 ≥ −1/2 from the ascending series
/// Σ (−1)^k (y/2)^{2k+s} / (k! Γ(k+s+1)) in double-double arithmetic.
pub fn bessel_series_oracle(twice: i32, y: f64) -> f64 {
    assert!(twice >= -1 && twice % 2 != 0);
    let s = twice as f64 / 2.0;
    let half = Dd::from(y / 2.0);
    // With s = w − 1/2: (y/2)^s = (y/2)^{w−1} √(y/2), Γ(s+1) = √π Π_{j<w} (j + 1/2).
    let whole = (twice + 1) / 2;
    let mut pow = half.sqrt();
    let mut gamma = PI_DD.sqrt();
    if twice == -1 {
        pow = Dd::from(1.0).div(half.sqrt());
    } else {
        for j in 0..whole {
            if j > 0 {
                pow = pow.mul(half);
            }
            gamma = gamma.mul(Dd::from(j as f64 + 0.5));
        }
    }
    let mut term = pow.div(gamma);
    let mut sum = term;
    let q = half.mul(half).mul(Dd::from(-1.0));
    for k in 0..200 {
        let kk = k as f64 + 1.0;
        term = term.mul(q).div(Dd::from(kk * (kk + s)));
        sum = sum.add(term);
        if term.0.abs() < 1e-32 * sum.0.abs().max(1e-300) && kk > y {
            break;
        }
    }
    sum.value()
}

/// u(t, x) = ∫ f̂(ξ) e^{2πi(x·ξ − t|ξ|)} dξ by brute-force tensor quadrature in
/// spherical coordinates of ξ ∈ ℝ³ over the unit-frequency shell ρ ∈ (1/2, 2).
pub fn fourier_oracle_3d(modes: &ModeSet, t: f64, x: [f64; 3], nodes_rho: usize, nodes_theta: usize) -> Complex64 {
    let rho_rule = QuadratureRule::composite(0.5, 2.0, nodes_rho / 16, 16).unwrap();
    let th_rule = QuadratureRule::composite(-1.0, 1.0, nodes_theta / 16, 16).unwrap();
    let n_phi = 2 * nodes_theta;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&rho, &wr) in rho_rule.nodes.iter().zip(&rho_rule.weights) {
        let mut shell = Complex64::new(0.0, 0.0);
        for (&c, &wt) in th_rule.nodes.iter().zip(&th_rule.weights) {
            let s = (1.0 - c * c).max(0.0).sqrt();
            for k in 0..n_phi {
                let phi = 2.0 * PI * k as f64 / n_phi as f64;
                let xi = [rho * c, rho * s * phi.cos(), rho * s * phi.sin()];
                let f = modes.fourier_value(&xi).unwrap();
                let phase = 2.0 * PI * (x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2] - t * rho);
                shell += f * Complex64::from_polar(wt * 2.0 * PI / n_phi as f64, phase);
            }
        }
        acc += shell * wr * rho * rho;
    }
    acc
}
