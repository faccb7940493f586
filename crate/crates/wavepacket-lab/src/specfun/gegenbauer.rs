use crate::{LabError, Result};

/// Gegenbauer polynomial C_l^λ(x) by the three-term recurrence.
pub fn gegenbauer(l: usize, lambda: f64, x: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(LabError::InvalidArgument(format!("lambda {lambda} must be positive")));
    }
    if !(x.abs() <= 1.0) {
        return Err(LabError::InvalidArgument(format!("|x| = {} > 1", x.abs())));
    }
    Ok(gegenbauer_unchecked(l, lambda, x))
}

pub(crate) fn gegenbauer_unchecked(l: usize, lambda: f64, x: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let mut c0 = 1.0;
    let mut c1 = 2.0 * lambda * x;
    for k in 1..l {
        let kf = k as f64;
        let c2 = (2.0 * x * (kf + lambda) * c1 - (kf + 2.0 * lambda - 1.0) * c0) / (kf + 1.0);
        c0 = c1;
        c1 = c2;
    }
    c1
}

/// Residual of (k+1)C_{k+1} − 2x(k+λ)C_k + (k+2λ−1)C_{k−1} relative to the term sizes.
pub fn gegenbauer_recurrence_residual(k: usize, lambda: f64, x: f64) -> Result<f64> {
    if k == 0 {
        return Err(LabError::InvalidArgument("recurrence needs k >= 1".into()));
    }
    let cm = gegenbauer(k - 1, lambda, x)?;
    let c = gegenbauer(k, lambda, x)?;
    let cp = gegenbauer(k + 1, lambda, x)?;
    let kf = k as f64;
    let a = (kf + 1.0) * cp;
    let b = 2.0 * x * (kf + lambda) * c;
    let d = (kf + 2.0 * lambda - 1.0) * cm;
    let scale = a.abs() + b.abs() + d.abs();
    Ok(if scale == 0.0 { 0.0 } else { (a - b + d).abs() / scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        assert_eq!(gegenbauer(0, 0.7, -0.2).unwrap(), 1.0);
        assert_eq!(gegenbauer(1, 1.0, 0.5).unwrap(), 1.0);
        assert!(gegenbauer(3, 1.0, 1.5).is_err());
        assert!(gegenbauer(3, 0.0, 0.5).is_err());
    }

    #[test]
    fn chebyshev_second_kind() {
        for l in 0..40 {
            let th: f64 = 0.83;
            let u = ((l as f64 + 1.0) * th).sin() / th.sin();
            assert!((gegenbauer(l, 1.0, th.cos()).unwrap() - u).abs() < 1e-12 * (l as f64 + 1.0));
        }
    }
}
