//! Planar complex matrices on top of `matrixmultiply::dgemm`.

/// Row-major complex matrix stored as separate real and imaginary planes.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, re: vec![0.0; rows * cols], im: vec![0.0; rows * cols] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> num_complex::Complex64 {
        let k = i * self.cols + j;
        num_complex::Complex64::new(self.re[k], self.im[k])
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: num_complex::Complex64) {
        let k = i * self.cols + j;
        self.re[k] = z.re;
        self.im[k] = z.im;
    }
}

/// c = alpha * a * b + beta * c for row-major real matrices.
pub(crate) fn dgemm(m: usize, k: usize, n: usize, alpha: f64, a: &[f64], b: &[f64], beta: f64, c: &mut [f64]) {
    assert!(a.len() >= m * k && b.len() >= k * n && c.len() >= m * n);
    if m == 0 || n == 0 {
        return;
    }
    if k == 0 {
        for v in c[..m * n].iter_mut() {
            *v *= beta;
        }
        return;
    }
    // SAFETY: slices are large enough for the stated dimensions and strides.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            alpha,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            n as isize,
            1,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// Complex (m×k) times real (k×n).
pub(crate) fn complex_times_real(a: &CMat, b: &[f64], n: usize) -> CMat {
    let mut c = CMat::zeros(a.rows, n);
    dgemm(a.rows, a.cols, n, 1.0, &a.re, b, 0.0, &mut c.re);
    dgemm(a.rows, a.cols, n, 1.0, &a.im, b, 0.0, &mut c.im);
    c
}

/// Complex times complex.
pub(crate) fn complex_times_complex(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.cols, b.rows);
    let (m, k, n) = (a.rows, a.cols, b.cols);
    let mut c = CMat::zeros(m, n);
    dgemm(m, k, n, 1.0, &a.re, &b.re, 0.0, &mut c.re);
    dgemm(m, k, n, -1.0, &a.im, &b.im, 1.0, &mut c.re);
    dgemm(m, k, n, 1.0, &a.re, &b.im, 0.0, &mut c.im);
    dgemm(m, k, n, 1.0, &a.im, &b.re, 1.0, &mut c.im);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn complex_product_matches_naive() {
        let mut a = CMat::zeros(3, 4);
        let mut b = CMat::zeros(4, 2);
        for i in 0..3 {
            for j in 0..4 {
                a.set(i, j, Complex64::new(i as f64 + 0.5 * j as f64, 1.0 - j as f64));
            }
        }
        for i in 0..4 {
            for j in 0..2 {
                b.set(i, j, Complex64::new(0.3 * i as f64 - j as f64, 2.0 + i as f64));
            }
        }
        let c = complex_times_complex(&a, &b);
        for i in 0..3 {
            for j in 0..2 {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..4 {
                    s += a.get(i, k) * b.get(k, j);
                }
                assert!((s - c.get(i, j)).norm() < 1e-12);
            }
        }
    }
}
