//! Dense matrix and polynomial helpers.
//!
//! Polynomials are coefficient vectors in ascending order, `p[k]` is the
//! coefficient of `z^k`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

/// Eigenvalues of a real square matrix via the real Schur form.
pub fn eigenvalues(m: &Mat) -> Vec<Complex64> {
    m.clone().complex_eigenvalues().iter().copied().collect()
}

pub fn det_complex(m: CMat) -> Complex64 {
    m.lu().determinant()
}

pub fn to_complex(m: &Mat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn solve(a: Mat, b: &DVector<f64>) -> Result<DVector<f64>> {
    a.lu().solve(b).ok_or(Error::Singular)
}

/// Largest absolute entry.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |a, &x| a.max(x.abs()))
}

/// Diagonal similarity `D⁻¹AD` with powers of two equalising row and column
/// norms (Parlett–Reinsch). The spectrum is unchanged.
pub fn balance(a: &Mat) -> Mat {
    let n = a.nrows();
    let mut m = a.clone();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut c2, r2) = (c, r);
            while c2 < r2 / 2.0 {
                c2 *= 4.0;
                f *= 2.0;
            }
            while c2 >= r2 * 2.0 {
                c2 /= 4.0;
                f /= 2.0;
            }
            c2 = c * f;
            let rr = r / f;
            if c2 + rr < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
    m
}

/// `det(zI − A)` coefficients by the Faddeev–LeVerrier trace recurrence.
pub fn charpoly(a: &Mat) -> Vec<f64> {
    let n = a.nrows();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = Mat::zeros(n, n);
    for k in 1..=n {
        m = a * &m;
        for d in 0..n {
            m[(d, d)] += c[n - k + 1];
        }
        let am = a * &m;
        c[n - k] = -am.trace() / k as f64;
    }
    c
}

pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        p = poly_mul(&p, &[-r, Complex64::new(1.0, 0.0)]);
    }
    p
}

pub fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn poly_eval_real(p: &[f64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// `e^{2πi·num/den}`.
pub fn root_of_unity(num: i64, den: i64) -> Complex64 {
    let k = num.rem_euclid(den);
    let th = 2.0 * core::f64::consts::PI * k as f64 / den as f64;
    Complex64::new(libm::cos(th), libm::sin(th))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn charpoly_2x2() {
        let a = Mat::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let p = charpoly(&a);
        assert!((p[0] + 2.0).abs() < 1e-12 && (p[1] + 5.0).abs() < 1e-12 && p[2] == 1.0);
    }

    #[test]
    fn roots_roundtrip() {
        let rs = [root_of_unity(1, 5), root_of_unity(4, 5)];
        let p = poly_from_roots(&rs);
        for r in rs {
            assert!(poly_eval(&p, r).norm() < 1e-14);
        }
        assert!(p[1].im.abs() < 1e-15);
    }

    #[test]
    fn rotation_spectrum() {
        let a = Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let mut ev = eigenvalues(&a);
        ev.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert!((ev[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((det_complex(to_complex(&a)) - c(1.0)).norm() < 1e-12);
    }
}
