//! Closed-form eigenvectors of the B and D Jacobians at even rank.
//!
//! The vector `φ` is indexed `1..=N` and its order coincides with the quiver
//! vertex order, so `ψ = φ` componentwise.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{root_of_unity, Mat};
use crate::rootsys::{DynkinType, Family};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn even_half(ty: DynkinType) -> Result<usize> {
    if !ty.rank.is_multiple_of(2) || !matches!(ty.family, Family::B | Family::D) {
        return Err(Error::Unsupported(alloc::format!("eigenvector lemma for {ty}")));
    }
    Ok(ty.rank / 2)
}

/// Order of `λ`: `4l + 1` for B, `2l` for D.
pub fn lemma_order(ty: DynkinType) -> Result<u32> {
    let l = even_half(ty)? as u32;
    Ok(if ty.family == Family::B { 4 * l + 1 } else { 2 * l })
}

/// `Σ_{j=lo}^{hi} λ^j` (empty when `lo > hi`).
fn power_sum(lam: Complex64, lo: i32, hi: i32) -> Complex64 {
    (lo..=hi).map(|j| lam.powi(j)).sum()
}

fn phi_b(l: usize, lam: Complex64) -> Vec<Complex64> {
    let lf = l as f64;
    let big_n = 4 * l + 1;
    let mut ph = vec![c(0.0); big_n + 1];
    let inv = 1.0 / lam;
    ph[2 * l] = c(1.0);
    ph[2 * l + 2] = c(1.0);
    let q = (2.0 * lf + 1.0).powi(2);
    for k in 1..l {
        let kf = k as f64;
        let (a, b) = (2.0 * lf - 2.0 * kf - 1.0, 2.0 * lf - 2.0 * kf + 1.0);
        let p1 = -2.0 * (lf - kf) * q / (a * a * b * b * (4.0 * lf + 1.0));
        let p0 = b * q / (4.0 * lf + 1.0);
        let k2 = 2 * k as i32;
        let edge = lam.powi(k2 + 1) + lam.powi(k2) + lam.powi(-k2) + lam.powi(-(k2 + 1));
        ph[2 * l - 2 * k - 1] = inv * p1 * (edge * b + power_sum(lam, -(k2 - 1), k2 - 1) * 2.0);
        let edge = lam.powi(k2) + lam.powi(k2 - 1) + lam.powi(-(k2 - 1)) + lam.powi(-k2);
        ph[2 * l - 2 * k] = (edge * (lf - kf + 1.0) + power_sum(lam, -(k2 - 2), k2 - 2)) * (2.0 * p0);
    }
    ph[2 * l - 1] = (c(2.0) + inv * (2.0 * lf + 1.0) + inv * inv * (2.0 * lf + 1.0))
        * (-2.0 * lf * q / ((2.0 * lf - 1.0).powi(2) * (4.0 * lf + 1.0).powi(2)));
    ph[2 * l + 1] = (c(1.0) + inv) * (-(2.0 * lf + 1.0).powi(3) / (8.0 * lf.powi(3)));
    ph[2 * l + 3] = ((lam + inv) * (2.0 * lf + 1.0) + 4.0 * lf) * (2.0 * lf * q / (4.0 * lf + 1.0));
    for k in 1..l {
        let kf = k as f64;
        let (a, b) = (2.0 * lf - 2.0 * kf - 1.0, 2.0 * lf - 2.0 * kf + 1.0);
        ph[2 * l + 2 * k + 2] = -ph[2 * l - 2 * k] / (lam * 16.0 * (lf - kf).powi(2) * (lf - kf + 1.0).powi(2));
        ph[2 * l + 2 * k + 3] = -lam * a * a * b * b * ph[2 * l - 2 * k - 1];
    }
    ph.remove(0);
    ph
}

fn phi_d(l: usize, lam: Complex64) -> Vec<Complex64> {
    let lf = l as f64;
    let mut ph = vec![c(0.0); 2 * l + 1];
    ph[2 * l] = c(1.0);
    ph[2 * l - 1] = c(1.0);
    let w = (2.0 * lf - 1.0).powi(2);
    for k in 1..l {
        let kf = k as f64;
        let ki = k as i32;
        let (a, b) = (2.0 * lf - 2.0 * kf - 1.0, 2.0 * lf - 2.0 * kf + 1.0);
        let p_odd = (lf - kf) * w / (lf * a * a * b * b);
        let sym: Complex64 = (1..ki).map(|j| lam.powi(j) + lam.powi(-j)).sum();
        ph[2 * l - 2 * k - 1] = ((lam.powi(ki) + lam.powi(-ki)) * b + sym * 2.0 + 2.0) * p_odd;
        let p_even = -b * w / lf;
        ph[2 * l - 2 * k] = (lam.powi(ki) * (lf - kf + 1.0)
            + power_sum(lam, -(ki - 2), ki - 1)
            + lam.powi(-(ki - 1)) * (lf - kf + 1.0))
            * p_even;
    }
    ph.remove(0);
    ph
}

/// `(λ, φ)` with `λ = ζ^a`, `ζ = e^{2πi/P_eff}`, `1 ≤ a < P_eff`.
pub fn lemma_eigenvector(ty: DynkinType, a: u32) -> Result<(Complex64, Vec<Complex64>)> {
    let l = even_half(ty)?;
    let order = lemma_order(ty)?;
    if a == 0 || a >= order {
        return Err(Error::Domain(alloc::format!("a = {a} outside 1..{}", order - 1)));
    }
    let lam = root_of_unity(a as i64, order as i64);
    let v = if ty.family == Family::B { phi_b(l, lam) } else { phi_d(l, lam) };
    Ok((lam, v))
}

/// The `λ = −1` vector: `φ_{2l} = 1, φ_{2l+2} = −1` (B) or
/// `φ_{2l−1} = 1, φ_{2l} = −1` (D), zero elsewhere.
pub fn lemma_special_vector(ty: DynkinType) -> Result<(Complex64, Vec<Complex64>)> {
    let l = even_half(ty)?;
    let (len, plus, minus) = if ty.family == Family::B { (4 * l + 1, 2 * l, 2 * l + 2) } else { (2 * l, 2 * l - 1, 2 * l) };
    let mut v = vec![c(0.0); len];
    v[plus - 1] = c(1.0);
    v[minus - 1] = c(-1.0);
    Ok((c(-1.0), v))
}

/// `φ_0`, the next term of the recursion past the left end; it vanishes exactly
/// when `λ^{P_eff} = 1`, `λ ≠ 1`.
pub fn lemma_phi0(ty: DynkinType, lam: Complex64) -> Result<Complex64> {
    let l = even_half(ty)?;
    let lf = l as f64;
    let li = l as i32;
    Ok(if ty.family == Family::B {
        power_sum(lam, -2 * li, 2 * li) * (2.0 * (2.0 * lf + 1.0).powi(2) / (4.0 * lf + 1.0))
    } else {
        let phi0 = -(2.0 * lf - 1.0).powi(2) / lf;
        power_sum(lam, 0, 2 * li - 1) * lam.powi(-(li - 1)) * phi0
    })
}

/// `‖Jψ − λψ‖_∞ / ‖ψ‖_∞`.
pub fn eigen_residual(j: &Mat, lam: Complex64, v: &[Complex64]) -> f64 {
    let n = v.len();
    let mut worst = 0.0f64;
    let mut norm = 0.0f64;
    for i in 0..n {
        let mut acc = c(0.0);
        for (k, vk) in v.iter().enumerate() {
            acc += *vk * j[(i, k)];
        }
        worst = worst.max((acc - lam * v[i]).norm());
        norm = norm.max(v[i].norm());
    }
    worst / norm
}

/// Exponents carried by the lemma vectors and the special vector, period
/// `t(2 + h∨)`.
pub fn lemma_exponents(ty: DynkinType) -> Result<Vec<u32>> {
    let order = lemma_order(ty)?;
    let p = ty.period(2);
    let mut out: Vec<u32> = (1..order).map(|a| a * p / order).collect();
    out.push(p / 2);
    out.sort_unstable();
    Ok(out)
}
