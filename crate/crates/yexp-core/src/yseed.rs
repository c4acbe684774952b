//! Y-seed mutation, the cluster transformation `μ_γ = ν∘μ_−∘μ_+`, periodicity
//! and the loop Jacobian.

use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{identity, Mat};
use crate::quiver::{inverse_permutation, MutationLoop, Quiver};

/// Scalars a Y-seed can carry.
pub trait Field: Copy + Add<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self> {
    fn one() -> Self;
    fn magnitude(self) -> f64;

    fn powu(self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out * self;
        }
        out
    }
}

impl Field for f64 {
    fn one() -> Self {
        1.0
    }
    fn magnitude(self) -> f64 {
        libm::fabs(self)
    }
}

impl Field for Complex64 {
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Y-variable part of `μ_k`; the quiver is the one *before* the mutation.
/// `step` only labels the error.
pub fn mutate_values<T: Field>(q: &Quiver, y: &mut [T], k: usize, step: usize) -> Result<()> {
    let n = q.n_vertices();
    if k >= n {
        return Err(Error::VertexOutOfRange { vertex: k, n });
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch { left: y.len(), right: n });
    }
    let yk = y[k];
    if yk.magnitude() == 0.0 {
        return Err(Error::Pole { vertex: k, step });
    }
    let one = T::one();
    let inv = one / yk;
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        if i == k {
            continue;
        }
        let (out, inn) = (q.arrows(k, i), q.arrows(i, k));
        if out > 0 {
            let base = inv + one;
            if base.magnitude() == 0.0 {
                return Err(Error::Pole { vertex: k, step });
            }
            y[i] = y[i] / base.powu(out);
        } else if inn > 0 {
            y[i] = y[i] * (yk + one).powu(inn);
        }
    }
    y[k] = inv;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct YSeed<T = f64> {
    pub quiver: Quiver,
    pub values: Vec<T>,
}

impl<T: Field> YSeed<T> {
    pub fn new(quiver: Quiver, values: Vec<T>) -> Result<Self> {
        if values.len() != quiver.n_vertices() {
            return Err(Error::DimensionMismatch { left: values.len(), right: quiver.n_vertices() });
        }
        Ok(YSeed { quiver, values })
    }

    pub fn mutate(&self, k: usize) -> Result<Self> {
        let mut values = self.values.clone();
        mutate_values(&self.quiver, &mut values, k, 0)?;
        Ok(YSeed { quiver: self.quiver.mutate(k)?, values })
    }
}

fn check_len(lp: &MutationLoop, len: usize) -> Result<()> {
    if len != lp.n_vertices() {
        return Err(Error::DimensionMismatch { left: len, right: lp.n_vertices() });
    }
    Ok(())
}

/// `ν(Y)_i = Y_{ν⁻¹(i)}`.
pub fn apply_nu<T: Copy>(nu: &[usize], y: &[T]) -> Vec<T> {
    let inv = inverse_permutation(nu, y.len()).expect("loop permutation");
    inv.iter().map(|&j| y[j]).collect()
}

/// `μ_+(Y)`.
pub fn plus_phase<T: Field>(lp: &MutationLoop, y: &[T]) -> Result<Vec<T>> {
    check_len(lp, y.len())?;
    let mut v = y.to_vec();
    for (step, (q, k)) in lp.sequence().take(lp.plus.len()).enumerate() {
        mutate_values(q, &mut v, k, step)?;
    }
    Ok(v)
}

/// `μ_−(Y)`, applied to a point already past `μ_+`.
pub fn minus_phase<T: Field>(lp: &MutationLoop, y: &[T]) -> Result<Vec<T>> {
    check_len(lp, y.len())?;
    let mut v = y.to_vec();
    let skip = lp.plus.len();
    for (step, (q, k)) in lp.sequence().enumerate().skip(skip) {
        mutate_values(q, &mut v, k, step)?;
    }
    Ok(v)
}

/// `μ_γ(Y) = ν(μ_−(μ_+(Y)))`.
pub fn cluster_transform<T: Field>(lp: &MutationLoop, y: &[T]) -> Result<Vec<T>> {
    check_len(lp, y.len())?;
    let mut v = y.to_vec();
    for (step, (q, k)) in lp.sequence().enumerate() {
        mutate_values(q, &mut v, k, step)?;
    }
    Ok(apply_nu(lp.nu(), &v))
}

pub fn iterate<T: Field>(lp: &MutationLoop, y: &[T], times: u32) -> Result<Vec<T>> {
    let mut v = y.to_vec();
    for _ in 0..times {
        v = cluster_transform(lp, &v)?;
    }
    Ok(v)
}

/// `max_i |μ_γ^P(Y)_i − Y_i| / |Y_i|`.
pub fn check_periodicity(lp: &MutationLoop, y: &[f64], period: u32) -> Result<f64> {
    let out = iterate(lp, y, period)?;
    Ok(out.iter().zip(y).fold(0.0, |acc, (a, b)| acc.max(libm::fabs(a - b) / libm::fabs(*b))))
}

/// Componentwise `max |μ_γ(y)_i − y_i| / max(1, |y_i|)` and the worst vertex.
pub fn fixed_point_residual(lp: &MutationLoop, y: &[f64]) -> Result<(f64, usize)> {
    let out = cluster_transform(lp, y)?;
    let mut worst = (0.0, 0);
    for (i, (a, b)) in out.iter().zip(y).enumerate() {
        let r = crate::tol::rel(*a, *b);
        if r > worst.0 {
            worst = (r, i);
        }
    }
    Ok(worst)
}

/// Jacobian of `μ_γ` at a point with its factorisation `J = P_ν · J⁻ · J⁺`.
#[derive(Clone, Debug)]
pub struct LoopJacobian {
    pub point: Vec<f64>,
    pub matrix: Mat,
    /// `J⁺` at the point.
    pub plus: Mat,
    /// `J⁻` at `μ_+(point)`.
    pub minus: Mat,
    /// Permutation matrix of `ν`.
    pub nu: Mat,
}

impl LoopJacobian {
    /// Relative deviation of `P_ν J⁻ J⁺` from the directly propagated matrix.
    pub fn factor_residual(&self) -> f64 {
        let prod = &self.nu * &self.minus * &self.plus;
        crate::linalg::max_abs(&(prod - &self.matrix)) / crate::linalg::max_abs(&self.matrix).max(1.0)
    }
}

/// Push the sensitivity matrix `s = ∂y/∂y₀` through one mutation at `k`.
fn propagate(q: &Quiver, y: &mut [f64], s: &mut Mat, k: usize, step: usize) -> Result<()> {
    let n = y.len();
    let yk = y[k];
    if yk == 0.0 {
        return Err(Error::Pole { vertex: k, step });
    }
    let row_k = s.row(k).into_owned();
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        if i == k {
            continue;
        }
        let (out, inn) = (q.arrows(k, i), q.arrows(i, k));
        if out > 0 {
            // y_i (1 + 1/y_k)^{-q}
            let b = 1.0 + 1.0 / yk;
            if b == 0.0 {
                return Err(Error::Pole { vertex: k, step });
            }
            let qf = out as f64;
            let f = libm::pow(b, -qf);
            let g = y[i] * qf * libm::pow(b, -qf - 1.0) / (yk * yk);
            let new_row = s.row(i) * f + &row_k * g;
            s.set_row(i, &new_row);
        } else if inn > 0 {
            let qf = inn as f64;
            let f = libm::pow(1.0 + yk, qf);
            let g = y[i] * qf * libm::pow(1.0 + yk, qf - 1.0);
            let new_row = s.row(i) * f + &row_k * g;
            s.set_row(i, &new_row);
        }
    }
    s.set_row(k, &(row_k * (-1.0 / (yk * yk))));
    mutate_values(q, y, k, step)
}

/// Forward-mode chain rule through every elementary mutation.
pub fn loop_jacobian(lp: &MutationLoop, y: &[f64]) -> Result<LoopJacobian> {
    check_len(lp, y.len())?;
    let n = y.len();
    let np = lp.plus.len();

    let mut v = y.to_vec();
    let mut direct = identity(n);
    let mut plus = identity(n);
    let mut minus = identity(n);
    let mut vp = y.to_vec();
    for (step, (q, k)) in lp.sequence().enumerate() {
        propagate(q, &mut v, &mut direct, k, step)?;
        if step < np {
            propagate(q, &mut vp, &mut plus, k, step)?;
        } else {
            propagate(q, &mut vp, &mut minus, k, step)?;
        }
    }
    let inv = inverse_permutation(lp.nu(), n)?;
    let mut nu = Mat::zeros(n, n);
    for (i, &j) in inv.iter().enumerate() {
        nu[(i, j)] = 1.0;
    }
    let matrix = &nu * direct;
    Ok(LoopJacobian { point: y.to_vec(), matrix, plus, minus, nu })
}

/// Central differences with relative step `h·y_j`.
pub fn fd_jacobian(lp: &MutationLoop, y: &[f64], h: f64) -> Result<Mat> {
    check_len(lp, y.len())?;
    let n = y.len();
    let mut out = Mat::zeros(n, n);
    for j in 0..n {
        let dj = h * y[j];
        let mut a = y.to_vec();
        let mut b = y.to_vec();
        a[j] += dj;
        b[j] -= dj;
        let fa = cluster_transform(lp, &a)?;
        let fb = cluster_transform(lp, &b)?;
        for i in 0..n {
            out[(i, j)] = (fa[i] - fb[i]) / (2.0 * dj);
        }
    }
    Ok(out)
}
