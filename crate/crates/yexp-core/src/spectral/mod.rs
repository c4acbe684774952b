//! Spectrum of the loop Jacobian at the fixed point, exponents and the
//! comparison with the conjectured characteristic polynomial.

pub mod lemma;
pub mod poly;
pub mod relations;
pub mod typec;

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{self, Mat};
use crate::quiver::MutationLoop;
use crate::rootsys::{DynkinType, Family};
use crate::yseed::loop_jacobian;

/// Exponents `m_j` with `λ_j = e^{2πi m_j / P}`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentSequence {
    pub period: u32,
    pub exponents: Vec<u32>,
}

impl ExponentSequence {
    pub fn new(period: u32, mut exponents: Vec<u32>) -> Self {
        exponents.sort_unstable();
        ExponentSequence { period, exponents }
    }

    /// Invariance under `m ↦ P − m` (mod `P`).
    pub fn conjugation_symmetric(&self) -> bool {
        let mut mirrored: Vec<u32> = self.exponents.iter().map(|&m| (self.period - m) % self.period).collect();
        mirrored.sort_unstable();
        mirrored == self.exponents
    }
}

#[derive(Clone, Debug)]
pub struct SpectralReport {
    pub ty: DynkinType,
    pub level: u32,
    pub jacobian: Mat,
    pub eigenvalues: Vec<Complex64>,
    pub exponents: ExponentSequence,
    /// Ascending coefficients of `det(zI − J)` from the trace recurrence.
    pub charpoly: Vec<f64>,
    /// `max_j |λ_j − e^{2πi m_j/P}|`.
    pub snap_error: f64,
    /// `max_j ||λ_j| − 1|`.
    pub unit_circle_error: f64,
    /// Trace recurrence against `∏(z − λ_j)`, coefficientwise.
    pub charpoly_cross: f64,
    /// `max_j |charpoly(λ_j)|`.
    pub charpoly_at_eigenvalues: f64,
    /// Largest imaginary part of `∏(z − λ_j)`.
    pub charpoly_imag: f64,
}

/// Nearest `P`-th root of unity for each eigenvalue, and the worst distance.
pub fn snap_exponents(eigs: &[Complex64], period: u32) -> (Vec<u32>, f64) {
    let p = period as f64;
    let mut worst = 0.0f64;
    let mut out = Vec::with_capacity(eigs.len());
    for &z in eigs {
        let turns = z.arg() / (2.0 * core::f64::consts::PI);
        let m = (libm::round(turns * p) as i64).rem_euclid(period as i64);
        worst = worst.max((z - linalg::root_of_unity(m, period as i64)).norm());
        out.push(m as u32);
    }
    (out, worst)
}

/// Eigenvalues, exponents and characteristic polynomial of `J_γ(η)`.
pub fn spectrum(lp: &MutationLoop, eta: &[f64], level: u32) -> Result<SpectralReport> {
    let ty = lp.ty();
    let jac = loop_jacobian(lp, eta)?;
    let jacobian = jac.matrix;
    let eigenvalues = linalg::eigenvalues(&jacobian);
    let period = ty.period(level);
    let (ex, snap_error) = snap_exponents(&eigenvalues, period);
    let unit_circle_error = eigenvalues.iter().fold(0.0f64, |w, z| w.max(libm::fabs(z.norm() - 1.0)));
    let charpoly = linalg::charpoly(&linalg::balance(&jacobian));
    let from_roots = linalg::poly_from_roots(&eigenvalues);
    let charpoly_cross = from_roots.iter().zip(&charpoly).fold(0.0f64, |w, (a, b)| w.max((a - b).norm()));
    let charpoly_imag = from_roots.iter().fold(0.0f64, |w, a| w.max(libm::fabs(a.im)));
    let charpoly_at_eigenvalues =
        eigenvalues.iter().fold(0.0f64, |w, &z| w.max(linalg::poly_eval_real(&charpoly, z).norm()));
    Ok(SpectralReport {
        ty,
        level,
        jacobian,
        eigenvalues,
        exponents: ExponentSequence::new(period, ex),
        charpoly,
        snap_error,
        unit_circle_error,
        charpoly_cross,
        charpoly_at_eigenvalues,
        charpoly_imag,
    })
}

/// Exponent multisets proved or observed at level 2.
pub fn expected_exponents(ty: DynkinType) -> ExponentSequence {
    let n = ty.rank as u32;
    let p = ty.period(2);
    let ex: Vec<u32> = match ty.family {
        Family::A => (2..=n + 1).collect(),
        Family::B => (1..=2 * n).map(|k| 2 * k).chain([2 * n + 1]).collect(),
        Family::C => typec::c_exponent_template(ty.rank),
        Family::D => (1..n).map(|k| 2 * k).chain([n]).collect(),
    };
    ExponentSequence::new(p, ex)
}

/// Coefficientwise `max |a_k − b_k|`, shorter vector padded with zeros.
pub fn coefficient_deviation(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    (0..len).fold(0.0f64, |w, k| {
        let x = a.get(k).copied().unwrap_or(0.0);
        let y = b.get(k).copied().unwrap_or(0.0);
        w.max(libm::fabs(x - y))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapping() {
        let eigs = [linalg::root_of_unity(3, 10), Complex64::new(-1.0, 1e-9)];
        let (m, err) = snap_exponents(&eigs, 10);
        assert_eq!(m, [3, 5]);
        assert!(err < 1e-8);
    }

    #[test]
    fn expected_small_cases() {
        let b2 = DynkinType::new(Family::B, 2).unwrap();
        assert_eq!(expected_exponents(b2).exponents, [2, 4, 5, 6, 8]);
        let d4 = DynkinType::new(Family::D, 4).unwrap();
        assert_eq!(expected_exponents(d4).exponents, [2, 4, 4, 6]);
        assert!(expected_exponents(d4).conjugation_symmetric());
    }
}
