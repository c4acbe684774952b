//! The polynomials `N_{X_n,ℓ}`, `D_{X_n,ℓ}` and their quotient.
//!
//! Every factor has roots of unity with rational angle, so the division is
//! checked twice: exactly, as a multiset of angles, and numerically through
//! `N − Q·D` on the expanded coefficient vectors.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{poly_eval, poly_from_roots, poly_mul};
use crate::rootsys::{rat_to_f64, DynkinType, Family, Rat, RootSystem};

/// Angle `q` (in turns, reduced to `[0, 1)`) of `e^{2πiq}`.
fn turns(q: Rat) -> Rat {
    q - q.floor()
}

fn to_point(q: Rat) -> Complex64 {
    let th = 2.0 * core::f64::consts::PI * rat_to_f64(q);
    Complex64::new(libm::cos(th), libm::sin(th))
}

#[derive(Clone, Debug)]
pub struct ConjecturedCharpoly {
    pub period: u32,
    pub numerator_roots: Vec<Rat>,
    pub denominator_roots: Vec<Rat>,
    /// `N` minus `D` as multisets; `None` when `D ⊄ N`.
    pub quotient_roots: Option<Vec<Rat>>,
    pub numerator: Vec<Complex64>,
    pub quotient: Vec<Complex64>,
    /// Largest coefficient of `N − Q·D` over the largest coefficient of `N`.
    pub remainder: f64,
    /// Largest imaginary part among the quotient coefficients.
    pub quotient_imag: f64,
}

impl ConjecturedCharpoly {
    pub fn quotient_real(&self) -> Vec<f64> {
        self.quotient.iter().map(|c| c.re).collect()
    }

    /// Exponents read off the exact quotient, `q·P`.
    pub fn exponents(&self) -> Option<Vec<u32>> {
        let p = Rat::from_integer(self.period as i64);
        let mut out: Vec<u32> = Vec::new();
        for &q in self.quotient_roots.as_ref()? {
            let m = q * p;
            if !m.is_integer() {
                return None;
            }
            out.push(*m.numer() as u32);
        }
        out.sort_unstable();
        Some(out)
    }
}

fn multiset(v: &[Rat]) -> BTreeMap<Rat, usize> {
    let mut m = BTreeMap::new();
    for &q in v {
        *m.entry(q).or_insert(0) += 1;
    }
    m
}

/// `N = ∏_i (z^P − 1)/(z^{t/t_i} − 1)` and `D = ∏_{α long}(z^t − e^{2πi⟨ρ,α⟩/(ℓ+h∨)}) ·
/// ∏_{α short}(z − e^{2πi⟨ρ,α⟩/(ℓ+h∨)})`, over all roots.
pub fn conjectured_charpoly(rs: &RootSystem, level: u32) -> Result<ConjecturedCharpoly> {
    let t = rs.t_group as i64;
    let period = rs.period(level);
    let p = period as i64;
    let mut numerator_roots = Vec::new();
    for &ti in &rs.t {
        let d = t / ti as i64;
        let step = p / d;
        for j in 0..p {
            if j % step != 0 {
                numerator_roots.push(Rat::new(j, p));
            }
        }
    }
    let k = Rat::from_integer(level as i64 + rs.h_dual as i64);
    let mut denominator_roots = Vec::new();
    for a in &rs.roots {
        let q = rs.pairing(&rs.rho, &a.coords)? / k;
        if a.long {
            for j in 0..t {
                denominator_roots.push(turns((q + Rat::from_integer(j)) / Rat::from_integer(t)));
            }
        } else {
            denominator_roots.push(turns(q));
        }
    }
    numerator_roots.sort();
    denominator_roots.sort();

    let mut left = multiset(&numerator_roots);
    let mut exact = true;
    for q in &denominator_roots {
        match left.get_mut(q) {
            Some(c) if *c > 0 => *c -= 1,
            _ => exact = false,
        }
    }
    let quotient_roots = exact.then(|| left.iter().flat_map(|(&q, &c)| core::iter::repeat_n(q, c)).collect());

    let numerator = expand_numerator(rs, period);
    let den_points: Vec<Complex64> = denominator_roots.iter().map(|&q| to_point(q)).collect();
    let n_of = |z: Complex64| eval_numerator(rs, period, z);
    let d_of = |z: Complex64| den_points.iter().map(|&r| z - r).product::<Complex64>();
    let deg = numerator.len().saturating_sub(den_points.len() + 1);
    let quotient = interpolate(deg + 1, |z| n_of(z) / d_of(z));
    let rest = interpolate(numerator.len(), |z| n_of(z) - poly_eval(&quotient, z) * d_of(z));
    let scale = numerator.iter().fold(1.0f64, |w, c| w.max(c.norm()));
    let remainder = rest.iter().fold(0.0f64, |w, c| w.max(c.norm())) / scale;
    let quotient_imag = quotient.iter().fold(0.0f64, |w, c| w.max(libm::fabs(c.im)));
    Ok(ConjecturedCharpoly {
        period,
        numerator_roots,
        denominator_roots,
        quotient_roots,
        numerator,
        quotient,
        remainder,
        quotient_imag,
    })
}

fn eval_numerator(rs: &RootSystem, period: u32, z: Complex64) -> Complex64 {
    let t = rs.t_group as i32;
    rs.t.iter().map(|&ti| (z.powi(period as i32) - 1.0) / (z.powi(t / ti as i32) - 1.0)).product()
}

/// Coefficients of a degree `< len` polynomial from its values on a rotated
/// unit circle (inverse DFT). Values come from the factored forms, which stay
/// accurate where expanded coefficients would cancel.
fn interpolate(len: usize, f: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
    let offset = 0.3719;
    let samples: Vec<(Complex64, Complex64)> = (0..len)
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * (k as f64 + offset) / len as f64);
            (z, f(z))
        })
        .collect();
    (0..len)
        .map(|j| samples.iter().map(|&(z, v)| v * z.powi(-(j as i32))).sum::<Complex64>() / len as f64)
        .collect()
}

/// Each `(z^P − 1)/(z^d − 1) = Σ_{j<P/d} z^{jd}` is expanded exactly.
fn expand_numerator(rs: &RootSystem, period: u32) -> Vec<Complex64> {
    let t = rs.t_group as usize;
    let p = period as usize;
    let mut out = vec![Complex64::one()];
    for &ti in &rs.t {
        let d = t / ti as usize;
        let mut f = vec![Complex64::zero(); p - d + 1];
        for j in 0..p / d {
            f[j * d] = Complex64::one();
        }
        out = poly_mul(&out, &f);
    }
    out
}

/// `(z + 1)(z^{2n+1} − 1)/(z − 1)` for B, `(1 + z)(z^n − 1)/(z − 1)` for D,
/// `(z^{n+3} − 1)/(z − 1)·∏_{5≤k≤2n+1}(z − ζ^k)` for C.
pub fn closed_form_charpoly(ty: DynkinType) -> Option<Vec<f64>> {
    let n = ty.rank;
    let geometric = |len: usize| vec![1.0; len];
    let times_z_plus_1 = |p: Vec<f64>| {
        let mut out = vec![0.0; p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            out[k] += c;
            out[k + 1] += c;
        }
        out
    };
    match ty.family {
        Family::B => Some(times_z_plus_1(geometric(2 * n + 1))),
        Family::D => Some(times_z_plus_1(geometric(n))),
        Family::C => {
            let p = 2 * n as i64 + 6;
            let roots: Vec<Complex64> = (5..=2 * n as i64 + 1).map(|k| to_point(Rat::new(k, p))).collect();
            let base: Vec<Complex64> = geometric(n + 3).into_iter().map(|c| Complex64::new(c, 0.0)).collect();
            let full = poly_mul(&base, &poly_from_roots(&roots));
            Some(full.iter().map(|c| c.re).collect())
        }
        Family::A => None,
    }
}

/// Coefficientwise comparison of `det(zI − J)` with the quotient `N/D`.
pub fn verify_conjecture(charpoly: &[f64], conj: &ConjecturedCharpoly) -> f64 {
    super::coefficient_deviation(charpoly, &conj.quotient_real())
}

/// Degree of the quotient must equal the number of quiver vertices.
pub fn check_degree(conj: &ConjecturedCharpoly, n_vertices: usize) -> Result<()> {
    let deg = conj.quotient.len() - 1;
    if deg != n_vertices {
        return Err(Error::DimensionMismatch { left: deg, right: n_vertices });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d4_quotient() {
        let rs = RootSystem::new(DynkinType::new(Family::D, 4).unwrap());
        let c = conjectured_charpoly(&rs, 2).unwrap();
        assert_eq!(c.exponents().unwrap(), [2, 4, 4, 6]);
        assert!(c.remainder < 1e-9);
        let want = closed_form_charpoly(rs.ty).unwrap();
        assert!(verify_conjecture(&want, &c) < 1e-9);
    }

    #[test]
    fn c3_quotient() {
        let rs = RootSystem::new(DynkinType::new(Family::C, 3).unwrap());
        let c = conjectured_charpoly(&rs, 2).unwrap();
        assert_eq!(c.exponents().unwrap(), [2, 4, 5, 6, 6, 7, 8, 10]);
        let want = closed_form_charpoly(rs.ty).unwrap();
        assert!(verify_conjecture(&want, &c) < 1e-9);
    }
}
