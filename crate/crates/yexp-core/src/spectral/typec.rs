//! Type C: the invariant-subspace block decomposition of the Jacobian, the
//! reduced matrices `K(λ)`, `L(λ)` and the cosine-product formulas for their
//! determinants.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{det_complex, max_abs, to_complex, CMat, Mat};
use crate::rootsys::{DynkinType, Family};
use crate::ysys::YSolution;

/// `K̂`, `L̂` extracted from the Jacobian and built from the printed entries.
#[derive(Clone, Debug)]
pub struct CBlockPair {
    pub rank: usize,
    pub khat: Mat,
    pub lhat: Mat,
    pub khat_printed: Mat,
    pub lhat_printed: Mat,
    /// Largest entry of the off-diagonal blocks after the change of basis.
    pub off_block: f64,
}

impl CBlockPair {
    /// Entrywise `max |computed − printed| / max(1, |computed|)`.
    pub fn printed_residual(&self) -> f64 {
        fn dev(a: &Mat, b: &Mat) -> f64 {
            a.iter().zip(b.iter()).fold(0.0f64, |w, (x, y)| w.max(libm::fabs(x - y) / libm::fmax(1.0, libm::fabs(*x))))
        }
        dev(&self.khat, &self.khat_printed).max(dev(&self.lhat, &self.lhat_printed))
    }
}

fn check_c(ty: DynkinType) -> Result<()> {
    if ty.family != Family::C {
        return Err(Error::Unsupported(alloc::format!("C block machinery for {ty}")));
    }
    Ok(())
}

/// Basis `u^{(k)} = v_{3k−2} − v_{3k}`, then `w^{(k)} = v_{3k−2} + v_{3k}`,
/// `v_{3k−1}` for each column, then the two white vertices.
pub fn c_basis(n: usize) -> Mat {
    let big_n = 3 * (n - 1) + 2;
    let mut t = Mat::zeros(big_n, big_n);
    let mut col = 0;
    for k in 1..n {
        t[(3 * k - 3, col)] = 1.0;
        t[(3 * k - 1, col)] = -1.0;
        col += 1;
    }
    for k in 1..n {
        t[(3 * k - 3, col)] = 1.0;
        t[(3 * k - 1, col)] = 1.0;
        t[(3 * k - 2, col + 1)] = 1.0;
        col += 2;
    }
    t[(big_n - 2, col)] = 1.0;
    t[(big_n - 1, col + 1)] = 1.0;
    t
}

/// `y(i, m)` on the even-rank labelling: for odd `n` the table is shifted
/// one node to the right and node 0 reads as 0.
struct Labelled<'a> {
    ys: &'a YSolution,
    shift: usize,
}

impl Labelled<'_> {
    fn y(&self, i: usize, m: usize) -> f64 {
        if i < 1 + self.shift {
            return 0.0;
        }
        let node = i - self.shift;
        let n = self.ys.ty.rank;
        if node > n {
            return 0.0;
        }
        let top = self.ys.values[node - 1].len();
        if m == 0 || m > top {
            return 0.0;
        }
        self.ys.get(node, m)
    }
}

fn printed_khat(ys: &YSolution) -> Mat {
    let n = ys.ty.rank;
    let ne = n + n % 2;
    let lab = Labelled { ys, shift: ne - n };
    let y = |i: usize, m: usize| lab.y(i, m);
    let r1 = |i: usize| y(i, 1) * y(i + 1, 1) / ((y(i, 1) + 1.0) * (y(i + 1, 1) + 1.0));
    let s = ne - 1;
    let mut k = Mat::zeros(s, s);
    for j in 1..=s {
        for i in 1..=s {
            let d = i.abs_diff(j);
            let v = if j % 2 == 0 {
                if i == j {
                    -1.0
                } else if d == 1 {
                    y(i, 1) * y(j, 1).powi(2) / (y(j, 1) + 1.0)
                } else {
                    0.0
                }
            } else if i == j {
                -1.0 + r1(j - 1) + if j == ne - 1 { 0.0 } else { r1(j) }
            } else if d == 1 {
                -1.0 / (y(i, 1) * (y(j, 1) + 1.0))
            } else if d == 2 {
                let jp = if i > j { j + 1 } else { j - 1 };
                y(i, 1) * y(jp, 1) / ((y(j, 1) + 1.0) * (y(jp, 1) + 1.0))
            } else {
                0.0
            };
            k[(i - 1, j - 1)] = v;
        }
    }
    let off = ne - n;
    k.view((off, off), (s - off, s - off)).into_owned()
}

fn printed_lhat(ys: &YSolution) -> Mat {
    let n = ys.ty.rank;
    let ne = n + n % 2;
    let lab = Labelled { ys, shift: ne - n };
    let y = |i: usize, m: usize| lab.y(i, m);
    let l = ne / 2;
    let s = 4 * l;
    let rr = |m: usize, i: usize| y(i, m) * y(i + 1, m) / ((y(i, m) + 1.0) * (y(i + 1, m) + 1.0));
    let ss = |i: usize| 2.0 / ((y(i, 1) + 1.0) * (y(i, 2) + 1.0));
    let toward = |a: usize, i: usize, j: usize| if i > j { a + 1 } else { a - 1 };
    let mut mat = Mat::zeros(s, s);
    for j in 1..s - 1 {
        for i in 1..s - 1 {
            let d = i.abs_diff(j);
            let v = match j % 4 {
                0 => {
                    let a = j / 2;
                    if i == j {
                        -1.0 + rr(2, a - 1) + rr(2, a) + ss(a)
                    } else if i + 1 == j {
                        -1.0 / (y(a, 1) * y(a, 2) * (y(a, 2) + 1.0))
                    } else if d == 2 {
                        -1.0 / (y(i / 2, 2) * (y(a, 2) + 1.0))
                    } else if i + 1 == j + 2 || i + 3 == j {
                        let b = i.div_ceil(2);
                        y(b, 1) / (y(a, 2) + 1.0) * (1.0 / (y(b, 2) + 1.0) + y(a, 1) / (y(a, 2) * (y(a, 1) + 1.0)))
                    } else if d == 4 {
                        let c = toward(a, i, j);
                        y(c, 2) * y(i / 2, 2) / ((y(a, 2) + 1.0) * (y(c, 2) + 1.0))
                    } else {
                        0.0
                    }
                }
                1 => {
                    let a = j.div_ceil(2);
                    if i == j {
                        -1.0 + rr(1, (j - 1) / 2) + if j == 4 * l - 3 { 0.0 } else { rr(1, a) } + ss(a)
                    } else if i == j + 1 {
                        -2.0 / (y(i / 2, 1) * y(i / 2, 2) * (y(i / 2, 1) + 1.0))
                    } else if d == 2 {
                        -1.0 / (y(i.div_ceil(2), 1) * (y(a, 1) + 1.0))
                    } else if i == j + 3 || i + 1 == j {
                        let b = i / 2;
                        2.0 * y(b, 2) / (y(a, 1) + 1.0) * (1.0 / (y(b, 1) + 1.0) + y(a, 2) / (y(a, 1) * (y(a, 2) + 1.0)))
                    } else if d == 4 {
                        let c = toward(a, i, j);
                        y(c, 1) * y(i.div_ceil(2), 1) / ((y(a, 1) + 1.0) * (y(c, 1) + 1.0))
                    } else {
                        0.0
                    }
                }
                2 => {
                    let a = j / 2;
                    if i == j {
                        -1.0
                    } else if i + 1 == j {
                        y(a, 1) * y(a, 2) / (y(a, 2) + 1.0)
                    } else if d == 2 {
                        y(i / 2, 2) * y(a, 2).powi(2) / (y(a, 2) + 1.0)
                    } else {
                        0.0
                    }
                }
                _ => {
                    let a = j.div_ceil(2);
                    if i == j {
                        -1.0
                    } else if i == j + 1 {
                        2.0 * y(i / 2, 1) * y(i / 2, 2) / (y(i / 2, 1) + 1.0)
                    } else if d == 2 {
                        y(i.div_ceil(2), 1) * y(a, 1).powi(2) / (y(a, 1) + 1.0)
                    } else {
                        0.0
                    }
                }
            };
            mat[(i - 1, j - 1)] = v;
        }
    }
    let (a, b2, w) = (y(2 * l - 1, 1), y(2 * l - 1, 2), y(2 * l, 1));
    let p2 = if l >= 2 { y(2 * l - 2, 2) } else { 0.0 };
    let mut set = |i: usize, j: usize, v: f64| {
        if i >= 1 && j >= 1 {
            mat[(i - 1, j - 1)] = v;
        }
    };
    let (l4, l3, l2, l1, l0) = (4 * l, 4 * l - 1, 4 * l - 2, 4 * l - 3, 4 * l - 4);
    set(l3, l0, b2 * w / ((p2 + 1.0) * (b2 + 1.0)));
    set(l4, l0, b2 / (w * (p2 + 1.0)));
    set(l3, l1, 2.0 * w / (a + 1.0) * (1.0 + b2 / (a * (b2 + 1.0))));
    set(l4, l1, 2.0 * b2 / (a * w * (a + 1.0)));
    set(l3, l2, b2 * b2 * w / (b2 + 1.0));
    set(l4, l2, b2 * b2 / w);
    set(l0, l3, p2 * b2 / ((b2 + 1.0) * (w + 1.0)));
    set(l1, l3, a / ((b2 + 1.0) * (w + 1.0)));
    set(l2, l3, -1.0 / (b2 * (w + 1.0)));
    set(l3, l3, b2 * w / ((b2 + 1.0) * (w + 1.0)));
    set(l4, l3, b2 / (w * (w + 1.0)) - (b2 + 1.0) / (w * w));
    set(l3, l4, w * w / (b2 + 1.0));
    let off = 2 * (ne - n);
    mat.view((off, off), (s - off, s - off)).into_owned()
}

/// Change basis, split into `K̂ ⊕ L̂`, and build the printed counterparts.
pub fn c_blocks(ty: DynkinType, jac: &Mat, ys: &YSolution) -> Result<CBlockPair> {
    check_c(ty)?;
    let n = ty.rank;
    let t = c_basis(n);
    let tinv = t.clone().try_inverse().ok_or(Error::Singular)?;
    let m = &tinv * jac * &t;
    let k = n - 1;
    let big_n = m.nrows();
    let khat = m.view((0, 0), (k, k)).into_owned();
    let lhat = m.view((k, k), (big_n - k, big_n - k)).into_owned();
    let off_block = max_abs(&m.view((0, k), (k, big_n - k)).into_owned()).max(max_abs(&m.view((k, 0), (big_n - k, k)).into_owned()));
    Ok(CBlockPair { rank: n, khat, lhat, khat_printed: printed_khat(ys), lhat_printed: printed_lhat(ys), off_block })
}

/// `K(λ)`: `Λ = λ + λ⁻¹` on the diagonal, `Y_1^{(i)}/(Y_1^{(j)} + 1)` for
/// `j = i ± 1`.
pub fn k_matrix(ys: &YSolution, lam: Complex64) -> CMat {
    let n = ys.ty.rank;
    let big = lam + lam.inv();
    let mut k = CMat::zeros(n - 1, n - 1);
    for i in 1..n {
        k[(i - 1, i - 1)] = big;
        for j in [i.wrapping_sub(1), i + 1] {
            if j >= 1 && j < n {
                k[(i - 1, j - 1)] = Complex64::new(ys.get(i, 1) / (ys.get(j, 1) + 1.0), 0.0);
            }
        }
    }
    k
}

/// Which `L_{2n−1,2n}` entry to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LForm {
    /// `(Y_2^{(n−1)} + 1)⁻¹`.
    Printed,
    /// `2(Y_2^{(n−1)} + 1)⁻¹`.
    Corrected,
}

/// `L(λ)` of size `2n`.
pub fn l_matrix(ys: &YSolution, lam: Complex64, form: LForm) -> CMat {
    let n = ys.ty.rank;
    let y = |i: usize, m: usize| ys.get(i, m);
    let big = lam + lam.inv();
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut l = CMat::zeros(2 * n, 2 * n);
    for i in 1..2 * n - 1 {
        for j in 1..2 * n - 1 {
            let d = i.abs_diff(j);
            let v = if i == j {
                big
            } else if i % 2 == 1 && j == i + 1 {
                re(y(j / 2, 1) / y(j / 2, 2) / (y(j / 2, 2) + 1.0))
            } else if i % 2 == 1 && d == 2 {
                re(y(i.div_ceil(2), 1) / (y(j.div_ceil(2), 1) + 1.0))
            } else if i % 2 == 0 && j + 1 == i {
                re(2.0 * y(i / 2, 2) / y(i / 2, 1) / (y(i / 2, 1) + 1.0))
            } else if i % 2 == 0 && d == 2 {
                re(y(i / 2, 2) / (y(j / 2, 2) + 1.0))
            } else {
                continue;
            };
            l[(i - 1, j - 1)] = v;
        }
    }
    let (yn, y2, y1) = (y(n, 1), y(n - 1, 2), y(n - 1, 1));
    let inv = lam.inv();
    let two_n = 2 * n;
    let mut set = |i: usize, j: usize, v: Complex64| l[(i - 1, j - 1)] = v;
    set(two_n - 1, two_n - 3, inv * (-2.0 * yn / (y1 + 1.0)));
    set(two_n - 1, two_n - 2, re(2.0 * yn / (y2 + 1.0)));
    set(two_n, two_n - 2, lam * yn);
    set(two_n - 2, two_n - 1, re(y2 / (yn + 1.0)));
    set(two_n - 1, two_n - 1, big);
    set(two_n, two_n, big);
    set(two_n, two_n - 1, re(y2 + 1.0));
    set(two_n - 2, two_n, inv * (y2 / (y2 + 1.0) / (yn + 1.0)));
    let factor = if form == LForm::Corrected { 2.0 } else { 1.0 };
    set(two_n - 1, two_n, re(factor / (y2 + 1.0)));
    l
}

/// `θ_s = π(s + ½)/S`, `λ = e^{iθ_s}`: unit circle, upper half, away from ±1.
pub fn unit_circle_samples(count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|s| Complex64::from_polar(1.0, core::f64::consts::PI * (s as f64 + 0.5) / count as f64))
        .collect()
}

fn rel_dev(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / libm::fmax(1.0, b.norm())
}

fn shifted(m: &Mat, lam2: Complex64) -> CMat {
    let mut c = to_complex(m);
    for d in 0..c.nrows() {
        c[(d, d)] -= lam2;
    }
    c
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionResiduals {
    /// `(−λ)^{−(n−1)} det(K̂ − λ²I)` against `det K(λ)`.
    pub k: f64,
    /// `λ^{−2n} det(L̂ − λ²I)` against `det L(λ)`.
    pub l: f64,
    /// `det(zI − J)` against `z^{(3n−1)/2} det K det L`, `z = λ²`.
    pub full: f64,
}

pub fn verify_c_reduction(blocks: &CBlockPair, jac: &Mat, ys: &YSolution, samples: &[Complex64], form: LForm) -> ReductionResiduals {
    let n = blocks.rank as i32;
    let mut out = ReductionResiduals { k: 0.0, l: 0.0, full: 0.0 };
    for &lam in samples {
        let lam2 = lam * lam;
        let dk = det_complex(k_matrix(ys, lam));
        let dl = det_complex(l_matrix(ys, lam, form));
        let lhs_k = (-lam).powi(-(n - 1)) * det_complex(shifted(&blocks.khat, lam2));
        let lhs_l = lam.powi(-2 * n) * det_complex(shifted(&blocks.lhat, lam2));
        out.k = out.k.max(rel_dev(lhs_k, dk));
        out.l = out.l.max(rel_dev(lhs_l, dl));
        let mut zj = to_complex(jac) * Complex64::new(-1.0, 0.0);
        for d in 0..zj.nrows() {
            zj[(d, d)] += lam2;
        }
        let lhs = det_complex(zj);
        out.full = out.full.max(rel_dev(lhs, lam.powi(3 * n - 1) * dk * dl));
    }
    out
}

/// Which angles the cosine products use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsolForm {
    /// `(2i+3)π/(4(n+3))`, `(i+2)π/(2(n+3))`, `jπ/(2(n+3))`.
    Printed,
    /// Every angle doubled, so `Λ − 2cos θ` vanishes at `(2n+6)`-th roots of unity.
    Corrected,
}

/// `(∏ for det K, ∏ for det L)` at `λ`.
pub fn csol_products(n: usize, lam: Complex64, form: CsolForm) -> (Complex64, Complex64) {
    let big = lam + lam.inv();
    let nf = n as f64 + 3.0;
    let pi = core::f64::consts::PI;
    let scale = if form == CsolForm::Corrected { 2.0 } else { 1.0 };
    let f = |theta: f64| big - 2.0 * libm::cos(scale * theta);
    let pk: Complex64 = (1..n).map(|i| f((2 * i + 3) as f64 * pi / (4.0 * nf))).product();
    let mut pl: Complex64 = (1..n.saturating_sub(1)).map(|i| f((i + 2) as f64 * pi / (2.0 * nf)).powi(2)).product();
    for j in [1, 2, n + 1, n + 2] {
        pl *= f(j as f64 * pi / (2.0 * nf));
    }
    (pk, pl)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsolResiduals {
    pub k: f64,
    pub l: f64,
}

impl CsolResiduals {
    pub fn max(&self) -> f64 {
        self.k.max(self.l)
    }
}

/// Relative deviation of `det K(λ)`, `det L(λ)` from the cosine products.
pub fn verify_conjecture_csol(ys: &YSolution, samples: &[Complex64], form: CsolForm) -> CsolResiduals {
    let n = ys.ty.rank;
    let mut out = CsolResiduals { k: 0.0, l: 0.0 };
    for &lam in samples {
        let dk = det_complex(k_matrix(ys, lam));
        let dl = det_complex(l_matrix(ys, lam, LForm::Corrected));
        let (pk, pl) = csol_products(n, lam, form);
        out.k = out.k.max(rel_dev(dk, pk));
        out.l = out.l.max(rel_dev(dl, pl));
    }
    out
}

/// `2, 4`, then `k = 5..=2n+1` (odd `k` once, even `k` twice), then `2n+2, 2n+4`.
pub fn c_exponent_template(n: usize) -> Vec<u32> {
    let n = n as u32;
    let mut out = vec![2, 4];
    for k in 5..=2 * n + 1 {
        out.push(k);
        if k % 2 == 0 {
            out.push(k);
        }
    }
    out.push(2 * n + 2);
    out.push(2 * n + 4);
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_sizes() {
        assert_eq!(c_exponent_template(3), [2, 4, 5, 6, 6, 7, 8, 10]);
        assert_eq!(c_exponent_template(4), [2, 4, 5, 6, 6, 7, 8, 8, 9, 10, 12]);
        for n in 2..12 {
            assert_eq!(c_exponent_template(n).len(), 3 * n - 1);
        }
    }

    #[test]
    fn samples_avoid_real_axis() {
        for z in unit_circle_samples(16) {
            assert!(z.im > 0.09 && (z.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn csol_degree() {
        let n = 4;
        let count = (1..n - 1).count() * 2 + 4;
        assert_eq!(count, 2 * n);
        let (pk, _) = csol_products(n, Complex64::new(0.0, 1.0), CsolForm::Printed);
        assert!(pk.norm() > 0.0);
    }
}
