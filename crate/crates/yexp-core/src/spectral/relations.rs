//! The printed eigen-equation relations, checked against the Jacobian.
//!
//! B and D relations are rows of `J` with rational coefficients; they are
//! assembled into a matrix and compared entrywise. The C relations are checked
//! as identities on `ψ′ = J⁺ψ` and `ψ″ = J⁻ψ′`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rootsys::{rat_to_f64, DynkinType, Family, Rat};
use crate::yseed::LoopJacobian;
use crate::ysys::YSolution;

/// Which printed coefficients to use where the printed text is inconsistent
/// with the Jacobian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Printed,
    Corrected,
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn z(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Rows `(row, [(col, coefficient)])`, 1-based, for B at rank `2l`.
pub fn b_relation_rows(l: usize) -> Vec<(usize, Vec<(usize, Rat)>)> {
    let li = l as i64;
    let mut rows = Vec::new();
    for k in 1..l {
        let ki = k as i64;
        let (a, b) = (2 * li - 2 * ki - 1, 2 * li - 2 * ki + 1);
        rows.push((2 * k - 1, vec_of(&[(4 * l - 2 * k + 3, -r(1, (4 * ki * ki - 1).pow(2)))])));
        rows.push((
            2 * k,
            vec_of(&[
                (4 * l - 2 * k + 1, r(ki, ki + 1)),
                (4 * l - 2 * k + 2, z(16 * ki * ki * (ki + 1) * (ki + 1))),
                (4 * l - 2 * k + 3, r(ki + 1, ki)),
            ]),
        ));
        rows.push((2 * l + 2 * k + 2, vec_of(&[(2 * l - 2 * k, -r(1, 16 * (li - ki).pow(2) * (li - ki + 1).pow(2)))])));
        rows.push((2 * l + 2 * k + 3, vec_of(&[(2 * l - 2 * k - 2, r(b, a)), (2 * l - 2 * k - 1, z(a * a * b * b)), (2 * l - 2 * k, r(a, b))])));
    }
    let e = 2 * li + 1;
    let c = r(2 * li * e, (2 * li - 1) * (4 * li + 1).pow(2));
    rows.push((
        2 * l - 1,
        vec_of(&[
            (2 * l, c),
            (2 * l + 2, c),
            (2 * l + 1, r(16 * li.pow(4), (4 * li * li - 1) * (4 * li + 1).pow(2))),
            (2 * l + 3, -r(2, (2 * li - 1).pow(2) * e * (4 * li + 1))),
        ]),
    ));
    for (a, b) in [(2 * l, 2 * l + 2), (2 * l + 2, 2 * l)] {
        rows.push((
            a,
            vec_of(&[(a, -r(2 * li, e)), (2 * l + 1, r(8 * li.pow(3), e.pow(3))), (b, r(1, e)), (2 * l + 3, r(4 * li + 1, 2 * li * e.pow(3)))]),
        ));
    }
    let s = -r(e * e, 8 * li.pow(3));
    rows.push((2 * l + 1, vec_of(&[(2 * l + 1, z(-1)), (2 * l, s), (2 * l + 2, s), (2 * l + 3, -r(4 * li + 1, 16 * li.pow(4)))])));
    // the last term is phi_{2l+3}
    rows.push((
        2 * l + 3,
        vec_of(&[
            (2 * l - 2, r(e, 2 * li - 1)),
            (2 * l - 1, z((2 * li - 1).pow(2) * (4 * li + 1))),
            (2 * l, z(4 * li * li - 1)),
            (2 * l + 2, z(4 * li * li - 1)),
            (2 * l + 1, r(16 * li.pow(4) * (2 * li - 1), e * (4 * li + 1))),
            (2 * l + 3, r(2 * li - 1, e)),
        ]),
    ));
    rows
}

/// Rows for D at rank `2l`. The printed diagonal of the generic even row is
/// `(4k(k+1) − 1)/(4k(k+1))`; the Jacobian has `(k(k+1) − 1)/(k(k+1))`.
pub fn d_relation_rows(l: usize, form: Form) -> Vec<(usize, Vec<(usize, Rat)>)> {
    let li = l as i64;
    let mut rows = Vec::new();
    for k in 1..l {
        let ki = k as i64;
        let (a, b) = (2 * ki - 1, 2 * ki + 1);
        rows.push((2 * k - 1, vec_of(&[(2 * k - 1, z(-1)), (2 * k - 2, -r(1, a.pow(3) * b)), (2 * k, -r(1, a * b.pow(3)))])));
    }
    for k in 1..l.saturating_sub(1) {
        let ki = k as i64;
        let (a, b, c) = (2 * ki - 1, 2 * ki + 1, 2 * ki + 3);
        let diag = match form {
            Form::Printed => r(4 * ki * (ki + 1) - 1, 4 * ki * (ki + 1)),
            Form::Corrected => r(ki * (ki + 1) - 1, ki * (ki + 1)),
        };
        rows.push((
            2 * k,
            vec_of(&[
                (2 * k - 2, r((ki + 1) * b, ki * a)),
                (2 * k - 1, r((ki + 1) * a * a * b * b, ki)),
                (2 * k, diag),
                (2 * k + 1, r(ki * b * b * c * c, ki + 1)),
                (2 * k + 2, r(ki * b, (ki + 1) * c)),
            ]),
        ));
    }
    let (a, b) = (2 * li - 3, 2 * li - 1);
    rows.push((
        2 * l - 2,
        vec_of(&[
            (2 * l - 4, r(li * b, (li - 1) * a)),
            (2 * l - 3, r(li * a * a * b * b, li - 1)),
            (2 * l - 2, r(a, li - 1)),
            (2 * l - 1, z(2 * (li - 1) * b * b)),
            (2 * l, z(2 * (li - 1) * b * b)),
        ]),
    ));
    for row in [2 * l - 1, 2 * l] {
        rows.push((row, vec_of(&[(row, z(-1)), (2 * l - 2, -r(1, b.pow(3)))])));
    }
    rows
}

fn vec_of(entries: &[(usize, Rat)]) -> Vec<(usize, Rat)> {
    entries.to_vec()
}

/// Dense matrix of the relation rows; column 0 (the virtual `φ_0`) is dropped.
pub fn relation_matrix(n: usize, rows: &[(usize, Vec<(usize, Rat)>)]) -> Mat {
    let mut m = Mat::zeros(n, n);
    for (i, entries) in rows {
        for &(j, c) in entries {
            if j >= 1 && j <= n {
                m[(i - 1, j - 1)] += rat_to_f64(c);
            }
        }
    }
    m
}

/// `max |J_ij − M_ij| / max(1, |J_ij|)` for the B or D relations.
pub fn bd_relation_residual(ty: DynkinType, jac: &Mat, form: Form) -> Result<f64> {
    if !ty.rank.is_multiple_of(2) {
        return Err(Error::Unsupported(alloc::format!("relations for odd rank {ty}")));
    }
    let l = ty.rank / 2;
    let rows = match ty.family {
        Family::B => b_relation_rows(l),
        Family::D => d_relation_rows(l, form),
        _ => return Err(Error::Unsupported(alloc::format!("matrix relations for {ty}"))),
    };
    let n = jac.nrows();
    let m = relation_matrix(n, &rows);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max(libm::fabs(jac[(i, j)] - m[(i, j)]) / libm::fmax(1.0, libm::fabs(jac[(i, j)])));
        }
    }
    Ok(worst)
}

/// Named residuals of the C relations on `ψ`, `ψ′ = J⁺ψ`, `ψ″ = J⁻ψ′`.
///
/// `Form::Printed` evaluates (Cr1) with the superscript `(1)` on the right and
/// the first denominator of (Crp1) as `Y_2^{(2k−2)} + 1`.
pub fn c_relation_residuals(ty: DynkinType, ys: &YSolution, jac: &LoopJacobian, psi: &[f64], form: Form) -> Result<BTreeMap<String, f64>> {
    if ty.family != Family::C || !ty.rank.is_multiple_of(2) {
        return Err(Error::Unsupported(alloc::format!("C relations for {ty}")));
    }
    let n = ty.rank;
    let l = n / 2;
    let big_n = jac.matrix.nrows();
    if psi.len() != big_n {
        return Err(Error::DimensionMismatch { left: psi.len(), right: big_n });
    }
    let p0 = nalgebra::DVector::from_column_slice(psi);
    let p1 = &jac.plus * &p0;
    let p2 = &jac.minus * &p1;
    let g = |v: &nalgebra::DVector<f64>, i: usize, m: usize| -> f64 {
        if i == 0 {
            0.0
        } else if i == 2 * l {
            v[big_n - 2]
        } else if i == 2 * l + 1 {
            v[big_n - 1]
        } else {
            v[3 * (i - 1) + m - 1]
        }
    };
    let y = |i: usize, m: usize| -> f64 {
        if i == 0 {
            0.0
        } else {
            ys.get(i, m)
        }
    };
    let mut res: BTreeMap<String, f64> = BTreeMap::new();
    let mut chk = |name: &str, lhs: f64, rhs: f64| {
        let e = libm::fabs(lhs - rhs) / libm::fmax(1.0, libm::fabs(lhs));
        let slot = res.entry(String::from(name)).or_insert(0.0);
        *slot = slot.max(e);
    };
    let yn = y(n, 1);
    for k in 1..=l {
        let a = 2 * k - 1;
        let sup = if form == Form::Printed { 1 } else { a };
        for m in [1, 3] {
            chk("Cr1", g(&p1, a, m), -g(&p0, a, m) / y(sup, 1).powi(2));
        }
        chk("Crp2", g(&p2, a, 2), -g(&p1, a, 2) / y(a, 2).powi(2));
    }
    for k in 1..l {
        let a = 2 * k - 1;
        let b = 2 * k;
        chk(
            "Cr2",
            g(&p1, a, 2),
            y(a, 2)
                * (g(&p0, a - 1, 2) / (y(a - 1, 2) + 1.0)
                    + (g(&p0, a, 1) + g(&p0, a, 3)) / (y(a, 1) * (y(a, 1) + 1.0))
                    + y(a, 2) * g(&p0, a, 2)
                    + g(&p0, a + 1, 2) / (y(a + 1, 2) + 1.0)),
        );
        for m in [1, 3] {
            chk(
                "Cr3",
                g(&p1, b, m),
                y(b, 1)
                    * (g(&p0, b - 1, m) / (y(b - 1, 1) + 1.0)
                        + y(b, 1) * g(&p0, b, m)
                        + g(&p0, b, 2) / (y(b, 2) * (y(b, 2) + 1.0))
                        + g(&p0, b + 1, m) / (y(b + 1, 1) + 1.0)),
            );
            let first = if a > 1 {
                let d = if form == Form::Printed { y(a - 1, 2) } else { y(a - 1, 1) };
                g(&p1, a - 1, m) / (d + 1.0)
            } else {
                0.0
            };
            chk(
                "Crp1",
                g(&p2, a, m),
                y(a, 1) * (first + y(a, 1) * g(&p1, a, m) + g(&p1, a, 2) / (y(a, 2) * (y(a, 2) + 1.0)) + g(&p1, a + 1, m) / (y(a + 1, 1) + 1.0)),
            );
            chk("Crp3", g(&p2, b, m), -g(&p1, b, m) / y(b, 1).powi(2));
        }
        chk("Cr4", g(&p1, b, 2), -g(&p0, b, 2) / y(b, 2).powi(2));
        chk(
            "Crp4",
            g(&p2, b, 2),
            y(b, 2)
                * (g(&p1, b - 1, 2) / (y(b - 1, 2) + 1.0)
                    + (g(&p1, b, 1) + g(&p1, b, 3)) / (y(b, 1) * (y(b, 1) + 1.0))
                    + y(b, 2) * g(&p1, b, 2)
                    + g(&p1, b + 1, 2) / (y(b + 1, 2) + 1.0)),
        );
    }
    let a = 2 * l - 1;
    chk(
        "Cr5",
        g(&p1, a, 2),
        y(a, 2)
            * (g(&p0, a - 1, 2) / (y(a - 1, 2) + 1.0)
                + (g(&p0, a, 1) + g(&p0, a, 3)) / (y(a, 1) * (y(a, 1) + 1.0))
                + y(a, 2) * g(&p0, a, 2)
                + g(&p0, 2 * l, 1) / (yn + 1.0)),
    );
    for m in [1, 3] {
        chk(
            "Crp5",
            g(&p2, a, m),
            y(a, 1) * (g(&p1, a - 1, m) / (y(a - 1, 1) + 1.0) + y(a, 1) * g(&p1, a, m) + g(&p1, a, 2) / (y(a, 2) * (y(a, 2) + 1.0))),
        );
    }
    chk("Cr6", g(&p2, 2 * l, 1), g(&p1, a, 2) / yn - (y(a, 2) + 1.0) * g(&p0, 2 * l, 1) / (yn * yn));
    chk(
        "Cr7",
        g(&p2, 2 * l + 1, 1),
        yn * (g(&p1, a, 2) / (y(a, 2) + 1.0) + (g(&p0, a, 1) + g(&p0, a, 3)) / (y(a, 1) + 1.0) + yn * g(&p0, 2 * l + 1, 1) / (y(a, 2) + 1.0)),
    );
    Ok(res)
}
