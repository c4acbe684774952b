//! q-dimensions at the root of unity, Kirillov–Reshetikhin sums and the
//! restricted Q-system.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rootsys::{sin_pi, DynkinType, Family, Rat, RootSystem};
use crate::ysys::{index_set_h, GReading};

/// Positive-root pairings divided by `ℓ + h∨`, as integers over one common
/// denominator, so that a q-dimension costs one sine per root.
#[derive(Clone, Debug)]
pub struct QdimTable {
    den: i64,
    rows: Vec<(Vec<i64>, i64, f64)>,
}

fn sin_pi_frac(num: i64, den: i64) -> f64 {
    let mut x = num.rem_euclid(2 * den);
    let mut sign = 1.0;
    if x >= den {
        x -= den;
        sign = -1.0;
    }
    if 2 * x > den {
        x = den - x;
    }
    if x == 0 {
        return 0.0;
    }
    sign * libm::sin(core::f64::consts::PI * x as f64 / den as f64)
}

impl QdimTable {
    pub fn new(rs: &RootSystem, level: u32) -> Result<QdimTable> {
        let k = Rat::from_integer((level + rs.h_dual) as i64);
        let mut raw = Vec::new();
        let mut den = 1i64;
        for a in rs.positive_roots() {
            let fw = rs
                .fundamental_weights
                .iter()
                .map(|w| rs.pairing(&a.coords, w).map(|x| x / k))
                .collect::<Result<Vec<Rat>>>()?;
            let rho = rs.pairing(&a.coords, &rs.rho)? / k;
            for q in fw.iter().chain(core::iter::once(&rho)) {
                den = num_integer::lcm(den, *q.denom());
            }
            raw.push((fw, rho));
        }
        let int = |q: &Rat| *q.numer() * (den / *q.denom());
        let mut rows = Vec::with_capacity(raw.len());
        for (idx, (fw, rho)) in raw.iter().enumerate() {
            let base = sin_pi_frac(int(rho), den);
            if base == 0.0 {
                return Err(Error::VanishingDenominator { root: idx });
            }
            rows.push((fw.iter().map(int).collect(), int(rho), 1.0 / base));
        }
        Ok(QdimTable { den, rows })
    }

    /// q-dimension of the weight with fundamental-weight coordinates `w`.
    pub fn eval(&self, w: &[i64]) -> f64 {
        let mut out = 1.0;
        for (fw, rho, inv) in &self.rows {
            let num = rho + fw.iter().zip(w).map(|(a, b)| a * b).sum::<i64>();
            out *= sin_pi_frac(num, self.den) * inv;
        }
        out
    }
}

/// `∏_{α>0} sin(π⟨α,ϖ+ρ⟩/(ℓ+h∨)) / sin(π⟨α,ρ⟩/(ℓ+h∨))`, with `ϖ` given in
/// fundamental-weight coordinates.
pub fn qdim(rs: &RootSystem, level: u32, weight: &[i64]) -> Result<f64> {
    if weight.len() != rs.rank() {
        return Err(Error::DimensionMismatch { left: weight.len(), right: rs.rank() });
    }
    Ok(QdimTable::new(rs, level)?.eval(weight))
}

/// Nonnegative integer tuples of length `parts` summing to `total`.
fn compositions(total: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    fn go(total: usize, parts: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if parts == 0 {
            if total == 0 {
                f(buf);
            }
            return;
        }
        if parts == 1 {
            buf.push(total);
            f(buf);
            buf.pop();
            return;
        }
        for x in 0..=total {
            buf.push(x);
            go(total - x, parts - 1, buf, f);
            buf.pop();
        }
    }
    go(total, parts, &mut Vec::with_capacity(parts), f)
}

/// The KR sum for any `m ≥ 0`, without the range check of [`kr_qchar`].
///
/// For B and D the chain `k_{i′}, …, k_{i−2}` runs over nodes of the parity of
/// `i` below `i − 1`; node 0 stands for the zero weight, so `i = 1` reduces to
/// `χ(mϖ_1)`.
pub fn kr_sum(rs: &RootSystem, level: u32, i: usize, m: usize) -> Result<f64> {
    let n = rs.rank();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { i, m });
    }
    let fam = rs.ty.family;
    let table = QdimTable::new(rs, level)?;
    let mut w = vec![0i64; n];
    let out = match fam {
        Family::A => {
            w[i - 1] = m as i64;
            table.eval(&w)
        }
        Family::D if i >= n - 1 => {
            w[i - 1] = m as i64;
            table.eval(&w)
        }
        Family::C if i == n => {
            w[i - 1] = m as i64;
            table.eval(&w)
        }
        Family::B | Family::D => {
            let chain: Vec<usize> = (i % 2..i.saturating_sub(1)).step_by(2).collect();
            let ti = if fam == Family::B { rs.t[i - 1] as usize } else { 1 };
            let mut total = 0.0;
            for ki in 0..=m {
                let rest = m - ki;
                if !rest.is_multiple_of(ti) {
                    continue;
                }
                compositions(rest / ti, chain.len(), &mut |ks| {
                    w.iter_mut().for_each(|x| *x = 0);
                    for (&node, &k) in chain.iter().zip(ks) {
                        if node > 0 {
                            w[node - 1] += k as i64;
                        }
                    }
                    w[i - 1] += ki as i64;
                    total += table.eval(&w);
                });
            }
            total
        }
        Family::C => {
            // k_j = 2a_j for j < i, k_i = 2a_i + (m mod 2), Σk ≤ m
            let odd = (m % 2) as i64;
            let mut total = 0.0;
            for r in 0..=m / 2 {
                compositions(r, i, &mut |a| {
                    for (j, &x) in a.iter().enumerate() {
                        w[j] = 2 * x as i64;
                    }
                    w[i - 1] += odd;
                    total += table.eval(&w);
                });
            }
            total
        }
    };
    Ok(out)
}

/// `Q_m^{(i)}` for `0 ≤ m ≤ t_iℓ`.
pub fn kr_qchar(rs: &RootSystem, level: u32, i: usize, m: usize) -> Result<f64> {
    let n = rs.rank();
    if i == 0 || i > n || m > (rs.t[i - 1] * level) as usize {
        return Err(Error::IndexOutOfRange { i, m });
    }
    kr_sum(rs, level, i, m)
}

/// `Q_m^{(i)}` for `0 ≤ m ≤ t_iℓ`, row `i − 1`, column `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct QTable {
    pub ty: DynkinType,
    pub level: u32,
    pub t: Vec<u32>,
    pub values: Vec<Vec<f64>>,
}

impl QTable {
    pub fn build(rs: &RootSystem, level: u32) -> Result<QTable> {
        let mut values = Vec::with_capacity(rs.rank());
        for i in 1..=rs.rank() {
            let top = (rs.t[i - 1] * level) as usize;
            let row = (0..=top).map(|m| kr_qchar(rs, level, i, m)).collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        Ok(QTable { ty: rs.ty, level, t: rs.t.clone(), values })
    }

    /// `Q_m^{(i)}`; `i = 0` and out-of-range `m` give the boundary value 1.
    pub fn get(&self, i: usize, m: usize) -> f64 {
        if i == 0 {
            return 1.0;
        }
        self.values[i - 1].get(m).copied().unwrap_or(1.0)
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// `(i, m, Q)` rows, `m` from 0 to `t_iℓ`.
    pub fn rows(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (i, row) in self.values.iter().enumerate() {
            for (m, &q) in row.iter().enumerate() {
                out.push((i + 1, m, q));
            }
        }
        out
    }
}

/// `∏_{(j,k)∈H_ℓ} (Q_k^{(j)})^{G_{im,jk}}`.
pub(crate) fn g_product(rs: &RootSystem, qt: &QTable, reading: GReading, i: usize, m: usize) -> f64 {
    let mut p = 1.0;
    for (j, k) in index_set_h(rs.ty, qt.level) {
        let g = reading.g(rs, i, m, j, k);
        if g != 0 {
            p *= libm::pow(qt.get(j, k), g as f64);
        }
    }
    p
}

/// `max |Q² − Q_{m−1}Q_{m+1} − Q²∏Q^G| / Q²` over `H_ℓ`.
pub fn check_restricted_qsystem(rs: &RootSystem, qt: &QTable, reading: GReading) -> f64 {
    let mut worst = 0.0f64;
    for (i, m) in index_set_h(rs.ty, qt.level) {
        let q = qt.get(i, m);
        let q2 = q * q;
        let rhs = qt.get(i, m - 1) * qt.get(i, m + 1) + q2 * g_product(rs, qt, reading, i, m);
        worst = worst.max(libm::fabs(q2 - rhs) / q2);
    }
    worst
}

/// Outcome of the three truncation properties.
#[derive(Clone, Debug, PartialEq)]
pub struct QsolReport {
    /// `max |Q_m − Q_{t_iℓ−m}|`.
    pub symmetry: f64,
    /// `min (Q_{m+1} − Q_m)` over `0 ≤ m < t_iℓ/2`; positive when growth is strict.
    pub min_growth: f64,
    /// `max |Q_{t_iℓ+j}|`, `1 ≤ j ≤ t_ih∨ − 1`; `None` when not evaluated.
    pub vanishing: Option<f64>,
    pub min_value: f64,
}

impl QsolReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.symmetry <= tol && self.min_growth > 0.0 && self.min_value > 0.0 && self.vanishing.is_none_or(|v| v <= tol)
    }
}

/// Symmetry, strict growth on the first half, and (optionally) vanishing past
/// the top of the window.
pub fn check_qsol_properties(rs: &RootSystem, qt: &QTable, vanishing: bool) -> Result<QsolReport> {
    let mut rep = QsolReport { symmetry: 0.0, min_growth: f64::INFINITY, vanishing: None, min_value: f64::INFINITY };
    for i in 1..=qt.rank() {
        let top = (qt.t[i - 1] * qt.level) as usize;
        for m in 0..=top {
            rep.symmetry = rep.symmetry.max(libm::fabs(qt.get(i, m) - qt.get(i, top - m)));
            if m >= 1 && m < top {
                rep.min_value = rep.min_value.min(qt.get(i, m));
            }
            if 2 * m < top {
                rep.min_growth = rep.min_growth.min(qt.get(i, m + 1) - qt.get(i, m));
            }
        }
        if vanishing {
            let span = (qt.t[i - 1] * rs.h_dual) as usize;
            let mut worst = rep.vanishing.unwrap_or(0.0);
            for j in 1..span {
                worst = worst.max(libm::fabs(kr_sum(rs, qt.level, i, top + j)?));
            }
            rep.vanishing = Some(worst);
        }
    }
    Ok(rep)
}

/// Level-2 closed forms of `Q_m^{(i)}` where they are known.
pub fn closed_form_q(ty: DynkinType, i: usize, m: usize) -> Option<f64> {
    let n = ty.rank;
    if i == 0 || i > n {
        return None;
    }
    let s = |x: Rat| sin_pi(x / Rat::from_integer(n as i64 + 3));
    let ri = |v: usize| Rat::from_integer(v as i64);
    let half = |v: usize| Rat::new(v as i64, 2);
    match ty.family {
        Family::A if m == 1 => {
            let mut p = 1.0;
            for j in 1..=i {
                for k in 1..=n + 1 - i {
                    p *= s(ri(j + k)) / s(ri(j + k - 1));
                }
            }
            Some(p)
        }
        Family::B if i < n && m == 1 => Some((i + 1) as f64),
        Family::B if i == n && (m == 1 || m == 3) => Some(libm::sqrt((2 * n + 1) as f64)),
        Family::B if i == n && m == 2 => Some((n + 1) as f64),
        Family::C if m == 1 || (m == 3 && i < n) => {
            Some(s(half(i + 1)) * s(half(i + 3)) * s(ri(i + 2)) / (s(half(1)) * s(half(3)) * s(ri(2))))
        }
        Family::C if m == 2 && i < n => {
            let d = s(ri(1)) * s(ri(2)) * s(ri(3));
            let sum: f64 = (0..=i).map(|j| s(ri(j)) * s(ri(j + 1)) * s(ri(j + 2))).sum();
            Some(2.0 * sum / d + s(ri(i + 1)) * s(ri(i + 2)) * s(ri(i + 3)) / d)
        }
        Family::D if i + 2 <= n && m == 1 => Some((i + 1) as f64),
        Family::D if i + 1 >= n && m == 1 => Some(libm::sqrt(n as f64)),
        _ => None,
    }
}

/// `max |kr_qchar − closed form|` over every `(i, m)` with a closed form.
pub fn closed_form_residual(rs: &RootSystem, qt: &QTable) -> f64 {
    let mut worst = 0.0f64;
    for i in 1..=qt.rank() {
        for m in 1..qt.values[i - 1].len() - 1 {
            if let Some(v) = closed_form_q(rs.ty, i, m) {
                worst = worst.max(libm::fabs(qt.get(i, m) - v) / v.max(1.0));
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(f: Family, n: usize) -> RootSystem {
        RootSystem::new(DynkinType::new(f, n).unwrap())
    }

    #[test]
    fn qdim_examples() {
        let b2 = rs(Family::B, 2);
        assert!((qdim(&b2, 2, &[0, 0]).unwrap() - 1.0).abs() < 1e-14);
        assert!((qdim(&b2, 2, &[1, 0]).unwrap() - 2.0).abs() < 1e-12);
        let d4 = rs(Family::D, 4);
        assert!((qdim(&d4, 2, &[0, 0, 0, 1]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn kr_examples() {
        assert!((kr_qchar(&rs(Family::B, 4), 2, 4, 2).unwrap() - 5.0).abs() < 1e-12);
        let s = |x: f64| libm::sin(core::f64::consts::PI * x / 6.0);
        let want = s(1.0) * s(2.0) * s(3.0) / (s(0.5) * s(1.5) * s(2.0));
        assert!((kr_qchar(&rs(Family::C, 3), 2, 1, 1).unwrap() - want).abs() < 1e-12);
        assert!(kr_qchar(&rs(Family::C, 3), 2, 3, 3).is_err());
    }

    #[test]
    fn b3_vanishing() {
        let r = rs(Family::B, 3);
        for m in 3..=6 {
            assert!(kr_sum(&r, 2, 1, m).unwrap().abs() < 1e-12);
        }
    }
}
