//! The index set `H_ℓ`, the coefficients `G_{im,jk}`, the restricted constant
//! Y-system and the positive fixed point `η` of the cluster transformation.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{identity, solve};
use crate::qsys::{check_restricted_qsystem, g_product, QTable};
use crate::quiver::{Color, MutationLoop, Sign};
use crate::rootsys::{DynkinType, Family, RootSystem};
use crate::tol;
use crate::yseed::{cluster_transform, fixed_point_residual, loop_jacobian};

/// `H_ℓ = {(i, m) : 1 ≤ i ≤ n, 1 ≤ m ≤ t_iℓ − 1}`.
pub fn index_set_h(ty: DynkinType, level: u32) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=ty.rank {
        for m in 1..(ty.t_i(i) * level) as usize {
            out.push((i, m));
        }
    }
    out
}

/// One way of reading the `G` formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GReading {
    /// Use `Cᵀ` in place of `C`.
    pub transposed: bool,
    /// Evaluate `G_{jk,im}` instead of `G_{im,jk}`.
    pub swapped: bool,
    /// Test `t_j/t_i` instead of `t_i/t_j` and swap the roles of `m`, `k`.
    pub flipped: bool,
}

impl GReading {
    /// As printed.
    pub const PRINTED: GReading = GReading { transposed: false, swapped: false, flipped: false };

    pub const ALL: [GReading; 8] = {
        let mut out = [GReading::PRINTED; 8];
        let mut b = 0;
        while b < 8 {
            out[b] = GReading { transposed: b & 4 != 0, swapped: b & 2 != 0, flipped: b & 1 != 0 };
            b += 1;
        }
        out
    };

    pub fn g(self, rs: &RootSystem, i: usize, m: usize, j: usize, k: usize) -> i64 {
        let (i, m, j, k) = if self.swapped { (j, k, i, m) } else { (i, m, j, k) };
        let c = |a: usize, b: usize| if self.transposed { rs.cartan[b - 1][a - 1] } else { rs.cartan[a - 1][b - 1] };
        let (ti, tj) = (rs.t[i - 1] as usize, rs.t[j - 1] as usize);
        let (num, den, p, q) = if self.flipped { (tj, ti, k, m) } else { (ti, tj, m, k) };
        let d = |a: usize, b: usize| i64::from(a == b);
        if num == 2 * den {
            -c(j, i) * (d(p, 2 * q - 1) + 2 * d(p, 2 * q) + d(p, 2 * q + 1))
        } else if num == 3 * den {
            let b = 3 * q;
            -c(j, i) * (d(p + 2, b) + 2 * d(p + 1, b) + 3 * d(p, b) + 2 * d(p, b + 1) + d(p, b + 2))
        } else if self.flipped {
            -c(i, j) * d(ti * k, tj * m)
        } else {
            -c(i, j) * d(tj * m, ti * k)
        }
    }
}

impl fmt::Display for GReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cartan={} order={} ratio={}",
            if self.transposed { "transposed" } else { "default" },
            if self.swapped { "G_jk,im" } else { "G_im,jk" },
            if self.flipped { "t_j/t_i" } else { "t_i/t_j" },
        )
    }
}

/// `Y_m^{(i)}` on `H_ℓ`, row `i − 1`, column `m − 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct YSolution {
    pub ty: DynkinType,
    pub level: u32,
    pub values: Vec<Vec<f64>>,
}

impl YSolution {
    fn empty(ty: DynkinType, level: u32) -> YSolution {
        let values = (1..=ty.rank).map(|i| vec![0.0; (ty.t_i(i) * level) as usize - 1]).collect();
        YSolution { ty, level, values }
    }

    pub fn get(&self, i: usize, m: usize) -> f64 {
        self.values[i - 1][m - 1]
    }

    pub fn set(&mut self, i: usize, m: usize, v: f64) {
        self.values[i - 1][m - 1] = v;
    }

    /// `1/Y`, zero on the boundary `m = 0` or `m = t_iℓ`.
    fn inv_or_zero(&self, i: usize, m: usize) -> f64 {
        match m.checked_sub(1).and_then(|c| self.values[i - 1].get(c)) {
            Some(v) => 1.0 / v,
            None => 0.0,
        }
    }

    pub fn rows(&self) -> Vec<(usize, usize, f64)> {
        index_set_h(self.ty, self.level).into_iter().map(|(i, m)| (i, m, self.get(i, m))).collect()
    }

    pub fn all_positive(&self) -> bool {
        self.values.iter().flatten().all(|&v| v > 0.0 && v.is_finite())
    }
}

/// `Y = Q² ∏ Q^G / (Q_{m−1} Q_{m+1})`.
pub fn y_from_q(rs: &RootSystem, qt: &QTable, reading: GReading) -> YSolution {
    let mut ys = YSolution::empty(rs.ty, qt.level);
    for (i, m) in index_set_h(rs.ty, qt.level) {
        let q = qt.get(i, m);
        ys.set(i, m, q * q * g_product(rs, qt, reading, i, m) / (qt.get(i, m - 1) * qt.get(i, m + 1)));
    }
    ys
}

/// Largest relative deviation `|Y² − RHS| / Y²` in the restricted constant
/// Y-system.
pub fn check_ysystem(rs: &RootSystem, ys: &YSolution, reading: GReading) -> f64 {
    let h = index_set_h(rs.ty, ys.level);
    let mut worst = 0.0f64;
    for &(i, m) in &h {
        let mut num = 1.0;
        for &(j, k) in &h {
            let e = reading.g(rs, i, m, j, k) + if (i, m) == (j, k) { 2 } else { 0 };
            if e != 0 {
                num *= libm::pow(1.0 + ys.get(j, k), e as f64);
            }
        }
        let den = (1.0 + ys.inv_or_zero(i, m - 1)) * (1.0 + ys.inv_or_zero(i, m + 1));
        let y2 = ys.get(i, m) * ys.get(i, m);
        worst = worst.max(libm::fabs(y2 - num / den) / y2);
    }
    worst
}

/// The rational level-2 values printed for B and D.
pub fn printed_y_values(ty: DynkinType) -> Option<YSolution> {
    let n = ty.rank;
    let mut ys = YSolution::empty(ty, 2);
    let nf = n as f64;
    match ty.family {
        Family::B => {
            for i in 1..n {
                ys.set(i, 1, (i * (i + 2)) as f64);
            }
            ys.set(n, 1, nf / (nf + 1.0));
            ys.set(n, 2, nf * nf / (2.0 * nf + 1.0));
            ys.set(n, 3, nf / (nf + 1.0));
        }
        Family::D => {
            for i in 1..n - 1 {
                ys.set(i, 1, (i * (i + 2)) as f64);
            }
            ys.set(n - 1, 1, nf - 1.0);
            ys.set(n, 1, nf - 1.0);
        }
        _ => return None,
    }
    Some(ys)
}

/// Largest absolute deviation between two tables.
pub fn max_deviation(a: &YSolution, b: &YSolution) -> f64 {
    a.values.iter().flatten().zip(b.values.iter().flatten()).fold(0.0, |w, (x, y)| w.max(libm::fabs(x - y)))
}

/// One evaluated reading on one reference case.
#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationLine {
    pub reading: GReading,
    pub case: DynkinType,
    pub qsystem: f64,
    /// `max |y_from_q − printed|`, B and D only.
    pub printed_match: Option<f64>,
    /// Eq. (Y-sys) on the printed values (B, D) or on `y_from_q` under the
    /// Q-side reading (A, C).
    pub ysystem: f64,
}

/// Readings fixed by the search, with the full evaluation log.
#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    /// Used by the Q-system, Prop QY and `y_from_q`.
    pub q_reading: GReading,
    /// Used by Eq. (Y-sys).
    pub y_reading: GReading,
    pub q_candidates: Vec<GReading>,
    pub y_candidates: Vec<GReading>,
    pub log: Vec<CalibrationLine>,
}

impl Calibration {
    pub fn log_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .log
            .iter()
            .map(|l| {
                let pm = l.printed_match.map_or(String::from("-"), |v| format!("{v:.1e}"));
                format!("{} [{}] qsys={:.1e} printed={} ysys={:.1e}", l.case, l.reading, l.qsystem, pm, l.ysystem)
            })
            .collect();
        out.push(format!("chosen Q-side: {} ({} equivalent)", self.q_reading, self.q_candidates.len()));
        out.push(format!("chosen Y-side: {} ({} equivalent)", self.y_reading, self.y_candidates.len()));
        out
    }
}

const CALIBRATION_CASES: [(Family, usize); 6] =
    [(Family::B, 4), (Family::B, 5), (Family::D, 4), (Family::D, 6), (Family::C, 4), (Family::A, 3)];

/// Search the eight readings of `G`.
///
/// The Q-side reading must satisfy the restricted Q-system and reproduce the
/// printed B/D values through `y_from_q`; the Y-side reading must make Eq.
/// (Y-sys) hold for the printed values and for `y_from_q` on A and C. The first
/// passing reading in [`GReading::ALL`] order is kept.
pub fn calibrate(tol: f64) -> Result<Calibration> {
    let cases: Vec<(RootSystem, QTable)> = CALIBRATION_CASES
        .iter()
        .map(|&(f, n)| {
            let rs = RootSystem::new(DynkinType::new(f, n)?);
            let qt = QTable::build(&rs, 2)?;
            Ok((rs, qt))
        })
        .collect::<Result<_>>()?;

    let mut log = Vec::new();
    let mut q_candidates = Vec::new();
    for r in GReading::ALL {
        let mut ok = true;
        for (rs, qt) in &cases {
            let qsystem = check_restricted_qsystem(rs, qt, r);
            let printed_match = printed_y_values(rs.ty).map(|p| max_deviation(&y_from_q(rs, qt, r), &p));
            ok &= qsystem <= tol && printed_match.is_none_or(|v| v <= tol * 100.0);
            log.push(CalibrationLine { reading: r, case: rs.ty, qsystem, printed_match, ysystem: f64::NAN });
        }
        if ok {
            q_candidates.push(r);
        }
    }
    let q_reading = *q_candidates.first().ok_or_else(|| Error::Calibration(String::from("no Q-side reading fits")))?;

    let mut y_candidates = Vec::new();
    for r in GReading::ALL {
        let mut ok = true;
        for (idx, (rs, qt)) in cases.iter().enumerate() {
            let ys = printed_y_values(rs.ty).unwrap_or_else(|| y_from_q(rs, qt, q_reading));
            let res = check_ysystem(rs, &ys, r);
            ok &= res <= tol;
            log[GReading::ALL.iter().position(|x| *x == r).expect("listed") * cases.len() + idx].ysystem = res;
        }
        if ok {
            y_candidates.push(r);
        }
    }
    let y_reading = *y_candidates.first().ok_or_else(|| Error::Calibration(String::from("no Y-side reading fits")))?;
    Ok(Calibration { q_reading, y_reading, q_candidates, y_candidates, log })
}

/// Level-2 Y values from the KR q-dimensions via Prop QY.
pub fn level2_y_solution(rs: &RootSystem, cal: &Calibration) -> Result<YSolution> {
    let qt = QTable::build(rs, 2)?;
    let ys = y_from_q(rs, &qt, cal.q_reading);
    for (i, m, v) in ys.rows() {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::NonPositive { i, m, value: v });
        }
    }
    Ok(ys)
}

/// A verified positive fixed point of `μ_γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaPoint {
    pub ty: DynkinType,
    pub eta: Vec<f64>,
    pub residual: f64,
}

/// Place the Y values on the quiver vertices and check `μ_γ(η) = η`.
pub fn assemble_eta(lp: &MutationLoop, ys: &YSolution, tol: f64) -> Result<EtaPoint> {
    let eta = eta_from_y(lp, ys)?;
    let (residual, vertex) = fixed_point_residual(lp, &eta)?;
    if residual.is_nan() || residual > tol {
        return Err(Error::FixedPoint { residual, vertex });
    }
    Ok(EtaPoint { ty: lp.ty(), eta, residual })
}

/// The vertex assignment without the fixed-point check.
pub fn eta_from_y(lp: &MutationLoop, ys: &YSolution) -> Result<Vec<f64>> {
    let ty = lp.ty();
    if ys.ty != ty {
        return Err(Error::Domain(format!("Y table is for {}, loop is {}", ys.ty, ty)));
    }
    let n = ty.rank;
    let verts = &lp.labeled.vertices;
    let by_sign = |idx: usize| {
        let v = verts[idx];
        let y = ys.get(v.node, v.m);
        if v.sign == Sign::Plus {
            y
        } else {
            1.0 / y
        }
    };
    let big_n = lp.n_vertices();
    let mut eta = vec![0.0; big_n];
    match ty.family {
        Family::A | Family::D => {
            for (idx, e) in eta.iter_mut().enumerate() {
                *e = by_sign(idx);
            }
        }
        Family::C => {
            for (idx, e) in eta.iter_mut().enumerate() {
                if verts[idx].color == Color::Black {
                    *e = by_sign(idx);
                }
            }
            eta[big_n - 2] = ys.get(n, 1);
            eta[big_n - 1] = (ys.get(n - 1, 2) + 1.0) / ys.get(n, 1);
        }
        Family::B => {
            for p in 1..n - 1 {
                eta[p - 1] = by_sign(p - 1);
            }
            eta[n - 2] = (ys.get(n, 2) + 1.0) / ys.get(n - 1, 1);
            eta[n - 1] = ys.get(n, 1);
            eta[n] = 1.0 / ys.get(n, 2);
            eta[n + 1] = ys.get(n, 3);
            eta[n + 2] = ys.get(n - 1, 1);
            for q in n + 2..2 * n {
                eta[q + 1] = 1.0 / eta[2 * n - q - 1];
            }
        }
    }
    Ok(eta)
}

/// Damped Newton on `μ_γ(y) − y = 0` with the analytic Jacobian.
pub fn newton_fixed_point(lp: &MutationLoop, start: &[f64], max_iter: usize) -> Result<EtaPoint> {
    let n = lp.n_vertices();
    let mut y = start.to_vec();
    if y.len() != n {
        return Err(Error::DimensionMismatch { left: y.len(), right: n });
    }
    if y.iter().any(|&v| v.is_nan() || v <= 0.0) {
        return Err(Error::Domain(String::from("Newton start must be positive")));
    }
    let mut last = f64::INFINITY;
    for _ in 0..max_iter {
        let f = cluster_transform(lp, &y)?;
        let r = DVector::from_iterator(n, f.iter().zip(&y).map(|(a, b)| b - a));
        last = r.amax();
        if last <= 1e-14 * y.iter().fold(1.0f64, |a, &b| a.max(b)) {
            let (residual, _) = fixed_point_residual(lp, &y)?;
            return Ok(EtaPoint { ty: lp.ty(), eta: y, residual });
        }
        let j = loop_jacobian(lp, &y)?.matrix - identity(n);
        let d = solve(j, &r)?;
        let mut t = 1.0;
        while y.iter().zip(d.iter()).any(|(a, b)| a + t * b <= 0.0) {
            t *= 0.5;
            if t < 1e-12 {
                return Err(Error::NoConvergence { iterations: max_iter, residual: last });
            }
        }
        for (a, b) in y.iter_mut().zip(d.iter()) {
            *a += t * b;
        }
    }
    let (residual, _) = fixed_point_residual(lp, &y)?;
    if residual <= tol::FIXED_POINT * 1e-2 {
        return Ok(EtaPoint { ty: lp.ty(), eta: y, residual });
    }
    Err(Error::NoConvergence { iterations: max_iter, residual: last })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::build_mutation_loop;

    fn ty(f: Family, n: usize) -> DynkinType {
        DynkinType::new(f, n).unwrap()
    }

    #[test]
    fn h_sizes() {
        assert_eq!(index_set_h(ty(Family::D, 4), 2).len(), 4);
        assert_eq!(index_set_h(ty(Family::B, 4), 2), vec![(1, 1), (2, 1), (3, 1), (4, 1), (4, 2), (4, 3)]);
        assert_eq!(index_set_h(ty(Family::C, 3), 2).len(), 7);
    }

    #[test]
    fn g_examples() {
        let b = RootSystem::new(ty(Family::B, 4));
        let a = RootSystem::new(ty(Family::A, 4));
        let p = GReading::PRINTED;
        assert_eq!(p.g(&a, 2, 1, 2, 1), -2);
        assert_eq!(p.g(&a, 2, 1, 3, 1), 1);
        assert_eq!(p.g(&b, 4, 2, 3, 1), 2);
    }

    #[test]
    fn calibration_finds_readings() {
        let cal = calibrate(tol::QY_SYSTEM).unwrap();
        assert_eq!(cal.q_reading, GReading::PRINTED);
        assert_eq!(cal.y_reading, GReading { transposed: false, swapped: true, flipped: false });
    }

    #[test]
    fn eta_examples() {
        let cal = calibrate(tol::QY_SYSTEM).unwrap();
        let b4 = ty(Family::B, 4);
        let ys = level2_y_solution(&RootSystem::new(b4), &cal).unwrap();
        let e = assemble_eta(&build_mutation_loop(b4).unwrap(), &ys, tol::FIXED_POINT).unwrap();
        assert!((e.eta[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((e.eta[4] - 9.0 / 16.0).abs() < 1e-12);
        let d6 = ty(Family::D, 6);
        let ys = level2_y_solution(&RootSystem::new(d6), &cal).unwrap();
        let e = assemble_eta(&build_mutation_loop(d6).unwrap(), &ys, tol::FIXED_POINT).unwrap();
        assert!((e.eta[5] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn perturbed_table_detected() {
        let b4 = ty(Family::B, 4);
        let rs = RootSystem::new(b4);
        let y = GReading { transposed: false, swapped: true, flipped: false };
        let mut ys = printed_y_values(b4).unwrap();
        assert!(check_ysystem(&rs, &ys, y) < 1e-12);
        ys.set(2, 1, ys.get(2, 1) * 1.01);
        assert!(check_ysystem(&rs, &ys, y) > 1e-3);
    }
}
