//! Quivers without loops and 2-cycles, mutation, relabelling, and the level-2
//! Dynkin quivers `Q(X_n, 2)` with their mutation loops.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::rootsys::{DynkinType, Family};

/// Dense arrow-multiplicity matrix, `q[i * n + j]` arrows `i → j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    q: Vec<u32>,
}

impl Quiver {
    pub fn empty(n: usize) -> Quiver {
        Quiver { n, q: vec![0; n * n] }
    }

    /// Arrows given as `(from, to, multiplicity)`; repeated pairs add up.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize, u32)]) -> Result<Quiver> {
        let mut q = Quiver::empty(n);
        for &(i, j, m) in arrows {
            q.check_vertex(i)?;
            q.check_vertex(j)?;
            q.q[i * n + j] += m;
        }
        q.validate()?;
        Ok(q)
    }

    pub fn from_matrix(n: usize, q: Vec<u32>) -> Result<Quiver> {
        if q.len() != n * n {
            return Err(Error::DimensionMismatch { left: q.len(), right: n * n });
        }
        let out = Quiver { n, q };
        out.validate()?;
        Ok(out)
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            if self.arrows(i, i) != 0 {
                return Err(Error::NotAQuiver { i, j: i });
            }
            for j in i + 1..self.n {
                if self.arrows(i, j) != 0 && self.arrows(j, i) != 0 {
                    return Err(Error::NotAQuiver { i, j });
                }
            }
        }
        Ok(())
    }

    fn check_vertex(&self, k: usize) -> Result<()> {
        if k >= self.n {
            Err(Error::VertexOutOfRange { vertex: k, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn arrows(&self, i: usize, j: usize) -> u32 {
        self.q[i * self.n + j]
    }

    /// `b_ij = Q_ij − Q_ji`.
    pub fn skew(&self, i: usize, j: usize) -> i64 {
        self.arrows(i, j) as i64 - self.arrows(j, i) as i64
    }

    pub fn arrow_list(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let m = self.arrows(i, j);
                if m > 0 {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    /// Mutation at `k`: compose 2-paths through `k`, reverse arrows at `k`,
    /// cancel 2-cycles. Done on the skew matrix.
    pub fn mutate(&self, k: usize) -> Result<Quiver> {
        self.check_vertex(k)?;
        let n = self.n;
        let mut out = Quiver::empty(n);
        for i in 0..n {
            for j in 0..n {
                let b = if i == k || j == k {
                    -self.skew(i, j)
                } else {
                    let (bik, bkj) = (self.skew(i, k), self.skew(k, j));
                    self.skew(i, j) + (bik.abs() * bkj + bik * bkj.abs()) / 2
                };
                out.q[i * n + j] = b.max(0) as u32;
            }
        }
        Ok(out)
    }

    /// `ν(Q)_{ij} = Q_{ν⁻¹(i), ν⁻¹(j)}` with `nu[i] = ν(i)`.
    pub fn permute(&self, nu: &[usize]) -> Result<Quiver> {
        let inv = inverse_permutation(nu, self.n)?;
        let n = self.n;
        let mut out = Quiver::empty(n);
        for i in 0..n {
            for j in 0..n {
                out.q[i * n + j] = self.arrows(inv[i], inv[j]);
            }
        }
        Ok(out)
    }
}

pub fn inverse_permutation(nu: &[usize], n: usize) -> Result<Vec<usize>> {
    if nu.len() != n {
        return Err(Error::NotAPermutation { n });
    }
    let mut inv = vec![usize::MAX; n];
    for (i, &v) in nu.iter().enumerate() {
        if v >= n || inv[v] != usize::MAX {
            return Err(Error::NotAPermutation { n });
        }
        inv[v] = i;
    }
    Ok(inv)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    Black,
    White,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// A vertex carrying the Y-variable `y_m^{(node)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub color: Color,
    pub sign: Sign,
    pub node: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledQuiver {
    pub ty: DynkinType,
    pub quiver: Quiver,
    pub vertices: Vec<Vertex>,
    pub nu: Vec<usize>,
}

/// `Q(X_n, ℓ)`; only `ℓ = 2` is constructed.
pub fn build_dynkin_quiver(ty: DynkinType, level: u32) -> Result<LabeledQuiver> {
    if level != 2 {
        return Err(Error::Unsupported(format!("Dynkin quiver of {ty} at level {level} (only level 2)")));
    }
    Ok(match ty.family {
        Family::A => quiver_a(ty),
        Family::B => quiver_b(ty),
        Family::C => quiver_c(ty),
        Family::D => quiver_d(ty),
    })
}

fn sign_of(plus: bool) -> Sign {
    if plus {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Arrow between neighbours `a`, `b` pointing from the minus end.
fn from_minus(v: &[Vertex], a: usize, b: usize) -> (usize, usize, u32) {
    if v[a].sign == Sign::Minus {
        (a, b, 1)
    } else {
        (b, a, 1)
    }
}

fn black(node: usize, m: usize, plus: bool) -> Vertex {
    Vertex { color: Color::Black, sign: sign_of(plus), node, m }
}

fn white(node: usize, plus: bool) -> Vertex {
    Vertex { color: Color::White, sign: sign_of(plus), node, m: 1 }
}

fn assemble(ty: DynkinType, v: Vec<Vertex>, arrows: &[(usize, usize, u32)], nu: Vec<usize>) -> LabeledQuiver {
    let quiver = Quiver::from_arrows(v.len(), arrows).expect("Dynkin quiver has no 2-cycles");
    LabeledQuiver { ty, quiver, vertices: v, nu }
}

fn quiver_a(ty: DynkinType) -> LabeledQuiver {
    let n = ty.rank;
    let v: Vec<Vertex> = (0..n).map(|p| black(p + 1, 1, p % 2 == 1)).collect();
    let arrows: Vec<_> = (0..n.saturating_sub(1)).map(|p| from_minus(&v, p, p + 1)).collect();
    assemble(ty, v, &arrows, (0..n).collect())
}

fn quiver_d(ty: DynkinType) -> LabeledQuiver {
    let n = ty.rank;
    let mut v: Vec<Vertex> = (0..n - 2).map(|p| black(p + 1, 1, (n - 3 - p).is_multiple_of(2))).collect();
    v.push(black(n - 1, 1, false));
    v.push(black(n, 1, false));
    let mut arrows: Vec<_> = (0..n - 3).map(|p| from_minus(&v, p, p + 1)).collect();
    arrows.push(from_minus(&v, n - 3, n - 2));
    arrows.push(from_minus(&v, n - 3, n - 1));
    assemble(ty, v, &arrows, (0..n).collect())
}

/// Left wing `1..n−1` (white), short-node column of three black vertices,
/// right wing `n+1..2n−1` (white). `ν` swaps the wings end to end.
fn quiver_b(ty: DynkinType) -> LabeledQuiver {
    let n = ty.rank;
    let big_n = 2 * n + 1;
    let left = |p: usize| p - 1;
    let col = |m: usize| n - 2 + m;
    let right = |q: usize| q + 1;
    let mut v = vec![white(0, true); big_n];
    for p in 1..n {
        v[left(p)] = white(p, (n - 1 - p) % 2 == 1);
    }
    v[col(1)] = black(n, 1, true);
    v[col(2)] = black(n, 2, false);
    v[col(3)] = black(n, 3, true);
    for q in n + 1..2 * n {
        v[right(q)] = white(q, (q - n - 1).is_multiple_of(2));
    }
    let mut arrows = Vec::new();
    for p in 1..n - 1 {
        arrows.push(from_minus(&v, left(p), left(p + 1)));
    }
    for q in n + 1..2 * n - 1 {
        arrows.push(from_minus(&v, right(q), right(q + 1)));
    }
    let l = left(n - 1);
    arrows.extend_from_slice(&[
        (l, col(1), 1),
        (l, col(3), 1),
        (col(2), l, 1),
        (col(1), col(2), 1),
        (col(3), col(2), 1),
        (col(2), right(n + 1), 1),
    ]);
    let mut nu: Vec<usize> = (0..big_n).collect();
    for p in 1..n {
        nu[left(p)] = right(2 * n - p);
        nu[right(2 * n - p)] = left(p);
    }
    assemble(ty, v, &arrows, nu)
}

/// `n−1` columns of three black vertices plus two white vertices `w±`;
/// `ν` swaps the white pair.
fn quiver_c(ty: DynkinType) -> LabeledQuiver {
    let n = ty.rank;
    let big_n = 3 * (n - 1) + 2;
    let at = |i: usize, m: usize| 3 * (i - 1) + m - 1;
    let (wp, wm) = (3 * (n - 1), 3 * (n - 1) + 1);
    let mut v = vec![white(n, true); big_n];
    for i in 1..n {
        let even = (n - 1 - i).is_multiple_of(2);
        v[at(i, 1)] = black(i, 1, even);
        v[at(i, 2)] = black(i, 2, !even);
        v[at(i, 3)] = black(i, 3, even);
    }
    v[wp] = white(n, true);
    v[wm] = white(n + 1, false);
    let mut arrows = Vec::new();
    for i in 1..n {
        for m in [1, 3] {
            let (a, b) = (at(i, m), at(i, 2));
            arrows.push(if v[a].sign == Sign::Plus { (a, b, 1) } else { (b, a, 1) });
        }
    }
    for i in 1..n - 1 {
        for m in 1..=3 {
            arrows.push(from_minus(&v, at(i, m), at(i + 1, m)));
        }
    }
    let last = n - 1;
    arrows.extend_from_slice(&[
        (at(last, 2), wp, 1),
        (wm, at(last, 1), 1),
        (wm, at(last, 3), 1),
        (at(last, 2), wm, 1),
    ]);
    let mut nu: Vec<usize> = (0..big_n).collect();
    nu.swap(wp, wm);
    assemble(ty, v, &arrows, nu)
}

impl LabeledQuiver {
    pub fn n_vertices(&self) -> usize {
        self.quiver.n_vertices()
    }

    /// Vertex index carrying `y_m^{(node)}`.
    pub fn vertex_of(&self, node: usize, m: usize) -> Option<usize> {
        self.vertices.iter().position(|v| v.node == node && v.m == m)
    }

    /// Text dump: one `i -> j xM` line per arrow (1-based), then one label
    /// line per vertex, then the permutation.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# Q({},2) vertices={}", self.ty, self.n_vertices());
        for (i, j, m) in self.quiver.arrow_list() {
            let _ = writeln!(s, "{} -> {} x{}", i + 1, j + 1, m);
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let c = match v.color {
                Color::Black => "black",
                Color::White => "white",
            };
            let g = match v.sign {
                Sign::Plus => '+',
                Sign::Minus => '-',
            };
            let _ = writeln!(s, "label {} {} {} y_{}^({})", i + 1, c, g, v.m, v.node);
        }
        let _ = write!(s, "nu");
        for &x in &self.nu {
            let _ = write!(s, " {}", x + 1);
        }
        s.push('\n');
        s
    }
}

/// `(Q, (μ_+, μ_−), ν)` with the intermediate quivers cached.
#[derive(Clone, Debug)]
pub struct MutationLoop {
    pub labeled: LabeledQuiver,
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    /// Quiver in force before each mutation of `plus ++ minus`.
    steps: Vec<Quiver>,
    end: Quiver,
}

impl MutationLoop {
    /// `μ_+` mutates every `+` vertex, `μ_−` every black `−` vertex, each in
    /// ascending order. Fails if `ν(Q(T)) ≠ Q(0)`.
    pub fn new(labeled: LabeledQuiver) -> Result<MutationLoop> {
        let plus: Vec<usize> = (0..labeled.n_vertices()).filter(|&i| labeled.vertices[i].sign == Sign::Plus).collect();
        let minus: Vec<usize> = (0..labeled.n_vertices())
            .filter(|&i| labeled.vertices[i].sign == Sign::Minus && labeled.vertices[i].color == Color::Black)
            .collect();
        Self::with_sequence(labeled, plus, minus)
    }

    pub fn with_sequence(labeled: LabeledQuiver, plus: Vec<usize>, minus: Vec<usize>) -> Result<MutationLoop> {
        let mut steps = Vec::with_capacity(plus.len() + minus.len());
        let mut q = labeled.quiver.clone();
        for &k in plus.iter().chain(&minus) {
            let next = q.mutate(k)?;
            steps.push(q);
            q = next;
        }
        let end = q.permute(&labeled.nu)?;
        let lp = MutationLoop { labeled, plus, minus, steps, end };
        if !lp.is_loop() {
            return Err(Error::LoopViolated(format!("{}", lp.labeled.ty)));
        }
        Ok(lp)
    }

    pub fn ty(&self) -> DynkinType {
        self.labeled.ty
    }

    pub fn n_vertices(&self) -> usize {
        self.labeled.n_vertices()
    }

    pub fn nu(&self) -> &[usize] {
        &self.labeled.nu
    }

    pub fn is_loop(&self) -> bool {
        self.end == self.labeled.quiver
    }

    /// `(quiver, vertex)` for every elementary mutation, in order.
    pub fn sequence(&self) -> impl Iterator<Item = (&Quiver, usize)> {
        self.steps.iter().zip(self.plus.iter().chain(&self.minus).copied())
    }

    /// Quiver after `μ_+`.
    pub fn middle(&self) -> Quiver {
        match self.steps.get(self.plus.len()) {
            Some(q) => q.clone(),
            None => self.end.permute(&inverse_permutation(self.nu(), self.n_vertices()).expect("checked")).expect("checked"),
        }
    }
}

/// Build `γ(X_n, 2)` and verify the loop property.
pub fn build_mutation_loop(ty: DynkinType) -> Result<MutationLoop> {
    MutationLoop::new(build_dynkin_quiver(ty, 2)?)
}

/// Apply a sequence of mutations to a bare quiver.
pub fn mutate_sequence(q: &Quiver, seq: &[usize]) -> Result<Quiver> {
    let mut q = q.clone();
    for &k in seq {
        q = q.mutate(k)?;
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_mutation() {
        // 1→2, 2→3 (×2), 2→4, 4→1, mutate at 2
        let q = Quiver::from_arrows(4, &[(0, 1, 1), (1, 2, 2), (1, 3, 1), (3, 0, 1)]).unwrap();
        let got = q.mutate(1).unwrap();
        let want = Quiver::from_arrows(4, &[(1, 0, 1), (0, 2, 2), (2, 1, 2), (3, 1, 1)]).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn isolated_vertex() {
        let q = Quiver::from_arrows(3, &[(0, 1, 1)]).unwrap();
        assert_eq!(q.mutate(2).unwrap(), q);
    }

    #[test]
    fn two_cycles_rejected() {
        assert!(Quiver::from_arrows(2, &[(0, 1, 1), (1, 0, 1)]).is_err());
        assert!(Quiver::from_arrows(2, &[(0, 0, 1)]).is_err());
        assert!(Quiver::empty(2).mutate(2).is_err());
    }

    #[test]
    fn permutation() {
        let q = Quiver::from_arrows(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(q.permute(&[1, 0]).unwrap(), Quiver::from_arrows(2, &[(1, 0, 1)]).unwrap());
        assert_eq!(q.permute(&[0, 1]).unwrap(), q);
        assert!(q.permute(&[0, 0]).is_err());
    }

    #[test]
    fn vertex_counts() {
        for l in 1..5 {
            let b = build_dynkin_quiver(DynkinType::new(Family::B, 2 * l).unwrap(), 2).unwrap();
            assert_eq!(b.n_vertices(), 4 * l + 1);
        }
        for l in 2..5 {
            let c = build_dynkin_quiver(DynkinType::new(Family::C, 2 * l).unwrap(), 2).unwrap();
            assert_eq!(c.n_vertices(), 6 * l - 1);
            let d = build_dynkin_quiver(DynkinType::new(Family::D, 2 * l).unwrap(), 2).unwrap();
            assert_eq!(d.n_vertices(), 2 * l);
        }
        assert!(build_dynkin_quiver(DynkinType::new(Family::A, 3).unwrap(), 3).is_err());
    }

    #[test]
    fn loops_close() {
        for f in Family::ALL {
            for n in f.min_rank()..=12 {
                build_mutation_loop(DynkinType::new(f, n).unwrap()).unwrap();
            }
        }
    }

    #[test]
    fn dump_format() {
        let lq = build_dynkin_quiver(DynkinType::new(Family::A, 2).unwrap(), 2).unwrap();
        let d = lq.dump();
        assert!(d.contains("1 -> 2 x1"));
        assert!(d.contains("label 2 black + y_1^(2)"));
    }
}
