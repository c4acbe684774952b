//! Root systems of types A–D in ε-coordinates, normalised so that long roots
//! have squared length 2.
//!
//! Coordinates are exact rationals. For type C every root carries a common
//! factor √2, so vectors are stored multiplied by √2 and the pairing is
//! rescaled by 1/2; every pairing stays rational.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::B, Family::C, Family::D];

    pub fn min_rank(self) -> usize {
        match self {
            Family::A => 1,
            Family::B | Family::C => 2,
            Family::D => 4,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
        }
    }

    pub fn simply_laced(self) -> bool {
        matches!(self, Family::A | Family::D)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinType {
    pub family: Family,
    pub rank: usize,
}

impl DynkinType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let min = family.min_rank();
        if rank < min {
            return Err(Error::InvalidRank { family, rank, min });
        }
        Ok(DynkinType { family, rank })
    }

    /// Dual Coxeter number from the standard table; [`RootSystem`] derives it
    /// independently from the highest root.
    pub fn h_dual(&self) -> u32 {
        let n = self.rank as u32;
        match self.family {
            Family::A | Family::C => n + 1,
            Family::B => 2 * n - 1,
            Family::D => 2 * n - 2,
        }
    }

    pub fn t_group(&self) -> u32 {
        if self.family.simply_laced() {
            1
        } else {
            2
        }
    }

    /// `t(ℓ + h∨)`.
    pub fn period(&self, level: u32) -> u32 {
        self.t_group() * (level + self.h_dual())
    }

    /// `t_i` for the simple root `i` (1-based).
    pub fn t_i(&self, i: usize) -> u32 {
        match self.family {
            Family::A | Family::D => 1,
            Family::B => {
                if i == self.rank {
                    2
                } else {
                    1
                }
            }
            Family::C => {
                if i == self.rank {
                    1
                } else {
                    2
                }
            }
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub coords: Vec<Rat>,
    pub long: bool,
    pub positive: bool,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub ty: DynkinType,
    pub dim: usize,
    /// `⟨u, v⟩ = scale · Σ u_k v_k` on stored coordinates.
    pub scale: Rat,
    pub roots: Vec<Root>,
    pub simple_roots: Vec<Vec<Rat>>,
    pub rho: Vec<Rat>,
    pub fundamental_weights: Vec<Vec<Rat>>,
    /// `C_{ij} = 2⟨α_i, α_j⟩ / ⟨α_i, α_i⟩`, 0-based.
    pub cartan: Vec<Vec<i64>>,
    pub t: Vec<u32>,
    pub t_group: u32,
    pub h_dual: u32,
}

/// Standard Euclidean pairing `⟨ε_i, ε_j⟩ = δ_ij`.
pub fn euclid(v: &[Rat], w: &[Rat]) -> Result<Rat> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch { left: v.len(), right: w.len() });
    }
    Ok(v.iter().zip(w).fold(Rat::zero(), |acc, (a, b)| acc + a * b))
}

fn r(x: i64) -> Rat {
    Rat::from_integer(x)
}

fn unit(dim: usize, i: usize, c: i64) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    v[i] = r(c);
    v
}

fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale_vec(a: &[Rat], c: Rat) -> Vec<Rat> {
    a.iter().map(|x| x * c).collect()
}

/// Inverse of a square rational matrix by Gauss–Jordan elimination.
fn invert(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c];
                let pivot = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(pivot) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl RootSystem {
    pub fn new(ty: DynkinType) -> RootSystem {
        let n = ty.rank;
        let (dim, scale) = match ty.family {
            Family::A => (n + 1, Rat::one()),
            Family::C => (n, Rat::new(1, 2)),
            _ => (n, Rat::one()),
        };
        let e = |i: usize| unit(dim, i, 1);
        let mut pos: Vec<Vec<Rat>> = Vec::new();
        let mut simple: Vec<Vec<Rat>> = Vec::new();
        match ty.family {
            Family::A => {
                for i in 0..dim {
                    for j in i + 1..dim {
                        pos.push(sub(&e(i), &e(j)));
                    }
                }
                for i in 0..n {
                    simple.push(sub(&e(i), &e(i + 1)));
                }
            }
            Family::B | Family::C | Family::D => {
                for i in 0..n {
                    for j in i + 1..n {
                        pos.push(sub(&e(i), &e(j)));
                        pos.push(add(&e(i), &e(j)));
                    }
                }
                for i in 0..n - 1 {
                    simple.push(sub(&e(i), &e(i + 1)));
                }
                match ty.family {
                    Family::B => {
                        for i in 0..n {
                            pos.push(e(i));
                        }
                        simple.push(e(n - 1));
                    }
                    Family::C => {
                        for i in 0..n {
                            pos.push(unit(dim, i, 2));
                        }
                        simple.push(unit(dim, n - 1, 2));
                    }
                    _ => simple.push(add(&e(n - 2), &e(n - 1))),
                }
            }
        }

        let pair = |u: &[Rat], v: &[Rat]| scale * euclid(u, v).expect("same dimension");
        let long_norm = pos.iter().map(|a| pair(a, a)).max().expect("nonempty");
        debug_assert_eq!(long_norm, r(2));

        let mut roots: Vec<Root> = Vec::with_capacity(2 * pos.len());
        for a in &pos {
            let long = pair(a, a) == long_norm;
            roots.push(Root { coords: a.clone(), long, positive: true });
        }
        for a in &pos {
            let long = pair(a, a) == long_norm;
            roots.push(Root { coords: scale_vec(a, r(-1)), long, positive: false });
        }

        let norms: Vec<Rat> = simple.iter().map(|a| pair(a, a)).collect();
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = r(2) * pair(&simple[i], &simple[j]) / norms[i];
                        debug_assert!(c.is_integer());
                        c.to_integer()
                    })
                    .collect()
            })
            .collect();
        let t: Vec<u32> = norms
            .iter()
            .map(|nn| {
                let ti = r(2) / nn;
                debug_assert!(ti.is_integer());
                ti.to_integer() as u32
            })
            .collect();
        let t_group = *t.iter().max().expect("rank >= 1");

        // ϖ_i = Σ_k X_ik α_k with X = G⁻¹, G_kj = ⟨α_k, α_j∨⟩
        let g: Vec<Vec<Rat>> = (0..n)
            .map(|k| (0..n).map(|j| r(2) * pair(&simple[k], &simple[j]) / norms[j]).collect())
            .collect();
        let x = invert(&g).expect("Cartan matrix is invertible");
        let fundamental_weights: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n).fold(vec![Rat::zero(); dim], |acc, k| add(&acc, &scale_vec(&simple[k], x[i][k])))
            })
            .collect();

        let rho = scale_vec(
            &pos.iter().fold(vec![Rat::zero(); dim], |acc, a| add(&acc, a)),
            Rat::new(1, 2),
        );

        // h∨ = ⟨ρ, θ⟩ + 1 with θ the highest (long) root
        let theta = pos
            .iter()
            .filter(|a| pair(a, a) == long_norm)
            .max_by_key(|a| pair(&rho, a))
            .expect("long roots exist");
        let hd = pair(&rho, theta) + Rat::one();
        debug_assert!(hd.is_integer());

        RootSystem {
            ty,
            dim,
            scale,
            roots,
            simple_roots: simple,
            rho,
            fundamental_weights,
            cartan,
            t,
            t_group,
            h_dual: hd.to_integer() as u32,
        }
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn pairing(&self, v: &[Rat], w: &[Rat]) -> Result<Rat> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { left: v.len(), right: self.dim });
        }
        Ok(self.scale * euclid(v, w)?)
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|a| a.positive)
    }

    pub fn n_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots()
            .filter(|a| a.long)
            .max_by_key(|a| self.pairing(&self.rho, &a.coords).expect("dim"))
            .expect("long roots exist")
    }

    /// `Σ c_i ϖ_i`, coefficients 1-based in `coeffs[i-1]`.
    pub fn weight(&self, coeffs: &[i64]) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                v = add(&v, &scale_vec(&self.fundamental_weights[i], r(c)));
            }
        }
        v
    }

    pub fn cartan_transposed(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| self.cartan[j][i]).collect()).collect()
    }

    /// `t(ℓ + h∨)`.
    pub fn period(&self, level: u32) -> u32 {
        self.t_group * (level + self.h_dual)
    }

    /// Expected number of positive roots.
    pub fn expected_positive_count(ty: DynkinType) -> usize {
        let n = ty.rank;
        match ty.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
        }
    }
}

pub(crate) fn rat_to_f64(q: Rat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `sin(π q)` with the argument reduced to `[0, π/2]` first.
pub(crate) fn sin_pi(q: Rat) -> f64 {
    let two = r(2);
    let mut x = q - (q / two).floor() * two; // [0, 2)
    let mut sign = 1.0;
    if x >= Rat::one() {
        x -= Rat::one();
        sign = -1.0;
    }
    if x > Rat::new(1, 2) {
        x = Rat::one() - x;
    }
    if x.is_zero() {
        return 0.0;
    }
    sign * libm::sin(core::f64::consts::PI * rat_to_f64(x))
}
