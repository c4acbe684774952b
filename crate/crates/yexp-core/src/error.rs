use alloc::string::String;

use crate::rootsys::Family;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("rank {rank} is out of range for type {family} (need {min} or more)")]
    InvalidRank { family: Family, rank: usize, min: usize },

    #[error("unknown family {0:?}, expected one of A, B, C, D")]
    UnknownFamily(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("vertex {vertex} out of range for a quiver with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("arrows {i}->{j} and {j}->{i} both present or loop at a vertex")]
    NotAQuiver { i: usize, j: usize },

    #[error("map is not a permutation of 0..{n}")]
    NotAPermutation { n: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("pole at vertex {vertex} (mutation step {step})")]
    Pole { vertex: usize, step: usize },

    #[error("mutation loop property violated for {0}")]
    LoopViolated(String),

    #[error("index ({i},{m}) outside the admissible range")]
    IndexOutOfRange { i: usize, m: usize },

    #[error("vanishing denominator in q-dimension at positive root #{root}")]
    VanishingDenominator { root: usize },

    #[error("G-coefficient calibration failed: {0}")]
    Calibration(String),

    #[error("fixed point check failed: residual {residual:e} at vertex {vertex}")]
    FixedPoint { residual: f64, vertex: usize },

    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("non-positive value {value} at ({i},{m})")]
    NonPositive { i: usize, m: usize, value: f64 },

    #[error("singular matrix")]
    Singular,

    #[error("{0}")]
    Domain(String),
}
