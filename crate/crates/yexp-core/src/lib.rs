//! Level-2 Dynkin quivers of classical type, their mutation loops, the
//! restricted Q/Y-systems at level 2 and the spectrum of the loop Jacobian at
//! the positive fixed point.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

#[cfg(test)]
extern crate std;

extern crate alloc;

mod error;
pub mod linalg;
pub mod qsys;
pub mod quiver;
pub mod rootsys;
pub mod spectral;
pub mod tol;
pub mod yseed;
pub mod ysys;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use rootsys::{DynkinType, Family, RootSystem};
