//! Exact and numeric algorithms for Carathéodory numbers of truncated
//! moment problems.
//!
//! The crate is `no_std` and needs only `alloc`. Exact work uses
//! arbitrary-precision rationals (and ℚ(√2) where zero sets demand it);
//! numeric fitting uses `f64`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod basis;
pub mod bounds;
pub mod cert;
pub mod condition;
pub mod error;
pub mod fit;
pub mod flow;
pub mod geometry;
pub mod mass;
pub mod matrix;
pub mod measure;
pub mod nm;
pub mod poly;
pub mod ranklab;
pub mod scalar;
pub mod schur;
pub mod waring;

pub use basis::{Basis, BasisKind};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use measure::{AtomicMeasure, MomentSeq};
pub use poly::{Monomial, Poly};
pub use scalar::{QuadExt, Rational, Ring, Scalar};
