//! r-characteristic polynomials of matrices and their paving sums.
//!
//! The crate computes the cycle-weighted determinant `det_r` by three
//! independent routes, the r-characteristic polynomial
//! `chi_r[A] = det_r[xI - A]`, enumerates matrix pavings and checks that
//! their characteristic polynomials sum to `chi_r`, evaluates barrier-method
//! root bounds, and tests real stability of multiaffine polynomials.
//!
//! Arithmetic is generic over [`scalar::Scalar`]: exact Gaussian rationals
//! for identity checks, `Complex64` for numerics.

pub mod barrier;
pub mod error;
pub mod linalg;
pub mod paving;
pub mod poly;
pub mod random;
pub mod rdet;
pub mod scalar;
pub mod stability;

pub use error::{Error, Result};
pub use linalg::{HermitianMatrix, IndexMultiset, Matrix, Mode, Paving};
pub use poly::{Multilinear, Poly, UniPoly};
pub use scalar::{GaussRational, Ring, Scalar};
