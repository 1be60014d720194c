//! Classification machinery for isodual Euclidean lattices of rank ≤ 7.
//!
//! A unimodular integer matrix `F` represents an isodual type exactly when
//! `F·F^∨` has finite order (`F^∨` is the transpose-inverse).  This crate
//! implements the algebra around that criterion — exact integer/rational
//! linear algebra, type composition and canonical decomposition, real
//! signatures — together with the geometry of the Gram-matrix varieties
//! `V_F = {A : A F^∨ A = F}`: explicit parametrizations, tangent spaces,
//! length gradients, shortest-vector enumeration and local density
//! certification, plus a catalog of the known types of rank ≤ 7 with
//! machine-checkable table data.

pub mod catalog;
pub mod density;
pub mod error;
pub mod exact;
pub mod expr;
pub mod geometry;
pub mod realtypes;
pub mod types;

pub use error::{Error, Result};
pub use exact::{IntMat, IntPoly, RatMat};
