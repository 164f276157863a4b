//! Exact F-polynomials, g-vectors and quantum F-polynomials for cluster
//! algebras of classical type with acyclic initial exchange matrix.
//!
//! - [`exchange`]: exchange matrices, mutation, quivers, Cartan types, roots
//! - [`poly`]: sparse Laurent polynomials and the quantum torus
//! - [`oracle`]: principal-coefficient seed mutation and finite-type enumeration
//! - [`formulas`]: closed combinatorial formulas (classical and quantum)
//! - [`folding`]: quotient matrices, orbit mutation and projections
//! - [`polygon`]: the centrally symmetric polygon model for types B and C
//! - [`verify`]: differential suites comparing the above against each other
//! - [`input`]: the matrix JSON input format
//!
//! Vertex and direction indices are 0-based throughout the Rust API. The
//! JSON formats and the command line use 1-based labels.

pub mod error;
pub mod exchange;
pub mod folding;
pub mod formulas;
pub mod input;
pub mod oracle;
pub mod polygon;
pub mod poly;
pub mod verify;

pub use error::{Error, Result};
