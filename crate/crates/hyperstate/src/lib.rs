//! Multi-qubit hypergraph states.
//!
//! A hypergraph on `n` vertices defines an `n`-qubit state: apply the
//! controlled-phase gate `C_e` for every hyperedge `e` to `|+>^n`. This
//! crate provides the combinatorial rewrite calculus for local Pauli
//! operations on hypergraphs, dense state vectors, the nonlocal stabilizer
//! group, entanglement measures, exhaustive equivalence-class enumeration,
//! a local-unitary equivalence decision based on unique standard forms,
//! and stabilizer-based noncontextuality and Bell inequalities.

pub mod classify;
pub mod entanglement;
pub mod hypergraph;
pub mod luequiv;
pub mod nonclassical;
pub mod rng;
pub mod stabilizer;
pub mod statevec;

pub(crate) mod dense;

pub use classify::{ClassInvariants, OrbitRecord};
pub use entanglement::{Bipartition, GeoConfig, HermitianMatrix};
pub use hypergraph::{EdgeMask, Hypergraph, Permutation};
pub use stabilizer::StabilizerElement;
pub use statevec::{LocalUnitary, StateVector};

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("edge mask {mask:#x} out of range for n = {n}")]
    EdgeOutOfRange { mask: u32, n: usize },
    #[error("vertex count {0} outside supported range 1..=16")]
    BadVertexCount(usize),
    #[error("dense operations are capped at n <= {cap}, got n = {n}")]
    DenseCap { n: usize, cap: usize },
    #[error("malformed permutation: {0}")]
    BadPermutation(String),
    #[error("duplicate edge {0:?} in input")]
    DuplicateEdge(Vec<usize>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix is not hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
