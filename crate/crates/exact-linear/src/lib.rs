//! Exact linear algebra over the rationals.
//!
//! Everything in this crate is computed with arbitrary-precision rational
//! arithmetic: there is no floating point anywhere and no operation ever
//! rounds. The crate provides the four types the rest of the workspace is
//! built on:
//!
//! - [`Rat`]: an exact rational scalar, always in lowest terms with a
//!   positive denominator.
//! - [`Vector`]: a sparse vector over [`Rat`].
//! - [`Matrix`]: a sparse matrix over [`Rat`] with a deterministic reduced
//!   row echelon form and a Kronecker (tensor) product.
//! - [`Subspace`]: a subspace of ℚ^n held in canonical echelon form, so
//!   that two subspaces are equal exactly when their canonical bases are
//!   identical.
//!
//! # Tensor index convention
//!
//! Every tensor-product basis in this workspace is ordered
//! lexicographically with the **leftmost factor most significant**: for
//! factor dimensions `(m, n)` the pair `(i, j)` sits at flat index
//! `i * n + j`. [`Matrix::kronecker`] realizes linear maps in that
//! convention, so `kron(a, b)` sends `u ⊗ v` to `(a u) ⊗ (b v)` and
//! `kron(a, b) · kron(c, d) = kron(a · c, b · d)` whenever the shapes
//! compose. Higher layers (co-multiplications, iterated co-products,
//! co-generation maps) all index tensor factors through this one
//! convention and never introduce another ordering.
//!
//! # Determinism
//!
//! All canonical forms use a fixed pivot rule (leftmost nonzero column,
//! first row in storage order) and all sparse storage is ordered, so every
//! computation in this crate is a pure function of its inputs.

mod matrix;
mod rational;
mod subspace;
mod vector;

pub use matrix::Matrix;
pub use rational::{binomial, factorial, Rat};
pub use subspace::Subspace;
pub use vector::Vector;

use thiserror::Error;

/// Errors reported by fallible linear-algebra operations.
///
/// Arithmetic operators (`+`, `-`, `*`) panic on shape mismatch like the
/// standard indexing operators do; the fallible API (construction from
/// triples, [`Matrix::solve`], [`Matrix::is_idempotent`], ...) reports
/// through this type instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    /// Two shapes that had to agree did not.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    /// A square matrix was required.
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// An explicit entry lies outside the declared shape.
    #[error("index ({row}, {col}) out of bounds for {rows}x{cols}")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    /// The linear system is inconsistent.
    #[error("linear system has no solution")]
    NoSolution,

    /// A rational literal could not be parsed.
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}
