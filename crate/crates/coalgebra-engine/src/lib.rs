//! Finite-dimensional graded coalgebras over the rationals.
//!
//! A coalgebra here is a finite-dimensional rational vector space `M` with a
//! comultiplication `delta: M -> M (x) M` (stored as a d^2 x d matrix in the
//! tensor convention of `exact-linear`: leftmost factor most significant) and
//! a counit `eps: M -> Q` (a 1 x d row). Axioms, units, reduced
//! comultiplication, coradical filtrations, gradings, strictness,
//! cogeneration, tensor products, invariant subcoalgebras, and a lazy
//! basis-indexed variant for group algebras all live in this crate.
//!
//! Everything is exact rational arithmetic. Iterated tensor powers are the
//! one place dimensions can explode, so every operation that materializes a
//! tensor-power matrix takes a [`TensorCap`] bound and fails with
//! [`CoalgError::TensorCapExceeded`] instead of allocating past it. Operator
//! applications on a single tensor factor are streamed column by column and
//! never materialize `op (x) id^(k)`.

mod coalgebra;
mod cogen;
mod combine;
mod filtration;
mod grading;
mod lazy;
mod space;
mod tensor_ops;

pub use coalgebra::{
    check_axioms, is_unit, iterated_reduced_comult, reduced_comult, unit_projector, AxiomReport,
    Coalgebra, UnitElement,
};
pub use cogen::{
    cogeneration_map, symmetric_embedding, truncated_sym_coalg, truncated_tensor_coalg,
    CogenerationMap, SymBasis, SymmetricEmbedding,
};
pub use combine::{
    adjoin_primitive_line, invariant_subcoalgebra, tensor_coalgebra, InvariantSubcoalgebra,
    TensorProductCoalgebra,
};
pub use filtration::{
    coradical_equals_grading, coradical_filtration, grading_filtration, CoradicalGradingReport,
    Filtration, GradeComparison,
};
pub use grading::{
    check_strict, check_unital_grading, check_unital_grading_with, primitives, GradingReport,
    ProjectorGradingReport, StrictReport,
};
pub use lazy::{lazy_is_unit, lazy_iterated_reduced_comult, LazyCoalgebra, LazyElement, LazyTensor};
pub use space::GradedSpace;
pub use tensor_ops::{factor_swap, tensor_factor_permutation};

use exact_linear::LinearError;
use thiserror::Error;

/// Upper bound on the logical size (rows x cols) of any materialized
/// tensor-power matrix. Streams through single-factor applications are not
/// counted; only matrices actually assembled are.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorCap(pub usize);

impl Default for TensorCap {
    fn default() -> Self {
        TensorCap(200_000)
    }
}

impl TensorCap {
    /// Errors unless a rows x cols matrix fits under the cap. Multiplication
    /// overflow counts as exceeding the cap.
    pub fn admit(self, rows: usize, cols: usize) -> Result<(), CoalgError> {
        match rows.checked_mul(cols) {
            Some(n) if n <= self.0 => Ok(()),
            Some(n) => Err(CoalgError::TensorCapExceeded { needed: n, cap: self.0 }),
            None => Err(CoalgError::TensorCapExceeded { needed: usize::MAX, cap: self.0 }),
        }
    }
}

#[derive(Debug, Error)]
pub enum CoalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("tensor cap exceeded: operation needs a matrix with {needed} logical entries, cap is {cap}")]
    TensorCapExceeded { needed: usize, cap: usize },
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal cross-check failed: {0}")]
    CrossCheckFailed(String),
    #[error("group closure exceeded the cap of {cap} elements")]
    GroupClosureExceeded { cap: usize },
    #[error("map is not a coalgebra automorphism: {0}")]
    NotAutomorphism(String),
    #[error("invalid graded space: {0}")]
    BadSpace(String),
    #[error(transparent)]
    Linear(#[from] LinearError),
}
