//! Finite combinatorial stand-ins for varieties with their groups of
//! zero-cycles, multiplicity-weighted covers between them, and the transport
//! of coalgebra structure along such covers.
//!
//! A [`FiniteVariety`] is a labeled point set together with declared
//! rational-equivalence relations; its `CH0` is the quotient of the free
//! rational span by those relations, with a computed basis of point classes.
//! A [`Cover`] is a correspondence with generically-finite projections to
//! both sides, modeled as maps with per-point multiplicities whose fiber
//! sums are constant. Pushing a point forward takes it to its image point;
//! pulling a point back spreads it over the fiber with multiplicities, so
//! the projection formula holds on the nose.
//!
//! The two fiber conditions (pointwise: fibers of one projection have
//! rationally equivalent images under the other; operator-level: the
//! composite of pushforwards and pullbacks collapses to a degree multiple)
//! are equivalent, and every checker here computes both and insists they
//! agree.

mod cover;
mod transport;
mod variety;

pub use cover::{
    check_condition_i, check_condition_ii, comult_square, fiber_compose, gamma_maps,
    ComultSquareReport, ConditionReport, Cover, FiberWitness, GammaMaps, Side,
};
pub use transport::{transport_grading, zero_cycle_coalgebra, TransportReport};
pub use variety::{product_variety, FiniteVariety};

use coalgebra_engine::CoalgError;
use exact_linear::LinearError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IncidenceError {
    #[error("malformed variety: {0}")]
    BadVariety(String),
    #[error("malformed cover: {0}")]
    BadCover(String),
    #[error("fiber degrees disagree: {0}")]
    FiberDegreeMismatch(String),
    #[error("map does not send declared relations into relations: {0}")]
    RelationNotPreserved(String),
    #[error("fiber condition fails: {0}")]
    ConditionFails(String),
    #[error("product of {needed} points exceeds the cap of {cap}")]
    ProductTooLarge { needed: usize, cap: usize },
    #[error("map is not invertible: {0}")]
    NotInvertible(String),
    #[error("map is not a coalgebra morphism: {0}")]
    NotCoalgebraMorphism(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Coalg(#[from] CoalgError),
    #[error(transparent)]
    Linear(#[from] LinearError),
}
