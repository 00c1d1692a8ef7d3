//! Desk-scale zero-cycle coalgebra models of hyper-Kähler varieties.
//!
//! Three families live here. K3 surfaces: a point line `o` plus primitive
//! classes `a_i` for marked points. Hilbert schemes of `n` points on a K3:
//! the symmetric truncation `Sym^{<=n}` of the primitive space, with point
//! classes, the Voisin level filtration, and the multiplication maps that
//! invert the iterated reduced comultiplication grade by grade. The Fano
//! variety of lines of a cubic fourfold: lines of the second type and
//! triangles, the eigenprojectors of the degree-6 self-map, and a scripted
//! replay of the intersection-table computation that exhibits the factor 2.
//!
//! Every builder verifies its model against the coalgebra-engine suites
//! before returning it; a failure there is a bug, not a data condition.

mod fano;
mod hilb;

pub use fano::{
    build_fano, fano_eigenprojectors, fano_mu_delta_check, FanoModel, MuDeltaReport,
};
pub use hilb::{
    build_hilb, build_k3, hilb_point_class, mu_k, voisin_filtration, voisin_level, HilbModel,
    K3Model, PointSpec,
};

use coalgebra_engine::CoalgError;
use exact_linear::LinearError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unknown primitive label {0:?}")]
    UnknownLabel(String),
    #[error("invalid point specification: {0}")]
    BadSpec(String),
    #[error("malformed triangle: {0}")]
    MalformedTriangle(String),
    #[error("missing intersection table entry: {0}")]
    MissingTableEntry(String),
    #[error("model verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Coalg(#[from] CoalgError),
    #[error(transparent)]
    Linear(#[from] LinearError),
}
