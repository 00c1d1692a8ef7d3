//! Zero-cycle models of abelian varieties.
//!
//! Two deliberately different representations. The untruncated group
//! algebra of `Z^r` carries the convolution (Pontryagin) product and the
//! group-like comultiplication `Delta[x] = [x] (x) [x]`; every point class
//! is a genuine unit there, and the iterated reduced comultiplication of a
//! point expands sparsely to a tensor power of `[x] - [0]`. The truncated
//! model `Sym^{<=g}` of a space of log-classes carries the binomial
//! comultiplication and a truncated symmetric multiplication; kernels and
//! filtrations are finite computations there, with the Beauville pieces
//! realized as divided powers of logs.
//!
//! The quotient of the group algebra by the (g+1)-st power of the
//! augmentation ideal is not a coalgebra (the comultiplication does not
//! preserve the ideal), which is why no single finite object carries both
//! structures.

mod group_algebra;
mod truncated;

pub use group_algebra::{
    eq_redcomult_grouplike, lazy_group_coalgebra, pontryagin, GroupAlgebraElement, GrouplikeReport,
};
pub use truncated::{
    beauville_component, beauville_component_of_log, build_truncated_abelian, dm_projector,
    exp_trunc, exterior_power_vanishing, log_point, log_trunc, log_vector, mult_by_m, point_class,
    pontryagin_power, pontryagin_trunc, coradical_vs_beauville, ExteriorPowerReport,
    TruncatedAbelianModel,
};

use coalgebra_engine::CoalgError;
use exact_linear::LinearError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AbelianError {
    #[error("bad model parameters: {0}")]
    BadParams(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("multiplication by {0} does not separate the grades")]
    ForbiddenMultiplier(i64),
    #[error("element is not in the expected augmentation coset: {0}")]
    NotAugmented(String),
    #[error("model verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Coalg(#[from] CoalgError),
    #[error(transparent)]
    Linear(#[from] LinearError),
}
