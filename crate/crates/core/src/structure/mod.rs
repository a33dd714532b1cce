//! Factorization of trivial-reduction modifications and extension of
//! generic retracts.

mod factor;
mod retract;

pub use factor::{
    factor_trivial_modification, nil_ratio_divisor, Factorization, ModificationPath, PathStep,
};
pub use retract::{
    extend_retract, retract_invariant, retract_invariants, trivial_generic_retract, Retract,
    RetractExtension,
};
