//! Generalized Young functions, the modular built on the gauge integral, the
//! Luxemburg-type norm and the embedding comparisons.

mod axioms;
mod embedding;
mod luxemburg;
mod modular;
mod theta;

pub use axioms::{
    check_nfunction_axioms, AxiomReport, AxiomVerdict, AxiomViolation, Condition, ConditionReport,
};
pub use embedding::{embedding_report, EmbeddingReport};
pub use luxemburg::{luxemburg_norm, luxemburg_norm_detailed, LuxemburgResult, K_LIMIT_EXP};
pub use modular::{
    default_k_grid, h_orlicz_membership, modular, modular_convexity_check, modular_scaled,
    modular_with, Composed, ConvexityVerdict, ExtValue, MembershipReport, MembershipVerdict,
};
pub use theta::{AxiomWitnesses, ThetaFamily, YoungFunctionSpec};

/// `theta(t, x)` for a coordinate vector under `norm`.
pub fn theta_eval<T: crate::Scalar>(
    theta: &YoungFunctionSpec,
    t: T,
    x: &[T],
    norm: &crate::NormSpec,
) -> crate::Result<T> {
    theta.eval(t, x, norm)
}
