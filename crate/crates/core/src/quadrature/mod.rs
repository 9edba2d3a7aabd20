//! Gauss-Kronrod rules, the adaptive gauge integrator and the integral norms
//! built on Riemann sums.

mod integrand;
mod integrator;
mod norms;
mod oracle;
mod rules;

pub use integrand::{Integrand, Raw, ScalarFn};
pub use integrator::{
    hk_integrate, integrate, integrate_over, integrate_regular, Backend, IntegralResult,
    QuadratureConfig, Status,
};
pub use norms::{
    alexiewicz_norm, sup_riemann_norm, sup_riemann_norm_with, SupNormConfig, SupNormEstimate,
};
pub use oracle::{refinement_oracle, MAX_ORACLE_DEPTH};
pub use rules::{KronrodPair, GK15, GK21};
