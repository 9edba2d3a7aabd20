//! Gauge (Henstock-Kurzweil) integration of vector-valued functions on a
//! compact interval, the H-Orlicz modular and Luxemburg-type norm built on it,
//! and analyzers for modular versus norm convergence of function sequences.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the usual `f64` instantiation.

pub mod catalog;
pub mod convergence;
pub mod error;
pub mod orlicz;
pub mod partition;
pub mod quadrature;
mod scalar;

pub use catalog::{FunctionSpec, NormSpec, SequenceSpec, VectorFunctionSpec};
pub use error::{Error, Result};
pub use orlicz::{ExtValue, YoungFunctionSpec};
pub use quadrature::{Backend, Status};
pub use scalar::Scalar;

pub type Measure = partition::WeightedMeasure<f64>;
pub type Cell = partition::TaggedCell<f64>;
pub type Partition = partition::TaggedPartition<f64>;
pub type Quadrature = quadrature::QuadratureConfig<f64>;
pub type Integral = quadrature::IntegralResult<f64>;
pub type Modular = orlicz::ExtValue<f64>;
pub type Membership = orlicz::MembershipReport<f64>;
pub type Embedding = orlicz::EmbeddingReport<f64>;
pub type Report = convergence::ConvergenceReport<f64>;

pub type Measure32 = partition::WeightedMeasure<f32>;
pub type Partition32 = partition::TaggedPartition<f32>;
pub type Quadrature32 = quadrature::QuadratureConfig<f32>;
pub type Integral32 = quadrature::IntegralResult<f32>;
