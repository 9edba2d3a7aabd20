//! Closed grammar of test functions, vector assembly and parametric sequences.

mod sequence;
mod spec;
mod vector;
mod wire;

pub use sequence::{eval_expr, substitute, SequenceSpec};
pub use spec::{FunctionKind, FunctionSpec, Spike};
pub use vector::{FunctionInput, NormSpec, VectorFunctionSpec};
pub use wire::{FunctionNode, NodeKind, Params};
