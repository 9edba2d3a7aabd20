//! Tagged sub-partitions of an interval, the weighted measure on it, and
//! Riemann sums.

mod generate;
mod measure;
mod tagged;

pub use generate::{generate_partitions, PartitionStream, Strategy, TagRule};
pub use measure::{MeasureSpec, WeightedMeasure};
pub use tagged::{TaggedCell, TaggedPartition};
