//! Hierarchical correlation clustering with triangle objectives.

mod engine;
mod linkage;
mod ordering;
mod partition;

pub use engine::{hcc_triangle, is_highly_connected, HccEngine};
pub use linkage::{MergeLog, MergeRow};
pub use ordering::EdgeOrdering;
pub use partition::{partition_at, PartitionView};
