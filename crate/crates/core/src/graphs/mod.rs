//! Graph ingestion, shortest paths and synthetic generators.

mod graph;
mod paths;
pub mod random;
mod synthetic;

pub use graph::{largest_component, parse_edge_list, Graph};
pub use paths::shortest_path_matrix;
pub use synthetic::{balanced_tree, perturb_tree, SyntheticSpec};
