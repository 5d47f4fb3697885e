//! Ultrametric and rooted tree fitting.
//!
//! A rooted fit at base point `w` works on the reduced matrix
//! `d + c_w = 2(M − gp_w)`, where `M = max_x d(x, w)`: any ultrametric fit
//! `d_U` of the reduced matrix whose entries lie in `[max(β_x, β_y), 2M]`
//! maps back to a tree metric `d_U − c_w` that keeps every distance to `w`.

mod reduction;
mod rooted;
mod tree;
mod ultra;

pub use reduction::{restrict_reduced_ultrametric, ReductionContext};
pub use rooted::{best_base_tree_fit, hcc_rooted_tree_fit, BaseStrategy, RootedFit};
pub(crate) use rooted::finish_rooted_fit;
pub use tree::{construct_rooted_tree, dendrogram_tree, tree_path_metric, WeightedTree};
pub use ultra::{hcc_ultra_fit, Ultrametric};
