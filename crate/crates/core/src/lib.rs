//! Fitting ultrametrics and rooted tree metrics to finite metric spaces.
//!
//! The central pipeline is hierarchical correlation clustering over the
//! pairs of points sorted by distance ([`hcc`]), which yields an
//! ultrametric whose total (ℓ1) error is bounded by four times the ℓ1 norm
//! of the ultrametricity vector. Shifting by the per-base-point offsets
//! `c_w` turns the same procedure into a rooted tree fit bounded by eight
//! times the ℓ1 norm of the hyperbolicity vector ([`fit`]).
//!
//! Supporting modules:
//!
//! - [`metricspace`]: distance matrices, Gromov products, the three/four
//!   point conditions, hyperbolicity statistics and bad-triangle counts.
//! - [`baselines`]: single linkage, Gromov's tree fit and neighbor joining.
//! - [`graphs`]: edge lists, shortest paths, balanced trees and the
//!   synthetic perturbation generator.
//! - [`oracle`]: brute-force verifiers used by tests.
//! - [`report`]: error metrics and benchmark summaries.

pub mod baselines;
pub mod error;
pub mod fit;
pub mod graphs;
pub mod hcc;
pub mod metricspace;
pub mod oracle;
pub mod report;
pub mod unionfind;

pub use error::{Error, Result};
pub use fit::{
    best_base_tree_fit, hcc_rooted_tree_fit, hcc_ultra_fit, BaseStrategy, ReductionContext,
    RootedFit, Ultrametric, WeightedTree,
};
pub use hcc::{hcc_triangle, EdgeOrdering, MergeLog, MergeRow, PartitionView};
pub use metricspace::{DistanceMatrix, HypStats, HypVector, StatsMode};
pub use report::{BenchSummary, FitReport};
