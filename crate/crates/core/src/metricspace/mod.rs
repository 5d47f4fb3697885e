//! Metric data types and hyperbolicity / ultrametricity statistics.

mod matrix;
mod stats;
mod triangles;

pub use matrix::{binomial, DistanceMatrix, LOAD_TOLERANCE};
pub use stats::{
    four_point, gromov_product, hyp_stats, hyp_stats_with_limit, hyperbolicity_l1,
    hyperbolicity_linf, hyperbolicity_vector, three_point, ultrametricity_vector, HypStats,
    HypVector, StatsMode, EXACT_TUPLE_LIMIT,
};
pub use triangles::{bad_triangle_set, bad_triangles, integral_bad_triangles};
