use std::time::Instant;

use super::single_linkage_ultrametric;
use crate::error::Result;
use crate::fit::{finish_rooted_fit, ReductionContext, RootedFit};
use crate::metricspace::DistanceMatrix;

/// Gromov's `w`-restricted tree fit, computed as single linkage on
/// `d + c_w` followed by clipping into `[max(β_x, β_y), 2M]` and the shift
/// back by `c_w`.
///
/// `‖d − d_T‖∞ ≤ 2‖Δ_w(d)‖∞·⌈log₂(n − 2)⌉`.
pub fn gromov_tree_fit(d: &DistanceMatrix, w: usize) -> Result<RootedFit> {
    let started = Instant::now();
    let ctx = ReductionContext::new(d, w)?;
    let (u, log) = single_linkage_ultrametric(&ctx.reduced(d));
    finish_rooted_fit("gromov", d, &ctx, u.matrix, log, started)
}
