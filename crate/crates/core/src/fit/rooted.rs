use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{construct_rooted_tree, hcc_ultra_fit, ReductionContext, WeightedTree};
use crate::baselines::single_linkage_ultrametric;
use crate::error::{Error, Result};
use crate::hcc::MergeLog;
use crate::metricspace::{hyperbolicity_l1, DistanceMatrix};
use crate::report::FitReport;

/// A `w`-restricted tree fit.
#[derive(Debug, Clone)]
pub struct RootedFit {
    pub base: usize,
    pub tree: WeightedTree,
    /// `d_T = d_U − c_w` on the original points.
    pub d_t: DistanceMatrix,
    /// The ultrametric on `d + c_w` the tree was built from.
    pub reduced_fit: DistanceMatrix,
    /// Whether entries had to be clipped into `[max(β_x, β_y), 2M]`.
    pub clipped: bool,
    pub report: FitReport,
}

/// Shared tail of the rooted fits: clip if needed, build the tree, map back.
pub(crate) fn finish_rooted_fit(
    algorithm: &str,
    d: &DistanceMatrix,
    ctx: &ReductionContext,
    d_u: DistanceMatrix,
    log: MergeLog,
    started: Instant,
) -> Result<RootedFit> {
    let (d_u, log, clipped) = if ctx.no_clip_holds(&d_u, 0.0) {
        (d_u, log, false)
    } else {
        let clipped = ctx.clip(&d_u);
        let (_, relinked) = single_linkage_ultrametric(&clipped);
        (clipped, relinked, true)
    };
    let tree = construct_rooted_tree(&log, ctx)?;
    let d_t = ctx.unreduce(&d_u);
    let elapsed = started.elapsed().as_secs_f64();
    let report = FitReport::from_matrices(algorithm, d, &d_t)
        .with_base(ctx.base())
        .with_time(elapsed);
    Ok(RootedFit {
        base: ctx.base(),
        tree,
        d_t,
        reduced_fit: d_u,
        clipped,
        report,
    })
}

/// Rooted tree fit at base `w`: ultrametric fit of `d + c_w` by hierarchical
/// correlation clustering, shifted back by `c_w`.
///
/// `d_T(w, x) = d(w, x)` for every `x` and `‖d − d_T‖₁ ≤ 8‖Δ_w(d)‖₁`.
pub fn hcc_rooted_tree_fit(d: &DistanceMatrix, w: usize) -> Result<RootedFit> {
    let started = Instant::now();
    let ctx = ReductionContext::new(d, w)?;
    let (u, log) = hcc_ultra_fit(&ctx.reduced(d));
    finish_rooted_fit("hcc", d, &ctx, u.matrix, log, started)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseStrategy {
    /// Base whose fit has the smallest ℓ1 error.
    #[default]
    MinError,
    /// Base with the smallest `‖Δ_w(d)‖₁`.
    MinHypL1,
}

/// Rooted fit at the best base point; ties go to the smallest index.
///
/// Either strategy satisfies `‖d − d_T‖₁ ≤ 8·C(n−1,3)·AvgHyp₁(d)`.
pub fn best_base_tree_fit(d: &DistanceMatrix, strategy: BaseStrategy) -> Result<RootedFit> {
    if d.n() == 0 {
        return Err(Error::InvalidArgument("no points".into()));
    }
    let started = Instant::now();
    let scores: Vec<f64> = (0..d.n())
        .into_par_iter()
        .map(|w| match strategy {
            BaseStrategy::MinError => hcc_rooted_tree_fit(d, w).map(|f| f.report.l1_total),
            BaseStrategy::MinHypL1 => hyperbolicity_l1(d, w),
        })
        .collect::<Result<_>>()?;
    let best = (0..d.n())
        .min_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)))
        .unwrap();
    let mut fit = hcc_rooted_tree_fit(d, best)?;
    fit.report.algorithm = "hcc-best".into();
    fit.report.wall_time_seconds = started.elapsed().as_secs_f64();
    Ok(fit)
}
