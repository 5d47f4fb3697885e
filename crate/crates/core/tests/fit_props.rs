mod common;

use proptest::prelude::*;
use treefit::fit::{restrict_reduced_ultrametric, tree_path_metric};
use treefit::metricspace::{binomial, hyp_stats, hyperbolicity_l1};
use treefit::oracle::{
    hyperbolicity_l1_by_enumeration, ultrametricity_l1_by_enumeration, verify_tree_metric,
    verify_ultrametric,
};
use treefit::{
    best_base_tree_fit, hcc_rooted_tree_fit, hcc_ultra_fit, BaseStrategy, DistanceMatrix,
    ReductionContext, StatsMode,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ultra_fit_is_ultrametric_within_bound(d in common::dissimilarity(3..=25)) {
        let (u, log) = hcc_ultra_fit(&d);
        prop_assert!(verify_ultrametric(&u.matrix, 1e-9).passed);
        prop_assert!(log.heights_nondecreasing());
        prop_assert_eq!(&log.ultrametric(), &u.matrix);
        let err = d.l1_distance(&u.matrix);
        prop_assert!(err <= 4.0 * ultrametricity_l1_by_enumeration(&d) + 1e-9);
    }

    #[test]
    fn rooted_fit_properties(d in common::metric(2..=14), w_pick in any::<prop::sample::Index>()) {
        let w = w_pick.index(d.n());
        let fit = hcc_rooted_tree_fit(&d, w).unwrap();
        prop_assert!(!fit.clipped);
        let ctx = ReductionContext::new(&d, w).unwrap();
        prop_assert!(ctx.no_clip_holds(&fit.reduced_fit, 0.0));
        prop_assert!(verify_tree_metric(&fit.d_t, 1e-9).passed);
        for x in 0..d.n() {
            prop_assert_eq!(fit.d_t.get(w, x), d.get(w, x));
        }
        prop_assert!(tree_path_metric(&fit.tree).linf_distance(&fit.d_t) < 1e-9);
        let err = d.l1_distance(&fit.d_t);
        prop_assert!(err <= 8.0 * hyperbolicity_l1_by_enumeration(&d, w) + 1e-9);
        // Clipping an admissible fit changes nothing.
        prop_assert_eq!(&restrict_reduced_ultrametric(&fit.reduced_fit, &ctx).unwrap(), &fit.reduced_fit);
    }

    #[test]
    fn rooted_fit_on_non_metric_input(d in common::dissimilarity(3..=12), w_pick in any::<prop::sample::Index>()) {
        let w = w_pick.index(d.n());
        let fit = hcc_rooted_tree_fit(&d, w).unwrap();
        prop_assert!(verify_tree_metric(&fit.d_t, 1e-9).passed);
        for x in 0..d.n() {
            prop_assert_eq!(fit.d_t.get(w, x), d.get(w, x));
        }
        prop_assert!(tree_path_metric(&fit.tree).linf_distance(&fit.d_t) < 1e-9);
    }

    #[test]
    fn best_base_strategies(d in common::metric(4..=12)) {
        let n = d.n() as u64;
        let by_error = best_base_tree_fit(&d, BaseStrategy::MinError).unwrap();
        let by_hyp = best_base_tree_fit(&d, BaseStrategy::MinHypL1).unwrap();
        let avg = hyp_stats(&d, 1.0, StatsMode::Exact).unwrap().avg_hyp_1;
        let global = 8.0 * binomial(n - 1, 3) as f64 * avg;
        prop_assert!(by_error.report.l1_total <= by_hyp.report.l1_total + 1e-9);
        prop_assert!(by_hyp.report.l1_total <= global + 1e-9);
        let min_l1 = (0..d.n()).map(|w| hyperbolicity_l1(&d, w).unwrap()).fold(f64::INFINITY, f64::min);
        prop_assert!(min_l1 <= binomial(n - 1, 3) as f64 * avg + 1e-9);
    }

    #[test]
    fn clipping_never_increases_error(d in common::metric(3..=12), noise in proptest::collection::vec(0.0f64..3.0, 78)) {
        let n = d.n();
        let ctx = ReductionContext::new(&d, 0).unwrap();
        let target = ctx.reduced(&d);
        // Perturb the admissible fit by scaling its merge heights.
        let (u, _) = hcc_ultra_fit(&target);
        let scale = 0.25 + noise[0];
        let perturbed = DistanceMatrix::from_fn(n, |i, j| u.matrix.get(i, j) * scale);
        let clipped = restrict_reduced_ultrametric(&perturbed, &ctx).unwrap();
        prop_assert!(verify_ultrametric(&clipped, 1e-9).passed);
        for (i, j, v) in clipped.pairs() {
            let t = target.get(i, j);
            prop_assert!((v - t).abs() <= (perturbed.get(i, j) - t).abs() + 1e-9);
        }
        prop_assert!(verify_tree_metric(&ctx.unreduce(&clipped), 1e-9).passed);
    }
}

#[test]
fn tree_metrics_are_fixed_points_of_every_fit() {
    for seed in 0..5 {
        let d = treefit::graphs::random::integer_graph_metric(12, 0.0, seed);
        let (u, _) = hcc_ultra_fit(&d);
        assert!(u.matrix.l1_distance(&d) <= 4.0 * ultrametricity_l1_by_enumeration(&d));
        for w in 0..12 {
            assert_eq!(hcc_rooted_tree_fit(&d, w).unwrap().d_t, d);
        }
    }
}

#[test]
fn worked_examples() {
    let (u, _) = hcc_ultra_fit(&common::six_point());
    assert_eq!(u.matrix.get(0, 2), 7.0);
    let fit = hcc_rooted_tree_fit(&common::seven_point(), 0).unwrap();
    assert_eq!(fit.d_t.get(1, 3), 4.0);
    assert_eq!(fit.d_t.get(4, 6), 3.0);
}
