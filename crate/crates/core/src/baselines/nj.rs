use std::time::Instant;

use crate::error::Result;
use crate::fit::WeightedTree;
use crate::metricspace::DistanceMatrix;
use crate::report::FitReport;

#[derive(Debug, Clone)]
pub struct NjFit {
    pub tree: WeightedTree,
    pub d_t: DistanceMatrix,
    pub report: FitReport,
    /// Edges whose negative branch length was reset to 0.
    pub clamped_edges: usize,
}

/// Saitou–Nei neighbor joining, naive `O(n³)`.
///
/// Each round joins the pair minimizing
/// `Q(i, j) = (m − 2)·d(i, j) − r_i − r_j` (ties by smallest node ids)
/// through a new internal node. Negative branch lengths are kept during
/// agglomeration and set to 0 only in the final tree.
pub fn neighbor_join(d: &DistanceMatrix) -> Result<NjFit> {
    let started = Instant::now();
    let n = d.n();
    // slot -> node id; the matrix is indexed by slot and reused in place.
    let mut node: Vec<usize> = (0..n).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut dist: Vec<f64> = d.as_slice().to_vec();
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * n);
    let mut next = n;

    while active.len() > 2 {
        let m = active.len();
        let r: Vec<f64> = active
            .iter()
            .map(|&a| active.iter().map(|&b| dist[a * n + b]).sum())
            .collect();
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for p in 0..m {
            for q in (p + 1)..m {
                let (a, b) = (active[p], active[q]);
                let qv = (m - 2) as f64 * dist[a * n + b] - r[p] - r[q];
                let key = (node[a].min(node[b]), node[a].max(node[b]));
                let better = match best {
                    None => true,
                    Some((bv, _, _, ka, kb)) => qv < bv || qv == bv && key < (ka, kb),
                };
                if better {
                    best = Some((qv, p, q, key.0, key.1));
                }
            }
        }
        let (_, p, q, _, _) = best.expect("at least three taxa");
        let (a, b) = (active[p], active[q]);
        let dab = dist[a * n + b];
        let da = dab / 2.0 + (r[p] - r[q]) / (2.0 * (m - 2) as f64);
        let db = dab - da;
        let u = next;
        next += 1;
        edges.push((node[a], u, da));
        edges.push((node[b], u, db));
        // slot a becomes u
        for &k in &active {
            if k != a && k != b {
                let v = (dist[a * n + k] + dist[b * n + k] - dab) / 2.0;
                dist[a * n + k] = v;
                dist[k * n + a] = v;
            }
        }
        node[a] = u;
        active.remove(q);
    }
    if let [a, b] = active[..] {
        edges.push((node[a], node[b], dist[a * n + b]));
    }

    let mut clamped_edges = 0;
    for e in &mut edges {
        if e.2 < 0.0 {
            e.2 = 0.0;
            clamped_edges += 1;
        }
    }
    let tree = WeightedTree::new(n.max(1), next.max(1), edges, None)?;
    let d_t = tree.path_metric();
    let report = FitReport::from_matrices("nj", d, &d_t).with_time(started.elapsed().as_secs_f64());
    Ok(NjFit {
        tree,
        d_t,
        report,
        clamped_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points_fit_exactly() {
        let d = DistanceMatrix::from_fn(3, |i, j| [[0., 3., 4.], [3., 0., 5.], [4., 5., 0.]][i][j]);
        let fit = neighbor_join(&d).unwrap();
        assert!(fit.report.l1_total < 1e-12);
        assert_eq!(fit.clamped_edges, 0);
        assert_eq!(fit.tree.num_nodes(), 4);
    }

    #[test]
    fn trivial_sizes() {
        let one = neighbor_join(&DistanceMatrix::zeros(1)).unwrap();
        assert_eq!(one.tree.num_nodes(), 1);
        let two = neighbor_join(&DistanceMatrix::from_fn(2, |_, _| 2.5)).unwrap();
        assert_eq!(two.d_t.get(0, 1), 2.5);
    }

    #[test]
    fn additive_metrics_are_recovered() {
        for seed in 0..10 {
            let d = crate::graphs::random::weighted_tree_metric(15, seed);
            let fit = neighbor_join(&d).unwrap();
            assert!(fit.report.l1_total < 1e-9, "seed {seed}: {}", fit.report.l1_total);
        }
    }
}
