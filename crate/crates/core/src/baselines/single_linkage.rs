use crate::fit::Ultrametric;
use crate::hcc::{EdgeOrdering, MergeLog, MergeRow};
use crate::metricspace::DistanceMatrix;
use crate::unionfind::DisjointSet;

/// Subdominant ultrametric by Kruskal-style single linkage over the pairs
/// sorted by distance (ties by `(i, j)`): every pair that joins two
/// clusters is a merge.
///
/// `d_U ≤ d` entrywise, and `d_U(x, y)` is the minimax path distance.
pub fn single_linkage_ultrametric(d: &DistanceMatrix) -> (Ultrametric, MergeLog) {
    let n = d.n();
    let order = EdgeOrdering::by_distance(d);
    let weights = order.weights().expect("distance orderings are weighted");
    let mut ds = DisjointSet::new(n);
    let mut id_of_root: Vec<usize> = (0..n).collect();
    let mut rows = Vec::with_capacity(n.saturating_sub(1));
    for (t, &(x, y)) in order.pairs().iter().enumerate() {
        let (rx, ry) = (ds.find(x), ds.find(y));
        if rx == ry {
            continue;
        }
        let (a, b) = (id_of_root[rx], id_of_root[ry]);
        let size = ds.set_size(rx) + ds.set_size(ry);
        let root = ds.union(rx, ry).expect("distinct roots");
        id_of_root[root] = n + rows.len();
        rows.push(MergeRow {
            id_a: a.min(b),
            id_b: a.max(b),
            height: weights[t],
            size,
            step: t + 1,
        });
        if rows.len() + 1 == n {
            break;
        }
    }
    let log = MergeLog::new(n.max(1), rows).expect("single linkage log is valid");
    let matrix = if n == 0 { DistanceMatrix::zeros(0) } else { log.ultrametric() };
    (
        Ultrametric {
            matrix,
            log: Some(log.clone()),
        },
        log,
    )
}
