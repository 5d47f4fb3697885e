use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{shortest_path_matrix, Graph};
use crate::error::{Error, Result};

/// Largest vertex count the generators will produce.
pub const MAX_GENERATED_VERTICES: usize = 1 << 24;

/// Rejected draws allowed per accepted edge before giving up.
const MAX_ATTEMPTS: usize = 1_000_000;

/// Complete `r`-ary tree of height `h` with unit edges. Vertices are
/// numbered breadth first from the apex 0, so the children of `k` are
/// `k·r + 1 ..= k·r + r`.
pub fn balanced_tree(r: usize, h: u32) -> Result<Graph> {
    if r < 2 || h < 1 {
        return Err(Error::InvalidArgument(format!("balanced tree needs r >= 2 and h >= 1, got r={r}, h={h}")));
    }
    let n = r
        .checked_pow(h + 1)
        .map(|p| (p - 1) / (r - 1))
        .filter(|&n| n <= MAX_GENERATED_VERTICES)
        .ok_or_else(|| Error::InvalidArgument(format!("balanced tree ({r}, {h}) is too large")))?;
    let edges = (1..n).map(|v| ((v - 1) / r, v, 1.0)).collect();
    Graph::new(n, edges)
}

/// Parameters of the shortcut-edge perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    /// Number of edges to add.
    pub n_e: usize,
    pub delta: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_e: 500,
            delta: 0.1,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidArgument(format!("delta must be positive, got {}", self.delta)));
        }
        Ok(())
    }
}

/// Adds `spec.n_e` shortcut edges to a tree.
///
/// Vertex pairs are drawn uniformly and independently; a draw is rejected
/// when its distance in the original tree is at most 2 or the edge already
/// exists. An accepted pair `(v, w)` gets an edge of weight
/// `d_T(v, w) − 2δ`, where `d_T` is always the unperturbed tree metric.
pub fn perturb_tree(tree: &Graph, spec: &SyntheticSpec) -> Result<Graph> {
    spec.validate()?;
    let n = tree.n();
    if n == 0 || tree.edges().len() != n - 1 || !tree.is_connected() {
        return Err(Error::InvalidGraph("perturbation input must be a tree".into()));
    }
    let mut edges = tree.edges().to_vec();
    if spec.n_e == 0 {
        return Graph::with_labels(n, edges, tree.labels().to_vec());
    }
    let d_t = shortest_path_matrix(tree)?;
    let mut present: HashSet<(usize, usize)> =
        edges.iter().map(|&(u, v, _)| (u.min(v), u.max(v))).collect();
    if !d_t.pairs().any(|(i, j, v)| v > 2.0 && !present.contains(&(i, j))) {
        return Err(Error::InvalidGraph("tree has no pair at distance greater than 2".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for added in 0..spec.n_e {
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > MAX_ATTEMPTS {
                return Err(Error::InvalidGraph(format!(
                    "no eligible pair found after {MAX_ATTEMPTS} draws ({added} edges added)"
                )));
            }
            let (v, w) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let key = (v.min(w), v.max(w));
            if v == w || d_t.get(v, w) <= 2.0 || present.contains(&key) {
                continue;
            }
            let weight = d_t.get(v, w) - 2.0 * spec.delta;
            if weight <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "delta {} leaves a nonpositive weight on ({v}, {w})",
                    spec.delta
                )));
            }
            present.insert(key);
            edges.push((key.0, key.1, weight));
            break;
        }
    }
    Graph::with_labels(n, edges, tree.labels().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_tree_sizes() {
        assert_eq!(balanced_tree(2, 8).unwrap().n(), 511);
        assert_eq!(balanced_tree(3, 5).unwrap().n(), 364);
        assert_eq!(balanced_tree(5, 4).unwrap().n(), 781);
        let star = balanced_tree(2, 1).unwrap();
        assert_eq!(star.edges(), &[(0, 1, 1.0), (0, 2, 1.0)]);
        assert!(balanced_tree(1, 3).is_err());
        assert!(balanced_tree(2, 0).is_err());
        assert!(balanced_tree(1000, 40).is_err());
    }

    #[test]
    fn zero_edges_is_identity() {
        let t = balanced_tree(2, 3).unwrap();
        let spec = SyntheticSpec { n_e: 0, ..Default::default() };
        assert_eq!(perturb_tree(&t, &spec).unwrap(), t);
    }

    #[test]
    fn added_edge_weight_is_tree_distance_minus_two_delta() {
        let t = balanced_tree(2, 3).unwrap();
        let d_t = shortest_path_matrix(&t).unwrap();
        for seed in 0..20 {
            let spec = SyntheticSpec { n_e: 1, delta: 0.1, seed };
            let g = perturb_tree(&t, &spec).unwrap();
            let &(u, v, w) = g.edges().last().unwrap();
            assert!(d_t.get(u, v) > 2.0);
            assert!((w - (d_t.get(u, v) - 0.2)).abs() < 1e-12);
        }
        // leaves 7 and 14 sit in opposite subtrees of the apex: distance 6
        assert_eq!(d_t.get(7, 14), 6.0);
    }

    #[test]
    fn shortest_paths_only_shrink_and_seed_is_deterministic() {
        let t = balanced_tree(3, 3).unwrap();
        let d_t = shortest_path_matrix(&t).unwrap();
        let spec = SyntheticSpec { n_e: 15, delta: 0.1, seed: 4 };
        let g = perturb_tree(&t, &spec).unwrap();
        assert_eq!(g.edges().len(), t.edges().len() + 15);
        assert_eq!(perturb_tree(&t, &spec).unwrap(), g);
        let d = shortest_path_matrix(&g).unwrap();
        assert!(d.pairs().all(|(i, j, v)| v <= d_t.get(i, j)));
    }

    #[test]
    fn rejects_small_trees_and_bad_specs() {
        let star = balanced_tree(2, 1).unwrap();
        assert!(perturb_tree(&star, &SyntheticSpec::default()).is_err());
        let t = balanced_tree(2, 3).unwrap();
        let bad = SyntheticSpec { delta: 0.0, ..Default::default() };
        assert!(perturb_tree(&t, &bad).is_err());
        // 12 eligible pairs cannot host 500 new edges.
        let path = Graph::new(5, (0..4).map(|i| (i, i + 1, 1.0)).collect()).unwrap();
        assert!(perturb_tree(&path, &SyntheticSpec::default()).is_err());
    }
}
