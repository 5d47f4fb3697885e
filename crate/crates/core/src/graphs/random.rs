//! Seeded random instance generators for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{shortest_path_matrix, Graph};
use crate::metricspace::DistanceMatrix;

/// Euclidean distances between `n` uniform points in `[0, 1)^dim`.
pub fn euclidean_metric(n: usize, dim: usize, seed: u64) -> DistanceMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen()).collect()).collect();
    DistanceMatrix::from_fn(n, |i, j| {
        pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    })
}

/// Random recursive tree on `n` vertices (vertex `v` attaches to a uniform
/// earlier vertex). Weights are integers in `1..=5` or reals in `[0.1, 3)`.
pub fn random_tree(n: usize, seed: u64, integer_weights: bool) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (1..n)
        .map(|v| {
            let w = if integer_weights {
                rng.gen_range(1..=5) as f64
            } else {
                rng.gen_range(0.1..3.0)
            };
            (rng.gen_range(0..v), v, w)
        })
        .collect();
    Graph::new(n, edges).expect("generated tree is valid")
}

/// Path metric of a random real-weighted tree; every vertex is a point.
pub fn weighted_tree_metric(n: usize, seed: u64) -> DistanceMatrix {
    shortest_path_matrix(&random_tree(n, seed, false)).expect("trees are connected")
}

/// Shortest-path metric of a random connected graph with integer weights:
/// a random tree plus each remaining pair with probability `density`.
pub fn integer_graph_metric(n: usize, density: f64, seed: u64) -> DistanceMatrix {
    let tree = random_tree(n, seed, true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut edges = tree.edges().to_vec();
    for i in 0..n {
        for j in (i + 1)..n {
            if !tree.has_edge(i, j) && rng.gen_bool(density) {
                edges.push((i, j, rng.gen_range(1..=4) as f64));
            }
        }
    }
    shortest_path_matrix(&Graph::new(n, edges).expect("valid graph")).expect("connected")
}

/// Symmetric dissimilarity with independent uniform entries in `[0, 10)`;
/// generally violates the triangle inequality.
pub fn random_dissimilarity(n: usize, seed: u64) -> DistanceMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DistanceMatrix::from_fn(n, |_, _| rng.gen_range(0.0..10.0))
}
