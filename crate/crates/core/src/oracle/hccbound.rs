use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{VerificationReport, Witness};
use crate::hcc::HccEngine;

struct Violation {
    n: usize,
    order: Vec<(usize, usize)>,
    t: usize,
    disagreements: u32,
    bad: u32,
    detail: &'static str,
}

/// Replays the clustering engine on every graph with `2 ≤ n ≤ max_n`
/// vertices, `orders_per_graph` random insertion orders each (the graph's
/// own edges first, then the remaining pairs), and recounts at every step
/// the disagreements `|E_t Δ E(P_t)|` and bad triangles `|B(G_t)|` from
/// bitmasks. Fails on the first step where disagreements exceed four times
/// the bad triangles, or where some vertex has fewer than half of its own
/// cluster as neighbors.
pub fn exhaustive_hcc_bound_check(max_n: usize, orders_per_graph: usize, seed: u64) -> VerificationReport {
    const PROP: &str = "hcc-disagreement-bound";
    assert!(max_n <= 8, "bitmask replay supports at most 8 vertices");
    let instance = format!("all graphs n<={max_n}, {orders_per_graph} orders each, seed {seed}");
    for n in 2..=max_n {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        let graphs = 1u64 << pairs.len();
        let found = (0..graphs).into_par_iter().find_map_first(|mask| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 48) ^ mask);
            let (mut inside, mut outside): (Vec<_>, Vec<_>) =
                (0..pairs.len()).partition(|&k| mask >> k & 1 == 1);
            for _ in 0..orders_per_graph {
                inside.shuffle(&mut rng);
                outside.shuffle(&mut rng);
                let order: Vec<(usize, usize)> =
                    inside.iter().chain(&outside).map(|&k| pairs[k]).collect();
                if let Some(v) = replay(n, &order) {
                    return Some(v);
                }
            }
            None
        });
        if let Some(v) = found {
            return VerificationReport::fail(
                PROP,
                instance,
                Witness {
                    indices: v.order.iter().flat_map(|&(a, b)| [a, b]).collect(),
                    values: vec![v.t as f64, v.disagreements as f64, v.bad as f64],
                    detail: format!("n={} step {}: {}", v.n, v.t, v.detail),
                },
            );
        }
    }
    VerificationReport::pass(PROP, instance)
}

fn replay(n: usize, order: &[(usize, usize)]) -> Option<Violation> {
    let mut engine = HccEngine::new(n);
    let mut adj = [0u8; 8];
    for (t, &(x, y)) in order.iter().enumerate() {
        engine.push_edge(x, y, (t + 1) as f64);
        adj[x] |= 1 << y;
        adj[y] |= 1 << x;

        let mut cluster = [0u8; 8];
        for (v, c) in cluster.iter_mut().enumerate().take(n) {
            let id = engine.cluster_of(v);
            *c = (0..n).filter(|&u| engine.cluster_of(u) == id).fold(0u8, |m, u| m | 1 << u);
        }

        let mut disagreements = 0u32;
        for u in 0..n {
            for v in (u + 1)..n {
                let edge = adj[u] >> v & 1 == 1;
                let together = cluster[u] >> v & 1 == 1;
                disagreements += (edge != together) as u32;
            }
        }
        let mut bad = 0u32;
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let k = (adj[a] >> b & 1) + (adj[a] >> c & 1) + (adj[b] >> c & 1);
                    bad += (k == 2) as u32;
                }
            }
        }
        let violation = |detail| Violation {
            n,
            order: order.to_vec(),
            t: t + 1,
            disagreements,
            bad,
            detail,
        };
        if disagreements > 4 * bad {
            return Some(violation("disagreements exceed four times the bad triangles"));
        }
        for v in 0..n {
            let size = cluster[v].count_ones();
            if size >= 2 && 2 * (adj[v] & cluster[v]).count_ones() < size {
                return Some(violation("vertex has fewer than half its cluster as neighbors"));
            }
        }
    }
    None
}
