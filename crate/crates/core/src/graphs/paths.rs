use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use super::Graph;
use crate::error::{Error, Result};
use crate::metricspace::DistanceMatrix;

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    // Reversed so BinaryHeap pops the smallest distance.
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn bfs(adj: &[Vec<(usize, f64)>], s: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut queue = VecDeque::from([s]);
    dist[s] = 0.0;
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &adj[u] {
            if dist[v].is_infinite() {
                dist[v] = dist[u] + 1.0;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn dijkstra(adj: &[Vec<(usize, f64)>], s: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::from([Entry(0.0, s)]);
    dist[s] = 0.0;
    while let Some(Entry(du, u)) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = du + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Entry(nd, v));
            }
        }
    }
    dist
}

/// All-pairs shortest path distances: BFS from every source for unit
/// weights, Dijkstra otherwise. Sources run in parallel.
///
/// Entry `(i, j)` for `i < j` is taken from source `i`.
pub fn shortest_path_matrix(g: &Graph) -> Result<DistanceMatrix> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let adj = g.adjacency();
    let unit = g.is_unit_weighted();
    let rows: Vec<Vec<f64>> = (0..g.n())
        .into_par_iter()
        .map(|s| if unit { bfs(&adj, s) } else { dijkstra(&adj, s) })
        .collect();
    Ok(DistanceMatrix::from_fn(g.n(), |i, j| rows[i][j]))
}
