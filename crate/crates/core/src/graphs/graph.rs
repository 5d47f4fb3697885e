use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::unionfind::DisjointSet;

/// Simple undirected graph with positive edge weights.
///
/// `labels[v]` is the label vertex `v` carried in the input it was parsed
/// from (or its index for generated graphs).
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    labels: Vec<String>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        Self::with_labels(n, edges, (0..n).map(|v| v.to_string()).collect())
    }

    pub fn with_labels(n: usize, edges: Vec<(usize, usize, f64)>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != n {
            return Err(Error::InvalidGraph(format!("{} labels for {n} vertices", labels.len())));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange { index: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {}", labels[u])));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has nonpositive weight {w}",
                    labels[u], labels[v]
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    labels[u], labels[v]
                )));
            }
        }
        Ok(Self { n, edges, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.edges.iter().all(|e| e.2 == 1.0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.iter().any(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    /// Adjacency lists `(neighbor, weight)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        adj
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut ds = DisjointSet::new(self.n);
        for &(u, v, _) in &self.edges {
            ds.union(u, v);
        }
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.n {
            let r = ds.find(v);
            let k = *index.entry(r).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[k].push(v);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// One `u v` (or `u v w` for non-unit weights) line per edge, using the
    /// original labels.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v, w) in &self.edges {
            if w == 1.0 {
                writeln!(out, "{} {}", self.labels[u], self.labels[v]).unwrap();
            } else {
                writeln!(out, "{} {} {}", self.labels[u], self.labels[v], w).unwrap();
            }
        }
        out
    }
}

/// Parses whitespace-separated `u v [w]` lines. Labels are arbitrary tokens
/// relabeled densely in order of first appearance; `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(err(format!("expected `u v [w]`, got {} fields", fields.len())));
        }
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|e| err(format!("bad weight {s:?}: {e}")))?,
            None => 1.0,
        };
        if !(w > 0.0 && w.is_finite()) {
            return Err(err(format!("nonpositive weight {w}")));
        }
        let mut id = |label: &str| {
            *index.entry(label.to_string()).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() - 1
            })
        };
        let (u, v) = (id(fields[0]), id(fields[1]));
        if u == v {
            return Err(err(format!("self-loop at {}", fields[0])));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(format!("duplicate edge {} {}", fields[0], fields[1])));
        }
        edges.push((u, v, w));
    }
    Graph::with_labels(labels.len(), edges, labels)
}

/// Induced subgraph on the largest connected component, relabeled densely
/// in increasing vertex order. Ties go to the component holding the
/// smallest vertex.
pub fn largest_component(g: &Graph) -> Result<Graph> {
    if g.n() == 0 {
        return Err(Error::InvalidGraph("empty graph".into()));
    }
    // components() lists components by smallest member, so max_by_key with
    // a reversed position keeps the earliest among equal sizes.
    let comps = g.components();
    let best = comps
        .iter()
        .enumerate()
        .max_by_key(|(k, c)| (c.len(), std::cmp::Reverse(*k)))
        .map(|(_, c)| c)
        .unwrap();
    let mut new_id = vec![usize::MAX; g.n()];
    for (k, &v) in best.iter().enumerate() {
        new_id[v] = k;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| new_id[e.0] != usize::MAX)
        .map(|&(u, v, w)| (new_id[u], new_id[v], w))
        .collect();
    let labels = best.iter().map(|&v| g.labels()[v].clone()).collect();
    Graph::with_labels(best.len(), edges, labels)
}
