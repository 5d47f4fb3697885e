use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::ReductionContext;
use crate::error::{Error, Result};
use crate::hcc::MergeLog;
use crate::metricspace::DistanceMatrix;
use crate::unionfind::DisjointSet;

/// Tree on nodes `0..num_nodes`; `0..n` are the original points and the
/// rest are Steiner nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedTree {
    n: usize,
    num_nodes: usize,
    edges: Vec<(usize, usize, f64)>,
    root: Option<usize>,
}

impl WeightedTree {
    pub fn new(n: usize, num_nodes: usize, edges: Vec<(usize, usize, f64)>, root: Option<usize>) -> Result<Self> {
        if n == 0 || num_nodes < n {
            return Err(Error::InvalidTree(format!("{num_nodes} nodes for {n} points")));
        }
        if edges.len() != num_nodes - 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges on {num_nodes} nodes",
                edges.len()
            )));
        }
        if let Some(r) = root.filter(|&r| r >= n) {
            return Err(Error::InvalidTree(format!("root {r} is not an original point")));
        }
        let mut ds = DisjointSet::new(num_nodes);
        for &(u, v, w) in &edges {
            if u >= num_nodes || v >= num_nodes {
                return Err(Error::InvalidTree(format!("edge ({u},{v}) out of range")));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidTree(format!("edge ({u},{v}) has weight {w}")));
            }
            if ds.union(u, v).is_none() {
                return Err(Error::InvalidTree(format!("edge ({u},{v}) closes a cycle")));
            }
        }
        Ok(Self {
            n,
            num_nodes,
            edges,
            root,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// Path lengths between original points, one traversal per point.
    pub fn path_metric(&self) -> DistanceMatrix {
        let mut adj = vec![Vec::new(); self.num_nodes];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let rows: Vec<Vec<f64>> = (0..self.n)
            .into_par_iter()
            .map(|s| {
                let mut dist = vec![f64::NAN; self.num_nodes];
                dist[s] = 0.0;
                let mut stack = vec![s];
                while let Some(u) = stack.pop() {
                    for &(v, w) in &adj[u] {
                        if dist[v].is_nan() {
                            dist[v] = dist[u] + w;
                            stack.push(v);
                        }
                    }
                }
                dist.truncate(self.n);
                dist
            })
            .collect();
        DistanceMatrix::from_fn(self.n, |i, j| rows[i][j])
    }

    /// `# n <n>`, `# root <r|none>`, then one `u v weight` line per edge.
    pub fn to_edge_list_string(&self) -> String {
        let mut out = format!("# n {}\n", self.n);
        match self.root {
            Some(r) => writeln!(out, "# root {r}").unwrap(),
            None => out.push_str("# root none\n"),
        }
        for &(u, v, w) in &self.edges {
            writeln!(out, "{u} {v} {w}").unwrap();
        }
        out
    }

    pub fn from_edge_list_str(text: &str) -> Result<Self> {
        let mut n = None;
        let mut root = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                let fields: Vec<&str> = header.split_whitespace().collect();
                match fields.as_slice() {
                    ["n", v] => n = Some(v.parse::<usize>().map_err(|e| err(format!("bad n: {e}")))?),
                    ["root", "none"] => root = None,
                    ["root", v] => root = Some(v.parse::<usize>().map_err(|e| err(format!("bad root: {e}")))?),
                    _ => {}
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [u, v, w] = fields.as_slice() else {
                return Err(err(format!("expected `u v weight`, got {} fields", fields.len())));
            };
            let idx = |s: &str| s.parse::<usize>().map_err(|e| err(format!("bad node {s:?}: {e}")));
            let w = w.parse::<f64>().map_err(|e| err(format!("bad weight {w:?}: {e}")))?;
            edges.push((idx(u)?, idx(v)?, w));
        }
        let n = n.ok_or(Error::Parse {
            line: 1,
            msg: "missing `# n <count>` header".into(),
        })?;
        let num_nodes = edges.iter().map(|e| e.0.max(e.1).saturating_add(1)).max().unwrap_or(0).max(n);
        Self::new(n, num_nodes, edges, root)
    }
}

/// Path metric of `t` restricted to its original points.
pub fn tree_path_metric(t: &WeightedTree) -> DistanceMatrix {
    t.path_metric()
}

/// Dendrogram of a merge log: leaves at height 0, the node made by row `t`
/// at height `h_t / 2`, so leaf-to-leaf path lengths equal the merge
/// heights.
pub fn dendrogram_tree(log: &MergeLog) -> Result<WeightedTree> {
    let n = log.n();
    let mut level = vec![0.0; 2 * n - 1];
    let mut edges = Vec::with_capacity(2 * n - 2);
    for (t, row) in log.rows().iter().enumerate() {
        let node = n + t;
        level[node] = row.height / 2.0;
        for child in [row.id_a, row.id_b] {
            let w = level[node] - level[child];
            if w < 0.0 {
                return Err(Error::InvalidMergeLog(format!("row {t} is lower than its child {child}")));
            }
            edges.push((child, node, w));
        }
    }
    WeightedTree::new(n, 2 * n - 1, edges, None)
}

/// Rooted tree realizing `d_U − c_w` for the ultrametric encoded by `log`.
///
/// Each point `x` sits at root distance `d(w, x)`; the node made by a merge
/// at height `h` sits at root distance `M − h/2`, and every edge weighs the
/// difference of its endpoints' root distances. Zero-weight edges on the
/// path from `w` upward are then contracted into `w` (with an admissible
/// log this merges `w` with the top of the hierarchy) and Steiner nodes are
/// renumbered densely.
pub fn construct_rooted_tree(log: &MergeLog, ctx: &ReductionContext) -> Result<WeightedTree> {
    let n = log.n();
    if ctx.n() != n {
        return Err(Error::InvalidArgument(format!("log has {n} points, reduction has {}", ctx.n())));
    }
    let tol = 1e-9 * ctx.m().max(1.0);
    let mut level: Vec<f64> = (0..n).map(|x| ctx.root_distance(x)).collect();
    level.resize(2 * n - 1, 0.0);
    let mut parent = vec![(usize::MAX, 0.0); 2 * n - 1];
    for (t, row) in log.rows().iter().enumerate() {
        let node = n + t;
        level[node] = ctx.m() - row.height / 2.0;
        for child in [row.id_a, row.id_b] {
            let w = level[child] - level[node];
            if w < -tol {
                return Err(Error::InvalidMergeLog(format!(
                    "edge ({child},{node}) would have negative weight {w}"
                )));
            }
            parent[child] = (node, w.max(0.0));
        }
    }

    // Contract the zero-weight chain above w.
    let w = ctx.base();
    let mut alias: Vec<usize> = (0..2 * n - 1).collect();
    let mut cur = w;
    while let Some(&(p, weight)) = parent.get(cur).filter(|p| p.0 != usize::MAX) {
        if weight != 0.0 {
            break;
        }
        alias[p] = w;
        cur = p;
    }
    let mut new_id = vec![usize::MAX; 2 * n - 1];
    new_id[..n].iter_mut().enumerate().for_each(|(x, id)| *id = x);
    let mut next = n;
    for node in n..2 * n - 1 {
        if alias[node] == node {
            new_id[node] = next;
            next += 1;
        }
    }
    let resolve = |v: usize| new_id[alias[v]];
    let edges = (0..2 * n - 1)
        .filter(|&c| parent[c].0 != usize::MAX)
        .filter_map(|c| {
            let (p, weight) = parent[c];
            let (a, b) = (resolve(c), resolve(p));
            (a != b).then_some((a, b, weight))
        })
        .collect();
    WeightedTree::new(n, next, edges, Some(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_with_unit_edges() {
        let t = WeightedTree::new(4, 5, (0..4).map(|i| (i, 4, 1.0)).collect(), None).unwrap();
        let d = t.path_metric();
        assert!(d.pairs().all(|(_, _, v)| v == 2.0));
    }

    #[test]
    fn rejects_invalid_trees() {
        assert!(WeightedTree::new(3, 3, vec![(0, 1, 1.0)], None).is_err());
        assert!(WeightedTree::new(3, 3, vec![(0, 1, 1.0), (1, 0, 1.0)], None).is_err());
        assert!(WeightedTree::new(3, 3, vec![(0, 1, 1.0), (1, 2, -1.0)], None).is_err());
        assert!(WeightedTree::new(3, 3, vec![(0, 1, 1.0), (1, 3, 1.0)], None).is_err());
        assert!(WeightedTree::new(2, 2, vec![(0, 1, 1.0)], Some(2)).is_err());
        assert!(WeightedTree::new(1, 1, vec![], Some(0)).is_ok());
    }

    #[test]
    fn edge_list_round_trip() {
        let t = WeightedTree::new(3, 4, vec![(0, 3, 1.5), (1, 3, 0.0), (2, 3, 2.0)], Some(1)).unwrap();
        let text = t.to_edge_list_string();
        assert!(text.starts_with("# n 3\n# root 1\n0 3 1.5\n"));
        assert_eq!(WeightedTree::from_edge_list_str(&text).unwrap(), t);
        let unrooted = WeightedTree::new(2, 2, vec![(0, 1, 1.0)], None).unwrap();
        assert_eq!(WeightedTree::from_edge_list_str(&unrooted.to_edge_list_string()).unwrap(), unrooted);
        assert!(WeightedTree::from_edge_list_str("0 1 1\n").is_err());
        assert!(WeightedTree::from_edge_list_str("# n 2\n0 1\n").is_err());
    }
}
