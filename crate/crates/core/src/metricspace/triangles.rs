//! Bad triangles and the threshold-sweep integral of their count.

use super::matrix::DistanceMatrix;
use crate::error::{Error, Result};

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<bool>>> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::IndexOutOfRange { index: u.max(v), n });
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        adj[u][v] = true;
        adj[v][u] = true;
    }
    Ok(adj)
}

/// `|B(G)|`: triples with exactly two of their three edges present.
///
/// Counted as wedges minus three times the triangles: every bad triangle
/// contributes one path of length two and every triangle three.
pub fn bad_triangles(n: usize, edges: &[(usize, usize)]) -> Result<u64> {
    let adj = adjacency(n, edges)?;
    let mut wedges = 0u64;
    let mut triangles3 = 0u64;
    for v in 0..n {
        let nbrs: Vec<usize> = (0..n).filter(|&u| adj[v][u]).collect();
        let deg = nbrs.len() as u64;
        wedges += deg * deg.saturating_sub(1) / 2;
        for (a, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[a + 1..] {
                if adj[x][y] {
                    triangles3 += 1;
                }
            }
        }
    }
    // triangles3 counts each triangle once per vertex.
    Ok(wedges - triangles3)
}

/// The bad triangles themselves, lexicographic.
pub fn bad_triangle_set(n: usize, edges: &[(usize, usize)]) -> Result<Vec<[usize; 3]>> {
    let adj = adjacency(n, edges)?;
    let mut out = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            for z in (y + 1)..n {
                let k = adj[x][y] as u8 + adj[x][z] as u8 + adj[y][z] as u8;
                if k == 2 {
                    out.push([x, y, z]);
                }
            }
        }
    }
    Ok(out)
}

/// `∫₀^∞ |B(G_s)| ds` where `G_s` joins pairs at distance `≤ s`.
///
/// The integrand is piecewise constant between consecutive distinct pair
/// distances, so the integral is a finite sum. The bad-triangle count is
/// maintained incrementally as each threshold's edges are added.
pub fn integral_bad_triangles(d: &DistanceMatrix) -> f64 {
    let n = d.n();
    if n < 3 {
        return 0.0;
    }
    let mut pairs: Vec<(f64, usize, usize)> = d.pairs().map(|(i, j, v)| (v, i, j)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut adj = vec![false; n * n];
    let mut bad: i64 = 0;
    let mut total = 0.0;
    let mut k = 0;
    while k < pairs.len() {
        let s = pairs[k].0;
        while k < pairs.len() && pairs[k].0 == s {
            let (_, u, v) = pairs[k];
            for w in 0..n {
                if w == u || w == v {
                    continue;
                }
                match (adj[u * n + w], adj[v * n + w]) {
                    (true, true) => bad -= 1,
                    (true, false) | (false, true) => bad += 1,
                    (false, false) => {}
                }
            }
            adj[u * n + v] = true;
            adj[v * n + u] = true;
            k += 1;
        }
        if k < pairs.len() {
            total += bad as f64 * (pairs[k].0 - s);
        }
    }
    total
}
