//! Brute-force reference implementations.
//!
//! Nothing here calls into the fast paths it is used to check: Gromov
//! products, permutation maxima, minimax paths and bad-triangle counts are
//! all recomputed from their definitions.

mod hccbound;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metricspace::DistanceMatrix;

pub use hccbound::exhaustive_hcc_bound_check;

/// Outcome of a verifier; failures always carry a witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub property: String,
    pub instance: String,
    pub passed: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub detail: String,
}

impl VerificationReport {
    pub fn pass(property: &str, instance: impl Into<String>) -> Self {
        Self {
            property: property.into(),
            instance: instance.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(property: &str, instance: impl Into<String>, witness: Witness) -> Self {
        Self {
            property: property.into(),
            instance: instance.into(),
            passed: false,
            witness: Some(witness),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// All permutations of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Four point condition as the maximum over all 24 relabelings of
/// `min(gp_w(x,z), gp_w(y,z)) − gp_w(x,y)`, with the last slot as base.
pub fn fp_by_enumeration(d: &DistanceMatrix, q: [usize; 4]) -> f64 {
    let gp = |w: usize, x: usize, y: usize| (d.get(x, w) + d.get(y, w) - d.get(x, y)) / 2.0;
    permutations(4)
        .into_iter()
        .map(|p| {
            let (x, y, z, w) = (q[p[0]], q[p[1]], q[p[2]], q[p[3]]);
            gp(w, x, z).min(gp(w, y, z)) - gp(w, x, y)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Three point condition as the maximum over all 6 relabelings of
/// `d(x,z) − max(d(x,y), d(y,z))`.
pub fn tp_by_enumeration(d: &DistanceMatrix, t: [usize; 3]) -> f64 {
    permutations(3)
        .into_iter()
        .map(|p| {
            let (x, y, z) = (t[p[0]], t[p[1]], t[p[2]]);
            d.get(x, z) - d.get(x, y).max(d.get(y, z))
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn triples(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n).flat_map(move |x| {
        ((x + 1)..n).flat_map(move |y| ((y + 1)..n).map(move |z| [x, y, z]))
    })
}

fn quadruples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |a| {
        ((a + 1)..n).flat_map(move |b| {
            ((b + 1)..n).flat_map(move |c| ((c + 1)..n).map(move |e| [a, b, c, e]))
        })
    })
}

/// `‖Δ(d)‖₁` by permutation enumeration.
pub fn ultrametricity_l1_by_enumeration(d: &DistanceMatrix) -> f64 {
    triples(d.n()).map(|t| tp_by_enumeration(d, t)).sum()
}

/// `‖Δ(d)‖∞` by permutation enumeration.
pub fn ultrametricity_linf_by_enumeration(d: &DistanceMatrix) -> f64 {
    triples(d.n()).map(|t| tp_by_enumeration(d, t)).fold(0.0, f64::max)
}

/// `‖Δ_w(d)‖₁` by permutation enumeration.
pub fn hyperbolicity_l1_by_enumeration(d: &DistanceMatrix, w: usize) -> f64 {
    let others: Vec<usize> = (0..d.n()).filter(|&v| v != w).collect();
    triples(others.len())
        .map(|[a, b, c]| fp_by_enumeration(d, [others[a], others[b], others[c], w]))
        .sum()
}

/// `‖Δ_w(d)‖∞` by permutation enumeration.
pub fn hyperbolicity_linf_by_enumeration(d: &DistanceMatrix, w: usize) -> f64 {
    let others: Vec<usize> = (0..d.n()).filter(|&v| v != w).collect();
    triples(others.len())
        .map(|[a, b, c]| fp_by_enumeration(d, [others[a], others[b], others[c], w]))
        .fold(0.0, f64::max)
}

/// Mean of `fp` over all `C(n,4)` quadruples by permutation enumeration.
pub fn avg_hyp1_by_enumeration(d: &DistanceMatrix) -> f64 {
    let (sum, count) = quadruples(d.n())
        .map(|q| fp_by_enumeration(d, q))
        .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Strong triangle inequality on every triple, within `tol`.
pub fn verify_ultrametric(d: &DistanceMatrix, tol: f64) -> VerificationReport {
    const PROP: &str = "ultrametric";
    let instance = format!("n={}", d.n());
    for t in triples(d.n()) {
        for p in permutations(3) {
            let (x, y, z) = (t[p[0]], t[p[1]], t[p[2]]);
            let (lhs, rhs) = (d.get(x, y), d.get(x, z).max(d.get(y, z)));
            if lhs > rhs + tol {
                return VerificationReport::fail(
                    PROP,
                    instance,
                    Witness {
                        indices: vec![x, y, z],
                        values: vec![d.get(x, y), d.get(x, z), d.get(y, z)],
                        detail: format!("d(x,y) = {lhs} > max(d(x,z), d(y,z)) = {rhs}"),
                    },
                );
            }
        }
    }
    VerificationReport::pass(PROP, instance)
}

/// Metric axioms plus `fp = 0` on every quadruple, within `tol`.
pub fn verify_tree_metric(d: &DistanceMatrix, tol: f64) -> VerificationReport {
    const PROP: &str = "tree-metric";
    let n = d.n();
    let instance = format!("n={n}");
    for t in triples(n) {
        for p in permutations(3) {
            let (x, y, z) = (t[p[0]], t[p[1]], t[p[2]]);
            if d.get(x, y) > d.get(x, z) + d.get(z, y) + tol {
                return VerificationReport::fail(
                    PROP,
                    instance,
                    Witness {
                        indices: vec![x, y, z],
                        values: vec![d.get(x, y), d.get(x, z), d.get(z, y)],
                        detail: "triangle inequality violated".into(),
                    },
                );
            }
        }
    }
    let quads: Vec<[usize; 4]> = quadruples(n).collect();
    let bad = quads
        .par_iter()
        .map(|&q| (q, fp_by_enumeration(d, q)))
        .find_first(|&(_, v)| v > tol);
    match bad {
        Some((q, v)) => VerificationReport::fail(
            PROP,
            instance,
            Witness {
                indices: q.to_vec(),
                values: vec![v],
                detail: format!("four point condition {v} on quadruple"),
            },
        ),
        None => VerificationReport::pass(PROP, instance),
    }
}

/// Subdominant ultrametric as the minimax path distance, via the
/// Floyd–Warshall recurrence `u(i,j) ← min(u(i,j), max(u(i,k), u(k,j)))`.
pub fn minimax_path_ultrametric(d: &DistanceMatrix) -> DistanceMatrix {
    let n = d.n();
    let mut u: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| d.get(i, j)).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = u[i][k].max(u[k][j]);
                if via < u[i][j] {
                    u[i][j] = via;
                }
            }
        }
    }
    DistanceMatrix::from_fn(n, |i, j| u[i][j])
}

/// The family on which the ultrametric fitting bound is tight: points
/// `0, 1, 2` with `d(0,1) = d(0,2) = 1`, every other pair at distance 2.
#[derive(Debug, Clone)]
pub struct TightnessCertificate {
    pub matrix: DistanceMatrix,
    /// `‖Δ(d)‖₁`, recomputed by enumeration.
    pub delta_l1: f64,
    /// Certified lower bound on `‖d − u‖₁` over all ultrametrics `u`.
    pub lower_bound: f64,
}

pub fn tightness_certificate(n: usize) -> TightnessCertificate {
    assert!(n >= 3, "the tightness family needs at least three points");
    let matrix = DistanceMatrix::from_fn(n, |i, j| if i == 0 && (j == 1 || j == 2) { 1.0 } else { 2.0 });
    TightnessCertificate {
        delta_l1: ultrametricity_l1_by_enumeration(&matrix),
        lower_bound: ultrametric_l1_lower_bound(&matrix),
        matrix,
    }
}

/// Lower bound on the ℓ1 error of any ultrametric fit to `(a, b, c)`.
///
/// An ultrametric triple has its two largest sides equal, so a fit must
/// either shrink the largest side or grow the second one until they meet;
/// the cheapest way costs exactly `largest − second`.
pub fn ultrametric_triple_lower_bound(a: f64, b: f64, c: f64) -> f64 {
    let mut v = [a, b, c];
    v.sort_by(f64::total_cmp);
    v[2] - v[1]
}

/// Lower bound on `min_u ‖d − u‖₁` from greedily chosen pair-disjoint
/// triples (the per-triple bounds then add up).
pub fn ultrametric_l1_lower_bound(d: &DistanceMatrix) -> f64 {
    let n = d.n();
    let mut scored: Vec<(f64, [usize; 3])> = triples(n)
        .map(|[x, y, z]| {
            (ultrametric_triple_lower_bound(d.get(x, y), d.get(x, z), d.get(y, z)), [x, y, z])
        })
        .filter(|&(v, _)| v > 0.0)
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut used = vec![false; n * n];
    let mut total = 0.0;
    for (v, [x, y, z]) in scored {
        let ids = [x * n + y, x * n + z, y * n + z];
        if ids.iter().all(|&k| !used[k]) {
            ids.iter().for_each(|&k| used[k] = true);
            total += v;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn four_cycle_is_not_a_tree_metric() {
        // unit 4-cycle 0-1-2-3-0
        let d = DistanceMatrix::from_fn(4, |i, j| if (j - i) % 2 == 1 { 1.0 } else { 2.0 });
        assert_eq!(fp_by_enumeration(&d, [0, 1, 2, 3]), 1.0);
        let r = verify_tree_metric(&d, 1e-9);
        assert!(!r.passed);
        assert_eq!(r.witness.unwrap().indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn star_is_a_tree_metric() {
        let d = DistanceMatrix::from_fn(6, |_, _| 2.0);
        assert!(verify_tree_metric(&d, 0.0).passed);
        assert!(verify_ultrametric(&d, 0.0).passed);
    }

    #[test]
    fn tightness_instance_certificate() {
        let c = tightness_certificate(6);
        assert_eq!(c.delta_l1, 1.0);
        assert_eq!(c.lower_bound, 1.0);
        let r = verify_ultrametric(&c.matrix, 1e-9);
        assert!(!r.passed);
        let mut w = r.witness.unwrap().indices;
        w.sort();
        assert_eq!(w, vec![0, 1, 2]);
    }

    #[test]
    fn minimax_on_tightness_instance() {
        let u = minimax_path_ultrametric(&tightness_certificate(6).matrix);
        assert_eq!(u.get(1, 2), 1.0);
        assert_eq!(u.get(0, 1), 1.0);
        assert_eq!(u.get(3, 4), 2.0);
    }

    #[test]
    fn report_serializes_as_one_line() {
        let r = verify_ultrametric(&tightness_certificate(4).matrix, 0.0);
        let line = r.to_json_line();
        assert!(!line.contains('\n'));
        let back: VerificationReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }
}
