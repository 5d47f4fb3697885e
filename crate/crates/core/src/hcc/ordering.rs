use crate::error::{Error, Result};
use crate::metricspace::{binomial, DistanceMatrix};

/// A permutation `e₁ … e_k` of all `C(n,2)` unordered pairs, optionally with
/// nondecreasing weights `d(e₁) ≤ … ≤ d(e_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeOrdering {
    n: usize,
    pairs: Vec<(usize, usize)>,
    weights: Option<Vec<f64>>,
}

impl EdgeOrdering {
    pub fn new(n: usize, pairs: Vec<(usize, usize)>, weights: Option<Vec<f64>>) -> Result<Self> {
        let k = binomial(n as u64, 2) as usize;
        if pairs.len() != k {
            return Err(Error::InvalidOrdering(format!(
                "expected {k} pairs for n = {n}, got {}",
                pairs.len()
            )));
        }
        let mut seen = vec![false; n * n];
        let mut normalized = Vec::with_capacity(k);
        for &(u, v) in &pairs {
            if u >= n || v >= n {
                return Err(Error::InvalidOrdering(format!("pair ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidOrdering(format!("self pair ({u},{v})")));
            }
            let (a, b) = (u.min(v), u.max(v));
            if std::mem::replace(&mut seen[a * n + b], true) {
                return Err(Error::InvalidOrdering(format!("pair ({a},{b}) repeated")));
            }
            normalized.push((a, b));
        }
        if let Some(w) = &weights {
            if w.len() != k {
                return Err(Error::InvalidOrdering("weights length differs from pairs".into()));
            }
            if w.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidOrdering("non-finite weight".into()));
            }
            if w.windows(2).any(|p| p[1] < p[0]) {
                return Err(Error::InvalidOrdering("weights must be nondecreasing".into()));
            }
        }
        Ok(Self {
            n,
            pairs: normalized,
            weights,
        })
    }

    pub fn unweighted(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(n, pairs, None)
    }

    /// All pairs sorted by nondecreasing distance, ties broken by `(i, j)`.
    pub fn by_distance(d: &DistanceMatrix) -> Self {
        let mut entries: Vec<(f64, usize, usize)> = d.pairs().map(|(i, j, v)| (v, i, j)).collect();
        entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let (weights, pairs) = entries.into_iter().map(|(v, i, j)| (v, (i, j))).unzip();
        Self {
            n: d.n(),
            pairs,
            weights: Some(weights),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Height recorded for a merge at 1-based step `t`.
    pub(crate) fn height_at(&self, t: usize) -> f64 {
        match &self.weights {
            Some(w) => w[t - 1],
            None => t as f64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_orderings() {
        assert!(EdgeOrdering::unweighted(3, vec![(0, 1), (1, 2)]).is_err());
        assert!(EdgeOrdering::unweighted(3, vec![(0, 1), (1, 0), (1, 2)]).is_err());
        assert!(EdgeOrdering::unweighted(3, vec![(0, 1), (1, 1), (1, 2)]).is_err());
        assert!(EdgeOrdering::unweighted(3, vec![(0, 1), (0, 3), (1, 2)]).is_err());
        assert!(EdgeOrdering::new(3, vec![(0, 1), (0, 2), (1, 2)], Some(vec![2.0, 1.0, 3.0])).is_err());
        let ok = EdgeOrdering::unweighted(3, vec![(1, 0), (2, 0), (1, 2)]).unwrap();
        assert_eq!(ok.pairs(), &[(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn distance_sort_breaks_ties_lexicographically() {
        let d = DistanceMatrix::from_fn(4, |i, j| if i + j == 3 { 1.0 } else { 2.0 });
        let o = EdgeOrdering::by_distance(&d);
        assert_eq!(o.pairs(), &[(0, 3), (1, 2), (0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(o.weights().unwrap(), &[1.0, 1.0, 2.0, 2.0, 2.0, 2.0]);
    }
}
