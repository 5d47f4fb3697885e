use super::linkage::MergeLog;
use crate::error::{Error, Result};
use crate::metricspace::binomial;
use crate::unionfind::DisjointSet;

/// The partition `P_t` after the first `t` edges have been processed.
///
/// Blocks are labelled by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionView {
    t: usize,
    labels: Vec<usize>,
}

impl PartitionView {
    /// Replays every merge whose step is `≤ t`.
    pub fn at(log: &MergeLog, t: usize) -> Result<Self> {
        let n = log.n();
        let max = binomial(n as u64, 2) as usize;
        if t > max {
            return Err(Error::StepOutOfRange { t, max });
        }
        let sets = log.leaf_sets();
        let mut ds = DisjointSet::new(n);
        for row in log.rows().iter().take_while(|r| r.step <= t) {
            ds.union(sets[row.id_a][0], sets[row.id_b][0]);
        }
        let mut min_of_root = vec![usize::MAX; n];
        for v in 0..n {
            let r = ds.find(v);
            min_of_root[r] = min_of_root[r].min(v);
        }
        let labels = (0..n).map(|v| min_of_root[ds.find(v)]).collect();
        Ok(Self { t, labels })
    }

    pub fn step(&self) -> usize {
        self.t
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn together(&self, u: usize, v: usize) -> bool {
        self.labels[u] == self.labels[v]
    }

    pub fn num_clusters(&self) -> usize {
        self.labels.iter().enumerate().filter(|&(v, &l)| v == l).count()
    }

    /// Blocks in order of their smallest member, members ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; self.labels.len()];
        for (v, &l) in self.labels.iter().enumerate() {
            if index[l] == usize::MAX {
                index[l] = out.len();
                out.push(Vec::new());
            }
            out[index[l]].push(v);
        }
        out
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &PartitionView) -> bool {
        (0..self.labels.len()).all(|v| coarser.together(v, self.labels[v]))
    }
}

/// `P_t` materialized from a merge log.
pub fn partition_at(log: &MergeLog, t: usize) -> Result<PartitionView> {
    PartitionView::at(log, t)
}
