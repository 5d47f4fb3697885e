use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metricspace::DistanceMatrix;

/// One agglomerative merge. The cluster it creates has id `n + row index`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeRow {
    pub id_a: usize,
    pub id_b: usize,
    pub height: f64,
    pub size: usize,
    /// 1-based index of the edge whose arrival triggered the merge.
    pub step: usize,
}

/// Merge sequence in the 4-column linkage convention (`id_a, id_b, height,
/// size`) with an extra `step` column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeLog {
    n: usize,
    rows: Vec<MergeRow>,
}

impl MergeLog {
    /// Validates ids, sizes and child uniqueness. Requires exactly `n − 1`
    /// rows (a single final cluster).
    pub fn new(n: usize, rows: Vec<MergeRow>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMergeLog("no leaves".into()));
        }
        if rows.len() != n - 1 {
            return Err(Error::InvalidMergeLog(format!(
                "expected {} rows for {n} leaves, got {}",
                n - 1,
                rows.len()
            )));
        }
        let mut used = vec![false; 2 * n - 1];
        let mut sizes = vec![1usize; 2 * n - 1];
        for (tau, row) in rows.iter().enumerate() {
            let id = n + tau;
            for child in [row.id_a, row.id_b] {
                if child >= id {
                    return Err(Error::InvalidMergeLog(format!(
                        "row {tau} references cluster {child} before it exists"
                    )));
                }
                if std::mem::replace(&mut used[child], true) {
                    return Err(Error::InvalidMergeLog(format!("cluster {child} merged twice")));
                }
            }
            if row.id_a == row.id_b {
                return Err(Error::InvalidMergeLog(format!("row {tau} merges {} with itself", row.id_a)));
            }
            let size = sizes[row.id_a] + sizes[row.id_b];
            if row.size != size {
                return Err(Error::InvalidMergeLog(format!(
                    "row {tau} has size {} but children total {size}",
                    row.size
                )));
            }
            if !row.height.is_finite() || row.height < 0.0 {
                return Err(Error::InvalidMergeLog(format!("row {tau} has height {}", row.height)));
            }
            sizes[id] = size;
        }
        Ok(Self { n, rows })
    }

    pub(crate) fn from_rows_unchecked(n: usize, rows: Vec<MergeRow>) -> Self {
        Self { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[MergeRow] {
        &self.rows
    }

    pub fn heights_nondecreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].height <= w[1].height)
    }

    /// Leaf sets of every cluster id `0 ..= 2n − 2`.
    pub fn leaf_sets(&self) -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = (0..self.n).map(|i| vec![i]).collect();
        for row in &self.rows {
            let mut s = sets[row.id_a].clone();
            s.extend_from_slice(&sets[row.id_b]);
            sets.push(s);
        }
        sets
    }

    /// `d_U(x, y)` = height of the merge that first puts `x` and `y`
    /// together. Every pair is assigned exactly once, so this is `O(n²)`.
    pub fn ultrametric(&self) -> DistanceMatrix {
        let mut d = DistanceMatrix::zeros(self.n);
        let mut members: Vec<Vec<usize>> = (0..self.n).map(|i| vec![i]).collect();
        members.resize(2 * self.n - 1, Vec::new());
        for (tau, row) in self.rows.iter().enumerate() {
            let a = std::mem::take(&mut members[row.id_a]);
            let b = std::mem::take(&mut members[row.id_b]);
            for &x in &a {
                for &y in &b {
                    d.set(x, y, row.height);
                }
            }
            let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            big.extend(small);
            members[self.n + tau] = big;
        }
        d
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("id_a,id_b,height,size,step\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{}", r.id_a, r.id_b, r.height, r.size, r.step).unwrap();
        }
        out
    }

    /// Parses the CSV written by [`MergeLog::to_csv_string`]; `n` is
    /// inferred as `rows + 1`.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = rdr.headers()?.clone();
        let expected = ["id_a", "id_b", "height", "size", "step"];
        if headers.iter().ne(expected.iter().copied()) {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header {}", expected.join(",")),
            });
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.deserialize::<MergeRow>().enumerate() {
            rows.push(rec.map_err(|e| Error::Parse {
                line: i + 2,
                msg: e.to_string(),
            })?);
        }
        Self::new(rows.len() + 1, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MergeLog {
        MergeLog::new(
            4,
            vec![
                MergeRow { id_a: 0, id_b: 1, height: 1.0, size: 2, step: 1 },
                MergeRow { id_a: 2, id_b: 3, height: 2.0, size: 2, step: 3 },
                MergeRow { id_a: 4, id_b: 5, height: 5.0, size: 4, step: 6 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn ultrametric_from_lca_heights() {
        let d = sample().ultrametric();
        assert_eq!(d.get(0, 1), 1.0);
        assert_eq!(d.get(2, 3), 2.0);
        assert_eq!(d.get(1, 3), 5.0);
        assert_eq!(sample().leaf_sets()[6], vec![0, 1, 2, 3]);
    }

    #[test]
    fn csv_round_trip() {
        let log = sample();
        let text = log.to_csv_string();
        assert!(text.starts_with("id_a,id_b,height,size,step\n0,1,1,2,1\n"));
        assert_eq!(MergeLog::from_csv_str(&text).unwrap(), log);
    }

    #[test]
    fn rejects_invalid_logs() {
        let row = |a, b, size| MergeRow { id_a: a, id_b: b, height: 1.0, size, step: 1 };
        assert!(MergeLog::new(3, vec![row(0, 1, 2)]).is_err());
        assert!(MergeLog::new(3, vec![row(0, 1, 2), row(0, 2, 2)]).is_err());
        assert!(MergeLog::new(3, vec![row(0, 1, 2), row(3, 2, 2)]).is_err());
        assert!(MergeLog::new(3, vec![row(0, 4, 2), row(3, 2, 3)]).is_err());
        assert!(MergeLog::new(3, vec![row(0, 1, 2), row(3, 2, 3)]).is_ok());
        assert!(MergeLog::from_csv_str("a,b\n1,2\n").is_err());
        assert!(MergeLog::from_csv_str("id_a,id_b,height,size,step\n0,1,x,2,1\n").is_err());
    }
}
