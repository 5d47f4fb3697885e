use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used by the CSV loader for symmetry and zero-diagonal checks.
pub const LOAD_TOLERANCE: f64 = 1e-9;

/// Dense symmetric matrix of nonnegative pairwise distances with a zero
/// diagonal.
///
/// The triangle inequality is not enforced; inputs such as `d + c_w` or
/// perturbed data may violate it. Use [`DistanceMatrix::is_metric`] to test
/// it on demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Validates and wraps a row-major `n × n` buffer.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let v = data[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i},{j}) = {v} is not a finite nonnegative number"
                    )));
                }
                if v != data[j * n + i] {
                    return Err(Error::InvalidMatrix(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds a matrix from `f(i, j)` evaluated once per unordered pair `i < j`.
    ///
    /// # Panics
    ///
    /// Panics if `f` returns a negative or non-finite value.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    ///
    /// # Panics
    ///
    /// Panics on a nonzero diagonal write or a negative / non-finite value.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(v.is_finite() && v >= 0.0, "distance ({i},{j}) = {v}");
        assert!(i != j || v == 0.0, "diagonal must stay zero");
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        }
    }

    /// Unordered pairs `(i, j, d(i,j))` with `i < j`, lexicographic.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn pair_count(&self) -> u64 {
        binomial(self.n as u64, 2)
    }

    /// Checks the triangle inequality on every triple, allowing slack `tol`.
    pub fn is_metric(&self, tol: f64) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let dij = self.get(i, j);
                for k in 0..n {
                    if dij > self.get(i, k) + self.get(k, j) + tol {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// `Σ_{i<j} |self(i,j) − other(i,j)|`.
    pub fn l1_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        self.pairs().map(|(i, j, v)| (v - other.get(i, j)).abs()).sum()
    }

    /// `max_{i<j} |self(i,j) − other(i,j)|`.
    pub fn linf_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        self.pairs()
            .map(|(i, j, v)| (v - other.get(i, j)).abs())
            .fold(0.0, f64::max)
    }

    /// Parses an `n × n` CSV of decimal reals without a header.
    ///
    /// Entries must be symmetric with a zero diagonal up to [`LOAD_TOLERANCE`];
    /// the result is symmetrized by averaging and its diagonal zeroed.
    #[allow(clippy::needless_range_loop)]
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() == 1 && record[0].is_empty() {
                continue;
            }
            let mut row = Vec::with_capacity(record.len());
            for field in record.iter() {
                let v: f64 = field.parse().map_err(|_| Error::Parse {
                    line: line + 1,
                    msg: format!("not a number: {field:?}"),
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse {
                        line: line + 1,
                        msg: format!("non-finite value {field:?}"),
                    });
                }
                row.push(v);
            }
            rows.push(row);
        }
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty input".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {n} columns, found {}", row.len()),
                });
            }
        }
        let mut m = Self::zeros(n);
        for i in 0..n {
            if rows[i][i].abs() > LOAD_TOLERANCE {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry {i} is {}",
                    rows[i][i]
                )));
            }
            for j in (i + 1)..n {
                let (a, b) = (rows[i][j], rows[j][i]);
                if (a - b).abs() > LOAD_TOLERANCE {
                    return Err(Error::InvalidMatrix(format!(
                        "asymmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
                let v = 0.5 * a + 0.5 * b;
                if v < 0.0 {
                    return Err(Error::InvalidMatrix(format!("negative entry at ({i},{j})")));
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 4);
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{}", self.get(i, j)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }
}

/// `C(n, k)` in 64-bit arithmetic (saturating on overflow).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(452, 4), 1_716_179_025);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(6, 0), 1);
    }

    #[test]
    fn new_rejects_bad_buffers() {
        assert!(DistanceMatrix::new(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.0, 1.0, 1.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn csv_symmetrizes_within_tolerance() {
        let m = DistanceMatrix::from_csv_str("0, 1.0\n1.0000000001, 0\n").unwrap();
        assert!((m.get(0, 1) - 1.00000000005).abs() < 1e-15);
        assert_eq!(m.get(0, 1), m.get(1, 0));
    }

    #[test]
    fn csv_rejects_asymmetry_and_ragged_rows() {
        assert!(DistanceMatrix::from_csv_str("0,1\n2,0\n").is_err());
        assert!(DistanceMatrix::from_csv_str("0,1,2\n1,0\n").is_err());
        assert!(DistanceMatrix::from_csv_str("0.5,1\n1,0\n").is_err());
        assert!(DistanceMatrix::from_csv_str("0,x\nx,0\n").is_err());
        assert!(DistanceMatrix::from_csv_str("").is_err());
        assert!(DistanceMatrix::from_csv_str("0,-1\n-1,0\n").is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let m = DistanceMatrix::from_fn(4, |i, j| (i * 7 + j) as f64 / 3.0);
        let back = DistanceMatrix::from_csv_str(&m.to_csv_string()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn metric_predicate() {
        let ok = DistanceMatrix::from_fn(3, |_, _| 1.0);
        assert!(ok.is_metric(0.0));
        let mut bad = ok.clone();
        bad.set(0, 2, 3.0);
        assert!(!bad.is_metric(1e-9));
    }
}
