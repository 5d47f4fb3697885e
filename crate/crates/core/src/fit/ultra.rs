use serde::Serialize;

use crate::hcc::{hcc_triangle, EdgeOrdering, MergeLog};
use crate::metricspace::DistanceMatrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ultrametric {
    pub matrix: DistanceMatrix,
    /// Merge sequence the matrix was read from, if any.
    pub log: Option<MergeLog>,
}

/// Runs the clustering engine over the pairs sorted by distance (ties by
/// `(i, j)`) and reads `d_U(x, y)` off as the height of the first merge
/// that joins `x` and `y`.
///
/// `‖d − d_U‖₁ ≤ 4‖Δ(d)‖₁`.
pub fn hcc_ultra_fit(d: &DistanceMatrix) -> (Ultrametric, MergeLog) {
    let log = hcc_triangle(&EdgeOrdering::by_distance(d));
    let matrix = log.ultrametric();
    (
        Ultrametric {
            matrix,
            log: Some(log.clone()),
        },
        log,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_point_fixture() {
        let rows = [
            [0., 3., 5., 6., 8., 8.],
            [3., 0., 7., 8., 7., 10.],
            [5., 7., 0., 9., 5., 7.],
            [6., 8., 9., 0., 4., 5.],
            [8., 7., 5., 4., 0., 6.],
            [8., 10., 7., 5., 6., 0.],
        ];
        let expect = [
            [0., 3., 7., 8., 8., 8.],
            [3., 0., 7., 8., 8., 8.],
            [7., 7., 0., 8., 8., 8.],
            [8., 8., 8., 0., 4., 6.],
            [8., 8., 8., 4., 0., 6.],
            [8., 8., 8., 6., 6., 0.],
        ];
        let (u, log) = hcc_ultra_fit(&DistanceMatrix::from_fn(6, |i, j| rows[i][j]));
        assert_eq!(u.matrix, DistanceMatrix::from_fn(6, |i, j| expect[i][j]));
        assert!(log.heights_nondecreasing());
    }

    #[test]
    fn ultrametric_is_a_fixed_point() {
        let d = DistanceMatrix::from_fn(7, |i, j| if i / 3 == j / 3 { 1.0 } else { 4.0 });
        assert_eq!(hcc_ultra_fit(&d).0.matrix, d);
    }
}
