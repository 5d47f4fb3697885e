#![allow(dead_code)]

use proptest::prelude::*;
use treefit::DistanceMatrix;

/// Symmetric matrices with entries drawn independently (not necessarily
/// metric). Integer-valued halves keep arithmetic exact.
pub fn dissimilarity(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DistanceMatrix> {
    n.prop_flat_map(|n| {
        proptest::collection::vec(1u32..20, n * (n - 1) / 2).prop_map(move |v| {
            let mut it = v.into_iter();
            DistanceMatrix::from_fn(n, |_, _| f64::from(it.next().unwrap()) / 2.0)
        })
    })
}

/// Shortest-path closure of a random dissimilarity: a metric.
pub fn metric(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DistanceMatrix> {
    dissimilarity(n).prop_map(|d| floyd_warshall(&d))
}

pub fn floyd_warshall(d: &DistanceMatrix) -> DistanceMatrix {
    let n = d.n();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| d.get(i, j)).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = m[i][k] + m[k][j];
                if via < m[i][j] {
                    m[i][j] = via;
                }
            }
        }
    }
    DistanceMatrix::from_fn(n, |i, j| m[i][j])
}

/// A matrix from explicit rows.
pub fn rows<const N: usize>(r: [[f64; N]; N]) -> DistanceMatrix {
    DistanceMatrix::from_fn(N, |i, j| r[i][j])
}

/// Six-point worked example (points a..f).
pub fn six_point() -> DistanceMatrix {
    rows([
        [0., 3., 5., 6., 8., 8.],
        [3., 0., 7., 8., 7., 10.],
        [5., 7., 0., 9., 5., 7.],
        [6., 8., 9., 0., 4., 5.],
        [8., 7., 5., 4., 0., 6.],
        [8., 10., 7., 5., 6., 0.],
    ])
}

/// Seven-point rooted worked example (root r first, then a..f).
pub fn seven_point() -> DistanceMatrix {
    rows([
        [0., 9., 9., 8., 10., 8., 7.],
        [9., 0., 1., 2., 5., 5., 4.],
        [9., 1., 0., 4., 7., 4., 6.],
        [8., 2., 4., 0., 7., 1., 2.],
        [10., 5., 7., 7., 0., 2., 2.],
        [8., 5., 4., 1., 2., 0., 1.],
        [7., 4., 6., 2., 2., 1., 0.],
    ])
}

/// Small metric with many tied distances.
pub fn metric_fixture() -> DistanceMatrix {
    DistanceMatrix::from_fn(8, |i, j| if (i ^ j) & 1 == 0 { 2.0 } else { 3.0 })
}
