use serde::Serialize;

use crate::baselines::single_linkage_ultrametric;
use crate::error::{Error, Result};
use crate::metricspace::DistanceMatrix;

/// Offsets that turn rooted tree fitting at base `w` into ultrametric
/// fitting: `c_w(x, y) = 2M − d(x, w) − d(y, w) = (β_x + β_y)/2` with
/// `β_x = 2(M − d(x, w))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionContext {
    w: usize,
    m: f64,
    dw: Vec<f64>,
}

impl ReductionContext {
    pub fn new(d: &DistanceMatrix, w: usize) -> Result<Self> {
        d.check_index(w)?;
        let dw: Vec<f64> = d.row(w).to_vec();
        let m = dw.iter().copied().fold(0.0, f64::max);
        Ok(Self { w, m, dw })
    }

    pub fn base(&self) -> usize {
        self.w
    }

    pub fn n(&self) -> usize {
        self.dw.len()
    }

    /// `M = max_x d(x, w)`.
    pub fn m(&self) -> f64 {
        self.m
    }

    /// `d(x, w)`, the root distance of point `x`.
    pub fn root_distance(&self, x: usize) -> f64 {
        self.dw[x]
    }

    pub fn beta(&self, x: usize) -> f64 {
        2.0 * (self.m - self.dw[x])
    }

    /// `c_w(x, y)`; zero on the diagonal.
    pub fn offset(&self, x: usize, y: usize) -> f64 {
        if x == y {
            0.0
        } else {
            2.0 * self.m - self.dw[x] - self.dw[y]
        }
    }

    /// `d + c_w`. Pairs with `w` are exactly `2M`.
    pub fn reduced(&self, d: &DistanceMatrix) -> DistanceMatrix {
        DistanceMatrix::from_fn(d.n(), |i, j| {
            if i == self.w || j == self.w {
                2.0 * self.m
            } else {
                (d.get(i, j) + self.offset(i, j)).max(0.0)
            }
        })
    }

    /// `d_U − c_w`, mapping an admissible ultrametric back to a tree
    /// metric. Where `d_U(w, x) = 2M` the result is exactly `d(w, x)`.
    pub fn unreduce(&self, d_u: &DistanceMatrix) -> DistanceMatrix {
        let two_m = 2.0 * self.m;
        DistanceMatrix::from_fn(d_u.n(), |i, j| {
            let u = d_u.get(i, j);
            if (i == self.w || j == self.w) && u == two_m {
                self.dw[i + j - self.w]
            } else {
                (u - self.offset(i, j)).max(0.0)
            }
        })
    }

    /// Whether `max(β_x, β_y) ≤ d_U(x, y) ≤ 2M` for every pair, within `tol`.
    pub fn no_clip_holds(&self, d_u: &DistanceMatrix, tol: f64) -> bool {
        let two_m = 2.0 * self.m;
        d_u.pairs()
            .all(|(i, j, u)| u >= self.beta(i).max(self.beta(j)) - tol && u <= two_m + tol)
    }

    pub(crate) fn clip(&self, d_u: &DistanceMatrix) -> DistanceMatrix {
        let two_m = 2.0 * self.m;
        DistanceMatrix::from_fn(d_u.n(), |i, j| {
            d_u.get(i, j).max(self.beta(i)).max(self.beta(j)).min(two_m)
        })
    }
}

/// Clips every entry of an ultrametric into `[max(β_x, β_y), 2M]`.
///
/// The result is still an ultrametric, is entrywise at least as close to
/// `d + c_w` as the input, and maps back to a tree metric through
/// [`ReductionContext::unreduce`]. Inputs are checked against their own
/// subdominant ultrametric, which equals them exactly when they are
/// ultrametric.
pub fn restrict_reduced_ultrametric(d_u: &DistanceMatrix, ctx: &ReductionContext) -> Result<DistanceMatrix> {
    if d_u.n() != ctx.n() {
        return Err(Error::InvalidArgument(format!(
            "ultrametric has {} points, reduction has {}",
            d_u.n(),
            ctx.n()
        )));
    }
    let (sub, _) = single_linkage_ultrametric(d_u);
    if let Some((i, j, v)) = sub.matrix.pairs().find(|&(i, j, v)| v != d_u.get(i, j)) {
        return Err(Error::NotUltrametric(format!(
            "entry ({i},{j}) = {} exceeds its minimax path value {v}",
            d_u.get(i, j)
        )));
    }
    Ok(ctx.clip(d_u))
}
