//! Gromov products, three/four point conditions and the hyperbolicity and
//! ultrametricity statistics built on them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::{binomial, DistanceMatrix};
use crate::error::{Error, Result};

/// Largest tuple count (`C(n,4)`) that [`hyp_stats`] enumerates exhaustively.
pub const EXACT_TUPLE_LIMIT: u64 = 100_000_000;

/// Sampling work is split into this many independently seeded chunks so the
/// result does not depend on the number of worker threads.
const SAMPLE_CHUNKS: u64 = 64;

pub fn gromov_product(d: &DistanceMatrix, w: usize, x: usize, y: usize) -> Result<f64> {
    for i in [w, x, y] {
        d.check_index(i)?;
    }
    Ok(gp_unchecked(d, w, x, y))
}

#[inline]
pub(crate) fn gp_unchecked(d: &DistanceMatrix, w: usize, x: usize, y: usize) -> f64 {
    0.5 * (d.get(x, w) + d.get(y, w) - d.get(x, y))
}

/// Three point condition: the largest of the three pairwise distances minus
/// the second largest.
pub fn three_point(d: &DistanceMatrix, x: usize, y: usize, z: usize) -> Result<f64> {
    check_distinct(d, &[x, y, z])?;
    Ok(tp_unchecked(d, x, y, z))
}

#[inline]
pub(crate) fn tp_unchecked(d: &DistanceMatrix, x: usize, y: usize, z: usize) -> f64 {
    tp_of(d.get(x, y), d.get(x, z), d.get(y, z))
}

#[inline]
fn tp_of(a: f64, b: f64, c: f64) -> f64 {
    let (hi, mid) = top_two(a, b, c);
    hi - mid
}

/// Four point condition: half the gap between the two largest of the
/// three pair sums. Symmetric in all four arguments.
pub fn four_point(d: &DistanceMatrix, x: usize, y: usize, z: usize, w: usize) -> Result<f64> {
    check_distinct(d, &[x, y, z, w])?;
    Ok(fp_unchecked(d, x, y, z, w))
}

#[inline]
pub(crate) fn fp_unchecked(d: &DistanceMatrix, x: usize, y: usize, z: usize, w: usize) -> f64 {
    let s1 = d.get(x, y) + d.get(z, w);
    let s2 = d.get(x, z) + d.get(y, w);
    let s3 = d.get(x, w) + d.get(y, z);
    let (hi, mid) = top_two(s1, s2, s3);
    0.5 * (hi - mid)
}

#[inline]
fn top_two(a: f64, b: f64, c: f64) -> (f64, f64) {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if c >= hi {
        (c, hi)
    } else if c >= lo {
        (hi, c)
    } else {
        (hi, lo)
    }
}

fn check_distinct(d: &DistanceMatrix, idx: &[usize]) -> Result<()> {
    for &i in idx {
        d.check_index(i)?;
    }
    for a in 0..idx.len() {
        for b in (a + 1)..idx.len() {
            if idx[a] == idx[b] {
                return Err(Error::DuplicateIndices(idx.to_vec()));
            }
        }
    }
    Ok(())
}

/// Per-triple values of the four point condition (with a base point) or the
/// three point condition (without one), in lexicographic triple order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypVector {
    pub base: Option<usize>,
    pub values: Vec<f64>,
}

impl HypVector {
    pub fn l1(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn lp(&self, p: f64) -> f64 {
        if p.is_infinite() {
            self.linf()
        } else {
            self.values.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `Δ_w(d)`: `fp(d; x, y, z, w)` over the triples of `X ∖ {w}`.
pub fn hyperbolicity_vector(d: &DistanceMatrix, w: usize) -> Result<HypVector> {
    d.check_index(w)?;
    let others: Vec<usize> = (0..d.n()).filter(|&v| v != w).collect();
    let m = others.len();
    let mut values = Vec::with_capacity(binomial(m as u64, 3) as usize);
    if d.n() >= 4 {
        for a in 0..m {
            for b in (a + 1)..m {
                for c in (b + 1)..m {
                    values.push(fp_unchecked(d, others[a], others[b], others[c], w));
                }
            }
        }
    }
    Ok(HypVector {
        base: Some(w),
        values,
    })
}

/// `‖Δ_w(d)‖₁` without materializing the vector.
pub fn hyperbolicity_l1(d: &DistanceMatrix, w: usize) -> Result<f64> {
    d.check_index(w)?;
    let n = d.n();
    let mut total = 0.0;
    for x in 0..n {
        if x == w {
            continue;
        }
        for y in (x + 1)..n {
            if y == w {
                continue;
            }
            for z in (y + 1)..n {
                if z != w {
                    total += fp_unchecked(d, x, y, z, w);
                }
            }
        }
    }
    Ok(total)
}

/// `‖Δ_w(d)‖∞`.
pub fn hyperbolicity_linf(d: &DistanceMatrix, w: usize) -> Result<f64> {
    Ok(hyperbolicity_vector(d, w)?.linf())
}

/// `Δ(d)`: `tp(d; x, y, z)` over all triples.
pub fn ultrametricity_vector(d: &DistanceMatrix) -> HypVector {
    let n = d.n();
    let mut values = Vec::with_capacity(binomial(n as u64, 3) as usize);
    for x in 0..n {
        for y in (x + 1)..n {
            for z in (y + 1)..n {
                values.push(tp_unchecked(d, x, y, z));
            }
        }
    }
    HypVector { base: None, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StatsMode {
    Exact,
    Sampled { count: u64, seed: u64 },
}

/// Scalar hyperbolicity / ultrametricity summaries.
///
/// `avg_*_p` use the requested exponent; `avg_*_1` are always reported since
/// the fitting bounds are stated in terms of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypStats {
    pub n: usize,
    pub p: f64,
    pub hyp: f64,
    pub um: f64,
    pub avg_hyp_p: f64,
    pub avg_um_p: f64,
    pub avg_hyp_1: f64,
    pub avg_um_1: f64,
    pub exact: bool,
    pub sample_count: Option<u64>,
    pub seed: Option<u64>,
    /// 95% normal half-width of the sampled mean of `fp^p`.
    pub hyp_half_width: Option<f64>,
    /// 95% normal half-width of the sampled mean of `tp^p`.
    pub um_half_width: Option<f64>,
}

impl HypStats {
    /// Guaranteed average distortion of the best-base rooted tree fit:
    /// `8·C(n−1,3)·AvgHyp₁ / C(n,2)`.
    pub fn tree_fit_bound(&self) -> f64 {
        let pairs = binomial(self.n as u64, 2);
        if pairs == 0 {
            return 0.0;
        }
        8.0 * binomial(self.n as u64 - 1, 3) as f64 * self.avg_hyp_1 / pairs as f64
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Acc {
    count: u64,
    max: f64,
    sum_p: f64,
    sum_1: f64,
    sum_p_sq: f64,
}

impl Acc {
    #[inline]
    fn push(&mut self, v: f64, p: f64) {
        self.count += 1;
        self.max = self.max.max(v);
        self.sum_1 += v;
        let vp = pow(v, p);
        self.sum_p += vp;
        self.sum_p_sq += vp * vp;
    }

    fn merge(mut self, o: Acc) -> Acc {
        self.count += o.count;
        self.max = self.max.max(o.max);
        self.sum_p += o.sum_p;
        self.sum_1 += o.sum_1;
        self.sum_p_sq += o.sum_p_sq;
        self
    }

    fn avg_p(&self, p: f64) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        if p.is_infinite() {
            return self.max;
        }
        let mean = self.sum_p / self.count as f64;
        if p == 1.0 {
            mean
        } else {
            mean.powf(1.0 / p)
        }
    }

    fn avg_1(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum_1 / self.count as f64
        }
    }

    fn half_width(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let c = self.count as f64;
        let mean = self.sum_p / c;
        let var = ((self.sum_p_sq - c * mean * mean) / (c - 1.0)).max(0.0);
        1.96 * (var / c).sqrt()
    }
}

#[inline]
fn pow(v: f64, p: f64) -> f64 {
    if p == 1.0 || p.is_infinite() {
        v
    } else {
        v.powf(p)
    }
}

fn exact_quadruples(d: &DistanceMatrix, p: f64) -> Acc {
    let n = d.n();
    let parts: Vec<Acc> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut acc = Acc::default();
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    for e in (c + 1)..n {
                        acc.push(fp_unchecked(d, a, b, c, e), p);
                    }
                }
            }
            acc
        })
        .collect();
    parts.into_iter().fold(Acc::default(), Acc::merge)
}

fn exact_triples(d: &DistanceMatrix, p: f64) -> Acc {
    let n = d.n();
    let parts: Vec<Acc> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut acc = Acc::default();
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    acc.push(tp_unchecked(d, a, b, c), p);
                }
            }
            acc
        })
        .collect();
    parts.into_iter().fold(Acc::default(), Acc::merge)
}

fn distinct_indices<const K: usize>(rng: &mut ChaCha8Rng, n: usize) -> [usize; K] {
    let mut out = [0usize; K];
    let mut filled = 0;
    while filled < K {
        let v = rng.gen_range(0..n);
        if !out[..filled].contains(&v) {
            out[filled] = v;
            filled += 1;
        }
    }
    out
}

fn sampled<const K: usize>(
    d: &DistanceMatrix,
    p: f64,
    count: u64,
    seed: u64,
    eval: impl Fn(&DistanceMatrix, [usize; K]) -> f64 + Sync,
) -> Acc {
    let n = d.n();
    let parts: Vec<Acc> = (0..SAMPLE_CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let share = count / SAMPLE_CHUNKS + u64::from(chunk < count % SAMPLE_CHUNKS);
            let mut acc = Acc::default();
            for _ in 0..share {
                acc.push(eval(d, distinct_indices::<K>(&mut rng, n)), p);
            }
            acc
        })
        .collect();
    parts.into_iter().fold(Acc::default(), Acc::merge)
}

/// Computes `Hyp`, `UM`, `AvgHyp_p` and `AvgUM_p`.
///
/// Exact mode enumerates all quadruples and triples and is refused when
/// `C(n,4)` exceeds [`EXACT_TUPLE_LIMIT`]. Sampled mode draws `count`
/// uniformly random quadruples and triples (with replacement) from a seeded
/// stream; when `count` covers every tuple it enumerates them instead and
/// the result is exact. Sampled maxima are lower bounds.
pub fn hyp_stats(d: &DistanceMatrix, p: f64, mode: StatsMode) -> Result<HypStats> {
    hyp_stats_with_limit(d, p, mode, EXACT_TUPLE_LIMIT)
}

pub fn hyp_stats_with_limit(
    d: &DistanceMatrix,
    p: f64,
    mode: StatsMode,
    exact_limit: u64,
) -> Result<HypStats> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!("exponent p = {p} must be in [1, ∞]")));
    }
    let n = d.n();
    let quads = binomial(n as u64, 4);
    let triples = binomial(n as u64, 3);
    let (q, t, exact, sample_count, seed) = match mode {
        StatsMode::Exact => {
            if quads > exact_limit {
                return Err(Error::ExactTooLarge {
                    count: quads,
                    limit: exact_limit,
                });
            }
            (exact_quadruples(d, p), exact_triples(d, p), true, None, None)
        }
        StatsMode::Sampled { count, seed } => {
            if count == 0 {
                return Err(Error::InvalidArgument("sample count must be positive".into()));
            }
            let (q, q_exact) = if count >= quads {
                (exact_quadruples(d, p), true)
            } else {
                let q = sampled::<4>(d, p, count, seed, |d, [a, b, c, e]| {
                    fp_unchecked(d, a, b, c, e)
                });
                (q, false)
            };
            let (t, t_exact) = if count >= triples {
                (exact_triples(d, p), true)
            } else {
                let t = sampled::<3>(d, p, count, seed ^ 0x9e37_79b9_7f4a_7c15, |d, [a, b, c]| {
                    tp_unchecked(d, a, b, c)
                });
                (t, false)
            };
            (q, t, q_exact && t_exact, Some(count), Some(seed))
        }
    };
    let sampled_mode = matches!(mode, StatsMode::Sampled { .. });
    Ok(HypStats {
        n,
        p,
        hyp: q.max,
        um: t.max,
        avg_hyp_p: q.avg_p(p),
        avg_um_p: t.avg_p(p),
        avg_hyp_1: q.avg_1(),
        avg_um_1: t.avg_1(),
        exact,
        sample_count,
        seed,
        hyp_half_width: sampled_mode.then(|| q.half_width()),
        um_half_width: sampled_mode.then(|| t.half_width()),
    })
}
