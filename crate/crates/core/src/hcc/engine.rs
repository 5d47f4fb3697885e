//! Incremental hierarchical correlation clustering.
//!
//! Each cluster lives in a slot (the slot of a merged cluster is reused by
//! the result). The engine maintains, for every slot `C` and vertex `x ∉ C`:
//!
//! - `D(x, C)`: number of current edges from `x` into `C`;
//! - `H(x, C)`: whether `2·D(x, C) ≥ |C|` (stored as the top bit of `D`);
//!
//! and for every unordered pair of slots `S(A, B) = M(A, B) + M(B, A)` where
//! `M(A, B) = |{x ∈ A : H(x, B)}|`. Two disjoint clusters are highly
//! connected iff `S(A, B) = |A| + |B|`. Edges inside a cluster are never
//! needed again and are skipped. An edge that does not trigger a merge costs
//! `O(1)`; a merge costs `O(n)`, and there are at most `n − 1` of them, so a
//! full ordering runs in `O(n²)`.

use super::linkage::{MergeLog, MergeRow};
use super::ordering::EdgeOrdering;
use crate::error::{Error, Result};

/// Whether every `x ∈ X` has at least `|Y|/2` neighbors in `Y` and every
/// `y ∈ Y` at least `|X|/2` neighbors in `X`.
///
/// Checked from scratch against `adjacent`; used as the reference for the
/// incremental engine.
pub fn is_highly_connected(
    cluster_x: &[usize],
    cluster_y: &[usize],
    adjacent: impl Fn(usize, usize) -> bool,
) -> Result<bool> {
    if cluster_x.is_empty() || cluster_y.is_empty() {
        return Err(Error::InvalidArgument("clusters must be nonempty".into()));
    }
    if let Some(&v) = cluster_x.iter().find(|v| cluster_y.contains(v)) {
        return Err(Error::OverlappingClusters(v));
    }
    let half_ok = |from: &[usize], to: &[usize]| {
        from.iter()
            .all(|&a| 2 * to.iter().filter(|&&b| adjacent(a, b)).count() >= to.len())
    };
    Ok(half_ok(cluster_x, cluster_y) && half_ok(cluster_y, cluster_x))
}

/// Storage for `D` (with the `H` flag in the top bit) and `S`. The engine
/// is memory-bound, so small inputs use 16-bit cells.
trait Cell: Copy + Default + std::fmt::Debug {
    const FLAG: u32;
    fn get(self) -> u32;
    fn put(v: u32) -> Self;
}

impl Cell for u16 {
    const FLAG: u32 = 1 << 15;
    #[inline]
    fn get(self) -> u32 {
        u32::from(self)
    }
    #[inline]
    fn put(v: u32) -> Self {
        v as u16
    }
}

impl Cell for u32 {
    const FLAG: u32 = 1 << 31;
    #[inline]
    fn get(self) -> u32 {
        self
    }
    #[inline]
    fn put(v: u32) -> Self {
        v
    }
}

#[derive(Debug, Clone)]
struct Core<C> {
    n: usize,
    /// vertex -> slot
    slot_of: Vec<usize>,
    /// slot -> public cluster id (leaf index or `n + row`)
    slot_id: Vec<usize>,
    size: Vec<usize>,
    members: Vec<Vec<usize>>,
    /// D with the H flag, slot-major: `degree[slot * n + x]`
    degree: Vec<C>,
    /// S, packed lower triangle: slots `lo < hi` at `hi·(hi−1)/2 + lo`
    mutual: Vec<C>,
    /// live slots, and each slot's position in that list
    live: Vec<usize>,
    live_pos: Vec<usize>,
    /// per-slot scratch for merges
    delta_a: Vec<i64>,
    delta_b: Vec<u32>,
    step: usize,
    rows: Vec<MergeRow>,
}

#[inline]
fn prefetch_read<T>(cell: &T) {
    #[cfg(target_arch = "x86_64")]
    // SAFETY: prefetching is a hint and never faults, and SSE is part of the
    // x86_64 baseline.
    unsafe {
        use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
        _mm_prefetch::<_MM_HINT_T0>((cell as *const T).cast::<i8>());
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = cell;
}

#[inline]
fn key(a: usize, b: usize) -> usize {
    let (lo, hi) = (a.min(b), a.max(b));
    hi * (hi - 1) / 2 + lo
}

impl<C: Cell> Core<C> {
    fn new(n: usize) -> Self {
        assert!(n <= C::FLAG as usize, "too many vertices");
        Self {
            n,
            slot_of: (0..n).collect(),
            slot_id: (0..n).collect(),
            size: vec![1; n],
            members: (0..n).map(|v| vec![v]).collect(),
            degree: vec![C::default(); n * n],
            mutual: vec![C::default(); n * n.saturating_sub(1) / 2],
            live: (0..n).collect(),
            live_pos: (0..n).collect(),
            delta_a: vec![0; n],
            delta_b: vec![0; n],
            step: 0,
            rows: Vec::with_capacity(n.saturating_sub(1)),
        }
    }

    fn would_merge(&self, x: usize, y: usize) -> bool {
        let (a, b) = (self.slot_of[x], self.slot_of[y]);
        a != b && self.mutual[key(a, b)].get() as usize == self.size[a] + self.size[b]
    }

    #[inline]
    fn bump(&mut self, x: usize, into: usize, pair: usize) {
        let idx = into * self.n + x;
        let v = self.degree[idx].get() + 1;
        if v & C::FLAG == 0 && 2 * v as usize >= self.size[into] {
            self.degree[idx] = C::put(v | C::FLAG);
            self.mutual[pair] = C::put(self.mutual[pair].get() + 1);
        } else {
            self.degree[idx] = C::put(v);
        }
    }

    /// Hints the cache about the cells an upcoming edge will touch. Slots
    /// may change before the edge arrives; a stale hint only wastes a load.
    #[inline]
    fn prefetch(&self, x: usize, y: usize) {
        let (a, b) = (self.slot_of[x], self.slot_of[y]);
        if a != b {
            prefetch_read(&self.degree[b * self.n + x]);
            prefetch_read(&self.degree[a * self.n + y]);
            prefetch_read(&self.mutual[key(a, b)]);
        }
    }

    #[inline]
    fn push_edge(&mut self, x: usize, y: usize, height: f64) -> Option<MergeRow> {
        self.step += 1;
        let (a, b) = (self.slot_of[x], self.slot_of[y]);
        if a == b {
            return None;
        }
        let pair = key(a, b);
        self.bump(x, b, pair);
        self.bump(y, a, pair);
        if self.mutual[pair].get() as usize != self.size[a] + self.size[b] {
            return None;
        }
        Some(self.merge(a, b, height))
    }

    fn merge(&mut self, a: usize, b: usize, height: f64) -> MergeRow {
        let n = self.n;
        let (id_a, id_b) = (self.slot_id[a], self.slot_id[b]);
        let size = self.size[a] + self.size[b];
        let row = MergeRow {
            id_a: id_a.min(id_b),
            id_b: id_a.max(id_b),
            height,
            size,
            step: self.step,
        };

        // D(x, new) = D(x, a) + D(x, b). For x in another slot c, S(c, a)
        // trades H(x, a) for H(x, new) and S(c, b) drops H(x, b), leaving
        // S(c, a) = M(a, c) + M(c, new) and S(c, b) = M(b, c). The changes
        // are gathered per slot first so the strided S lookups happen once
        // per live slot rather than once per vertex.
        let flag = C::FLAG;
        for x in 0..n {
            let c = self.slot_of[x];
            let (ra, rb) = (self.degree[a * n + x].get(), self.degree[b * n + x].get());
            let count = (ra & !flag) + (rb & !flag);
            let h = 2 * count as usize >= size;
            self.degree[a * n + x] = C::put(if h { count | flag } else { count });
            self.degree[b * n + x] = C::default();
            self.delta_a[c] += i64::from(h) - i64::from(ra & flag != 0);
            self.delta_b[c] += u32::from(rb & flag != 0);
        }
        // S(new, c) = M(a, c) + M(b, c) + M(c, new)
        for i in 0..self.live.len() {
            let c = self.live[i];
            let (da, db) = (self.delta_a[c], self.delta_b[c]);
            self.delta_a[c] = 0;
            self.delta_b[c] = 0;
            if c == a || c == b {
                continue;
            }
            let (ka, kb) = (key(a, c), key(b, c));
            let merged = i64::from(self.mutual[ka].get()) + da + i64::from(self.mutual[kb].get() - db);
            self.mutual[ka] = C::put(merged as u32);
            self.mutual[kb] = C::default();
        }
        self.mutual[key(a, b)] = C::default();
        let pos = self.live_pos[b];
        self.live.swap_remove(pos);
        if let Some(&moved_slot) = self.live.get(pos) {
            self.live_pos[moved_slot] = pos;
        }

        let moved = std::mem::take(&mut self.members[b]);
        for &v in &moved {
            self.slot_of[v] = a;
        }
        self.members[a].extend(moved);
        self.size[a] = size;
        self.size[b] = 0;

        self.slot_id[a] = n + self.rows.len();
        self.rows.push(row);
        row
    }
}

#[derive(Debug, Clone)]
enum Cells {
    Narrow(Core<u16>),
    Wide(Core<u32>),
}

macro_rules! with_core {
    ($self:expr, $c:ident => $body:expr) => {
        match $self {
            Cells::Narrow($c) => $body,
            Cells::Wide($c) => $body,
        }
    };
}

/// Online hierarchical correlation clustering: feed edges one at a time
/// with [`HccEngine::push_edge`].
#[derive(Debug, Clone)]
pub struct HccEngine(Cells);

impl HccEngine {
    pub fn new(n: usize) -> Self {
        if n <= <u16 as Cell>::FLAG as usize {
            Self(Cells::Narrow(Core::new(n)))
        } else {
            Self(Cells::Wide(Core::new(n)))
        }
    }

    pub fn n(&self) -> usize {
        with_core!(&self.0, c => c.n)
    }

    /// Number of edges processed so far.
    pub fn step(&self) -> usize {
        with_core!(&self.0, c => c.step)
    }

    /// Public id of the cluster currently containing `v`.
    pub fn cluster_of(&self, v: usize) -> usize {
        with_core!(&self.0, c => c.slot_id[c.slot_of[v]])
    }

    /// Members of the cluster currently containing `v`.
    pub fn members_of(&self, v: usize) -> &[usize] {
        with_core!(&self.0, c => &c.members[c.slot_of[v]])
    }

    pub fn rows(&self) -> &[MergeRow] {
        with_core!(&self.0, c => &c.rows)
    }

    /// Whether the incremental bookkeeping currently says the clusters of
    /// `x` and `y` are highly connected.
    pub fn would_merge(&self, x: usize, y: usize) -> bool {
        with_core!(&self.0, c => c.would_merge(x, y))
    }

    /// Processes the next edge `(x, y)`; returns the merge it triggered.
    pub fn push_edge(&mut self, x: usize, y: usize, height: f64) -> Option<MergeRow> {
        with_core!(&mut self.0, c => c.push_edge(x, y, height))
    }

    pub fn into_log(self) -> MergeLog {
        with_core!(self.0, c => MergeLog::from_rows_unchecked(c.n, c.rows))
    }
}

/// How many edges ahead `run` prefetches the D and S cells it will touch.
const PREFETCH_DISTANCE: usize = 16;

fn run<C: Cell>(order: &EdgeOrdering) -> MergeLog {
    let mut core = Core::<C>::new(order.n());
    let pairs = order.pairs();
    for (t, &(x, y)) in pairs.iter().enumerate() {
        if let Some(&(u, v)) = pairs.get(t + PREFETCH_DISTANCE) {
            core.prefetch(u, v);
        }
        core.push_edge(x, y, order.height_at(t + 1));
    }
    debug_assert!(order.n() == 0 || core.rows.len() == order.n() - 1);
    MergeLog::from_rows_unchecked(core.n, core.rows)
}

/// Runs hierarchical correlation clustering over a full edge ordering.
///
/// A merge is logged whenever the arriving edge joins two distinct
/// clusters that are highly connected under the edges seen so far. Heights
/// are the edge weights, or the step index for unweighted orderings.
pub fn hcc_triangle(order: &EdgeOrdering) -> MergeLog {
    if order.n() <= <u16 as Cell>::FLAG as usize {
        run::<u16>(order)
    } else {
        run::<u32>(order)
    }
}
