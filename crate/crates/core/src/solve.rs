//! Longest gapped chains and last-passage times.
//!
//! All lengths are computed over open regions: a point on the boundary
//! line `x` or `t` does not count. Lattice tables are indexed by prefix
//! size, so entry `(i, j)` covers the cells with 0-based column `< i` and
//! row `< j`, and entries with a negative index read as zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{BitField, Cell, Gap, LatticeGap, Point, PointCloud, Region, WeightField};

/// Length of a maximal chain, with one maximizing chain when requested.
#[derive(Debug, Clone, PartialEq)]
pub struct PathResult<T> {
    pub length: u64,
    pub witness: Option<Vec<T>>,
}

/// Binary indexed tree over prefix maxima of packed `(value, index)` keys.
struct MaxFenwick {
    tree: Vec<u64>,
}

impl MaxFenwick {
    fn new(len: usize) -> Self {
        MaxFenwick {
            tree: vec![0; len + 1],
        }
    }

    fn update(&mut self, pos: usize, key: u64) {
        let mut i = pos + 1;
        while i < self.tree.len() {
            if self.tree[i] < key {
                self.tree[i] = key;
            }
            i += i & i.wrapping_neg();
        }
    }

    /// Maximum over positions `< len`.
    fn prefix_max(&self, len: usize) -> u64 {
        let mut i = len;
        let mut best = 0;
        while i > 0 {
            if self.tree[i] > best {
                best = self.tree[i];
            }
            i &= i - 1;
        }
        best
    }
}

#[inline]
fn pack(value: u64, index: usize) -> u64 {
    (value << 32) | (index as u64 + 1)
}

#[inline]
fn unpack(key: u64) -> (u64, Option<usize>) {
    let idx = key & 0xffff_ffff;
    (key >> 32, if idx == 0 { None } else { Some(idx as usize - 1) })
}

fn collect_witness<T: Copy>(items: &[T], parent: &[Option<usize>], end: Option<usize>) -> Vec<T> {
    let mut chain = Vec::new();
    let mut cur = end;
    while let Some(i) = cur {
        chain.push(items[i]);
        cur = parent[i];
    }
    chain.reverse();
    chain
}

/// Longest `gap`-chain among the cloud points inside the open `region`.
pub fn gap_lis_continuous(cloud: &PointCloud, region: Region, gap: Gap, witness: bool) -> PathResult<Point> {
    let pts = cloud.restricted(region);
    gap_lis_sorted(&pts, gap, witness)
}

/// Longest `gap`-chain over points already sorted by `x` with distinct coordinates.
pub fn gap_lis_sorted(pts: &[Point], gap: Gap, witness: bool) -> PathResult<Point> {
    let (level, parent) = levels_impl(pts, gap, witness);
    let best = level.iter().copied().max().unwrap_or(0);
    let chain = witness.then(|| {
        let end = level.iter().position(|&v| v == best);
        collect_witness(pts, &parent, end)
    });
    PathResult {
        length: best,
        witness: chain,
    }
}

/// For each point (sorted by `x`), the longest `gap`-chain ending at it.
///
/// Over any region of the form `(0, x) x (0, t)` the chain length equals the
/// largest level among the points inside, because such regions contain
/// every predecessor of their points.
pub fn chain_levels(pts: &[Point], gap: Gap) -> Vec<u64> {
    levels_impl(pts, gap, false).0
}

/// Sweep in `x`; a point is inserted into the prefix-maximum tree only once
/// the sweep has moved at least `h1` past it, and queries cover the `y`
/// ranks with `y + h2 <= q.y`. Both comparisons are the exact floating-point
/// tests of [`crate::model::precedes`].
fn levels_impl(pts: &[Point], gap: Gap, track: bool) -> (Vec<u64>, Vec<Option<usize>>) {
    let n = pts.len();
    let (h1, h2) = (gap.h1(), gap.h2());
    let mut ys: Vec<f64> = pts.iter().map(|p| p.y).collect();
    ys.sort_unstable_by(f64::total_cmp);
    let rank = |y: f64| ys.partition_point(|&v| v < y);

    let mut tree = MaxFenwick::new(n);
    let mut level = vec![0u64; n];
    let mut parent: Vec<Option<usize>> = if track { vec![None; n] } else { Vec::new() };
    let mut inserted = 0;
    for (qi, q) in pts.iter().enumerate() {
        while inserted < qi && pts[inserted].x + h1 <= q.x {
            tree.update(rank(pts[inserted].y), pack(level[inserted], inserted));
            inserted += 1;
        }
        let below = ys.partition_point(|&y| y + h2 <= q.y);
        let (v, from) = unpack(tree.prefix_max(below));
        level[qi] = v + 1;
        if track {
            parent[qi] = from;
        }
    }
    (level, parent)
}

/// Classic longest increasing subsequence (no gaps) by patience sorting.
pub fn patience_lis(cloud: &PointCloud, region: Region, witness: bool) -> PathResult<Point> {
    let pts = cloud.restricted(region);
    patience_sorted(&pts, witness)
}

pub fn patience_sorted(pts: &[Point], witness: bool) -> PathResult<Point> {
    // tails[k]: smallest final y of an increasing run of length k + 1.
    let mut tails: Vec<f64> = Vec::new();
    let mut tail_idx: Vec<usize> = Vec::new();
    let mut parent: Vec<Option<usize>> = if witness { vec![None; pts.len()] } else { Vec::new() };
    for (i, p) in pts.iter().enumerate() {
        let k = tails.partition_point(|&t| t < p.y);
        if witness {
            parent[i] = if k == 0 { None } else { Some(tail_idx[k - 1]) };
        }
        if k == tails.len() {
            tails.push(p.y);
            tail_idx.push(i);
        } else {
            tails[k] = p.y;
            tail_idx[k] = i;
        }
    }
    let chain = witness.then(|| collect_witness(pts, &parent, tail_idx.last().copied()));
    PathResult {
        length: tails.len() as u64,
        witness: chain,
    }
}

/// Prefix table of longest gapped chains in a bit field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LisTable {
    m: usize,
    n: usize,
    values: Vec<u32>,
}

impl LisTable {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Longest chain inside the `i x j` prefix; zero when either index is
    /// non-positive. Indices beyond the field clamp to its extent.
    #[inline]
    pub fn at(&self, i: i64, j: i64) -> u32 {
        if i <= 0 || j <= 0 {
            return 0;
        }
        let i = (i as usize).min(self.m);
        let j = (j as usize).min(self.n);
        self.values[j * (self.m + 1) + i]
    }

    /// Value on the full field.
    pub fn total(&self) -> u32 {
        self.values[self.n * (self.m + 1) + self.m]
    }
}

/// Table of longest chains over every prefix, plus a witness for the full field.
pub fn gap_lis_table(field: &BitField, gap: LatticeGap) -> LisTable {
    lis_table_impl(field, gap, false).0
}

/// Prefix table for the unit gap.
pub fn lis_11_table(field: &BitField) -> LisTable {
    gap_lis_table(field, LatticeGap::UNIT)
}

fn lis_table_impl(field: &BitField, gap: LatticeGap, track: bool) -> (LisTable, Vec<Cell>) {
    let (m, n) = (field.m(), field.n());
    let (h1, h2) = (gap.h1() as usize, gap.h2() as usize);
    let w = m + 1;
    let mut p = vec![0u32; w * (n + 1)];
    // argmax[(i, j)]: a cell realizing the prefix value, as index + 1.
    let mut arg = if track { vec![0u32; w * (n + 1)] } else { Vec::new() };
    let mut parent = if track { vec![0u32; m * n] } else { Vec::new() };
    for j in 1..=n {
        let row = field.row(j - 1);
        for i in 1..=m {
            let left = p[j * w + i - 1];
            let down = p[(j - 1) * w + i];
            let mut v = left.max(down);
            if track {
                arg[j * w + i] = if left >= down { arg[j * w + i - 1] } else { arg[(j - 1) * w + i] };
            }
            if row[i - 1] != 0 {
                let (pred, pred_arg) = if i > h1 && j > h2 {
                    let at = (j - h2) * w + (i - h1);
                    (p[at], if track { arg[at] } else { 0 })
                } else {
                    (0, 0)
                };
                if pred + 1 > v {
                    v = pred + 1;
                    if track {
                        let cell = (j - 1) * m + (i - 1);
                        parent[cell] = pred_arg;
                        arg[j * w + i] = cell as u32 + 1;
                    }
                }
            }
            p[j * w + i] = v;
        }
    }
    let mut chain = Vec::new();
    if track {
        let mut cur = arg[n * w + m];
        while cur != 0 {
            let c = cur as usize - 1;
            chain.push(Cell::new(c % m, c / m));
            cur = parent[c];
        }
        chain.reverse();
    }
    (LisTable { m, n, values: p }, chain)
}

/// Longest `gap`-chain of one-cells in the whole field.
pub fn gap_lis_discrete(field: &BitField, gap: LatticeGap, witness: bool) -> PathResult<Cell> {
    if witness {
        let (table, chain) = lis_table_impl(field, gap, true);
        PathResult {
            length: table.total() as u64,
            witness: Some(chain),
        }
    } else {
        PathResult {
            length: gap_lis_rows(field.m(), field.n(), gap, |j, row| row.copy_from_slice(field.row(j))) as u64,
            witness: None,
        }
    }
}

/// Same as [`gap_lis_discrete`] without storing the field: `fill(j, row)`
/// must write row `j` (0-based) into `row`. Memory is `O(m * h2)`.
pub fn gap_lis_rows<F>(m: usize, n: usize, gap: LatticeGap, mut fill: F) -> u32
where
    F: FnMut(usize, &mut [u8]),
{
    let (h1, h2) = (gap.h1() as usize, gap.h2() as usize);
    let slots = h2.max(1) + 1;
    let w = m + 1;
    let mut ring = vec![0u32; slots * w];
    let mut bits = vec![0u8; m];
    for j in 1..=n {
        fill(j - 1, &mut bits);
        let cur = (j % slots) * w;
        let prev = ((j - 1) % slots) * w;
        let pred = if j > h2 { Some(((j - h2) % slots) * w) } else { None };
        ring[cur] = 0;
        for i in 1..=m {
            let mut v = ring[cur + i - 1].max(ring[prev + i]);
            if bits[i - 1] != 0 {
                let before = match pred {
                    Some(base) if i > h1 => ring[base + i - h1],
                    _ => 0,
                };
                v = v.max(before + 1);
            }
            ring[cur + i] = v;
        }
    }
    ring[(n % slots) * w + m]
}

/// Prefix table of last-passage times `T(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LppTable {
    m: usize,
    n: usize,
    values: Vec<u64>,
}

impl LppTable {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `T` over the `i x j` prefix; zero when either index is non-positive.
    #[inline]
    pub fn at(&self, i: i64, j: i64) -> u64 {
        if i <= 0 || j <= 0 {
            return 0;
        }
        assert!(i as usize <= self.m && j as usize <= self.n, "passage time index out of range");
        self.values[j as usize * (self.m + 1) + i as usize]
    }

    pub fn total(&self) -> u64 {
        self.at(self.m as i64, self.n as i64)
    }
}

/// Maximal weight of a North/East path from the first to the last cell.
///
/// The witness is the whole lattice path (`m + n - 1` cells); its weights
/// sum to the returned length.
pub fn lpp_geometric(field: &WeightField, witness: bool) -> (PathResult<Cell>, LppTable) {
    let (m, n) = (field.m(), field.n());
    let w = m + 1;
    let mut t = vec![0u64; w * (n + 1)];
    for j in 1..=n {
        let row = field.row(j - 1);
        for i in 1..=m {
            t[j * w + i] = row[i - 1] as u64 + t[j * w + i - 1].max(t[(j - 1) * w + i]);
        }
    }
    let table = LppTable { m, n, values: t };
    let path = witness.then(|| {
        let mut path = Vec::with_capacity(m + n - 1);
        let (mut i, mut j) = (m, n);
        loop {
            path.push(Cell::new(i - 1, j - 1));
            if i == 1 && j == 1 {
                break;
            }
            if j == 1 || (i > 1 && table.at(i as i64 - 1, j as i64) >= table.at(i as i64, j as i64 - 1)) {
                i -= 1;
            } else {
                j -= 1;
            }
        }
        path.reverse();
        path
    });
    let length = table.total();
    (PathResult { length, witness: path }, table)
}
