//! Exhaustive enumeration of small instances.
//!
//! Configurations are counted by the exponents of `p^a (1-p)^b` they carry,
//! so one enumeration serves any `p`. With `p = u/v` the masses are summed
//! exactly as big rationals; otherwise in `f64`.
//!
//! Enumeration is depth-first in row-major order with the prefix table
//! updated one cell at a time. A partial configuration whose prefix value
//! already exceeds the truncation level is cut off and its whole subtree is
//! credited to the tail at once.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exec::ParMap;
use crate::model::{cell_precedes, precedes, BitField, Cell, LatticeGap, Point};

/// Largest field for an untruncated gapped-path distribution.
pub const MAX_FULL_CELLS: usize = 20;
/// Largest field for a truncated gapped-path distribution.
pub const MAX_TRUNCATED_CELLS: usize = 28;
/// Bound on `(k_max + 1)^(mn)` for passage-time enumeration.
pub const MAX_WEIGHT_CONFIGS: f64 = 5e7;
/// Largest set handed to [`brute_chains_points`] or [`brute_chains_cells`].
pub const MAX_BRUTE: usize = 16;
/// Agreement tolerance in floating-point mode.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance too large for enumeration: {what} = {size}, limit {limit}")]
    TooLarge {
        what: &'static str,
        size: f64,
        limit: f64,
    },
    #[error("invalid probability {0:?}; expected u/v with 0 < u < v or a real in (0, 1)")]
    BadProbability(String),
}

/// The Bernoulli/geometric parameter, exact or real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbParam {
    Ratio { num: u64, den: u64 },
    Real(f64),
}

impl ProbParam {
    pub fn ratio(num: u64, den: u64) -> Result<Self, OracleError> {
        if num == 0 || num >= den {
            return Err(OracleError::BadProbability(alloc::format!("{num}/{den}")));
        }
        Ok(ProbParam::Ratio { num, den })
    }

    pub fn real(p: f64) -> Result<Self, OracleError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(OracleError::BadProbability(alloc::format!("{p}")));
        }
        Ok(ProbParam::Real(p))
    }

    /// Parses `u/v` as an exact ratio, anything else as a real.
    pub fn parse(s: &str) -> Result<Self, OracleError> {
        let bad = || OracleError::BadProbability(s.to_string());
        match s.split_once('/') {
            Some((u, v)) => {
                let u = u.trim().parse().map_err(|_| bad())?;
                let v = v.trim().parse().map_err(|_| bad())?;
                ProbParam::ratio(u, v).map_err(|_| bad())
            }
            None => ProbParam::real(s.trim().parse().map_err(|_| bad())?).map_err(|_| bad()),
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            ProbParam::Ratio { num, den } => num as f64 / den as f64,
            ProbParam::Real(p) => p,
        }
    }
}

/// A probability, exact or approximate.
#[derive(Debug, Clone, PartialEq)]
pub enum Prob {
    Exact(BigRational),
    Approx(f64),
}

impl Prob {
    pub fn one(exact: bool) -> Prob {
        if exact {
            Prob::Exact(BigRational::one())
        } else {
            Prob::Approx(1.0)
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Prob::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Prob::Approx(x) => *x,
        }
    }

    /// `|self - other|`, exact when both sides are exact.
    pub fn distance(&self, other: &Prob) -> f64 {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => (a - b).abs().to_f64().unwrap_or(f64::NAN),
            _ => (self.to_f64() - other.to_f64()).abs(),
        }
    }

    /// Exact equality for rationals, [`FLOAT_TOL`] otherwise.
    pub fn agrees(&self, other: &Prob) -> bool {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => a == b,
            _ => self.distance(other) <= FLOAT_TOL,
        }
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prob::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Prob::Approx(x) => write!(f, "{x}"),
        }
    }
}

/// Number of configurations contributing `p^a (1-p)^b`, keyed by `(a, b)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MassPoly {
    terms: BTreeMap<(u32, u32), u64>,
}

impl MassPoly {
    pub fn add(&mut self, a: u32, b: u32, count: u64) {
        if count > 0 {
            *self.terms.entry((a, b)).or_insert(0) += count;
        }
    }

    pub fn merge(&mut self, other: &MassPoly) {
        for (&(a, b), &c) in &other.terms {
            self.add(a, b, c);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, p: ProbParam) -> Prob {
        match p {
            ProbParam::Ratio { num, den } => {
                let deg = self.terms.keys().map(|&(a, b)| a + b).max().unwrap_or(0);
                let (u, v) = (BigInt::from(num), BigInt::from(den));
                let w = BigInt::from(den - num);
                let mut acc = BigInt::zero();
                for (&(a, b), &c) in &self.terms {
                    let term = num_traits::pow(u.clone(), a as usize)
                        * num_traits::pow(w.clone(), b as usize)
                        * num_traits::pow(v.clone(), (deg - a - b) as usize);
                    acc += term * BigInt::from(c);
                }
                Prob::Exact(BigRational::new(acc, num_traits::pow(v, deg as usize)))
            }
            ProbParam::Real(x) => {
                let (lp, lq) = (libm::log(x), libm::log1p(-x));
                let s = self
                    .terms
                    .iter()
                    .map(|(&(a, b), &c)| c as f64 * libm::exp(a as f64 * lp + b as f64 * lq))
                    .sum();
                Prob::Approx(s)
            }
        }
    }
}

/// Distribution of an integer path length, possibly truncated above `k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDist {
    p: ProbParam,
    buckets: Vec<MassPoly>,
    tail: MassPoly,
    truncated: bool,
}

impl ExactDist {
    pub fn param(&self) -> ProbParam {
        self.p
    }

    /// Values with recorded mass, in increasing order.
    pub fn support(&self) -> Vec<u64> {
        (0..self.buckets.len() as u64).filter(|&k| !self.buckets[k as usize].is_empty()).collect()
    }

    /// Mass of each value in [`ExactDist::support`].
    pub fn masses(&self) -> Vec<Prob> {
        self.support().into_iter().map(|k| self.buckets[k as usize].eval(self.p)).collect()
    }

    /// Mass above the truncation level (zero when untruncated).
    pub fn tail_mass(&self) -> Prob {
        self.tail.eval(self.p)
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Largest value whose point mass is known.
    pub fn known_up_to(&self) -> u64 {
        self.buckets.len() as u64 - 1
    }

    /// `P(value <= k)`; panics for truncated distributions beyond their level.
    pub fn cdf(&self, k: u64) -> Prob {
        assert!(
            !self.truncated || k <= self.known_up_to(),
            "cdf queried above the truncation level"
        );
        let mut poly = MassPoly::default();
        for b in self.buckets.iter().take(k as usize + 1) {
            poly.merge(b);
        }
        poly.eval(self.p)
    }

    /// Sum of all masses including the tail; one up to rounding.
    pub fn total(&self) -> Prob {
        let mut poly = self.tail.clone();
        for b in &self.buckets {
            poly.merge(b);
        }
        poly.eval(self.p)
    }
}

/// Per-task counts, merged in task order.
struct Partial {
    // leaves[value][a], all with the same number b of (1-p) factors
    leaves: Vec<Vec<u64>>,
    // tail[(a, b)] flattened with stride `stride`
    tail: Vec<u64>,
}

fn finish(p: ProbParam, parts: Vec<Partial>, levels: usize, leaf_b: impl Fn(usize) -> u32, stride: usize, truncated: bool) -> ExactDist {
    let mut buckets = vec![MassPoly::default(); levels];
    let mut tail = MassPoly::default();
    for part in parts {
        for (v, row) in part.leaves.iter().enumerate() {
            for (a, &c) in row.iter().enumerate() {
                buckets[v].add(a as u32, leaf_b(a), c);
            }
        }
        for (idx, &c) in part.tail.iter().enumerate() {
            tail.add((idx / stride) as u32, (idx % stride) as u32, c);
        }
    }
    while buckets.len() > 1 && buckets.last().is_some_and(|b| b.is_empty()) && !truncated {
        buckets.pop();
    }
    ExactDist {
        p,
        buckets,
        tail,
        truncated,
    }
}

/// Number of leading cells fixed per parallel task.
fn split_depth(cells: usize, base: f64) -> usize {
    let mut d = 0;
    while d < cells && libm::pow(base, (d + 1) as f64) <= 1024.0 {
        d += 1;
    }
    d
}

struct LisEnum {
    m: usize,
    cells: usize,
    w: usize,
    h1: usize,
    h2: usize,
    cap: u32,
    table: Vec<u32>,
    part: Partial,
}

impl LisEnum {
    /// Writes cell `r` and returns its prefix value.
    #[inline]
    fn set(&mut self, r: usize, bit: bool) -> u32 {
        let (i, j) = (r % self.m + 1, r / self.m + 1);
        let w = self.w;
        let mut v = self.table[j * w + i - 1].max(self.table[(j - 1) * w + i]);
        if bit {
            let pred = if i > self.h1 && j > self.h2 {
                self.table[(j - self.h2) * w + i - self.h1]
            } else {
                0
            };
            v = v.max(pred + 1);
        }
        self.table[j * w + i] = v;
        v
    }

    fn dfs(&mut self, r: usize, ones: usize) {
        if r == self.cells {
            let v = self.table[self.table.len() - 1] as usize;
            self.part.leaves[v][ones] += 1;
            return;
        }
        for bit in [false, true] {
            let ones = ones + bit as usize;
            if self.set(r, bit) > self.cap {
                self.part.tail[ones * (self.cells + 1) + (r + 1 - ones)] += 1;
            } else {
                self.dfs(r + 1, ones);
            }
        }
    }
}

fn enumerate_lis<E: ParMap>(m: usize, n: usize, gap: LatticeGap, cap: u32, exec: &E) -> Vec<Partial> {
    let cells = m * n;
    let d = split_depth(cells, 2.0);
    let levels = (cap as usize).min(cells) + 1;
    exec.map(1usize << d, |u| {
        let mut e = LisEnum {
            m: m.max(1),
            cells,
            w: m + 1,
            h1: gap.h1() as usize,
            h2: gap.h2() as usize,
            cap,
            table: vec![0; (m + 1) * (n + 1)],
            part: Partial {
                leaves: vec![vec![0; cells + 1]; levels],
                tail: vec![0; (cells + 1) * (cells + 1)],
            },
        };
        let mut ones = 0;
        for r in 0..d {
            let bit = u >> r & 1 == 1;
            ones += bit as usize;
            if e.set(r, bit) > cap {
                // credit the cut subtree only once, from its all-zero continuation
                if u >> (r + 1) == 0 {
                    e.part.tail[ones * (cells + 1) + (r + 1 - ones)] += 1;
                }
                return e.part;
            }
        }
        e.dfs(d, ones);
        e.part
    })
}

/// Full distribution of the gapped path length over all `m x n` fields.
pub fn exact_dist_gap_lis<E: ParMap>(
    m: usize,
    n: usize,
    p: ProbParam,
    gap: LatticeGap,
    exec: &E,
) -> Result<ExactDist, OracleError> {
    let cells = m * n;
    if cells > MAX_FULL_CELLS {
        return Err(OracleError::TooLarge {
            what: "cells",
            size: cells as f64,
            limit: MAX_FULL_CELLS as f64,
        });
    }
    let parts = enumerate_lis(m, n, gap, u32::MAX, exec);
    Ok(finish(p, parts, cells + 1, |a| (cells - a) as u32, cells + 1, false))
}

/// Distribution of the gapped path length known exactly up to `k_max`.
pub fn exact_cdf_gap_lis<E: ParMap>(
    m: usize,
    n: usize,
    p: ProbParam,
    gap: LatticeGap,
    k_max: u64,
    exec: &E,
) -> Result<ExactDist, OracleError> {
    let cells = m * n;
    if cells > MAX_TRUNCATED_CELLS {
        return Err(OracleError::TooLarge {
            what: "cells",
            size: cells as f64,
            limit: MAX_TRUNCATED_CELLS as f64,
        });
    }
    let cap = k_max.min(cells as u64) as u32;
    let parts = enumerate_lis(m, n, gap, cap, exec);
    let mut dist = finish(p, parts, cap as usize + 1, |a| (cells - a) as u32, cells + 1, true);
    dist.buckets.resize(k_max as usize + 1, MassPoly::default());
    Ok(dist)
}

struct LppEnum {
    m: usize,
    cells: usize,
    w: usize,
    cap: u64,
    table: Vec<u64>,
    part: Partial,
    stride: usize,
}

impl LppEnum {
    #[inline]
    fn set(&mut self, r: usize, weight: u64) -> u64 {
        let (i, j) = (r % self.m + 1, r / self.m + 1);
        let w = self.w;
        let v = weight + self.table[j * w + i - 1].max(self.table[(j - 1) * w + i]);
        self.table[j * w + i] = v;
        v
    }

    fn cut(&mut self, a: usize, b: usize) {
        self.part.tail[a * self.stride + b] += 1;
    }

    fn dfs(&mut self, r: usize, a: usize) {
        if r == self.cells {
            let v = self.table[self.table.len() - 1] as usize;
            self.part.leaves[v][a] += 1;
            return;
        }
        for weight in 0..=self.cap {
            let a = a + weight as usize;
            if self.set(r, weight) > self.cap {
                self.cut(a, r + 1);
            } else {
                self.dfs(r + 1, a);
            }
        }
        // weight above the cap: mass p^(cap+1) for this cell
        self.cut(a + self.cap as usize + 1, r);
    }
}

/// Distribution of the last-passage time over all geometric `m x n` fields,
/// known exactly up to `k_max`. Every cell lies on some path, so `T <= k`
/// forces all weights `<= k` and larger weights go straight to the tail.
pub fn exact_dist_lpp<E: ParMap>(m: usize, n: usize, p: ProbParam, k_max: u64, exec: &E) -> Result<ExactDist, OracleError> {
    let cells = m * n;
    let configs = libm::pow(k_max as f64 + 1.0, cells as f64);
    if configs > MAX_WEIGHT_CONFIGS {
        return Err(OracleError::TooLarge {
            what: "(k_max + 1)^(mn)",
            size: configs,
            limit: MAX_WEIGHT_CONFIGS,
        });
    }
    let base = k_max as usize + 2;
    let d = split_depth(cells, base as f64);
    let max_a = cells * (k_max as usize + 1) + 1;
    let stride = cells + 1;
    let tasks = base.pow(d as u32);
    let parts = exec.map(tasks, |u| {
        let mut e = LppEnum {
            m: m.max(1),
            cells,
            w: m + 1,
            cap: k_max,
            table: vec![0; (m + 1) * (n + 1)],
            part: Partial {
                leaves: vec![vec![0; max_a + 1]; k_max as usize + 1],
                tail: vec![0; (max_a + 1) * stride],
            },
            stride,
        };
        let mut a = 0;
        let mut rest = u;
        for r in 0..d {
            let digit = rest % base;
            rest /= base;
            let cut = if digit == base - 1 {
                Some((a + k_max as usize + 1, r))
            } else {
                a += digit;
                (e.set(r, digit as u64) > k_max).then_some((a, r + 1))
            };
            if let Some((ta, tb)) = cut {
                if rest == 0 {
                    e.cut(ta, tb);
                }
                return e.part;
            }
        }
        e.dfs(d, a);
        e.part
    });
    Ok(finish(p, parts, k_max as usize + 1, |_| cells as u32, stride, true))
}

/// One `k` of an identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityRow {
    pub k: u64,
    pub lhs: Prob,
    pub rhs: Prob,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub rows: Vec<IdentityRow>,
    pub max_discrepancy: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }

    fn from_rows(rows: Vec<IdentityRow>) -> Self {
        let max_discrepancy = rows.iter().map(|r| r.lhs.distance(&r.rhs)).fold(0.0, f64::max);
        IdentityCheck { rows, max_discrepancy }
    }
}

/// `P(gapped length on m x n <= k) = P(T on (m - h1 k) x (n - h2 k) <= k)`
/// for `k = 0..=k_max`, with `T = 0` on an empty index set.
pub fn verify_theorem6<E: ParMap>(
    m: usize,
    n: usize,
    gap: LatticeGap,
    p: ProbParam,
    k_max: u64,
    exec: &E,
) -> Result<IdentityCheck, OracleError> {
    let exact = matches!(p, ProbParam::Ratio { .. });
    let lhs = exact_cdf_gap_lis(m, n, p, gap, k_max, exec)?;
    let mut rows = Vec::new();
    for k in 0..=k_max {
        let mm = m as i64 - gap.h1() as i64 * k as i64;
        let nn = n as i64 - gap.h2() as i64 * k as i64;
        let rhs = if mm <= 0 || nn <= 0 {
            Prob::one(exact)
        } else {
            exact_dist_lpp(mm as usize, nn as usize, p, k, exec)?.cdf(k)
        };
        let l = lhs.cdf(k);
        let equal = l.agrees(&rhs);
        rows.push(IdentityRow { k, lhs: l, rhs, equal });
    }
    Ok(IdentityCheck::from_rows(rows))
}

/// `P(gapped length on m x n <= k)
///  = P(unit-gap length on (m - (h1-1) k) x (n - (h2-1) k) <= k)`.
pub fn verify_lemma9<E: ParMap>(
    m: usize,
    n: usize,
    gap: LatticeGap,
    p: ProbParam,
    k_max: u64,
    exec: &E,
) -> Result<IdentityCheck, OracleError> {
    let exact = matches!(p, ProbParam::Ratio { .. });
    let lhs = exact_cdf_gap_lis(m, n, p, gap, k_max, exec)?;
    let mut rows = Vec::new();
    for k in 0..=k_max {
        let mm = m as i64 - (gap.h1() as i64 - 1) * k as i64;
        let nn = n as i64 - (gap.h2() as i64 - 1) * k as i64;
        let rhs = if mm <= 0 || nn <= 0 {
            Prob::one(exact)
        } else {
            exact_cdf_gap_lis(mm as usize, nn as usize, p, LatticeGap::UNIT, k, exec)?.cdf(k)
        };
        let l = lhs.cdf(k);
        let equal = l.agrees(&rhs);
        rows.push(IdentityRow { k, lhs: l, rhs, equal });
    }
    Ok(IdentityCheck::from_rows(rows))
}

fn too_many(len: usize) -> OracleError {
    OracleError::TooLarge {
        what: "elements",
        size: len as f64,
        limit: MAX_BRUTE as f64,
    }
}

/// Longest chain by checking every subset. Points must be sorted by `x`.
pub fn brute_chains_points(points: &[Point], gap: crate::model::Gap) -> Result<u64, OracleError> {
    if points.len() > MAX_BRUTE {
        return Err(too_many(points.len()));
    }
    let mut best = 0;
    for mask in 1u32..(1 << points.len()) {
        let chosen: Vec<Point> = (0..points.len()).filter(|&i| mask >> i & 1 == 1).map(|i| points[i]).collect();
        if chosen.windows(2).all(|w| precedes(w[0], w[1], gap)) {
            best = best.max(chosen.len() as u64);
        }
    }
    Ok(best)
}

/// Longest chain of one-cells by checking every subset of them.
pub fn brute_chains_cells(field: &BitField, gap: LatticeGap) -> Result<u64, OracleError> {
    let ones = field.ones();
    if ones.len() > MAX_BRUTE {
        return Err(too_many(ones.len()));
    }
    let mut best = 0;
    for mask in 1u32..(1 << ones.len()) {
        let chosen: Vec<Cell> = (0..ones.len()).filter(|&i| mask >> i & 1 == 1).map(|i| ones[i]).collect();
        if chosen.windows(2).all(|w| cell_precedes(w[0], w[1], gap)) {
            best = best.max(chosen.len() as u64);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;
    use crate::model::Gap;

    fn half() -> ProbParam {
        ProbParam::ratio(1, 2).unwrap()
    }

    fn q(n: i64, d: i64) -> Prob {
        Prob::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn two_by_two_unit_gap() {
        let d = exact_dist_gap_lis(2, 2, half(), LatticeGap::UNIT, &Serial).unwrap();
        assert_eq!(d.cdf(1), q(3, 4));
        assert_eq!(d.total(), q(1, 1));
        assert_eq!(d.support(), vec![0, 1, 2]);
    }

    #[test]
    fn one_cell() {
        let p = ProbParam::ratio(1, 3).unwrap();
        let d = exact_dist_gap_lis(1, 1, p, LatticeGap::UNIT, &Serial).unwrap();
        assert_eq!(d.masses(), vec![q(2, 3), q(1, 3)]);
        for k in 0..4u64 {
            let l = exact_dist_lpp(1, 1, p, 4, &Serial).unwrap();
            // 1 - p^(k+1)
            let expect = BigRational::one() - num_traits::pow(BigRational::new(1.into(), 3.into()), k as usize + 1);
            assert_eq!(l.cdf(k), Prob::Exact(expect));
            assert_eq!(l.total(), q(1, 1));
        }
    }

    #[test]
    fn lpp_two_cells() {
        let l = exact_dist_lpp(2, 1, half(), 1, &Serial).unwrap();
        assert_eq!(l.cdf(1), q(1, 2));
        assert_eq!(l.total(), q(1, 1));
    }

    #[test]
    fn truncation_preserves_mass() {
        let full = exact_dist_gap_lis(3, 4, half(), LatticeGap::new(1, 0).unwrap(), &Serial).unwrap();
        let cut = exact_cdf_gap_lis(3, 4, half(), LatticeGap::new(1, 0).unwrap(), 1, &Serial).unwrap();
        assert_eq!(cut.total(), q(1, 1));
        assert_eq!(full.cdf(0), cut.cdf(0));
        assert_eq!(full.cdf(1), cut.cdf(1));
    }

    #[test]
    fn float_mode_matches_rational() {
        let g = LatticeGap::new(2, 1).unwrap();
        let exact = exact_dist_gap_lis(3, 3, ProbParam::ratio(1, 4).unwrap(), g, &Serial).unwrap();
        let float = exact_dist_gap_lis(3, 3, ProbParam::real(0.25).unwrap(), g, &Serial).unwrap();
        for k in 0..3 {
            assert!(exact.cdf(k).distance(&float.cdf(k)) < 1e-14);
        }
        assert!((float.total().to_f64() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn theorem6_examples() {
        let r = verify_theorem6(2, 2, LatticeGap::UNIT, half(), 2, &Serial).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_discrepancy, 0.0);
        assert_eq!(r.rows[1].lhs, q(3, 4));
        assert_eq!(r.rows[0].lhs, q(1, 16));
        assert_eq!(r.rows[2].rhs, q(1, 1));
    }

    #[test]
    fn lemma9_examples() {
        let r = verify_lemma9(4, 2, LatticeGap::new(2, 1).unwrap(), half(), 2, &Serial).unwrap();
        assert!(r.passed());
        let r = verify_lemma9(2, 2, LatticeGap::new(1, 0).unwrap(), half(), 2, &Serial).unwrap();
        assert!(r.passed());
        let r = verify_lemma9(3, 2, LatticeGap::UNIT, ProbParam::ratio(1, 4).unwrap(), 2, &Serial).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn size_limits() {
        assert!(matches!(
            exact_dist_gap_lis(5, 5, half(), LatticeGap::UNIT, &Serial),
            Err(OracleError::TooLarge { .. })
        ));
        assert!(matches!(exact_dist_lpp(4, 4, half(), 4, &Serial), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn parse_probabilities() {
        assert_eq!(ProbParam::parse("1/4"), Ok(ProbParam::Ratio { num: 1, den: 4 }));
        assert_eq!(ProbParam::parse("0.3"), Ok(ProbParam::Real(0.3)));
        assert!(ProbParam::parse("4/4").is_err());
        assert!(ProbParam::parse("x").is_err());
        assert_eq!(q(3, 4).to_string(), "3/4");
    }

    #[test]
    fn brute_examples() {
        assert_eq!(brute_chains_points(&[], Gap::ZERO), Ok(0));
        let pts = [Point::new(1.0, 1.0), Point::new(2.0, 2.0), Point::new(3.0, 3.0)];
        assert_eq!(brute_chains_points(&pts, Gap::ZERO), Ok(3));
        let many = BitField::from_vec(5, 4, vec![1; 20]).unwrap();
        assert!(brute_chains_cells(&many, LatticeGap::UNIT).is_err());
    }
}
