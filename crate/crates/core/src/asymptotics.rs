//! Limit shapes and fluctuation scales.
//!
//! Continuous model: `f(a,b) = 2√(ab)` for the Poisson field and its gapped
//! version `f^h`. Discrete model: the geometric last-passage shape `g(a,b)`,
//! the gapped shape `g^h` as the fixed point of `λ = g(a - h1 λ, b - h2 λ)`,
//! and the reduced direction `(α, β)` that carries fluctuation statements
//! over from last-passage percolation.

use alloc::string::String;
use alloc::vec::Vec;

use libm::{cbrt, pow, sqrt};
use thiserror::Error;

use crate::model::{Direction, Gap, LatticeGap};

const BISECTION_ITERS: usize = 200;
/// Relative tolerance for the critical-direction test `a h2 == b h1`.
const CRITICAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("p must lie in (0,1), got {0}")]
    Probability(f64),
    #[error("direction lies on a flat edge ({0:?}); no reduced direction exists")]
    FlatEdge(Branch),
    #[error("direction ({a}, {b}) is not critical for gap ({h1}, {h2}); only sandwich bounds apply")]
    NonCritical { a: f64, b: f64, h1: u32, h2: u32 },
    #[error("no Tracy-Widom reference table was supplied")]
    MissingTable,
    #[error("bad Tracy-Widom table: {0}")]
    Table(String),
    #[error("regime parameter must be in [0, inf], got {0}")]
    Regime(f64),
}

/// Which piece of a limit shape a direction falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Interior,
    /// Saturated at `a / h1`.
    FlatEdgeA,
    /// Saturated at `b / h2`.
    FlatEdgeB,
    /// Continuous gaps on the line `h1 h2 = 1/4`.
    Critical,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Interior => "interior",
            Branch::FlatEdgeA => "flat_edge_a",
            Branch::FlatEdgeB => "flat_edge_b",
            Branch::Critical => "critical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitResult {
    pub value: f64,
    pub branch: Branch,
    /// `|λ - rhs(λ)|` of the defining fixed-point equation; zero on flat edges.
    pub residual: f64,
}

/// Centering and `n^{1/3}` scale of a fluctuation limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationScale {
    pub center: f64,
    pub scale: f64,
    pub exponent: f64,
}

impl FluctuationScale {
    fn new(center: f64, scale: f64) -> Self {
        FluctuationScale {
            center,
            scale,
            exponent: 1.0 / 3.0,
        }
    }
}

/// Reduced direction with `g(α, β) = g^h(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBeta {
    pub alpha: f64,
    pub beta: f64,
    /// Max of the two residuals `|α + h1 g(α,β) - a|`, `|β + h2 g(α,β) - b|`.
    pub residual: f64,
}

fn check_p(p: f64) -> Result<(), AsymptoticsError> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(AsymptoticsError::Probability(p))
    }
}

/// `2√(ab)`.
pub fn f_limit(d: Direction) -> f64 {
    2.0 * sqrt(d.a() * d.b())
}

/// Root of `λ = 2√((a - h1 λ)(b - h2 λ))` with both factors non-negative.
///
/// Evaluated as `2ab / (A + √D)` with `A = a h2 + b h1`,
/// `D = (a h2 - b h1)^2 + ab`, which covers both the generic branch and the
/// line `h1 h2 = 1/4` without cancellation.
pub fn f_gap_limit(d: Direction, h: Gap) -> f64 {
    let (a, b) = (d.a(), d.b());
    let (h1, h2) = (h.h1(), h.h2());
    let s = a * h2 + b * h1;
    let diff = a * h2 - b * h1;
    2.0 * a * b / (s + sqrt(diff * diff + a * b))
}

/// `f_gap_limit` with its branch label and fixed-point residual.
pub fn f_gap_result(d: Direction, h: Gap) -> LimitResult {
    let value = f_gap_limit(d, h);
    let rhs = 2.0 * sqrt(((d.a() - h.h1() * value) * (d.b() - h.h2() * value)).max(0.0));
    LimitResult {
        value,
        branch: if 4.0 * h.h1() * h.h2() == 1.0 {
            Branch::Critical
        } else {
            Branch::Interior
        },
        residual: (value - rhs).abs(),
    }
}

/// Centering `f^h` and scale `f^{4/3} 2^{-1/3} / (2(b h1 + a h2) + f (1 - 4 h1 h2))`.
pub fn sigma_gap_continuous(d: Direction, h: Gap) -> FluctuationScale {
    let (a, b) = (d.a(), d.b());
    let (h1, h2) = (h.h1(), h.h2());
    let f = f_gap_limit(d, h);
    let scale = pow(f, 4.0 / 3.0) / cbrt(2.0) / (2.0 * (b * h1 + a * h2) + f * (1.0 - 4.0 * h1 * h2));
    FluctuationScale::new(f, scale)
}

/// Geometric last-passage shape on the closed quadrant; no argument checks.
pub fn g_extended(a: f64, b: f64, p: f64) -> f64 {
    let sp = sqrt(p);
    sp * (2.0 * sqrt(a * b) + (a + b) * sp) / (1.0 - p)
}

/// `√p (2√(ab) + (a+b)√p) / (1 - p)`.
pub fn g_limit(d: Direction, p: f64) -> Result<f64, AsymptoticsError> {
    check_p(p)?;
    Ok(g_extended(d.a(), d.b(), p))
}

/// Direction-ratio thresholds `(lower, upper)` on `a/b`: the interior is the
/// open interval between them.
pub fn flat_edge_thresholds(h: LatticeGap, p: f64) -> (f64, f64) {
    let (h1, h2) = (h.h1() as f64, h.h2() as f64);
    let inv = 1.0 / p;
    let lower = h1 / ((h2 - 1.0) + inv);
    let upper = if h2 == 0.0 { f64::INFINITY } else { (h1 - 1.0 + inv) / h2 };
    (lower, upper)
}

/// Bisection for `λ = g(a - h1 λ, b - h2 λ)` on `[0, min(λ0, g(a,b))]`.
///
/// Works for real gaps, including `(0, 0)` where the root is `g(a, b)`.
/// Returns the root and its residual.
pub fn gap_fixed_point(a: f64, b: f64, h1: f64, h2: f64, p: f64) -> (f64, f64) {
    let rhs = |l: f64| g_extended((a - h1 * l).max(0.0), (b - h2 * l).max(0.0), p);
    let mut hi = g_extended(a, b, p);
    if h1 > 0.0 {
        hi = hi.min(a / h1);
    }
    if h2 > 0.0 {
        hi = hi.min(b / h2);
    }
    let mut lo = 0.0;
    if rhs(hi) - hi >= 0.0 {
        return (hi, (rhs(hi) - hi).abs());
    }
    for _ in 0..BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rhs(mid) - mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_lo = (rhs(lo) - lo).abs();
    let r_hi = (rhs(hi) - hi).abs();
    if r_lo <= r_hi {
        (lo, r_lo)
    } else {
        (hi, r_hi)
    }
}

/// Gapped lattice shape `g^h(a, b)`.
///
/// Directions with `a/b` at or beyond a threshold of [`flat_edge_thresholds`]
/// return `a/h1` or `b/h2` exactly.
pub fn g_gap_limit(d: Direction, h: LatticeGap, p: f64) -> Result<LimitResult, AsymptoticsError> {
    check_p(p)?;
    let (a, b) = (d.a(), d.b());
    let (lower, upper) = flat_edge_thresholds(h, p);
    let ratio = a / b;
    if ratio <= lower {
        return Ok(LimitResult {
            value: a / h.h1() as f64,
            branch: Branch::FlatEdgeA,
            residual: 0.0,
        });
    }
    if ratio >= upper {
        return Ok(LimitResult {
            value: b / h.h2() as f64,
            branch: Branch::FlatEdgeB,
            residual: 0.0,
        });
    }
    let (value, residual) = gap_fixed_point(a, b, h.h1() as f64, h.h2() as f64, p);
    Ok(LimitResult {
        value,
        branch: Branch::Interior,
        residual,
    })
}

/// `(α, β) = (a - h1 g^h, b - h2 g^h)`, verified against `g(α, β) = g^h`.
pub fn solve_alpha_beta(d: Direction, h: LatticeGap, p: f64) -> Result<AlphaBeta, AsymptoticsError> {
    let lim = g_gap_limit(d, h, p)?;
    if lim.branch != Branch::Interior {
        return Err(AsymptoticsError::FlatEdge(lim.branch));
    }
    let (h1, h2) = (h.h1() as f64, h.h2() as f64);
    let alpha = d.a() - h1 * lim.value;
    let beta = d.b() - h2 * lim.value;
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(AsymptoticsError::FlatEdge(if alpha <= 0.0 {
            Branch::FlatEdgeA
        } else {
            Branch::FlatEdgeB
        }));
    }
    let g = g_extended(alpha, beta, p);
    let residual = (alpha + h1 * g - d.a()).abs().max((beta + h2 * g - d.b()).abs());
    Ok(AlphaBeta {
        alpha,
        beta,
        residual,
    })
}

/// Johansson's scale for geometric last-passage times.
pub fn sigma_johansson(d: Direction, p: f64) -> Result<f64, AsymptoticsError> {
    check_p(p)?;
    Ok(johansson(d.a(), d.b(), p))
}

fn johansson(a: f64, b: f64, p: f64) -> f64 {
    let sp = sqrt(p);
    pow(p, 1.0 / 6.0) / (1.0 - p)
        * pow(a * b, -1.0 / 6.0)
        * pow(sqrt(a) + sp * sqrt(b), 2.0 / 3.0)
        * pow(sqrt(b) + sp * sqrt(a), 2.0 / 3.0)
}

/// True when `a / h1 == b / h2` with both gap components positive.
pub fn is_critical_direction(d: Direction, h: LatticeGap) -> bool {
    if h.h1() == 0 || h.h2() == 0 {
        return false;
    }
    let l = d.a() * h.h2() as f64;
    let r = d.b() * h.h1() as f64;
    (l - r).abs() <= CRITICAL_TOL * l.max(r)
}

/// Centering `g^h` and scale `σ(α, β) √(αβ / (ab))` in the critical direction.
pub fn sigma_gap_discrete(d: Direction, h: LatticeGap, p: f64) -> Result<FluctuationScale, AsymptoticsError> {
    check_p(p)?;
    if !is_critical_direction(d, h) {
        return Err(AsymptoticsError::NonCritical {
            a: d.a(),
            b: d.b(),
            h1: h.h1(),
            h2: h.h2(),
        });
    }
    let lim = g_gap_limit(d, h, p)?;
    let ab = solve_alpha_beta(d, h, p)?;
    let scale = johansson(ab.alpha, ab.beta, p) * sqrt(ab.alpha * ab.beta / (d.a() * d.b()));
    Ok(FluctuationScale::new(lim.value, scale))
}

/// Tabulated Tracy-Widom CDF, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct TwTable {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl TwTable {
    /// Requires strictly increasing finite `x`, and `F` non-decreasing in `[0, 1]`.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, AsymptoticsError> {
        if points.len() < 2 {
            return Err(AsymptoticsError::Table("need at least two rows".into()));
        }
        for (i, &(x, f)) in points.iter().enumerate() {
            if !x.is_finite() || !(0.0..=1.0).contains(&f) {
                return Err(AsymptoticsError::Table(alloc::format!("row {i}: ({x}, {f}) out of range")));
            }
            if i > 0 {
                let (px, pf) = points[i - 1];
                if x <= px {
                    return Err(AsymptoticsError::Table(alloc::format!("row {i}: x not strictly increasing")));
                }
                if f < pf {
                    return Err(AsymptoticsError::Table(alloc::format!("row {i}: F decreases")));
                }
            }
        }
        let (xs, fs) = points.into_iter().unzip();
        Ok(TwTable { xs, fs })
    }

    /// Parses `x,F` rows; a non-numeric first line is taken as a header.
    pub fn parse_csv(text: &str) -> Result<Self, AsymptoticsError> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',').map(str::trim);
            let (Some(xs), Some(fs), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(AsymptoticsError::Table(alloc::format!("line {}: expected two columns", lineno + 1)));
            };
            match (xs.parse::<f64>(), fs.parse::<f64>()) {
                (Ok(x), Ok(f)) => points.push((x, f)),
                _ if points.is_empty() && lineno == 0 => continue,
                _ => return Err(AsymptoticsError::Table(alloc::format!("line {}: not numeric", lineno + 1))),
            }
        }
        TwTable::new(points)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// `F(x)`; `+inf` maps to 1, `-inf` to 0, finite values outside the table
    /// take the nearest end value.
    pub fn cdf(&self, x: f64) -> f64 {
        if x == f64::INFINITY {
            return 1.0;
        }
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        let k = self.xs.partition_point(|&t| t <= x);
        if k == 0 {
            return self.fs[0];
        }
        if k == self.xs.len() {
            return self.fs[k - 1];
        }
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (f0, f1) = (self.fs[k - 1], self.fs[k]);
        f0 + (f1 - f0) * (x - x0) / (x1 - x0)
    }
}

/// Asymptotic bounds on `P(W <= x)` for the standardized statistic
/// `W = (𝓛 - g^h n) / (σ(α, β) n^{1/3})` off the critical direction.
///
/// The bounds are `F(x r_min)` and `F(x r_max)` with `r = {a/α, b/β}`,
/// ordered so that `lower <= upper` for either sign of `x`.
pub fn report_sandwich(
    d: Direction,
    h: LatticeGap,
    p: f64,
    x: f64,
    table: Option<&TwTable>,
) -> Result<(f64, f64), AsymptoticsError> {
    let table = table.ok_or(AsymptoticsError::MissingTable)?;
    let ab = solve_alpha_beta(d, h, p)?;
    let ra = d.a() / ab.alpha;
    let rb = d.b() / ab.beta;
    let (rmin, rmax) = if ra <= rb { (ra, rb) } else { (rb, ra) };
    let scaled = |r: f64| if x.is_infinite() { x } else { x * r };
    if x >= 0.0 {
        Ok((table.cdf(scaled(rmin)), table.cdf(scaled(rmax))))
    } else {
        Ok((table.cdf(scaled(rmax)), table.cdf(scaled(rmin))))
    }
}

/// How the path length is normalized in a scaling regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Divide by `√λ_t · t`.
    SqrtIntensityTime,
    /// Divide by `t / h_t`.
    TimeOverGap,
}

impl Normalization {
    pub fn name(&self) -> &'static str {
        match self {
            Normalization::SqrtIntensityTime => "sqrt(lambda)*t",
            Normalization::TimeOverGap => "t/h",
        }
    }
}

/// Limit when gap `(h_t, h_t)` and intensity `λ_t` vary with `t` and
/// `h_t √λ_t -> c`.
pub fn regime_limit(c: f64, d: Direction) -> Result<(Normalization, f64), AsymptoticsError> {
    if c.is_nan() || c < 0.0 {
        return Err(AsymptoticsError::Regime(c));
    }
    if c == f64::INFINITY {
        return Ok((Normalization::TimeOverGap, d.a().min(d.b())));
    }
    let gap = Gap::new(c, c).map_err(|_| AsymptoticsError::Regime(c))?;
    Ok((Normalization::SqrtIntensityTime, f_gap_limit(d, gap)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir(a: f64, b: f64) -> Direction {
        Direction::new(a, b).unwrap()
    }

    fn lg(h1: u32, h2: u32) -> LatticeGap {
        LatticeGap::new(h1, h2).unwrap()
    }

    fn gap(h1: f64, h2: f64) -> Gap {
        Gap::new(h1, h2).unwrap()
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    // Textbook two-branch formula, kept apart from the rationalized evaluator.
    fn f_gap_two_branch(a: f64, b: f64, h1: f64, h2: f64) -> f64 {
        let q = 4.0 * h1 * h2 - 1.0;
        if q == 0.0 {
            a * b / (h1 * b + h2 * a)
        } else {
            let d = (a * h2 - b * h1).powi(2) + a * b;
            (2.0 * (a * h2 + b * h1) - 2.0 * d.sqrt()) / q
        }
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_limit(dir(1.0, 1.0)), 2.0);
        assert_eq!(f_limit(dir(4.0, 1.0)), 4.0);
        assert_eq!(f_limit(dir(2.0, 7.0)), f_limit(dir(7.0, 2.0)));
    }

    #[test]
    fn f_gap_examples() {
        let d = dir(1.0, 1.0);
        assert!(close(f_gap_limit(d, gap(1.0, 1.0)), 2.0 / 3.0, 1e-15));
        let v = f_gap_limit(d, gap(1.0, 0.0));
        assert!(close(v, 2.0 * 2f64.sqrt() - 2.0, 1e-15));
        assert!(close(v, f_gap_two_branch(1.0, 1.0, 1.0, 0.0), 1e-14));
        for h in [0.3, 1.0, 2.5] {
            let special = 2.0 * (h * h + 1.0f64).sqrt() - 2.0 * h;
            assert!(close(f_gap_limit(d, gap(h, 0.0)), special, 1e-14));
            assert!(close(f_gap_limit(d, gap(h, h)), 2.0 / (1.0 + 2.0 * h), 1e-15));
        }
        let half = f_gap_result(d, gap(0.5, 0.5));
        assert_eq!(half.branch, Branch::Critical);
        assert!(close(half.value, 1.0, 1e-15));
        assert!(close(f_gap_two_branch(1.0, 1.0, 0.5, 0.5), 1.0, 1e-15));
        assert!(close(f_gap_limit(dir(3.0, 5.0), Gap::ZERO), f_limit(dir(3.0, 5.0)), 1e-14));
    }

    #[test]
    fn f_gap_matches_two_branch_and_fixed_point() {
        for &(a, b) in &[(1.0, 1.0), (2.0, 0.5), (0.3, 4.0)] {
            for &(h1, h2) in &[(0.1, 0.2), (1.0, 3.0), (0.0, 2.0), (2.0, 0.125)] {
                let r = f_gap_result(dir(a, b), gap(h1, h2));
                assert!(r.residual < 1e-12, "{a} {b} {h1} {h2}: {}", r.residual);
                assert!(close(r.value, f_gap_two_branch(a, b, h1, h2), 1e-10));
            }
        }
    }

    #[test]
    fn f_gap_continuous_across_quarter_line() {
        let d = dir(1.3, 0.7);
        let on = f_gap_limit(d, gap(0.5, 0.5));
        for eps in [1e-4, 1e-6, 1e-8] {
            let above = f_gap_two_branch(1.3, 0.7, 0.5 + eps, 0.5);
            let below = f_gap_two_branch(1.3, 0.7, 0.5 - eps, 0.5);
            assert!(close(above, on, 1e-3) && close(below, on, 1e-3));
        }
    }

    #[test]
    fn sigma_continuous_examples() {
        let d = dir(1.0, 1.0);
        assert!(close(sigma_gap_continuous(d, Gap::ZERO).scale, 1.0, 1e-15));
        for h in [1.0, 2.0, 0.25] {
            let s = sigma_gap_continuous(d, gap(h, h));
            assert!(close(s.scale, (1.0 + 2.0 * h).powf(-4.0 / 3.0), 1e-14));
            assert!(close(s.center, 2.0 / (1.0 + 2.0 * h), 1e-15));
        }
        assert!(close(sigma_gap_continuous(d, gap(1.0, 1.0)).scale, 0.2311, 1e-4));
        assert!(close(sigma_gap_continuous(d, gap(2.0, 2.0)).scale, 0.1170, 1e-4));
    }

    #[test]
    fn g_examples() {
        assert!(close(g_limit(dir(1.0, 1.0), 0.25).unwrap(), 2.0, 1e-15));
        let base = g_limit(dir(1.5, 0.4), 0.3).unwrap();
        assert!(close(g_limit(dir(4.5, 1.2), 0.3).unwrap(), 3.0 * base, 1e-13));
        assert_eq!(g_limit(dir(1.5, 0.4), 0.3), g_limit(dir(0.4, 1.5), 0.3));
        assert_eq!(g_limit(dir(1.0, 1.0), 1.0), Err(AsymptoticsError::Probability(1.0)));
        assert_eq!(g_limit(dir(1.0, 1.0), 0.0), Err(AsymptoticsError::Probability(0.0)));
        assert!(close(g_extended(0.0, 2.0, 0.5), 2.0, 1e-15));
    }

    #[test]
    fn g_gap_examples() {
        let d = dir(1.0, 1.0);
        let r = g_gap_limit(d, lg(1, 1), 0.25).unwrap();
        assert_eq!(r.branch, Branch::Interior);
        assert!(close(r.value, 2.0 / 3.0, 1e-12) && r.residual < 1e-10);

        let r = g_gap_limit(d, lg(1, 0), 0.25).unwrap();
        assert_eq!(r.branch, Branch::Interior);
        assert!(close(r.value, 0.866_025_403_784_438_6, 1e-12));

        let r = g_gap_limit(d, lg(1, 1), 0.5).unwrap();
        let sp = 0.5f64.sqrt();
        assert!(close(r.value, 2.0 * sp / (1.0 + sp), 1e-12));
        assert!(close(r.value, 0.8284, 1e-4));

        let r = g_gap_limit(dir(1.0, 10.0), lg(1, 1), 0.5).unwrap();
        assert_eq!(r.branch, Branch::FlatEdgeA);
        assert_eq!(r.value, 1.0);
        let r = g_gap_limit(dir(10.0, 1.0), lg(1, 1), 0.5).unwrap();
        assert_eq!(r.branch, Branch::FlatEdgeB);
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn threshold_ties_go_to_flat_edge() {
        // (1,1), p = 1/2: lower threshold is exactly 1/2.
        let r = g_gap_limit(dir(1.0, 2.0), lg(1, 1), 0.5).unwrap();
        assert_eq!(r.branch, Branch::FlatEdgeA);
        assert_eq!(r.value, 1.0);
    }

    fn closed_11(a: f64, b: f64, p: f64) -> f64 {
        let sp = p.sqrt();
        if p < (a / b).min(b / a) {
            sp * (2.0 * (a * b).sqrt() - (a + b) * sp) / (1.0 - p)
        } else {
            a.min(b)
        }
    }

    fn closed_10(a: f64, b: f64, p: f64) -> f64 {
        if p < a / (a + b) {
            2.0 * (a * b * p * (1.0 - p)).sqrt() + (a - b) * p
        } else {
            a
        }
    }

    fn closed_h0(h: f64, p: f64) -> f64 {
        if p < 1.0 / (h + 1.0) {
            let q = 1.0 - p;
            let r = ((q + h * h * p) * q).sqrt();
            (2.0 * (1.0 + h) * p * q + 2.0 * (p * (q + h * h * p) * q).sqrt()) / (h * p.sqrt() + r).powi(2)
        } else {
            1.0 / h
        }
    }

    fn closed_hh(h: f64, p: f64) -> f64 {
        2.0 * p.sqrt() / (1.0 + (2.0 * h - 1.0) * p.sqrt())
    }

    #[test]
    fn closed_forms_agree() {
        for &p in &[0.05, 0.25, 0.4, 0.5, 0.7, 0.9] {
            for &(a, b) in &[(1.0, 1.0), (1.0, 2.0), (3.0, 1.0), (0.2, 0.9), (5.0, 0.3)] {
                let v = g_gap_limit(dir(a, b), lg(1, 1), p).unwrap().value;
                assert!(close(v, closed_11(a, b, p), 1e-10), "(1,1) {a} {b} {p}");
                let v = g_gap_limit(dir(a, b), lg(1, 0), p).unwrap().value;
                assert!(close(v, closed_10(a, b, p), 1e-10), "(1,0) {a} {b} {p}");
            }
            for h in 1..5u32 {
                let v = g_gap_limit(dir(1.0, 1.0), lg(h, 0), p).unwrap().value;
                assert!(close(v, closed_h0(h as f64, p), 1e-10), "({h},0) {p}");
                let v = g_gap_limit(dir(1.0, 1.0), lg(h, h), p).unwrap().value;
                assert!(close(v, closed_hh(h as f64, p), 1e-10), "({h},{h}) {p}");
            }
        }
    }

    #[test]
    fn continuity_at_thresholds() {
        for &(h1, h2) in &[(1u32, 1u32), (2, 1), (1, 0), (3, 2), (0, 2)] {
            for &p in &[0.2, 0.5, 0.8] {
                let (lower, upper) = flat_edge_thresholds(lg(h1, h2), p);
                for t in [lower, upper] {
                    if !(t.is_finite() && t > 0.0) {
                        continue;
                    }
                    let vl = g_gap_limit(dir(t - 1e-6, 1.0), lg(h1, h2), p).unwrap().value;
                    let vr = g_gap_limit(dir(t + 1e-6, 1.0), lg(h1, h2), p).unwrap().value;
                    assert!((vl - vr).abs() <= 1e-4, "({h1},{h2}) p={p} at {t}: {vl} vs {vr}");
                }
            }
        }
    }

    #[test]
    fn fixed_point_without_gap_is_g() {
        for &(a, b, p) in &[(1.0, 1.0, 0.25), (2.0, 0.3, 0.6)] {
            let (v, r) = gap_fixed_point(a, b, 0.0, 0.0, p);
            assert_eq!(v, g_extended(a, b, p));
            assert_eq!(r, 0.0);
        }
    }

    #[test]
    fn alpha_beta_examples() {
        let ab = solve_alpha_beta(dir(1.0, 1.0), lg(1, 1), 0.25).unwrap();
        assert!(close(ab.alpha, 1.0 / 3.0, 1e-12) && close(ab.beta, 1.0 / 3.0, 1e-12));
        assert!(close(g_extended(ab.alpha, ab.beta, 0.25), 2.0 / 3.0, 1e-12));
        assert!(ab.residual <= 1e-10);

        let d = dir(1.0, 1.7);
        let x = solve_alpha_beta(d, lg(0, 1), 0.3).unwrap();
        let y = solve_alpha_beta(d.swapped(), lg(1, 0), 0.3).unwrap();
        assert!(close(x.alpha, y.beta, 1e-12) && close(x.beta, y.alpha, 1e-12));

        assert_eq!(
            solve_alpha_beta(dir(1.0, 10.0), lg(1, 1), 0.5),
            Err(AsymptoticsError::FlatEdge(Branch::FlatEdgeA))
        );
    }

    #[test]
    fn johansson_examples() {
        let s = sigma_johansson(dir(1.0, 1.0), 0.25).unwrap();
        let expect = 2f64.powf(-1.0 / 3.0) / 0.75 * 1.5f64.powf(4.0 / 3.0);
        assert!(close(s, expect, 1e-14) && close(s, 1.8171, 1e-4));
        assert_eq!(sigma_johansson(dir(2.0, 0.5), 0.4), sigma_johansson(dir(0.5, 2.0), 0.4));
        let s1 = sigma_johansson(dir(0.7, 1.9), 0.4).unwrap();
        let s8 = sigma_johansson(dir(5.6, 15.2), 0.4).unwrap();
        assert!(close(s8 / s1, 2.0, 1e-13));
    }

    #[test]
    fn sigma_discrete_examples() {
        for &p in &[0.25, 0.5] {
            for h in 1..4u32 {
                let s = sigma_gap_discrete(dir(1.0, 1.0), lg(h, h), p).unwrap();
                let special =
                    (1.0 - p).powf(1.0 / 3.0) * p.powf(1.0 / 6.0) / (1.0 + (2.0 * h as f64 - 1.0) * p.sqrt()).powf(4.0 / 3.0);
                assert!(close(s.scale, special, 1e-12), "h={h} p={p}");
            }
        }
        let s = sigma_gap_discrete(dir(1.0, 1.0), lg(1, 1), 0.25).unwrap();
        assert!(close(s.scale, 0.4200, 1e-4));
        assert!(close(s.center, 2.0 / 3.0, 1e-12));
        assert!(matches!(
            sigma_gap_discrete(dir(1.0, 2.0), lg(1, 1), 0.25),
            Err(AsymptoticsError::NonCritical { .. })
        ));
        // a/h1 = b/h2 off the diagonal.
        assert!(sigma_gap_discrete(dir(2.0, 1.0), lg(2, 1), 0.25).is_ok());
    }

    fn toy_table() -> TwTable {
        TwTable::parse_csv("x,F\n-4,0.0\n-2,0.4\n0,0.9\n2,1.0\n").unwrap()
    }

    #[test]
    fn table_interpolation() {
        let t = toy_table();
        assert_eq!(t.len(), 4);
        assert!(close(t.cdf(-3.0), 0.2, 1e-15));
        assert!(close(t.cdf(-1.0), 0.65, 1e-15));
        assert_eq!(t.cdf(-10.0), 0.0);
        assert_eq!(t.cdf(10.0), 1.0);
        assert_eq!(t.cdf(f64::INFINITY), 1.0);
        assert_eq!(t.cdf(f64::NEG_INFINITY), 0.0);
        assert!(TwTable::parse_csv("0,0.1\n0,0.2\n").is_err());
        assert!(TwTable::parse_csv("0,0.3\n1,0.2\n").is_err());
        assert!(TwTable::parse_csv("0,0.3\n").is_err());
    }

    #[test]
    fn sandwich_examples() {
        let t = toy_table();
        assert_eq!(
            report_sandwich(dir(1.0, 1.0), lg(1, 1), 0.25, 0.5, None),
            Err(AsymptoticsError::MissingTable)
        );
        let (lo, hi) = report_sandwich(dir(1.0, 1.0), lg(1, 1), 0.25, 0.5, Some(&t)).unwrap();
        assert!(close(lo, hi, 1e-12));
        let (lo, hi) = report_sandwich(dir(1.0, 2.0), lg(1, 1), 0.25, f64::INFINITY, Some(&t)).unwrap();
        assert_eq!((lo, hi), (1.0, 1.0));

        let d = dir(1.0, 2.0);
        let ab = solve_alpha_beta(d, lg(1, 1), 0.25).unwrap();
        let (lo, hi) = report_sandwich(d, lg(1, 1), 0.25, 1.0, Some(&t)).unwrap();
        // a/h1 <= b/h2 here: lower at b x / β, upper at a x / α.
        assert!(close(lo, t.cdf(2.0 / ab.beta), 1e-15));
        assert!(close(hi, t.cdf(1.0 / ab.alpha), 1e-15));
        assert!(lo <= hi);
        let (lo, hi) = report_sandwich(d, lg(1, 1), 0.25, -0.3, Some(&t)).unwrap();
        assert!(close(lo, t.cdf(-0.3 / ab.alpha), 1e-15));
        assert!(close(hi, t.cdf(-0.6 / ab.beta), 1e-15));
        assert!(lo <= hi);
    }

    #[test]
    fn regimes() {
        assert_eq!(regime_limit(0.0, dir(1.0, 1.0)), Ok((Normalization::SqrtIntensityTime, 2.0)));
        let (tag, v) = regime_limit(1.0, dir(1.0, 1.0)).unwrap();
        assert_eq!(tag, Normalization::SqrtIntensityTime);
        assert!(close(v, 2.0 / 3.0, 1e-15));
        assert_eq!(regime_limit(f64::INFINITY, dir(2.0, 3.0)), Ok((Normalization::TimeOverGap, 2.0)));
        assert!(regime_limit(-1.0, dir(1.0, 1.0)).is_err());
    }

    #[test]
    fn fixed_point_residual_grid() {
        let mut seen = 0;
        'outer: for &p in &[0.05, 0.1, 0.25, 0.35, 0.5, 0.75, 0.9] {
            for &(h1, h2) in &[(1u32, 1u32), (1, 0), (0, 1), (2, 1), (1, 3), (4, 4)] {
                for &(a, b) in &[(1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (0.5, 0.7), (3.0, 1.5)] {
                    let d = dir(a, b);
                    let r = g_gap_limit(d, lg(h1, h2), p).unwrap();
                    if r.branch != Branch::Interior {
                        continue;
                    }
                    assert!(r.residual <= 1e-10, "{a} {b} ({h1},{h2}) {p}: {}", r.residual);
                    let ab = solve_alpha_beta(d, lg(h1, h2), p).unwrap();
                    assert!(ab.residual <= 1e-10);
                    assert!((g_extended(ab.alpha, ab.beta, p) - r.value).abs() <= 1e-10);
                    seen += 1;
                    if seen == 100 {
                        break 'outer;
                    }
                }
            }
        }
        assert_eq!(seen, 100);
    }
}
