//! Monte Carlo experiments driven by a JSON spec.
//!
//! Replica `r` at size index `s` draws from
//! `SeedSpec::new(derive(seed, s), r)`. Replicas come back from the pool in
//! index order and are reduced sequentially, so a report is bit-identical
//! for every thread count. Every pass/fail bound is read from the spec's
//! `tolerances` block; a missing bound means the quantity is only reported.

use std::path::PathBuf;

use gappath_core::asymptotics::{is_critical_direction, AsymptoticsError};
use gappath_core::coupling::{check_distributional_identity, IdentityError, IdentityKind, IdentitySpec};
use gappath_core::sampling::SampleError;
use gappath_core::stats::{dkw_epsilon, mean_var, ols, wilson, StatsError};
use gappath_core::{
    f_gap_limit, g_gap_limit, gap_lis_continuous, gap_lis_rows, regime_limit, report_sandwich, sample_poisson,
    sigma_gap_continuous, sigma_gap_discrete, BernoulliRows, Direction, Gap, Intensity, LatticeGap, ParMap, Region,
    SeedSpec, TwTable,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    LlnCont,
    LlnDisc,
    FlatEdge,
    CouplingCdf,
    VarianceScaling,
    FluctHistogram,
    Regime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Continuous,
    Discrete,
}

fn one() -> f64 {
    1.0
}

/// Model parameters. Continuous runs use the rectangle `(a t, b t)` at
/// intensity `lambda`; lattice runs use `floor(a n) x floor(b n)` cells of
/// Bernoulli(`p`) with integer gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default = "one")]
    pub b: f64,
    #[serde(default)]
    pub h1: f64,
    #[serde(default)]
    pub h2: f64,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default = "one")]
    pub lambda: f64,
    /// Needed by `variance_scaling` and `fluct_histogram`; the other kinds
    /// imply it.
    #[serde(default)]
    pub space: Option<Space>,
}

/// Pass/fail bounds. Each one enables one family of checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// `|mean(length / size) - target|` at every size.
    #[serde(default)]
    pub mean_abs: Option<f64>,
    /// `P(|length - target size| >= tail_dev) < tail_prob` at every size.
    #[serde(default)]
    pub tail_dev: Option<f64>,
    #[serde(default)]
    pub tail_prob: Option<f64>,
    /// Window for the log-log slope of the variance.
    #[serde(default)]
    pub slope: Option<[f64; 2]>,
    /// Window for the mean of the standardized lengths at the largest size.
    #[serde(default)]
    pub standardized_mean: Option<[f64; 2]>,
    /// The CDF gap must fit the simultaneous DKW band at this level.
    #[serde(default)]
    pub band_alpha: Option<f64>,
    /// Normal quantile of the Wilson interval that must cover `e^{-xt}` at `k = 0`.
    #[serde(default)]
    pub anchor_z: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bins {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Default for Bins {
    fn default() -> Self {
        Bins {
            lo: -8.0,
            hi: 6.0,
            count: 56,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub schema_version: u32,
    pub kind: ExperimentKind,
    pub model: ModelParams,
    /// `t` for continuous runs, `n` for lattice runs.
    pub sizes: Vec<f64>,
    pub replicas: u64,
    pub seed: u64,
    /// Prefix for the output files.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Largest `k` of a CDF table; derived from the region when absent.
    #[serde(default)]
    pub k_max: Option<u64>,
    #[serde(default)]
    pub bins: Option<Bins>,
    /// Tracy-Widom CDF table (`x,F` CSV) for descriptive comparisons.
    #[serde(default)]
    pub tw_table: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum McError {
    #[error("invalid experiment spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Limit(#[from] AsymptoticsError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
}

fn bad(msg: impl Into<String>) -> McError {
    McError::Spec(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeRow {
    pub n: f64,
    pub replicas: u64,
    pub mean: f64,
    pub var: f64,
    pub se: f64,
    pub target: Option<f64>,
    pub bias: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub slope_se: f64,
    /// `slope -/+ 2 slope_se`.
    pub ci_lo: f64,
    pub ci_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfRow {
    pub k: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub band: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfTable {
    pub size: f64,
    pub rows: Vec<CdfRow>,
    pub max_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bin {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub size: f64,
    pub center: f64,
    pub scale: f64,
    pub standardized_mean: f64,
    pub standardized_var: f64,
    pub below: u64,
    pub above: u64,
    pub bins: Vec<Bin>,
    /// Empirical CDF at the upper bin edges.
    pub ecdf: Vec<f64>,
    /// Kolmogorov distance to the reference table; descriptive only.
    pub ks_to_table: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichRow {
    pub x: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub passed: bool,
}

impl Check {
    fn within(name: String, value: f64, lo: f64, hi: f64) -> Check {
        Check {
            name,
            value,
            lo,
            hi,
            passed: value >= lo && value <= hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatReport {
    pub schema_version: u32,
    pub spec: ExperimentSpec,
    /// What `mean` and `var` in `rows` are statistics of.
    pub quantity: String,
    pub rows: Vec<SizeRow>,
    pub slope: Option<SlopeFit>,
    pub cdf: Vec<CdfTable>,
    pub histogram: Option<Histogram>,
    pub sandwich: Option<Vec<SandwichRow>>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl StatReport {
    fn new(spec: &ExperimentSpec, quantity: &str) -> StatReport {
        StatReport {
            schema_version: SCHEMA_VERSION,
            spec: spec.clone(),
            quantity: quantity.to_string(),
            rows: Vec::new(),
            slope: None,
            cdf: Vec::new(),
            histogram: None,
            sandwich: None,
            checks: Vec::new(),
            passed: true,
        }
    }

    fn finish(mut self) -> StatReport {
        self.passed = self.checks.iter().all(|c| c.passed);
        self
    }
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<ExperimentSpec, McError> {
        let spec: ExperimentSpec = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn space(&self) -> Result<Space, McError> {
        match self.kind {
            ExperimentKind::LlnCont | ExperimentKind::CouplingCdf | ExperimentKind::Regime => Ok(Space::Continuous),
            ExperimentKind::LlnDisc | ExperimentKind::FlatEdge => Ok(Space::Discrete),
            ExperimentKind::VarianceScaling | ExperimentKind::FluctHistogram => {
                self.model.space.ok_or_else(|| bad("this kind needs model.space"))
            }
        }
    }

    pub fn validate(&self) -> Result<(), McError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(bad(format!("unsupported schema_version {}", self.schema_version)));
        }
        if self.sizes.is_empty() {
            return Err(bad("sizes is empty"));
        }
        if self.sizes.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(bad("sizes must be positive"));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("sizes must be strictly increasing"));
        }
        if self.replicas < 2 {
            return Err(bad("replicas must be at least 2"));
        }
        let m = &self.model;
        Direction::new(m.a, m.b).map_err(|e| bad(e.to_string()))?;
        Gap::new(m.h1, m.h2).map_err(|e| bad(e.to_string()))?;
        Intensity::new(m.lambda).map_err(|e| bad(e.to_string()))?;
        if self.space()? == Space::Discrete {
            lattice_gap(m)?;
            prob(m)?;
            if self.sizes.iter().any(|s| s.fract() != 0.0) {
                return Err(bad("lattice sizes must be integers"));
            }
        }
        if let Some(b) = self.bins {
            if !(b.lo < b.hi && b.count > 0) {
                return Err(bad("bins need lo < hi and count > 0"));
            }
        }
        Ok(())
    }
}

fn lattice_gap(m: &ModelParams) -> Result<LatticeGap, McError> {
    let int = |h: f64| -> Result<u32, McError> {
        if h.fract() != 0.0 || h > u32::MAX as f64 {
            return Err(bad(format!("lattice gaps must be integers, got {h}")));
        }
        Ok(h as u32)
    };
    LatticeGap::new(int(m.h1)?, int(m.h2)?).map_err(|e| bad(e.to_string()))
}

fn prob(m: &ModelParams) -> Result<f64, McError> {
    match m.p {
        Some(p) if p > 0.0 && p < 1.0 => Ok(p),
        Some(p) => Err(bad(format!("p must lie in (0, 1), got {p}"))),
        None => Err(bad("lattice runs need model.p")),
    }
}

fn direction(m: &ModelParams) -> Direction {
    Direction::new(m.a, m.b).expect("validated")
}

fn gap(m: &ModelParams) -> Gap {
    Gap::new(m.h1, m.h2).expect("validated")
}

fn replica_seed(spec: &ExperimentSpec, size_index: usize, r: usize) -> SeedSpec {
    SeedSpec::new(SeedSpec::derive(spec.seed, size_index as u64), r as u64)
}

/// Lengths of all replicas at one size.
fn lengths<E: ParMap>(spec: &ExperimentSpec, size_index: usize, exec: &E) -> Result<Vec<u64>, McError> {
    let m = &spec.model;
    let s = spec.sizes[size_index];
    let draws: Vec<Result<u64, SampleError>> = match spec.space()? {
        Space::Continuous => {
            let (x, t) = (m.a * s, m.b * s);
            let lambda = Intensity::new(m.lambda).expect("validated");
            let g = gap(m);
            exec.map(spec.replicas as usize, |r| {
                let cloud = sample_poisson(x, t, lambda, replica_seed(spec, size_index, r))?;
                Ok(gap_lis_continuous(&cloud, Region::new(x, t), g, false).length)
            })
        }
        Space::Discrete => {
            let (cols, rows) = ((m.a * s).floor() as usize, (m.b * s).floor() as usize);
            if cols == 0 || rows == 0 {
                return Err(bad(format!("size {s} gives an empty {cols} x {rows} field")));
            }
            let (g, p) = (lattice_gap(m)?, prob(m)?);
            exec.map(spec.replicas as usize, |r| {
                let mut src = BernoulliRows::new(cols, p, replica_seed(spec, size_index, r))?;
                Ok(gap_lis_rows(cols, rows, g, |_, row| src.next_row(row)) as u64)
            })
        }
    };
    Ok(draws.into_iter().collect::<Result<_, _>>()?)
}

/// Continuous fields at intensity `λ` and gap `h` are unit fields with gap
/// `h √λ` on a rectangle scaled by `√λ`.
fn unit_equivalent(m: &ModelParams) -> (Gap, f64) {
    let r = m.lambda.sqrt();
    (Gap::new(m.h1 * r, m.h2 * r).expect("validated"), r)
}

/// Limit of `length / size`.
fn lln_target(spec: &ExperimentSpec) -> Result<f64, McError> {
    let m = &spec.model;
    let d = direction(m);
    Ok(match spec.space()? {
        Space::Continuous => {
            let (g, r) = unit_equivalent(m);
            r * f_gap_limit(d, g)
        }
        Space::Discrete => g_gap_limit(d, lattice_gap(m)?, prob(m)?)?.value,
    })
}

fn stats_row(n: f64, xs: &[f64], target: Option<f64>) -> Result<SizeRow, McError> {
    let (mean, var) = mean_var(xs)?;
    Ok(SizeRow {
        n,
        replicas: xs.len() as u64,
        mean,
        var,
        se: (var / xs.len() as f64).sqrt(),
        target,
        bias: target.map(|t| mean - t),
    })
}

fn run_scaled<E: ParMap>(
    spec: &ExperimentSpec,
    exec: &E,
    quantity: &str,
    norm: impl Fn(f64) -> f64,
    target: f64,
) -> Result<StatReport, McError> {
    let mut report = StatReport::new(spec, quantity);
    let tol = &spec.tolerances;
    for (si, &s) in spec.sizes.iter().enumerate() {
        let ls = lengths(spec, si, exec)?;
        let scaled: Vec<f64> = ls.iter().map(|&l| l as f64 / norm(s)).collect();
        let row = stats_row(s, &scaled, Some(target))?;
        if let Some(eps) = tol.mean_abs {
            report.checks.push(Check::within(format!("mean_abs[{s}]"), row.mean, target - eps, target + eps));
        }
        if let (Some(dev), Some(prob)) = (tol.tail_dev, tol.tail_prob) {
            let center = target * norm(s);
            let far = ls.iter().filter(|&&l| (l as f64 - center).abs() >= dev).count();
            let frac = far as f64 / ls.len() as f64;
            report.checks.push(Check {
                name: format!("tail[{s}]"),
                value: frac,
                lo: 0.0,
                hi: prob,
                passed: frac < prob,
            });
        }
        report.rows.push(row);
    }
    Ok(report.finish())
}

/// Law of large numbers: `E[length] / size` against the limit shape, per size.
pub fn run_lln<E: ParMap>(spec: &ExperimentSpec, exec: &E) -> Result<StatReport, McError> {
    spec.validate()?;
    let target = lln_target(spec)?;
    let quantity = match spec.space()? {
        Space::Continuous => "length/t",
        Space::Discrete => "length/n",
    };
    run_scaled(spec, exec, quantity, |s| s, target)
}

/// Equal gaps `h` at intensity `λ`: `length / (√λ t)` against the limit for
/// `c = h √λ`.
pub fn run_regime<E: ParMap>(spec: &ExperimentSpec, exec: &E) -> Result<StatReport, McError> {
    spec.validate()?;
    let m = &spec.model;
    if m.h1 != m.h2 {
        return Err(bad("regime runs need h1 = h2"));
    }
    let r = m.lambda.sqrt();
    let (norm, target) = regime_limit(m.h1 * r, direction(m))?;
    run_scaled(spec, exec, &format!("length/({})", norm.name()), |t| r * t, target)
}

/// Empirical CDFs of `L(x, t)` and of the gapped length on the shifted
/// rectangles, sampled independently, with `x = a s` and `t = b s`.
pub fn run_coupling_cdf<E: ParMap>(spec: &ExperimentSpec, exec: &E) -> Result<StatReport, McError> {
    spec.validate()?;
    let m = &spec.model;
    if m.lambda != 1.0 {
        return Err(bad("coupling_cdf runs at unit intensity"));
    }
    let mut report = StatReport::new(spec, "length");
    let tol = &spec.tolerances;
    let n = spec.replicas;
    for (si, &s) in spec.sizes.iter().enumerate() {
        let (x, t) = (m.a * s, m.b * s);
        // the ungapped length concentrates near 2 √(xt)
        let k_max = spec.k_max.unwrap_or_else(|| (3.0 * (x * t).sqrt()).ceil() as u64 + 5);
        let id = IdentitySpec {
            kind: IdentityKind::Continuous { x, t, gap: gap(m) },
            k_max,
            replicas: n,
            seed: SeedSpec::derive(spec.seed, si as u64),
        };
        let out = check_distributional_identity(&id, exec)?;
        let band = tol.band_alpha.map_or(out.band, |a| 2.0 * dkw_epsilon(n, a));
        let rows = out
            .rows
            .iter()
            .map(|r| CdfRow {
                k: r.k,
                lhs: r.lhs,
                rhs: r.rhs,
                band,
            })
            .collect();
        if tol.band_alpha.is_some() {
            report.checks.push(Check::within(format!("cdf_gap[{s}]"), out.max_gap, 0.0, band));
        }
        if let Some(z) = tol.anchor_z {
            let exact = (-x * t).exp();
            for (side, value) in [("lhs", out.rows[0].lhs), ("rhs", out.rows[0].rhs)] {
                let (lo, hi) = wilson((value * n as f64).round() as u64, n, z);
                report.checks.push(Check::within(format!("anchor_{side}[{s}]"), exact, lo, hi));
            }
        }
        report.cdf.push(CdfTable {
            size: s,
            rows,
            max_gap: out.max_gap,
        });
    }
    Ok(report.finish())
}

/// Variance of the raw length per size and the log-log slope across sizes.
pub fn run_variance_scaling<E: ParMap>(spec: &ExperimentSpec, exec: &E) -> Result<StatReport, McError> {
    spec.validate()?;
    let sizes = &spec.sizes;
    if sizes.len() < 2 {
        return Err(StatsError::DegenerateRegression.into());
    }
    if sizes[sizes.len() - 1] < 10.0 * sizes[0] {
        return Err(bad("the size ladder must span at least one decade"));
    }
    let target = lln_target(spec)?;
    let mut report = StatReport::new(spec, "length");
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (si, &s) in sizes.iter().enumerate() {
        let ls: Vec<f64> = lengths(spec, si, exec)?.into_iter().map(|l| l as f64).collect();
        let row = stats_row(s, &ls, Some(target * s))?;
        if row.var <= 0.0 {
            return Err(bad(format!("zero variance at size {s}")));
        }
        xs.push(s.ln());
        ys.push(row.var.ln());
        report.rows.push(row);
    }
    let fit = ols(&xs, &ys)?;
    if let Some([lo, hi]) = spec.tolerances.slope {
        report.checks.push(Check::within("slope".into(), fit.slope, lo, hi));
    }
    report.slope = Some(SlopeFit {
        slope: fit.slope,
        slope_se: fit.slope_se,
        ci_lo: fit.slope - 2.0 * fit.slope_se,
        ci_hi: fit.slope + 2.0 * fit.slope_se,
    });
    Ok(report.finish())
}

fn load_table(spec: &ExperimentSpec) -> Result<Option<TwTable>, McError> {
    match &spec.tw_table {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
            Ok(Some(TwTable::parse_csv(&text)?))
        }
        None => Ok(None),
    }
}

/// `sup |F_n - F|` of a sorted sample against a continuous CDF.
fn ks_one_sample(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = cdf(x);
        d = d.max((i as f64 / n - f).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    d
}

/// Standardized lengths `(L - center s) / (scale s^{1/3})` at the largest
/// size, binned. Lattice directions off the critical ray have no scale and
/// get the sandwich bounds instead.
pub fn run_fluct_histogram<E: ParMap>(spec: &ExperimentSpec, exec: &E) -> Result<StatReport, McError> {
    spec.validate()?;
    let m = &spec.model;
    let d = direction(m);
    let table = load_table(spec)?;
    let bins = spec.bins.unwrap_or_default();
    let width = (bins.hi - bins.lo) / bins.count as f64;
    let edges: Vec<f64> = (0..=bins.count).map(|b| bins.lo + width * b as f64).collect();
    let mut report = StatReport::new(spec, "length");

    let (center, scale, unit) = match spec.space()? {
        Space::Continuous => {
            let (g, r) = unit_equivalent(m);
            let f = sigma_gap_continuous(d, g);
            (f.center, f.scale, r)
        }
        Space::Discrete => {
            let (h, p) = (lattice_gap(m)?, prob(m)?);
            if !is_critical_direction(d, h) {
                let rows = edges
                    .iter()
                    .map(|&x| {
                        let (lower, upper) = report_sandwich(d, h, p, x, table.as_ref())?;
                        Ok(SandwichRow { x, lower, upper })
                    })
                    .collect::<Result<_, AsymptoticsError>>()?;
                report.sandwich = Some(rows);
                return Ok(report.finish());
            }
            let f = sigma_gap_discrete(d, h, p)?;
            (f.center, f.scale, 1.0)
        }
    };

    let last = spec.sizes.len() - 1;
    let s = spec.sizes[last];
    let ls = lengths(spec, last, exec)?;
    let se = s * unit;
    let mut z: Vec<f64> = ls.iter().map(|&l| (l as f64 - center * se) / (scale * se.cbrt())).collect();
    let raw: Vec<f64> = ls.iter().map(|&l| l as f64).collect();
    report.rows.push(stats_row(s, &raw, Some(center * se))?);

    let (zm, zv) = mean_var(&z)?;
    if let Some([lo, hi]) = spec.tolerances.standardized_mean {
        report.checks.push(Check::within("standardized_mean".into(), zm, lo, hi));
    }
    let mut counts = vec![0u64; bins.count];
    let (mut below, mut above) = (0, 0);
    for &v in &z {
        if v < bins.lo {
            below += 1;
        } else if v >= bins.hi {
            above += 1;
        } else {
            counts[(((v - bins.lo) / width) as usize).min(bins.count - 1)] += 1;
        }
    }
    z.sort_by(f64::total_cmp);
    let total = z.len() as f64;
    let ecdf = edges[1..].iter().map(|&e| z.partition_point(|&v| v <= e) as f64 / total).collect();
    report.histogram = Some(Histogram {
        size: s,
        center,
        scale,
        standardized_mean: zm,
        standardized_var: zv,
        below,
        above,
        bins: counts
            .iter()
            .enumerate()
            .map(|(b, &count)| Bin {
                bin_lo: edges[b],
                bin_hi: edges[b + 1],
                count,
            })
            .collect(),
        ecdf,
        ks_to_table: table.as_ref().map(|t| ks_one_sample(&z, |x| t.cdf(x))),
    });
    Ok(report.finish())
}

pub fn run<E: ParMap>(spec: &ExperimentSpec, exec: &E) -> Result<StatReport, McError> {
    match spec.kind {
        ExperimentKind::LlnCont | ExperimentKind::LlnDisc | ExperimentKind::FlatEdge => run_lln(spec, exec),
        ExperimentKind::CouplingCdf => run_coupling_cdf(spec, exec),
        ExperimentKind::VarianceScaling => run_variance_scaling(spec, exec),
        ExperimentKind::FluctHistogram => run_fluct_histogram(spec, exec),
        ExperimentKind::Regime => run_regime(spec, exec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pool::Pool;
    use gappath_core::Serial;

    fn spec(json: &str) -> ExperimentSpec {
        ExperimentSpec::from_json(json).unwrap()
    }

    const SMALL_LLN: &str = r#"{"schema_version":1,"kind":"lln_disc",
        "model":{"h1":1,"h2":1,"p":0.25},"sizes":[20,40],"replicas":16,"seed":5,
        "tolerances":{"mean_abs":0.5}}"#;

    #[test]
    fn reports_do_not_depend_on_thread_count() {
        let s = spec(SMALL_LLN);
        let serial = run(&s, &Serial).unwrap();
        let pooled = run(&s, &Pool::new(Some(3)).unwrap()).unwrap();
        assert_eq!(serial, pooled);
        assert_eq!(serial.rows.len(), 2);
        assert!(serial.passed);
    }

    #[test]
    fn spec_validation() {
        let bad_specs = [
            r#"{"schema_version":2,"kind":"lln_cont","model":{},"sizes":[1],"replicas":4,"seed":0}"#,
            r#"{"schema_version":1,"kind":"lln_cont","model":{},"sizes":[2,1],"replicas":4,"seed":0}"#,
            r#"{"schema_version":1,"kind":"lln_cont","model":{},"sizes":[1],"replicas":1,"seed":0}"#,
            r#"{"schema_version":1,"kind":"lln_disc","model":{"h1":0,"h2":0,"p":0.5},"sizes":[4],"replicas":4,"seed":0}"#,
            r#"{"schema_version":1,"kind":"lln_disc","model":{"h1":1,"h2":1},"sizes":[4],"replicas":4,"seed":0}"#,
            r#"{"schema_version":1,"kind":"lln_disc","model":{"h1":1.5,"h2":1,"p":0.5},"sizes":[4],"replicas":4,"seed":0}"#,
            r#"{"schema_version":1,"kind":"variance_scaling","model":{},"sizes":[4,40],"replicas":4,"seed":0}"#,
            r#"{"schema_version":1,"kind":"lln_cont","model":{"typo":1},"sizes":[1],"replicas":4,"seed":0}"#,
        ];
        for s in bad_specs {
            assert!(ExperimentSpec::from_json(s).is_err(), "{s}");
        }
    }

    #[test]
    fn one_size_ladder_is_a_degenerate_regression() {
        let s = spec(
            r#"{"schema_version":1,"kind":"variance_scaling","model":{"h1":1,"h2":1,"p":0.25,"space":"discrete"},
            "sizes":[50],"replicas":4,"seed":0}"#,
        );
        assert!(matches!(run(&s, &Serial), Err(McError::Stats(StatsError::DegenerateRegression))));
    }

    #[test]
    fn zero_gap_coupling_sides_agree_up_to_noise() {
        let s = spec(
            r#"{"schema_version":1,"kind":"coupling_cdf","model":{},"sizes":[1.5],"replicas":4000,"seed":1,
            "tolerances":{"band_alpha":0.01,"anchor_z":2.5758}}"#,
        );
        let r = run(&s, &Serial).unwrap();
        assert!(r.passed, "{:?}", r.checks);
        assert_eq!(r.cdf[0].rows[0].k, 0);
    }

    #[test]
    fn flat_edge_tail_check() {
        let s = spec(
            r#"{"schema_version":1,"kind":"flat_edge","model":{"a":1,"b":10,"h1":1,"h2":1,"p":0.5},
            "sizes":[50],"replicas":20,"seed":3,"tolerances":{"mean_abs":0.01,"tail_dev":2,"tail_prob":0.05}}"#,
        );
        let r = run(&s, &Serial).unwrap();
        assert_eq!(r.rows[0].target, Some(1.0));
        assert!(r.passed, "{:?}", r.checks);
    }

    #[test]
    fn non_critical_direction_routes_to_sandwich() {
        let dir = std::env::temp_dir().join("gappath-mc-sandwich.csv");
        std::fs::write(&dir, "x,F\n-4,0.01\n0,0.9\n4,1\n").unwrap();
        let s = spec(&format!(
            r#"{{"schema_version":1,"kind":"fluct_histogram","model":{{"a":1,"b":2,"h1":1,"h2":1,"p":0.25,"space":"discrete"}},
            "sizes":[10],"replicas":4,"seed":0,"tw_table":{:?},"bins":{{"lo":-2,"hi":2,"count":4}}}}"#,
            dir.display().to_string()
        ));
        let r = run(&s, &Serial).unwrap();
        let sw = r.sandwich.unwrap();
        assert_eq!(sw.len(), 5);
        assert!(sw.iter().all(|row| row.lower <= row.upper));
        assert!(r.histogram.is_none());
    }

    #[test]
    fn one_sample_ks() {
        let d = ks_one_sample(&[0.25, 0.75], |x| x.clamp(0.0, 1.0));
        assert!((d - 0.25).abs() < 1e-15);
    }
}
