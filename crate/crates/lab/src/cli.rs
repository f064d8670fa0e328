//! Command-line front end.
//!
//! Exit codes: 0 on success or a passing verification, 1 on a failing
//! verification, 2 on usage errors and unreadable or malformed inputs.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gappath_core::asymptotics::f_gap_result;
use gappath_core::coupling::{
    check_clump, check_dilate_continuous, check_dilate_discrete, check_distributional_identity, check_line_images,
    check_psi, clump_to_geometric, dilate_continuous, dilate_discrete, project_psi, project_psi_transposed,
    IdentityKind, IdentitySpec, PathwiseReport,
};
use gappath_core::hammersley::{build_lines_continuous, build_lines_discrete};
use gappath_core::oracle::{exact_cdf_gap_lis, exact_dist_gap_lis, exact_dist_lpp, verify_lemma9, verify_theorem6, ProbParam};
use gappath_core::{
    f_limit, g_gap_limit, g_limit, gap_lis_continuous, gap_lis_discrete, lpp_geometric, regime_limit, report_sandwich,
    sample_bernoulli, sample_geometric, sample_poisson, sigma_gap_continuous, sigma_gap_discrete, sigma_johansson,
    solve_alpha_beta, Direction, Gap, Intensity, LatticeGap, SeedSpec,
};
use serde_json::{json, Value};

use crate::io;
use crate::mc::{self, ExperimentSpec, SCHEMA_VERSION};
use crate::pool::{Pool, THREADS_ENV};
use crate::report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "gappath",
    version,
    about = "Longest increasing paths with gaps in Poisson and Bernoulli fields",
    long_about = "Longest increasing paths with gaps in Poisson and Bernoulli fields.\n\n\
        A path with gap (h1, h2) moves at least h1 right and h2 up between consecutive points. \
        Subcommands sample fields, solve for path lengths, peel Hammersley lines, apply the \
        coupling transforms, evaluate limit shapes, certify the lattice identities exactly on \
        small fields, and run Monte Carlo experiments. All randomness comes from --seed/--stream."
)]
pub struct Cli {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Stream index under the master seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub stream: u64,
    /// Output file (or file prefix for `mc run`); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format where a command offers more than one.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; 1 runs sequentially with identical results.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random field.
    #[command(subcommand)]
    Sample(SampleCmd),
    /// Length of a longest gapped path, optionally with a maximizing path.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Hammersley lines with gaps; their number over a region equals the gapped length.
    #[command(subcommand)]
    Lines(LinesCmd),
    /// Coupling transforms and their identities.
    #[command(subcommand)]
    Couple(CoupleCmd),
    /// Limit shapes and fluctuation scales.
    #[command(subcommand)]
    Limit(LimitCmd),
    /// Exact distributions by enumeration over all fields.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Monte Carlo experiments.
    #[command(subcommand)]
    Mc(McCmd),
}

#[derive(Debug, Args)]
pub struct RectArgs {
    /// Rectangle width.
    #[arg(long)]
    pub x: f64,
    /// Rectangle height.
    #[arg(long)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Columns.
    #[arg(long)]
    pub m: usize,
    /// Rows.
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    #[arg(long, default_value_t = 0.0)]
    pub h1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub h2: f64,
}

#[derive(Debug, Args)]
pub struct LatticeGapArgs {
    #[arg(long)]
    pub h1: u32,
    #[arg(long)]
    pub h2: u32,
}

#[derive(Debug, Subcommand)]
pub enum SampleCmd {
    /// Poisson points on (0,x) x (0,t) at intensity lambda, as CSV `x,y`.
    Poisson {
        #[command(flatten)]
        rect: RectArgs,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
    /// Bernoulli(p) cells as a 0/1 grid, bottom row first.
    Bernoulli {
        #[command(flatten)]
        size: LatticeArgs,
        #[arg(long)]
        p: f64,
    },
    /// Geometric weights with P(w = k) = (1-p) p^k, as CSV.
    Geometric {
        #[command(flatten)]
        size: LatticeArgs,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SolveCmd {
    /// Longest gapped chain of a point cloud inside its rectangle.
    Continuous {
        #[arg(long)]
        cloud: PathBuf,
        #[command(flatten)]
        rect: RectArgs,
        #[command(flatten)]
        gap: GapArgs,
        #[arg(long)]
        witness: bool,
    },
    /// Longest gapped chain of ones in a bit field; the gap (0,0) is not supported.
    Discrete {
        #[arg(long)]
        field: PathBuf,
        #[command(flatten)]
        gap: LatticeGapArgs,
        #[arg(long)]
        witness: bool,
    },
    /// Last-passage time of a weight field over up-right paths.
    Lpp {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        witness: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum LinesCmd {
    /// Lines of a point cloud; corners as [x, y].
    Continuous {
        #[arg(long)]
        cloud: PathBuf,
        #[command(flatten)]
        rect: RectArgs,
        #[command(flatten)]
        gap: GapArgs,
    },
    /// Lines of a bit field; corners as [i, j], 0-based.
    Discrete {
        #[arg(long)]
        field: PathBuf,
        #[command(flatten)]
        gap: LatticeGapArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityName {
    /// Ungapped Poisson length at (x,t) vs gapped length at (x + h1 k, t + h2 k).
    Continuous,
    /// Gapped lattice length vs geometric last passage on (m - h1 k) x (n - h2 k).
    GapToPassage,
    /// Gapped lattice length vs unit-gap length on (m - (h1-1) k) x (n - (h2-1) k).
    GapToUnit,
    /// Geometric last passage on m x n vs unit-gap length on (m + k) x (n + k).
    PassageToUnit,
}

#[derive(Debug, Subcommand)]
pub enum CoupleCmd {
    /// Dilate a Poisson cloud so its ungapped lines become gapped lines; checks
    /// L(x,t) = L^h(x + h1 L, t + h2 L) and the level sets on a grid of regions.
    DilateCont {
        #[arg(long)]
        cloud: PathBuf,
        #[command(flatten)]
        rect: RectArgs,
        #[command(flatten)]
        gap: GapArgs,
        /// Regions checked per side.
        #[arg(long, default_value_t = 20)]
        grid: usize,
    },
    /// Lattice dilation from the unit gap to (h1, h2) with h1, h2 >= 1.
    DilateDisc {
        #[arg(long)]
        field: PathBuf,
        #[command(flatten)]
        gap: LatticeGapArgs,
        #[arg(long)]
        p: f64,
    },
    /// Projection from gap (h, 1) to (h, 0); with --transposed, (1, h) to (0, h).
    Psi {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        transposed: bool,
    },
    /// Diagonal clumping of a Bernoulli field into geometric weights, matching
    /// last passage with the unit-gap length.
    Clump {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Monte Carlo check of a distributional identity, one CDF row per k;
    /// exits 1 when the CDF gap leaves the 99% DKW band.
    Verify {
        #[arg(long, value_enum)]
        identity: IdentityName,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        h1: f64,
        #[arg(long, default_value_t = 0.0)]
        h2: f64,
        /// Probability as u/v or a real.
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        kmax: u64,
        #[arg(long, default_value_t = 10_000)]
        replicas: u64,
    },
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 0.0)]
    pub h1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub h2: f64,
    #[arg(long)]
    pub p: Option<f64>,
    /// Evaluation point of the sandwich bounds; accepts inf and -inf.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Limit of h sqrt(lambda) in the scaling regime; accepts inf.
    #[arg(long)]
    pub c: Option<f64>,
    /// Tracy-Widom CDF table, CSV `x,F` with increasing x.
    #[arg(long)]
    pub tw_table: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum LimitCmd {
    /// Ungapped Poisson shape 2 sqrt(ab).
    F(LimitArgs),
    /// Gapped Poisson shape, with its branch.
    Fh(LimitArgs),
    /// Gapped Poisson centering and cube-root scale.
    SigmaCont(LimitArgs),
    /// Geometric last-passage shape (needs --p).
    G(LimitArgs),
    /// Gapped lattice shape: fixed point with the two flat edges (needs --p).
    Gh(LimitArgs),
    /// Reduced direction (alpha, beta) with g(alpha, beta) = gh(a, b).
    Alphabeta(LimitArgs),
    /// Lattice cube-root scale; the direction must satisfy a/h1 = b/h2.
    SigmaDisc(LimitArgs),
    /// Bounds on the limiting fluctuation CDF at --x (needs --tw-table).
    Sandwich(LimitArgs),
    /// Limit of the length for gaps h_t with h_t sqrt(lambda_t) -> --c.
    Regime(LimitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatticeIdentity {
    /// P(gapped length on m x n <= k) = P(last passage on (m - h1 k) x (n - h2 k) <= k).
    #[value(alias = "6")]
    Passage,
    /// P(gapped length on m x n <= k) = P(unit-gap length on (m - (h1-1) k) x (n - (h2-1) k) <= k).
    #[value(alias = "lemma9")]
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    GapLis,
    Lpp,
}

#[derive(Debug, Subcommand)]
pub enum OracleCmd {
    /// Certify a lattice identity exactly for k = 0..=kmax by enumerating all
    /// fields; exact when --p is u/v. Exits 1 on any unequal row.
    Verify {
        /// `passage` (alias 6) or `unit` (alias lemma9).
        #[arg(long = "theorem", value_enum)]
        identity: LatticeIdentity,
        #[command(flatten)]
        size: LatticeArgs,
        #[command(flatten)]
        gap: LatticeGapArgs,
        #[arg(long)]
        p: String,
        #[arg(long)]
        kmax: u64,
    },
    /// Exact distribution of the gapped length or of the last-passage time.
    Dist {
        #[arg(long, value_enum)]
        kind: DistKind,
        #[command(flatten)]
        size: LatticeArgs,
        #[arg(long, default_value_t = 1)]
        h1: u32,
        #[arg(long, default_value_t = 1)]
        h2: u32,
        #[arg(long)]
        p: String,
        /// Truncation level; required for lpp.
        #[arg(long)]
        kmax: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum McCmd {
    /// Run an experiment spec; --out overrides the spec's output prefix.
    /// Exits 1 when any declared tolerance fails.
    Run {
        #[arg(long)]
        spec: PathBuf,
    },
}

/// Parses `argv` and runs it, returning the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => io::write_text(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, v: &Value) -> Result<()> {
    emit(out, &(serde_json::to_string_pretty(v)? + "\n"))
}

fn direction(a: f64, b: f64) -> Result<Direction> {
    Ok(Direction::new(a, b)?)
}

fn gap(h1: f64, h2: f64) -> Result<Gap> {
    Ok(Gap::new(h1, h2)?)
}

fn lattice_gap(h1: u32, h2: u32) -> Result<LatticeGap> {
    Ok(LatticeGap::new(h1, h2)?)
}

/// Real-valued gap arguments that must be integers.
fn lattice_gap_f(h1: f64, h2: f64) -> Result<LatticeGap> {
    if h1 < 0.0 || h2 < 0.0 || h1.fract() != 0.0 || h2.fract() != 0.0 {
        bail!("lattice gaps must be nonnegative integers, got ({h1}, {h2})");
    }
    lattice_gap(h1 as u32, h2 as u32)
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.with_context(|| format!("missing --{flag}"))
}

fn pathwise_json(r: &PathwiseReport, extra: Value) -> Value {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "checked": r.checked,
        "violations": r.violations,
        "passed": r.passed(),
        "first_violation": r.first.map(|f| json!({
            "at": [f.at.0, f.at.1],
            "level": f.level,
            "lhs": f.lhs,
            "rhs": f.rhs,
        })),
    });
    if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
        map.extend(more);
    }
    v
}

fn verdict(passed: bool) -> i32 {
    if passed {
        0
    } else {
        1
    }
}

pub fn dispatch(cli: &Cli) -> Result<i32> {
    let out = cli.out.as_deref();
    let seed = SeedSpec::new(cli.seed, cli.stream);
    match &cli.command {
        Command::Sample(cmd) => {
            let text = match cmd {
                SampleCmd::Poisson { rect, lambda } => {
                    io::cloud_to_string(&sample_poisson(rect.x, rect.t, Intensity::new(*lambda)?, seed)?)
                }
                SampleCmd::Bernoulli { size, p } => io::bitfield_to_string(&sample_bernoulli(size.m, size.n, *p, seed)?),
                SampleCmd::Geometric { size, p } => io::weights_to_string(&sample_geometric(size.m, size.n, *p, seed)?),
            };
            emit(out, &text)?;
            Ok(0)
        }
        Command::Solve(cmd) => solve(cmd, cli),
        Command::Lines(cmd) => {
            let v = match cmd {
                LinesCmd::Continuous { cloud, rect, gap: g } => {
                    let cloud = io::read_cloud(cloud, rect.x, rect.t)?;
                    report::point_lines_json(&build_lines_continuous(&cloud, gap(g.h1, g.h2)?))
                }
                LinesCmd::Discrete { field, gap: g } => {
                    let h = lattice_gap(g.h1, g.h2)?;
                    report::cell_lines_json(&build_lines_discrete(&io::read_bitfield(field)?, h))
                }
            };
            emit_json(out, &v)?;
            Ok(0)
        }
        Command::Couple(cmd) => couple(cmd, cli, seed),
        Command::Limit(cmd) => limit(cmd, cli.format),
        Command::Oracle(cmd) => oracle(cmd, cli),
        Command::Mc(McCmd::Run { spec }) => {
            let text = io::read_text(spec)?;
            let spec = ExperimentSpec::from_json(&text)?;
            let pool = Pool::new(cli.threads)?;
            let report = mc::run(&spec, &pool)?;
            let files = match out.map(Path::to_path_buf).or_else(|| spec.output.clone()) {
                Some(prefix) => report::write_stat_report(&report, &prefix)?,
                None => Vec::new(),
            };
            let summary = json!({
                "schema_version": SCHEMA_VERSION,
                "kind": spec.kind,
                "rows": report.rows,
                "slope": report.slope,
                "checks": report.checks,
                "passed": report.passed,
                "files": files,
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(verdict(report.passed))
        }
    }
}

fn solve(cmd: &SolveCmd, cli: &Cli) -> Result<i32> {
    let csv = cli.format == Some(Format::Csv);
    let (length, witness): (u64, Option<Vec<[f64; 2]>>) = match cmd {
        SolveCmd::Continuous { cloud, rect, gap: g, witness } => {
            let cloud = io::read_cloud(cloud, rect.x, rect.t)?;
            let r = gap_lis_continuous(&cloud, cloud.bounds(), gap(g.h1, g.h2)?, *witness);
            (r.length, r.witness.map(|w| w.iter().map(|p| [p.x, p.y]).collect()))
        }
        SolveCmd::Discrete { field, gap: g, witness } => {
            let h = lattice_gap(g.h1, g.h2)?;
            let r = gap_lis_discrete(&io::read_bitfield(field)?, h, *witness);
            (r.length, r.witness.map(|w| w.iter().map(|c| [c.i as f64, c.j as f64]).collect()))
        }
        SolveCmd::Lpp { weights, witness } => {
            let (r, _) = lpp_geometric(&io::read_weights(weights)?, *witness);
            (r.length, r.witness.map(|w| w.iter().map(|c| [c.i as f64, c.j as f64]).collect()))
        }
    };
    if csv {
        let mut s = format!("length\n{length}\n");
        if let Some(w) = &witness {
            s.push_str("x,y\n");
            for [a, b] in w {
                s.push_str(&format!("{a},{b}\n"));
            }
        }
        emit(cli.out.as_deref(), &s)?;
    } else {
        let lattice = !matches!(cmd, SolveCmd::Continuous { .. });
        let w = witness.map(|w| {
            w.iter()
                .map(|&[a, b]| if lattice { json!([a as u64, b as u64]) } else { json!([a, b]) })
                .collect::<Vec<_>>()
        });
        emit_json(
            cli.out.as_deref(),
            &json!({"schema_version": SCHEMA_VERSION, "length": length, "witness": w}),
        )?;
    }
    Ok(0)
}

fn couple(cmd: &CoupleCmd, cli: &Cli, seed: SeedSpec) -> Result<i32> {
    let out = cli.out.as_deref();
    // transformed fields go to --out, the identity report to stdout
    let (report, extra) = match cmd {
        CoupleCmd::DilateCont { cloud, rect, gap: g, grid } => {
            let cloud = io::read_cloud(cloud, rect.x, rect.t)?;
            let d = dilate_continuous(&cloud, gap(g.h1, g.h2)?, seed)?;
            let t = &d.pair.transformed;
            if let Some(path) = out {
                io::write_text(path, &io::cloud_to_string(t))?;
            }
            let lines_ok = check_line_images(&d);
            let mut r = check_dilate_continuous(&d, *grid);
            if !lines_ok {
                r.violations += 1;
            }
            (r, json!({"width": t.width(), "height": t.height(), "points": t.len(), "line_images": lines_ok}))
        }
        CoupleCmd::DilateDisc { field, gap: g, p } => {
            let pair = dilate_discrete(&io::read_bitfield(field)?, lattice_gap(g.h1, g.h2)?, *p, seed)?;
            if let Some(path) = out {
                io::write_text(path, &io::bitfield_to_string(&pair.transformed))?;
            }
            let t = &pair.transformed;
            (check_dilate_discrete(&pair), json!({"m": t.m(), "n": t.n()}))
        }
        CoupleCmd::Psi { field, h, p, transposed } => {
            let src = io::read_bitfield(field)?;
            let pair = if *transposed {
                project_psi_transposed(&src, *h, *p, seed)?
            } else {
                project_psi(&src, *h, *p, seed)?
            };
            if let Some(path) = out {
                io::write_text(path, &io::bitfield_to_string(&pair.transformed))?;
            }
            (check_psi(&pair), json!({}))
        }
        CoupleCmd::Clump { field, p } => {
            let pair = clump_to_geometric(&io::read_bitfield(field)?, *p, seed)?;
            if let Some(path) = out {
                io::write_text(path, &io::weights_to_string(&pair.transformed))?;
            }
            (check_clump(&pair), json!({}))
        }
        CoupleCmd::Verify {
            identity,
            x,
            t,
            m,
            n,
            h1,
            h2,
            p,
            kmax,
            replicas,
        } => {
            let prob = || -> Result<ProbParam> { Ok(ProbParam::parse(need(p.as_deref(), "p")?)?) };
            let size = || -> Result<(usize, usize)> { Ok((need(*m, "m")?, need(*n, "n")?)) };
            let kind = match identity {
                IdentityName::Continuous => IdentityKind::Continuous {
                    x: need(*x, "x")?,
                    t: need(*t, "t")?,
                    gap: gap(*h1, *h2)?,
                },
                IdentityName::GapToPassage => {
                    let (m, n) = size()?;
                    IdentityKind::GapToPassage { m, n, gap: lattice_gap_f(*h1, *h2)?, p: prob()? }
                }
                IdentityName::GapToUnit => {
                    let (m, n) = size()?;
                    IdentityKind::GapToUnit { m, n, gap: lattice_gap_f(*h1, *h2)?, p: prob()? }
                }
                IdentityName::PassageToUnit => {
                    let (m, n) = size()?;
                    IdentityKind::PassageToUnit { m, n, p: prob()? }
                }
            };
            let spec = IdentitySpec {
                kind,
                k_max: *kmax,
                replicas: *replicas,
                seed: cli.seed,
            };
            let r = check_distributional_identity(&spec, &Pool::new(cli.threads)?)?;
            match cli.format {
                Some(Format::Json) => emit_json(out, &report::identity_report_json(&r))?,
                _ => emit(out, &report::identity_report_csv(&r))?,
            }
            let exact_ok = r.exact.as_ref().is_none_or(|c| c.passed());
            let passed = r.within_band() && exact_ok;
            eprintln!("max gap {:.6} band {:.6}: {}", r.max_gap, r.band, if passed { "PASS" } else { "FAIL" });
            return Ok(verdict(passed));
        }
    };
    println!("{}", serde_json::to_string_pretty(&pathwise_json(&report, extra))?);
    Ok(verdict(report.passed()))
}

fn limit(cmd: &LimitCmd, format: Option<Format>) -> Result<i32> {
    use LimitCmd::*;
    let args = match cmd {
        F(a) | Fh(a) | SigmaCont(a) | G(a) | Gh(a) | Alphabeta(a) | SigmaDisc(a) | Sandwich(a) | Regime(a) => a,
    };
    let d = direction(args.a, args.b)?;
    let p = || need(args.p, "p");
    // (value fields for JSON, the same as one text line)
    let fields: Vec<(&str, Value)> = match cmd {
        F(_) => vec![("value", json!(f_limit(d)))],
        Fh(_) => {
            let r = f_gap_result(d, gap(args.h1, args.h2)?);
            vec![("value", json!(r.value)), ("branch", json!(r.branch.name()))]
        }
        SigmaCont(_) => {
            let s = sigma_gap_continuous(d, gap(args.h1, args.h2)?);
            vec![("center", json!(s.center)), ("scale", json!(s.scale)), ("exponent", json!(s.exponent))]
        }
        G(_) => vec![("value", json!(g_limit(d, p()?)?))],
        Gh(_) => {
            let r = g_gap_limit(d, lattice_gap_f(args.h1, args.h2)?, p()?)?;
            vec![
                ("value", json!(r.value)),
                ("branch", json!(r.branch.name())),
                ("residual", json!(r.residual)),
            ]
        }
        Alphabeta(_) => {
            let r = solve_alpha_beta(d, lattice_gap_f(args.h1, args.h2)?, p()?)?;
            vec![("alpha", json!(r.alpha)), ("beta", json!(r.beta)), ("residual", json!(r.residual))]
        }
        SigmaDisc(_) => {
            let h = lattice_gap_f(args.h1, args.h2)?;
            let p = p()?;
            let s = sigma_gap_discrete(d, h, p)?;
            vec![
                ("center", json!(s.center)),
                ("scale", json!(s.scale)),
                ("exponent", json!(s.exponent)),
                ("johansson_scale", json!(sigma_johansson(d, p)?)),
            ]
        }
        Sandwich(_) => {
            let table = args.tw_table.as_deref().map(io::read_tw_table).transpose()?;
            let x = need(args.x, "x")?;
            let (lo, hi) = report_sandwich(d, lattice_gap_f(args.h1, args.h2)?, p()?, x, table.as_ref())?;
            vec![("lower", json!(lo)), ("upper", json!(hi))]
        }
        Regime(_) => {
            let (norm, v) = regime_limit(need(args.c, "c")?, d)?;
            vec![("value", json!(v)), ("normalization", json!(norm.name()))]
        }
    };
    match format {
        Some(Format::Json) => {
            let mut map = serde_json::Map::new();
            map.insert("schema_version".into(), json!(SCHEMA_VERSION));
            map.extend(fields.into_iter().map(|(k, v)| (k.to_string(), v)));
            println!("{}", serde_json::to_string_pretty(&Value::Object(map))?);
        }
        Some(Format::Csv) => {
            let (keys, vals): (Vec<&str>, Vec<String>) = fields.iter().map(|(k, v)| (*k, plain(v))).unzip();
            println!("{}\n{}", keys.join(","), vals.join(","));
        }
        None => {
            // value first and bare, the rest as key=value; residuals only in JSON and CSV
            let parts: Vec<String> = fields
                .iter()
                .filter(|(k, _)| *k != "residual")
                .map(|(k, v)| if *k == "value" { plain(v) } else { format!("{k}={}", plain(v)) })
                .collect();
            println!("{}", parts.join(" "));
        }
    }
    Ok(0)
}

fn plain(v: &Value) -> String {
    match v {
        Value::Number(n) => format!("{:.10}", n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn oracle(cmd: &OracleCmd, cli: &Cli) -> Result<i32> {
    let out = cli.out.as_deref();
    let pool = Pool::new(cli.threads)?;
    match cmd {
        OracleCmd::Verify {
            identity,
            size,
            gap: g,
            p,
            kmax,
        } => {
            let h = lattice_gap(g.h1, g.h2)?;
            let p = ProbParam::parse(p)?;
            let check = match identity {
                LatticeIdentity::Passage => verify_theorem6(size.m, size.n, h, p, *kmax, &pool)?,
                LatticeIdentity::Unit => verify_lemma9(size.m, size.n, h, p, *kmax, &pool)?,
            };
            let passed = check.passed();
            match cli.format {
                Some(Format::Json) => emit_json(out, &report::identity_check_json(&check))?,
                Some(Format::Csv) => emit(out, &report::identity_check_csv(&check))?,
                None => {
                    let mut s = String::new();
                    for r in &check.rows {
                        s.push_str(&format!("k={} lhs={} rhs={} equal={}\n", r.k, r.lhs, r.rhs, r.equal));
                    }
                    s.push_str(if passed { "PASS\n" } else { "FAIL\n" });
                    emit(out, &s)?;
                }
            }
            Ok(verdict(passed))
        }
        OracleCmd::Dist {
            kind,
            size,
            h1,
            h2,
            p,
            kmax,
        } => {
            let p = ProbParam::parse(p)?;
            let dist = match kind {
                DistKind::GapLis => {
                    let h = lattice_gap(*h1, *h2)?;
                    match kmax {
                        Some(k) => exact_cdf_gap_lis(size.m, size.n, p, h, *k, &pool)?,
                        None => exact_dist_gap_lis(size.m, size.n, p, h, &pool)?,
                    }
                }
                DistKind::Lpp => exact_dist_lpp(size.m, size.n, p, need(*kmax, "kmax")?, &pool)?,
            };
            emit_json(out, &report::exact_dist_json(&dist))?;
            Ok(0)
        }
    }
}
