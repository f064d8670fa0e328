//! Gapped longest increasing paths in Poisson and Bernoulli fields.
//!
//! Exact solvers, Hammersley-line peeling, the four coupling transforms with
//! their pathwise checkers, limit-shape evaluators and an exhaustive
//! small-instance oracle. The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod coupling;
pub mod exec;
pub mod hammersley;
pub mod model;
pub mod oracle;
pub mod sampling;
pub mod solve;
pub mod stats;

pub use asymptotics::{
    f_gap_limit, f_limit, g_gap_limit, g_limit, regime_limit, report_sandwich, sigma_gap_continuous,
    sigma_gap_discrete, sigma_johansson, solve_alpha_beta, AlphaBeta, Branch, FluctuationScale, LimitResult, TwTable,
};
pub use exec::{ParMap, Serial};
pub use model::{
    cell_precedes, precedes, validate_cloud, BitField, Cell, Direction, Gap, LatticeGap, ModelError, Point,
    PointCloud, Region, WeightField,
};
pub use sampling::{sample_bernoulli, sample_geometric, sample_poisson, BernoulliRows, Intensity, SeedSpec};
pub use solve::{
    gap_lis_continuous, gap_lis_discrete, gap_lis_rows, gap_lis_table, lis_11_table, lpp_geometric, patience_lis,
    LisTable, LppTable, PathResult,
};
