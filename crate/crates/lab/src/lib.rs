//! Std companion of `gappath-core`: field files, the worker pool, seeded
//! Monte Carlo experiments and the `gappath` command line.

pub mod cli;
pub mod io;
pub mod mc;
pub mod pool;
pub mod report;
