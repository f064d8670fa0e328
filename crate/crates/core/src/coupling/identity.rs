//! Monte Carlo check of the distributional identities, one CDF row per `k`.
//!
//! The two sides are sampled from unrelated seed families. For each side a
//! replica draws one field large enough for every `k` and reads the needed
//! quantities off prefix tables or chain levels, so each row is a binomial
//! estimate of its own probability.

use alloc::vec::Vec;

use thiserror::Error;

use crate::exec::ParMap;
use crate::model::{Gap, LatticeGap, Point, Region};
use crate::oracle::{verify_lemma9, verify_theorem6, IdentityCheck, OracleError, ProbParam};
use crate::sampling::{
    sample_bernoulli, sample_geometric, sample_poisson, BernoulliRows, Intensity, SampleError, SeedSpec,
};
use crate::solve::{chain_levels, gap_lis_rows, gap_lis_table, lis_11_table, lpp_geometric, patience_lis};
use crate::stats::{dkw_epsilon, wilson, Z99};

/// Largest field handed to the exact oracle.
const ORACLE_CELLS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum IdentityKind {
    /// `P(L(x, t) <= k) = P(L^h(x + h1 k, t + h2 k) <= k)` for unit Poisson fields.
    Continuous { x: f64, t: f64, gap: Gap },
    /// `P(gapped length on m x n <= k) = P(T on (m - h1 k) x (n - h2 k) <= k)`.
    GapToPassage { m: usize, n: usize, gap: LatticeGap, p: ProbParam },
    /// `P(gapped length on m x n <= k) = P(unit-gap length on (m - (h1-1) k) x (n - (h2-1) k) <= k)`.
    GapToUnit { m: usize, n: usize, gap: LatticeGap, p: ProbParam },
    /// `P(T on m x n <= k) = P(unit-gap length on (m + k) x (n + k) <= k)`.
    PassageToUnit { m: usize, n: usize, p: ProbParam },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySpec {
    pub kind: IdentityKind,
    pub k_max: u64,
    pub replicas: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdentityError {
    #[error("need at least 2 replicas, got {0}")]
    TooFewReplicas(u64),
    #[error("region must have positive finite sides, got ({0}, {1})")]
    BadRegion(f64, f64),
    #[error("field sides must be positive, got {0} x {1}")]
    EmptyField(usize, usize),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdfRow {
    pub k: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_ci: (f64, f64),
    pub rhs_ci: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub rows: Vec<CdfRow>,
    pub replicas: u64,
    /// `max_k |lhs - rhs|`.
    pub max_gap: f64,
    /// Sum of the two 99% DKW half-widths.
    pub band: f64,
    /// Exact verdict when the discrete instance is small enough.
    pub exact: Option<IdentityCheck>,
}

impl IdentityReport {
    pub fn within_band(&self) -> bool {
        self.max_gap <= self.band
    }
}

/// Per-replica values: the left quantity, and the right quantity for each `k`.
type Draw = (u64, Vec<u64>);

fn max_level_in(pts: &[Point], levels: &[u64], x: f64, t: f64) -> u64 {
    pts.iter()
        .zip(levels)
        .filter(|(p, _)| p.x < x && p.y < t)
        .map(|(_, &l)| l)
        .max()
        .unwrap_or(0)
}

fn shifted(base: usize, step: i64, k: u64) -> i64 {
    base as i64 + step * k as i64
}

pub fn check_distributional_identity<E: ParMap>(spec: &IdentitySpec, exec: &E) -> Result<IdentityReport, IdentityError> {
    if spec.replicas < 2 {
        return Err(IdentityError::TooFewReplicas(spec.replicas));
    }
    let lhs_master = SeedSpec::derive(spec.seed, 1);
    let rhs_master = SeedSpec::derive(spec.seed, 2);
    let k_max = spec.k_max;
    let ks = 0..=k_max;

    let draws: Vec<Result<Draw, SampleError>> = match spec.kind {
        IdentityKind::Continuous { x, t, gap } => {
            if !(x.is_finite() && t.is_finite() && x > 0.0 && t > 0.0) {
                return Err(IdentityError::BadRegion(x, t));
            }
            let (bx, bt) = (x + gap.h1() * k_max as f64, t + gap.h2() * k_max as f64);
            exec.map(spec.replicas as usize, |r| {
                let r = r as u64;
                let left = sample_poisson(x, t, Intensity::UNIT, SeedSpec::new(lhs_master, r))?;
                let l = patience_lis(&left, Region::new(x, t), false).length;
                let right = sample_poisson(bx, bt, Intensity::UNIT, SeedSpec::new(rhs_master, r))?;
                let levels = chain_levels(right.points(), gap);
                let rhs = ks
                    .clone()
                    .map(|k| {
                        let s = k as f64;
                        max_level_in(right.points(), &levels, x + gap.h1() * s, t + gap.h2() * s)
                    })
                    .collect();
                Ok((l, rhs))
            })
        }
        IdentityKind::GapToPassage { m, n, gap, p } => {
            check_field(m, n)?;
            let pv = p.value();
            exec.map(spec.replicas as usize, |r| {
                let r = r as u64;
                let l = lattice_length(m, n, gap, pv, SeedSpec::new(lhs_master, r))?;
                let w = sample_geometric(m, n, pv, SeedSpec::new(rhs_master, r))?;
                let (_, table) = lpp_geometric(&w, false);
                let rhs = ks
                    .clone()
                    .map(|k| {
                        let (mm, nn) = (shifted(m, -(gap.h1() as i64), k), shifted(n, -(gap.h2() as i64), k));
                        table.at(mm, nn)
                    })
                    .collect();
                Ok((l, rhs))
            })
        }
        IdentityKind::GapToUnit { m, n, gap, p } => {
            check_field(m, n)?;
            let pv = p.value();
            let (sm, sn) = (1 - gap.h1() as i64, 1 - gap.h2() as i64);
            let bm = shifted(m, sm.max(0), k_max) as usize;
            let bn = shifted(n, sn.max(0), k_max) as usize;
            exec.map(spec.replicas as usize, |r| {
                let r = r as u64;
                let l = lattice_length(m, n, gap, pv, SeedSpec::new(lhs_master, r))?;
                let f = sample_bernoulli(bm, bn, pv, SeedSpec::new(rhs_master, r))?;
                let table = lis_11_table(&f);
                let rhs = ks
                    .clone()
                    .map(|k| table.at(shifted(m, sm, k), shifted(n, sn, k)) as u64)
                    .collect();
                Ok((l, rhs))
            })
        }
        IdentityKind::PassageToUnit { m, n, p } => {
            check_field(m, n)?;
            let pv = p.value();
            let (bm, bn) = (m + k_max as usize, n + k_max as usize);
            exec.map(spec.replicas as usize, |r| {
                let r = r as u64;
                let w = sample_geometric(m, n, pv, SeedSpec::new(lhs_master, r))?;
                let l = lpp_geometric(&w, false).0.length;
                let f = sample_bernoulli(bm, bn, pv, SeedSpec::new(rhs_master, r))?;
                let table = gap_lis_table(&f, LatticeGap::UNIT);
                let rhs = ks
                    .clone()
                    .map(|k| table.at(shifted(m, 1, k), shifted(n, 1, k)) as u64)
                    .collect();
                Ok((l, rhs))
            })
        }
    };

    let mut lhs_count = alloc::vec![0u64; k_max as usize + 1];
    let mut rhs_count = alloc::vec![0u64; k_max as usize + 1];
    for d in draws {
        let (l, rhs) = d?;
        for k in 0..=k_max as usize {
            lhs_count[k] += (l <= k as u64) as u64;
            rhs_count[k] += (rhs[k] <= k as u64) as u64;
        }
    }
    let n = spec.replicas;
    let rows: Vec<CdfRow> = (0..=k_max as usize)
        .map(|k| CdfRow {
            k: k as u64,
            lhs: lhs_count[k] as f64 / n as f64,
            rhs: rhs_count[k] as f64 / n as f64,
            lhs_ci: wilson(lhs_count[k], n, Z99),
            rhs_ci: wilson(rhs_count[k], n, Z99),
        })
        .collect();
    let max_gap = rows.iter().map(|r| (r.lhs - r.rhs).abs()).fold(0.0, f64::max);

    let exact = match spec.kind {
        IdentityKind::GapToPassage { m, n, gap, p } if m * n <= ORACLE_CELLS => {
            Some(verify_theorem6(m, n, gap, p, k_max, exec)?)
        }
        IdentityKind::GapToUnit { m, n, gap, p } if m * n <= ORACLE_CELLS => {
            Some(verify_lemma9(m, n, gap, p, k_max, exec)?)
        }
        _ => None,
    };
    Ok(IdentityReport {
        rows,
        replicas: n,
        max_gap,
        band: 2.0 * dkw_epsilon(n, 0.01),
        exact,
    })
}

fn check_field(m: usize, n: usize) -> Result<(), IdentityError> {
    if m == 0 || n == 0 {
        Err(IdentityError::EmptyField(m, n))
    } else {
        Ok(())
    }
}

fn lattice_length(m: usize, n: usize, gap: LatticeGap, p: f64, seed: SeedSpec) -> Result<u64, SampleError> {
    let mut rows = BernoulliRows::new(m, p, seed)?;
    Ok(gap_lis_rows(m, n, gap, |_, row| rows.next_row(row)) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;

    #[test]
    fn zero_points_anchor() {
        let spec = IdentitySpec {
            kind: IdentityKind::Continuous {
                x: 1.0,
                t: 1.0,
                gap: Gap::new(1.0, 1.0).unwrap(),
            },
            k_max: 3,
            replicas: 4000,
            seed: 9,
        };
        let rep = check_distributional_identity(&spec, &Serial).unwrap();
        let anchor = libm::exp(-1.0);
        let row = &rep.rows[0];
        assert!(row.lhs_ci.0 <= anchor && anchor <= row.lhs_ci.1);
        assert!(row.rhs_ci.0 <= anchor && anchor <= row.rhs_ci.1);
        assert!(rep.within_band());
    }

    #[test]
    fn small_discrete_instance_gets_exact_verdict() {
        let spec = IdentitySpec {
            kind: IdentityKind::GapToPassage {
                m: 2,
                n: 2,
                gap: LatticeGap::UNIT,
                p: ProbParam::ratio(1, 2).unwrap(),
            },
            k_max: 2,
            replicas: 4000,
            seed: 1,
        };
        let rep = check_distributional_identity(&spec, &Serial).unwrap();
        let exact = rep.exact.as_ref().unwrap();
        assert!(exact.passed());
        assert!((rep.rows[1].lhs - 0.75).abs() < 0.03);
        assert!(rep.within_band());
    }

    #[test]
    fn all_kinds_agree_within_band() {
        let p = ProbParam::ratio(1, 3).unwrap();
        for kind in [
            IdentityKind::GapToUnit {
                m: 6,
                n: 5,
                gap: LatticeGap::new(2, 0).unwrap(),
                p,
            },
            IdentityKind::PassageToUnit { m: 4, n: 3, p },
            IdentityKind::Continuous {
                x: 3.0,
                t: 2.0,
                gap: Gap::new(0.5, 0.3).unwrap(),
            },
        ] {
            let spec = IdentitySpec {
                kind: kind.clone(),
                k_max: 5,
                replicas: 3000,
                seed: 5,
            };
            let rep = check_distributional_identity(&spec, &Serial).unwrap();
            assert!(rep.within_band(), "{kind:?}: gap {}", rep.max_gap);
        }
    }

    #[test]
    fn rejects_one_replica() {
        let spec = IdentitySpec {
            kind: IdentityKind::PassageToUnit {
                m: 1,
                n: 1,
                p: ProbParam::ratio(1, 2).unwrap(),
            },
            k_max: 1,
            replicas: 1,
            seed: 0,
        };
        assert_eq!(
            check_distributional_identity(&spec, &Serial),
            Err(IdentityError::TooFewReplicas(1))
        );
    }
}
