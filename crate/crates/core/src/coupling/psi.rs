//! Projection `(h, 1)` to `(h, 0)`: rows collapse where the gapped table steps up.

use super::{continue_field, CoupledPair, CouplingError, MapDescriptor, PathwiseReport, Violation};
use crate::model::{BitField, LatticeGap};
use crate::sampling::SeedSpec;
use crate::solve::gap_lis_table;

/// `ψ(m, n) = (m, n - P(m-1, n-1))` with `P` the `(h, 1)` prefix table.
///
/// Each output cell takes the bit of its highest preimage. The source is
/// continued upward with fresh Bernoulli(`p`) bits from `aux_seed` until
/// every fiber over the output extent (same as the source) is complete.
pub fn project_psi(
    field: &BitField,
    h: u32,
    p: f64,
    aux_seed: SeedSpec,
) -> Result<CoupledPair<BitField, BitField>, CouplingError> {
    if h == 0 {
        return Err(CouplingError::ZeroProjectionGap);
    }
    let gap = LatticeGap::new(h, 1)?;
    let (m, n) = (field.m(), field.n());
    let mut rows = n + gap_lis_table(field, gap).total() as usize + 1;
    let (tall, table) = loop {
        let tall = continue_field(field, m, rows, p, aux_seed)?;
        let table = gap_lis_table(&tall, gap);
        // ψ is non-decreasing up each column, so a top row mapping at or past
        // `n` closes every fiber below it; the rightmost column is the slowest.
        let top = rows as i64 - 1;
        if top - table.at(m as i64 - 1, top) as i64 >= n as i64 {
            break (tall, table);
        }
        rows *= 2;
    };
    let mut out = BitField::zeros(m, n)?;
    for i in 0..m {
        for j in 0..tall.n() {
            // 0-based target row; rows are visited bottom-up so the last write wins
            let target = j - table.at(i as i64, j as i64) as usize;
            if target < n {
                out.set(i, target, tall.get(i, j));
            }
        }
    }
    Ok(CoupledPair {
        source: field.clone(),
        transformed: out,
        map: MapDescriptor::Psi {
            h,
            transposed: false,
            p,
            aux_seed,
        },
    })
}

/// The mirrored projection `(1, h)` to `(0, h)`, by transposition.
pub fn project_psi_transposed(
    field: &BitField,
    h: u32,
    p: f64,
    aux_seed: SeedSpec,
) -> Result<CoupledPair<BitField, BitField>, CouplingError> {
    let pair = project_psi(&field.transposed(), h, p, aux_seed)?;
    Ok(CoupledPair {
        source: field.clone(),
        transformed: pair.transformed.transposed(),
        map: MapDescriptor::Psi {
            h,
            transposed: true,
            p,
            aux_seed,
        },
    })
}

/// With `P` the `(h, 1)` table of the source and `Q` the `(h, 0)` table of
/// the output: `P(m, n) <= k <=> Q(m, n - k) <= k` for all `k`, and
/// `P(m, n) = Q(ψ(m, n))` wherever `P(m, n) = P(m-1, n-1)`.
pub fn check_psi(pair: &CoupledPair<BitField, BitField>) -> PathwiseReport {
    let MapDescriptor::Psi { h, transposed, .. } = pair.map else {
        panic!("not a projection");
    };
    let (source, image) = if transposed {
        (pair.source.transposed(), pair.transformed.transposed())
    } else {
        (pair.source.clone(), pair.transformed.clone())
    };
    let src = gap_lis_table(&source, LatticeGap::new(h, 1).expect("h >= 1"));
    let dst = gap_lis_table(&image, LatticeGap::new(h, 0).expect("h >= 1"));
    let depth = src.total() as i64;
    let swap = |m: i64, n: i64| if transposed { (n as f64, m as f64) } else { (m as f64, n as f64) };
    let mut report = PathwiseReport::default();
    for n in 1..=source.n() as i64 {
        for m in 1..=source.m() as i64 {
            let l = src.at(m, n) as u64;
            let below = src.at(m - 1, n - 1) as i64;
            if l == below as u64 {
                let r = dst.at(m, n - below) as u64;
                report.record(l == r, || Violation {
                    at: swap(m, n),
                    level: None,
                    lhs: l,
                    rhs: r,
                });
            }
            for k in 0..=depth + 1 {
                let r = dst.at(m, n - k) as u64;
                report.record((l <= k as u64) == (r <= k as u64), || Violation {
                    at: swap(m, n),
                    level: Some(k as u64),
                    lhs: l,
                    rhs: r,
                });
            }
        }
    }
    report
}
