//! Diagonal clumping of a Bernoulli field into geometric weights.

use super::{continue_square, CoupledPair, CouplingError, MapDescriptor, PathwiseReport, Violation};
use crate::hammersley::build_lines_discrete;
use crate::model::{BitField, LatticeGap, WeightField};
use crate::sampling::SeedSpec;
use crate::solve::{lis_11_table, lpp_geometric, LisTable};

/// Keeps only the corner cells of the unit-gap lines and sums them along the
/// fibers of `φ0(m, n) = (m - P(m-1, n-1), n - P(m-1, n-1))`.
///
/// The source is continued up and right with fresh Bernoulli(`p`) bits from
/// `aux_seed` until every fiber over the output extent (same as the source)
/// is complete.
pub fn clump_to_geometric(
    field: &BitField,
    p: f64,
    aux_seed: SeedSpec,
) -> Result<CoupledPair<BitField, WeightField>, CouplingError> {
    let (m, n) = (field.m(), field.n());
    let mut extra = lis_11_table(field).total() as usize + 1;
    let (big, table) = loop {
        let big = continue_square(field, m.max(n) + extra, p, aux_seed)?;
        let table = lis_11_table(&big);
        if fibers_closed(&table, m, n) {
            break (big, table);
        }
        extra *= 2;
    };
    let mut out = WeightField::zeros(m, n)?;
    for line in build_lines_discrete(&big, LatticeGap::UNIT).lines() {
        for c in line.corners() {
            let k = table.at(c.i as i64, c.j as i64) as usize;
            let (ti, tj) = (c.i - k, c.j - k);
            if ti < m && tj < n {
                out.set(ti, tj, out.get(ti, tj) + 1);
            }
        }
    }
    Ok(CoupledPair {
        source: field.clone(),
        transformed: out,
        map: MapDescriptor::Clump { p, aux_seed },
    })
}

/// `φ0` is non-decreasing along diagonals, so a fiber over the `m x n` block
/// is complete once the last cell of its diagonal maps outside the block.
fn fibers_closed(table: &LisTable, m: usize, n: usize) -> bool {
    let (big_m, big_n) = (table.m() as i64, table.n() as i64);
    let outside = |i: i64, j: i64| {
        let k = table.at(i, j) as i64;
        i - k >= m as i64 || j - k >= n as i64
    };
    // last cells of the diagonals through the block: the top row and the right column
    (0..big_m).all(|i| outside(i, big_n - 1)) && (0..big_n).all(|j| outside(big_m - 1, j))
}

/// With `P` the unit-gap table of the source and `T` the passage times of
/// the output: `P(m, n) <= k <=> T(m - k, n - k) <= k` for all `k`, and
/// `P(m, n) = T(φ0(m, n))` wherever `P(m, n) = P(m-1, n-1)`.
pub fn check_clump(pair: &CoupledPair<BitField, WeightField>) -> PathwiseReport {
    let src = lis_11_table(&pair.source);
    let (_, dst) = lpp_geometric(&pair.transformed, false);
    let depth = src.total() as i64;
    let mut report = PathwiseReport::default();
    for n in 1..=pair.source.n() as i64 {
        for m in 1..=pair.source.m() as i64 {
            let l = src.at(m, n) as u64;
            let below = src.at(m - 1, n - 1) as i64;
            if l == below as u64 {
                let r = dst.at(m - below, n - below);
                report.record(l == r, || Violation {
                    at: (m as f64, n as f64),
                    level: None,
                    lhs: l,
                    rhs: r,
                });
            }
            for k in 0..=depth + 1 {
                let r = dst.at(m - k, n - k);
                report.record((l <= k as u64) == (r <= k as u64), || Violation {
                    at: (m as f64, n as f64),
                    level: Some(k as u64),
                    lhs: l,
                    rhs: r,
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Cell;
    use crate::sampling::sample_bernoulli;

    const AUX: SeedSpec = SeedSpec::new(9, 0);

    #[test]
    fn zero_field_gives_zero_weights() {
        let f = BitField::zeros(5, 5).unwrap();
        let pair = clump_to_geometric(&f, 0.5, AUX).unwrap();
        assert!(pair.transformed.as_slice().iter().all(|&w| w == 0));
    }

    #[test]
    fn diagonal_run_clumps_into_one_cell() {
        // ones at (3,1), (4,2), (5,3) counted from 1; the fiber of (3,1)
        // runs through (4,2), (5,3), (6,4) and collects 1 + 1 + 1 + 0
        let cells = [Cell::new(2, 0), Cell::new(3, 1), Cell::new(4, 2)];
        let f = BitField::from_cells(8, 8, &cells).unwrap();
        let pair = clump_to_geometric(&f, 0.5, AUX).unwrap();
        assert_eq!(pair.transformed.get(2, 0), 3);
        for j in 0..5 {
            for i in 0..5 {
                if (i, j) != (2, 0) {
                    assert_eq!(pair.transformed.get(i, j), 0, "({i},{j})");
                }
            }
        }
        assert!(check_clump(&pair).passed());
        // the cell (3,1) steps up the table, where the pointwise form fails
        let t = lis_11_table(&f);
        let (_, lpp) = lpp_geometric(&pair.transformed, false);
        assert_eq!(t.at(3, 1), 1);
        assert_eq!(lpp.at(3, 1), 3);
    }

    #[test]
    fn random_fields_satisfy_identities() {
        for s in 0..200 {
            let f = sample_bernoulli(8, 8, 0.5, SeedSpec::new(70, s)).unwrap();
            let rep = check_clump(&clump_to_geometric(&f, 0.5, AUX).unwrap());
            assert!(rep.passed(), "seed {s}: {:?}", rep.first);
        }
    }
}
