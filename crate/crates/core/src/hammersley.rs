//! Hammersley lines with gaps, built by generation peeling.
//!
//! A line is stored as its minimal (south-west) corners, `x` increasing and
//! `y` decreasing. The staircase through them, continued right from the last
//! corner and up from the first, is the boundary of the up-set they span.
//!
//! After a generation is extracted, a survivor `q` stays for the next round
//! iff some corner `c` of the generation satisfies `c ≺ q` under the gap
//! order. This is the removal of the line's sleeve, with sleeve boundaries
//! resolved the same way as [`crate::model::precedes`], so generation counts
//! agree with the solvers exactly and not just almost surely.

use alloc::vec::Vec;

use crate::model::{BitField, Cell, Gap, LatticeGap, Point, PointCloud, Region};

/// One staircase line, represented by its corners.
#[derive(Debug, Clone, PartialEq)]
pub struct StaircaseLine<T> {
    corners: Vec<T>,
}

impl<T> StaircaseLine<T> {
    pub fn corners(&self) -> &[T] {
        &self.corners
    }
}

impl StaircaseLine<Point> {
    /// Corners strictly increase in `x` and strictly decrease in `y`.
    pub fn is_staircase(&self) -> bool {
        self.corners.windows(2).all(|w| w[0].x < w[1].x && w[0].y > w[1].y)
    }

    /// Whether the line meets the open region `(0, x) x (0, t)`.
    pub fn meets(&self, region: Region) -> bool {
        // among corners left of x, the last one is the lowest
        let k = self.corners.partition_point(|c| c.x < region.x);
        k > 0 && self.corners[k - 1].y < region.t
    }

    /// Whether `q` lies strictly beyond the line shifted by `gap`, i.e. some
    /// corner precedes `q`.
    fn releases(&self, q: Point, gap: Gap) -> bool {
        let k = self.corners.partition_point(|c| c.x + gap.h1() <= q.x);
        // with a zero gap a corner would release itself
        k > 0 && self.corners[k - 1] != q && self.corners[k - 1].y + gap.h2() <= q.y
    }
}

impl StaircaseLine<Cell> {
    pub fn is_staircase(&self) -> bool {
        self.corners.windows(2).all(|w| w[0].i < w[1].i && w[0].j > w[1].j)
    }

    /// Whether the line meets the `m x n` prefix of cells.
    pub fn meets(&self, m: usize, n: usize) -> bool {
        let k = self.corners.partition_point(|c| c.i < m);
        k > 0 && self.corners[k - 1].j < n
    }

    fn releases(&self, q: Cell, gap: LatticeGap) -> bool {
        let (h1, h2) = (gap.h1() as usize, gap.h2() as usize);
        let k = self.corners.partition_point(|c| c.i + h1 <= q.i);
        k > 0 && self.corners[k - 1].j + h2 <= q.j
    }
}

/// Lines in generation order; line `ℓ` (1-based) is `lines()[ℓ - 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSet<T> {
    lines: Vec<StaircaseLine<T>>,
}

impl<T> LineSet<T> {
    pub fn lines(&self) -> &[StaircaseLine<T>] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// Peels the cloud into gapped Hammersley lines.
pub fn build_lines_continuous(cloud: &PointCloud, gap: Gap) -> LineSet<Point> {
    build_lines_points(cloud.points().to_vec(), gap)
}

/// Same as [`build_lines_continuous`] for points already sorted by `x`.
pub fn build_lines_points(mut alive: Vec<Point>, gap: Gap) -> LineSet<Point> {
    let mut lines = Vec::new();
    while !alive.is_empty() {
        let mut corners = Vec::new();
        let mut low = f64::INFINITY;
        for &p in &alive {
            if p.y < low {
                low = p.y;
                corners.push(p);
            }
        }
        let line = StaircaseLine { corners };
        alive.retain(|&q| line.releases(q, gap));
        lines.push(line);
    }
    LineSet { lines }
}

/// Peels the one-cells of the field into gapped lattice lines.
pub fn build_lines_discrete(field: &BitField, gap: LatticeGap) -> LineSet<Cell> {
    let mut alive = field.ones();
    let mut lines = Vec::new();
    while !alive.is_empty() {
        let mut corners = Vec::new();
        let mut low = usize::MAX;
        for &c in &alive {
            if c.j < low {
                low = c.j;
                corners.push(c);
            }
        }
        let line = StaircaseLine { corners };
        alive.retain(|&q| line.releases(q, gap));
        lines.push(line);
    }
    LineSet { lines }
}

/// Number of lines meeting the open region. Lines are nested, so this is
/// the index of the last line that does.
pub fn count_lines_intersecting(lines: &LineSet<Point>, region: Region) -> usize {
    lines.lines.partition_point(|l| l.meets(region))
}

/// Number of lattice lines meeting the `m x n` prefix.
pub fn count_lines_in_prefix(lines: &LineSet<Cell>, m: usize, n: usize) -> usize {
    lines.lines.partition_point(|l| l.meets(m, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_cloud;
    use crate::sampling::{sample_bernoulli, sample_poisson, Intensity, SeedSpec};
    use crate::solve::{gap_lis_continuous, gap_lis_table};

    #[test]
    fn trivial_sets() {
        let empty = PointCloud::empty(2.0, 2.0).unwrap();
        let ls = build_lines_continuous(&empty, Gap::ZERO);
        assert!(ls.is_empty());
        assert_eq!(count_lines_intersecting(&ls, Region::new(2.0, 2.0)), 0);

        let one = validate_cloud(alloc::vec![Point::new(1.0, 1.0)], 2.0, 2.0).unwrap();
        let ls = build_lines_continuous(&one, Gap::new(1.0, 1.0).unwrap());
        assert_eq!(ls.len(), 1);
        assert_eq!(ls.lines()[0].corners(), &[Point::new(1.0, 1.0)]);

        let zero = BitField::zeros(4, 4).unwrap();
        assert!(build_lines_discrete(&zero, LatticeGap::UNIT).is_empty());

        let diag = BitField::from_cells(3, 3, &[Cell::new(0, 0), Cell::new(1, 1), Cell::new(2, 2)]).unwrap();
        assert_eq!(build_lines_discrete(&diag, LatticeGap::UNIT).len(), 3);
    }

    #[test]
    fn threshold_ties_follow_the_order() {
        let c = validate_cloud(alloc::vec![Point::new(1.0, 1.0), Point::new(2.0, 2.0)], 3.0, 3.0).unwrap();
        let g = Gap::new(1.0, 1.0).unwrap();
        assert_eq!(build_lines_continuous(&c, g).len(), 2);
        let g = Gap::new(1.0, 1.5).unwrap();
        assert_eq!(build_lines_continuous(&c, g).len(), 1);
    }

    #[test]
    fn line_count_matches_solver_on_subregions() {
        for s in 0..20 {
            let c = sample_poisson(6.0, 6.0, Intensity::UNIT, SeedSpec::new(17, s)).unwrap();
            for g in [Gap::ZERO, Gap::new(0.5, 0.3).unwrap(), Gap::new(1.0, 0.0).unwrap()] {
                let ls = build_lines_continuous(&c, g);
                assert!(ls.lines().iter().all(|l| l.is_staircase()));
                for a in 1..=5 {
                    for b in 1..=5 {
                        let r = Region::new(a as f64 * 1.2, b as f64 * 1.2);
                        assert_eq!(
                            count_lines_intersecting(&ls, r) as u64,
                            gap_lis_continuous(&c, r, g, false).length
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn lattice_line_count_matches_table() {
        for s in 0..20 {
            let f = sample_bernoulli(9, 7, 0.4, SeedSpec::new(5, s)).unwrap();
            for g in [LatticeGap::UNIT, LatticeGap::new(2, 1).unwrap(), LatticeGap::new(0, 2).unwrap()] {
                let ls = build_lines_discrete(&f, g);
                assert!(ls.lines().iter().all(|l| l.is_staircase()));
                let t = gap_lis_table(&f, g);
                for m in 1..=9 {
                    for n in 1..=7 {
                        assert_eq!(count_lines_in_prefix(&ls, m, n) as u32, t.at(m as i64, n as i64));
                    }
                }
            }
        }
    }

    #[test]
    fn first_line_is_the_minimal_points() {
        let c = sample_poisson(5.0, 5.0, Intensity::UNIT, SeedSpec::new(2, 2)).unwrap();
        let ls = build_lines_continuous(&c, Gap::new(0.4, 0.4).unwrap());
        let first = ls.lines()[0].corners();
        for p in c.points() {
            let dominated = c.points().iter().any(|q| q != p && q.x < p.x && q.y < p.y);
            assert_eq!(first.contains(p), !dominated);
        }
    }
}
