//! Domain types shared by every kernel: gap vectors, planar point clouds,
//! Bernoulli and geometric lattice fields, and the gapped dominance order.
//!
//! Lattice fields are stored 0-based (`i` in `0..m` is the column, `j` in
//! `0..n` the row). Prefix queries elsewhere in the crate take *sizes*
//! `(m, n)`, which coincide with the 1-based coordinates of the
//! top-right cell of the prefix.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("gap components must be finite and non-negative, got ({h1}, {h2})")]
    InvalidGap { h1: f64, h2: f64 },
    #[error("lattice gap (0,0) is unsupported: the gap-free lattice problem is directed site percolation")]
    ZeroLatticeGap,
    #[error("direction components must be finite and positive, got ({a}, {b})")]
    InvalidDirection { a: f64, b: f64 },
    #[error("rectangle dimensions must be finite and positive, got ({x}, {t})")]
    InvalidRect { x: f64, t: f64 },
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("point {index} has a non-positive coordinate ({x}, {y})")]
    NonPositive { index: usize, x: f64, y: f64 },
    #[error("point {index} at ({x}, {y}) lies outside the open rectangle (0,{width})x(0,{height})")]
    OutOfRect {
        index: usize,
        x: f64,
        y: f64,
        width: f64,
        height: f64,
    },
    #[error("duplicate x-coordinate {0}")]
    DuplicateX(f64),
    #[error("duplicate y-coordinate {0}")]
    DuplicateY(f64),
    #[error("field dimensions must be positive, got {m}x{n}")]
    EmptyField { m: usize, n: usize },
    #[error("field data has {got} cells, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("bit field entries must be 0 or 1, found {0}")]
    NotABit(u8),
}

/// Gap vector `(h1, h2)` for the continuous model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    h1: f64,
    h2: f64,
}

impl Gap {
    pub const ZERO: Gap = Gap { h1: 0.0, h2: 0.0 };

    pub fn new(h1: f64, h2: f64) -> Result<Self, ModelError> {
        if !(h1.is_finite() && h2.is_finite() && h1 >= 0.0 && h2 >= 0.0) {
            return Err(ModelError::InvalidGap { h1, h2 });
        }
        Ok(Gap { h1, h2 })
    }

    pub fn h1(&self) -> f64 {
        self.h1
    }

    pub fn h2(&self) -> f64 {
        self.h2
    }

    pub fn is_zero(&self) -> bool {
        self.h1 == 0.0 && self.h2 == 0.0
    }
}

/// Gap vector for the lattice model. `(0, 0)` is rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeGap {
    h1: u32,
    h2: u32,
}

impl LatticeGap {
    /// Strictly increasing paths.
    pub const UNIT: LatticeGap = LatticeGap { h1: 1, h2: 1 };

    pub fn new(h1: u32, h2: u32) -> Result<Self, ModelError> {
        if h1 == 0 && h2 == 0 {
            return Err(ModelError::ZeroLatticeGap);
        }
        Ok(LatticeGap { h1, h2 })
    }

    pub fn h1(&self) -> u32 {
        self.h1
    }

    pub fn h2(&self) -> u32 {
        self.h2
    }

    /// The same constraint with the axes exchanged.
    pub fn transposed(&self) -> LatticeGap {
        LatticeGap {
            h1: self.h2,
            h2: self.h1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

/// `p` precedes `q` under the gapped order: `p.x + h1 <= q.x` and `p.y + h2 <= q.y`.
///
/// Comparisons are exact; no tolerance is applied at the threshold.
#[inline]
pub fn precedes(p: Point, q: Point, gap: Gap) -> bool {
    p.x + gap.h1 <= q.x && p.y + gap.h2 <= q.y
}

/// A lattice cell, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
}

impl Cell {
    pub const fn new(i: usize, j: usize) -> Self {
        Cell { i, j }
    }
}

/// Lattice analogue of [`precedes`].
#[inline]
pub fn cell_precedes(p: Cell, q: Cell, gap: LatticeGap) -> bool {
    p.i + gap.h1 as usize <= q.i && p.j + gap.h2 as usize <= q.j
}

/// Ray direction `(a, b)` with both components positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    a: f64,
    b: f64,
}

impl Direction {
    pub fn new(a: f64, b: f64) -> Result<Self, ModelError> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(ModelError::InvalidDirection { a, b });
        }
        Ok(Direction { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn swapped(&self) -> Direction {
        Direction {
            a: self.b,
            b: self.a,
        }
    }
}

/// Open query rectangle `(0, x) x (0, t)`. Either side may be zero (empty region).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x: f64,
    pub t: f64,
}

impl Region {
    pub const fn new(x: f64, t: f64) -> Self {
        Region { x, t }
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        p.x < self.x && p.y < self.t
    }
}

/// Finite point set inside the open rectangle `(0, width) x (0, height)`,
/// sorted by `x`, with pairwise distinct abscissae and ordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Point>,
    width: f64,
    height: f64,
}

impl PointCloud {
    pub fn empty(width: f64, height: f64) -> Result<Self, ModelError> {
        validate_cloud(Vec::new(), width, height)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn bounds(&self) -> Region {
        Region::new(self.width, self.height)
    }

    /// Points strictly inside `region`, still sorted by `x`.
    pub fn restricted(&self, region: Region) -> Vec<Point> {
        self.points
            .iter()
            .copied()
            .filter(|p| region.contains(*p))
            .collect()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

/// Checks raw points against the cloud invariants and returns them sorted by `x`.
///
/// Ties are rejected rather than perturbed.
pub fn validate_cloud(
    raw: Vec<Point>,
    width: f64,
    height: f64,
) -> Result<PointCloud, ModelError> {
    if !(width.is_finite() && height.is_finite() && width > 0.0 && height > 0.0) {
        return Err(ModelError::InvalidRect {
            x: width,
            t: height,
        });
    }
    for (index, p) in raw.iter().enumerate() {
        if !(p.x.is_finite() && p.y.is_finite()) {
            return Err(ModelError::NonFinite { index });
        }
        if p.x <= 0.0 || p.y <= 0.0 {
            return Err(ModelError::NonPositive {
                index,
                x: p.x,
                y: p.y,
            });
        }
        if p.x >= width || p.y >= height {
            return Err(ModelError::OutOfRect {
                index,
                x: p.x,
                y: p.y,
                width,
                height,
            });
        }
    }
    let mut points = raw;
    points.sort_by(|p, q| p.x.total_cmp(&q.x));
    if let Some(w) = points.windows(2).find(|w| w[0].x == w[1].x) {
        return Err(ModelError::DuplicateX(w[0].x));
    }
    let mut ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    ys.sort_by(f64::total_cmp);
    if let Some(w) = ys.windows(2).find(|w| w[0] == w[1]) {
        return Err(ModelError::DuplicateY(w[0]));
    }
    Ok(PointCloud {
        points,
        width,
        height,
    })
}

/// `m x n` field of 0/1 cells, row-major by `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitField {
    m: usize,
    n: usize,
    bits: Vec<u8>,
}

impl BitField {
    pub fn zeros(m: usize, n: usize) -> Result<Self, ModelError> {
        if m == 0 || n == 0 {
            return Err(ModelError::EmptyField { m, n });
        }
        Ok(BitField {
            m,
            n,
            bits: vec![0; m * n],
        })
    }

    /// `bits[j * m + i]` is cell `(i, j)`.
    pub fn from_vec(m: usize, n: usize, bits: Vec<u8>) -> Result<Self, ModelError> {
        if m == 0 || n == 0 {
            return Err(ModelError::EmptyField { m, n });
        }
        if bits.len() != m * n {
            return Err(ModelError::ShapeMismatch {
                expected: m * n,
                got: bits.len(),
            });
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(ModelError::NotABit(b));
        }
        Ok(BitField { m, n, bits })
    }

    /// Field with ones exactly at `cells`.
    pub fn from_cells(m: usize, n: usize, cells: &[Cell]) -> Result<Self, ModelError> {
        let mut f = BitField::zeros(m, n)?;
        for c in cells {
            f.set(c.i, c.j, true);
        }
        Ok(f)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.m + i] != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.bits[j * self.m + i] = value as u8;
    }

    /// Row `j` as a slice of 0/1 bytes.
    pub fn row(&self, j: usize) -> &[u8] {
        &self.bits[j * self.m..(j + 1) * self.m]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    /// Cells holding a one, ordered by `(i, j)`.
    pub fn ones(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in 0..self.n {
                if self.get(i, j) {
                    out.push(Cell::new(i, j));
                }
            }
        }
        out
    }

    pub fn transposed(&self) -> BitField {
        let mut t = BitField {
            m: self.n,
            n: self.m,
            bits: vec![0; self.m * self.n],
        };
        for j in 0..self.n {
            for i in 0..self.m {
                t.bits[i * self.n + j] = self.bits[j * self.m + i];
            }
        }
        t
    }

    /// Copy embedded in a larger all-zero field. Panics if the new size is smaller.
    pub fn padded(&self, m: usize, n: usize) -> BitField {
        assert!(m >= self.m && n >= self.n, "padding cannot shrink a field");
        let mut out = BitField {
            m,
            n,
            bits: vec![0; m * n],
        };
        for j in 0..self.n {
            out.bits[j * m..j * m + self.m].copy_from_slice(self.row(j));
        }
        out
    }

    /// The `m x n` lower-left block.
    pub fn cropped(&self, m: usize, n: usize) -> BitField {
        assert!(m <= self.m && n <= self.n && m > 0 && n > 0);
        let mut out = BitField {
            m,
            n,
            bits: vec![0; m * n],
        };
        for j in 0..n {
            out.bits[j * m..(j + 1) * m].copy_from_slice(&self.row(j)[..m]);
        }
        out
    }
}

/// `m x n` field of non-negative integer weights, row-major by `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightField {
    m: usize,
    n: usize,
    weights: Vec<u32>,
}

impl WeightField {
    pub fn zeros(m: usize, n: usize) -> Result<Self, ModelError> {
        if m == 0 || n == 0 {
            return Err(ModelError::EmptyField { m, n });
        }
        Ok(WeightField {
            m,
            n,
            weights: vec![0; m * n],
        })
    }

    pub fn from_vec(m: usize, n: usize, weights: Vec<u32>) -> Result<Self, ModelError> {
        if m == 0 || n == 0 {
            return Err(ModelError::EmptyField { m, n });
        }
        if weights.len() != m * n {
            return Err(ModelError::ShapeMismatch {
                expected: m * n,
                got: weights.len(),
            });
        }
        Ok(WeightField { m, n, weights })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.weights[j * self.m + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, w: u32) {
        self.weights[j * self.m + i] = w;
    }

    pub fn row(&self, j: usize) -> &[u32] {
        &self.weights[j * self.m..(j + 1) * self.m]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.weights
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gap(h1: f64, h2: f64) -> Gap {
        Gap::new(h1, h2).unwrap()
    }

    #[test]
    fn precedes_threshold_cases() {
        let p = Point::new(1.0, 1.0);
        let q = Point::new(2.0, 2.0);
        assert!(precedes(p, q, gap(1.0, 1.0)));
        assert!(!precedes(p, q, gap(2.0, 1.0)));
        assert!(precedes(Point::new(0.5, 0.5), q, gap(1.0, 1.0)));
    }

    #[test]
    fn validate_sorts_and_rejects() {
        let c = validate_cloud(
            vec![Point::new(2.0, 2.0), Point::new(1.0, 1.0)],
            3.0,
            3.0,
        )
        .unwrap();
        assert_eq!(c.points()[0], Point::new(1.0, 1.0));

        let dup = validate_cloud(vec![Point::new(1.0, 1.0), Point::new(1.0, 2.0)], 3.0, 3.0);
        assert_eq!(dup, Err(ModelError::DuplicateX(1.0)));
        let dupy = validate_cloud(vec![Point::new(1.0, 1.0), Point::new(2.0, 1.0)], 3.0, 3.0);
        assert_eq!(dupy, Err(ModelError::DuplicateY(1.0)));
        assert!(matches!(
            validate_cloud(vec![Point::new(3.5, 1.0)], 3.0, 3.0),
            Err(ModelError::OutOfRect { index: 0, .. })
        ));
        assert!(matches!(
            validate_cloud(vec![Point::new(0.0, 1.0)], 3.0, 3.0),
            Err(ModelError::NonPositive { index: 0, .. })
        ));
        assert!(matches!(
            validate_cloud(vec![Point::new(f64::NAN, 1.0)], 3.0, 3.0),
            Err(ModelError::NonFinite { index: 0 })
        ));
        assert!(validate_cloud(Vec::new(), 3.0, 3.0).unwrap().is_empty());
        assert!(matches!(
            validate_cloud(Vec::new(), 0.0, 3.0),
            Err(ModelError::InvalidRect { .. })
        ));
    }

    #[test]
    fn lattice_gap_rejects_zero() {
        assert_eq!(LatticeGap::new(0, 0), Err(ModelError::ZeroLatticeGap));
        assert!(LatticeGap::new(0, 1).is_ok());
    }

    #[test]
    fn bitfield_transpose_and_pad() {
        let f = BitField::from_cells(3, 2, &[Cell::new(2, 0), Cell::new(0, 1)]).unwrap();
        let t = f.transposed();
        assert_eq!((t.m(), t.n()), (2, 3));
        assert!(t.get(0, 2) && t.get(1, 0));
        assert_eq!(t.count_ones(), 2);
        let p = f.padded(5, 4);
        assert!(p.get(2, 0) && p.get(0, 1));
        assert_eq!(p.count_ones(), 2);
        assert_eq!(p.cropped(3, 2), f);
    }

    fn pt() -> impl Strategy<Value = Point> {
        (0.01f64..10.0, 0.01f64..10.0).prop_map(|(x, y)| Point::new(x, y))
    }

    proptest! {
        #[test]
        fn precedes_is_transitive(p in pt(), q in pt(), r in pt(), h1 in 0.0f64..3.0, h2 in 0.0f64..3.0) {
            let g = gap(h1, h2);
            if precedes(p, q, g) && precedes(q, r, g) {
                prop_assert!(precedes(p, r, g));
            }
        }

        #[test]
        fn precedes_is_antitone_in_gap(p in pt(), q in pt(), h1 in 0.0f64..3.0, h2 in 0.0f64..3.0, d1 in 0.0f64..2.0, d2 in 0.0f64..2.0) {
            if precedes(p, q, gap(h1 + d1, h2 + d2)) {
                prop_assert!(precedes(p, q, gap(h1, h2)));
            }
        }

        #[test]
        fn zero_gap_is_strict_dominance(p in pt(), q in pt()) {
            prop_assume!(p.x != q.x && p.y != q.y);
            prop_assert_eq!(precedes(p, q, Gap::ZERO), p.x < q.x && p.y < q.y);
        }
    }
}
