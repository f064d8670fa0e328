//! Dilations: ungapped fields to gapped ones by pushing every point outward
//! by the gap times its current level.

use alloc::vec::Vec;

use super::{continue_field, CoupledPair, EXTENSION_TAG, CouplingError, MapDescriptor, PathwiseReport, Violation};
use crate::hammersley::build_lines_points;
use crate::model::{validate_cloud, BitField, Gap, LatticeGap, Point, PointCloud, Region};
use crate::sampling::{sample_bernoulli, sample_poisson, Intensity, SeedSpec};
use crate::solve::{chain_levels, gap_lis_table, lis_11_table};

/// Continuous dilation output with the pieces the checkers need.
#[derive(Debug, Clone, PartialEq)]
pub struct DilatedCloud {
    pub pair: CoupledPair<PointCloud, PointCloud>,
    /// The source continued to the dilated rectangle with fresh points
    /// outside the source rectangle.
    pub continued: PointCloud,
    /// Image of each point of `continued`, in its order.
    pub images: Vec<Point>,
    /// Ungapped chain level of each point of `continued`.
    pub levels: Vec<u64>,
    /// Auxiliary points kept because they fall outside the image of the map.
    pub fresh: Vec<Point>,
}

/// Level `ℓ` corners of the dilated lines: images of the level-`ℓ` points
/// inside `bounds`, in increasing `x` and decreasing `y`.
fn translated_corners(images: &[Point], levels: &[u64], bounds: Region) -> Vec<Vec<Point>> {
    let depth = levels.iter().copied().max().unwrap_or(0) as usize;
    let mut by_level = alloc::vec![Vec::new(); depth];
    for (&p, &l) in images.iter().zip(levels) {
        if bounds.contains(p) {
            by_level[l as usize - 1].push(p);
        }
    }
    while by_level.last().is_some_and(Vec::is_empty) {
        by_level.pop();
    }
    by_level
}

/// Some corner `c` of the line satisfies `c <= y` coordinatewise.
fn above(corners: &[Point], y: Point) -> bool {
    let k = corners.partition_point(|c| c.x <= y.x);
    k > 0 && corners[k - 1].y <= y.y
}

/// Some corner precedes `y` under `gap`.
fn beyond(corners: &[Point], y: Point, gap: Gap) -> bool {
    let k = corners.partition_point(|c| c.x + gap.h1() <= y.x);
    k > 0 && corners[k - 1].y + gap.h2() <= y.y
}

/// `φ(p) = p + (ℓ(p) - 1) h` on the source points, plus an independent
/// unit Poisson sample kept on the complement of the image of `φ`.
///
/// The output lives on the dilated rectangle `(X + h1 L, T + h2 L)` with
/// `L` the ungapped length over the source rectangle. Since `φ(p) >= p`,
/// the output there is determined by the source continued to the same
/// rectangle; the continuation is a fresh unit Poisson sample outside the
/// source rectangle.
pub fn dilate_continuous(cloud: &PointCloud, gap: Gap, aux_seed: SeedSpec) -> Result<DilatedCloud, CouplingError> {
    let depth = chain_levels(cloud.points(), Gap::ZERO).into_iter().max().unwrap_or(0) as f64;
    let width = cloud.width() + gap.h1() * depth;
    let height = cloud.height() + gap.h2() * depth;
    let source_rect = cloud.bounds();

    let ext = SeedSpec::new(SeedSpec::derive(aux_seed.master_seed, EXTENSION_TAG), aux_seed.stream_index);
    let mut pts = cloud.points().to_vec();
    if depth > 0.0 {
        let outer = sample_poisson(width, height, Intensity::UNIT, ext)?;
        pts.extend(outer.points().iter().filter(|&&p| !source_rect.contains(p)));
    }
    let continued = validate_cloud(pts, width, height)?;
    let pts = continued.points();
    let levels = chain_levels(pts, Gap::ZERO);
    let images: Vec<Point> = pts
        .iter()
        .zip(&levels)
        .map(|(p, &l)| {
            let s = (l - 1) as f64;
            Point::new(p.x + s * gap.h1(), p.y + s * gap.h2())
        })
        .collect();

    let bounds = Region::new(width, height);
    let layers = translated_corners(&images, &levels, Region::new(f64::INFINITY, f64::INFINITY));
    let aux = sample_poisson(width, height, Intensity::UNIT, aux_seed)?;
    let mut fresh = Vec::new();
    for &y in aux.points() {
        // deepest translated up-set containing y; the up-sets are nested
        let top = layers.partition_point(|layer| above(layer, y));
        if top > 0 && !beyond(&layers[top - 1], y, gap) {
            fresh.push(y);
        }
    }
    let mut all: Vec<Point> = images.iter().copied().filter(|&p| bounds.contains(p)).collect();
    all.extend_from_slice(&fresh);
    let transformed = validate_cloud(all, width, height)?;
    Ok(DilatedCloud {
        pair: CoupledPair {
            source: cloud.clone(),
            transformed,
            map: MapDescriptor::DilateContinuous { gap, aux_seed },
        },
        continued,
        images,
        levels,
        fresh,
    })
}

/// Largest level among points inside `(0, x) x (0, t)`.
fn region_max(pts: &[Point], levels: &[u64], x: f64, t: f64) -> u64 {
    let end = pts.partition_point(|p| p.x < x);
    pts[..end]
        .iter()
        .zip(&levels[..end])
        .filter(|(p, _)| p.y < t)
        .map(|(_, &l)| l)
        .max()
        .unwrap_or(0)
}

/// Checks the dilation identities on a `grid x grid` lattice of region
/// corners `(X a / grid, T b / grid)`:
/// `L(x, t) = L^h(φ(x, t))` and, for every `k <= L(X, T)`,
/// `L(x, t) <= k  <=>  L^h(x + h1 k, t + h2 k) <= k`.
pub fn check_dilate_continuous(d: &DilatedCloud, grid: usize) -> PathwiseReport {
    let MapDescriptor::DilateContinuous { gap, .. } = d.pair.map else {
        panic!("not a continuous dilation");
    };
    // continuation points lie outside every evaluated source region
    let src = d.continued.points();
    let dst = d.pair.transformed.points();
    let dst_levels = chain_levels(dst, gap);
    let depth = region_max(src, &d.levels, d.pair.source.width(), d.pair.source.height());
    let (h1, h2) = (gap.h1(), gap.h2());
    let mut report = PathwiseReport::default();
    for a in 1..=grid {
        for b in 1..=grid {
            let x = d.pair.source.width() * a as f64 / grid as f64;
            let t = d.pair.source.height() * b as f64 / grid as f64;
            let l = region_max(src, &d.levels, x, t);
            let s = l as f64;
            let r = region_max(dst, &dst_levels, x + h1 * s, t + h2 * s);
            report.record(l == r, || Violation {
                at: (x, t),
                level: None,
                lhs: l,
                rhs: r,
            });
            for k in 0..=depth {
                let s = k as f64;
                let r = region_max(dst, &dst_levels, x + h1 * s, t + h2 * s);
                report.record((l <= k) == (r <= k), || Violation {
                    at: (x, t),
                    level: Some(k),
                    lhs: l,
                    rhs: r,
                });
            }
        }
    }
    report
}

/// The gapped lines of the output are the ungapped lines of the continued
/// source, line `ℓ` translated by `(ℓ - 1) h`.
pub fn check_line_images(d: &DilatedCloud) -> bool {
    let MapDescriptor::DilateContinuous { gap, .. } = d.pair.map else {
        panic!("not a continuous dilation");
    };
    let expected = translated_corners(&d.images, &d.levels, d.pair.transformed.bounds());
    let lines = build_lines_points(d.pair.transformed.points().to_vec(), gap);
    lines.len() == expected.len() && lines.lines().iter().zip(&expected).all(|(l, e)| l.corners() == &e[..])
}

/// Lattice dilation for `h1, h2 >= 1`:
/// `φ(m, n) = (m + (h1 - 1) P(m-1, n-1), n + (h2 - 1) P(m-1, n-1))` with
/// `P` the unit-gap prefix table. Image cells carry the source bit (the
/// source is continued past its extent with fresh bits); every other cell
/// of the dilated extent takes a fresh Bernoulli(`p`) bit from `aux_seed`.
pub fn dilate_discrete(
    field: &BitField,
    gap: LatticeGap,
    p: f64,
    aux_seed: SeedSpec,
) -> Result<CoupledPair<BitField, BitField>, CouplingError> {
    let (h1, h2) = (gap.h1(), gap.h2());
    if h1 == 0 || h2 == 0 {
        return Err(CouplingError::ZeroGapComponent { h1, h2 });
    }
    let (a, b) = ((h1 - 1) as usize, (h2 - 1) as usize);
    let depth = lis_11_table(field).total() as usize;
    let (mm, nn) = (field.m() + a * depth, field.n() + b * depth);
    let padded = continue_field(field, mm, nn, p, aux_seed)?;
    let table = lis_11_table(&padded);
    let mut out = sample_bernoulli(mm, nn, p, aux_seed)?;
    for j in 0..nn {
        for i in 0..mm {
            let k = table.at(i as i64, j as i64) as usize;
            let (ti, tj) = (i + a * k, j + b * k);
            if ti < mm && tj < nn {
                out.set(ti, tj, padded.get(i, j));
            }
        }
    }
    Ok(CoupledPair {
        source: field.clone(),
        transformed: out,
        map: MapDescriptor::DilateDiscrete { gap, p, aux_seed },
    })
}

/// `P(m, n) = Q(φ(m, n))` and `P(m, n) <= k <=> Q(m + (h1-1) k, n + (h2-1) k) <= k`
/// on every source prefix, `P` unit-gap on the source, `Q` gapped on the output.
pub fn check_dilate_discrete(pair: &CoupledPair<BitField, BitField>) -> PathwiseReport {
    let MapDescriptor::DilateDiscrete { gap, .. } = pair.map else {
        panic!("not a lattice dilation");
    };
    let (a, b) = (gap.h1() as i64 - 1, gap.h2() as i64 - 1);
    let src = lis_11_table(&pair.source);
    let dst = gap_lis_table(&pair.transformed, gap);
    let depth = src.total() as i64;
    let mut report = PathwiseReport::default();
    for n in 1..=pair.source.n() as i64 {
        for m in 1..=pair.source.m() as i64 {
            let l = src.at(m, n) as u64;
            let below = src.at(m - 1, n - 1) as i64;
            let r = dst.at(m + a * below, n + b * below) as u64;
            report.record(l == r, || Violation {
                at: (m as f64, n as f64),
                level: None,
                lhs: l,
                rhs: r,
            });
            for k in 0..=depth {
                let r = dst.at(m + a * k, n + b * k) as u64;
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
