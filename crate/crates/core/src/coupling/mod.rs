//! Constructive couplings between gapped and ungapped models.
//!
//! Each transform maps a source field to a new field whose gapped path
//! lengths reproduce the source's reference lengths at transformed
//! coordinates. The checkers evaluate those equalities exhaustively on a
//! grid (continuous) or on every lattice prefix (discrete).
//!
//! Two forms are checked. The level-set form
//! `{ reference(z) <= k } == { gapped(shift_k(z)) <= k }` holds for every
//! evaluation point and every `k`. The pointwise form
//! `reference(z) == gapped(map(z))` holds everywhere for the dilations; for
//! the contracting maps (`psi`, clumping) it holds at cells where the
//! reference table does not step up along the diagonal, and those are the
//! cells it is checked on.

mod clump;
mod dilate;
mod identity;
mod psi;

pub use clump::{check_clump, clump_to_geometric};
pub use dilate::{
    check_dilate_continuous, check_dilate_discrete, check_line_images, dilate_continuous, dilate_discrete,
    DilatedCloud,
};
pub use identity::{check_distributional_identity, CdfRow, IdentityError, IdentityKind, IdentityReport, IdentitySpec};
pub use psi::{check_psi, project_psi, project_psi_transposed};

use thiserror::Error;

use crate::model::{BitField, Gap, LatticeGap, ModelError};
use rand::RngCore;

use crate::sampling::{bernoulli_threshold, check_probability, sample_bernoulli, SampleError, SeedSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CouplingError {
    #[error("this transform needs both gap components >= 1, got ({h1}, {h2})")]
    ZeroGapComponent { h1: u32, h2: u32 },
    #[error("the projection needs h >= 1")]
    ZeroProjectionGap,
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which transform produced a coupled pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapDescriptor {
    DilateContinuous { gap: Gap, aux_seed: SeedSpec },
    DilateDiscrete { gap: LatticeGap, p: f64, aux_seed: SeedSpec },
    /// `(h, 1)` to `(h, 0)`; with `transposed`, `(1, h)` to `(0, h)`.
    Psi { h: u32, transposed: bool, p: f64, aux_seed: SeedSpec },
    Clump { p: f64, aux_seed: SeedSpec },
}

/// A source field, its transform, and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPair<S, T> {
    pub source: S,
    pub transformed: T,
    pub map: MapDescriptor,
}

/// Where an identity failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    /// Evaluation point: region corner or lattice prefix size.
    pub at: (f64, f64),
    /// `None` for the pointwise form, `Some(k)` for the level set `<= k`.
    pub level: Option<u64>,
    pub lhs: u64,
    pub rhs: u64,
}

/// Outcome of a pathwise identity check on one coupled pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathwiseReport {
    pub checked: usize,
    pub violations: usize,
    pub first: Option<Violation>,
}

impl PathwiseReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn merge(&mut self, other: &PathwiseReport) {
        self.checked += other.checked;
        self.violations += other.violations;
        if self.first.is_none() {
            self.first = other.first;
        }
    }

    fn record(&mut self, ok: bool, v: impl FnOnce() -> Violation) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(v());
            }
        }
    }
}

/// `field` continued to `m x n` with fresh Bernoulli(`p`) bits outside its
/// extent. The transforms read the source beyond its edge through this, so
/// their outputs keep the Bernoulli law up to the output boundary.
///
/// Bits are drawn row by row at width `m`, so for a fixed width a taller
/// continuation extends a shorter one.
fn continue_field(field: &BitField, m: usize, n: usize, p: f64, seed: SeedSpec) -> Result<BitField, SampleError> {
    let ext = SeedSpec::new(SeedSpec::derive(seed.master_seed, EXTENSION_TAG), seed.stream_index);
    let mut out = sample_bernoulli(m, n, p, ext)?;
    for j in 0..field.n() {
        for i in 0..field.m() {
            out.set(i, j, field.get(i, j));
        }
    }
    Ok(out)
}

/// `field` continued to an `s x s` square; fresh cells are drawn shell by
/// shell (`max(i, j)` increasing), so a larger square extends a smaller one.
/// Growing a continuation until a stopping rule holds must not redraw the
/// cells already seen, or the stopping rule biases them.
fn continue_square(field: &BitField, s: usize, p: f64, seed: SeedSpec) -> Result<BitField, SampleError> {
    let ext = SeedSpec::new(SeedSpec::derive(seed.master_seed, EXTENSION_TAG), seed.stream_index);
    check_probability(p)?;
    let threshold = bernoulli_threshold(p);
    let mut rng = ext.rng();
    let mut out = BitField::zeros(s, s)?;
    for shell in 0..s {
        for i in 0..shell {
            out.set(i, shell, rng.next_u64() < threshold);
        }
        for j in 0..=shell {
            out.set(shell, j, rng.next_u64() < threshold);
        }
    }
    for j in 0..field.n() {
        for i in 0..field.m() {
            out.set(i, j, field.get(i, j));
        }
    }
    Ok(out)
}

/// Keys the stream that continues a source field, apart from the stream of
/// fresh cells off the image of a map.
pub(crate) const EXTENSION_TAG: u64 = 0x5e_ed;
