//! Seed-reproducible samplers for the Poisson, Bernoulli and geometric fields.
//!
//! Every sampler is a pure function of its parameters and a [`SeedSpec`].
//! A `SeedSpec` selects a ChaCha8 stream: the master seed keys the generator
//! and the stream index picks one of its 2^64 independent streams.

use alloc::vec::Vec;

use rand::distr::Open01;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use thiserror::Error;

use crate::model::{validate_cloud, BitField, ModelError, Point, PointCloud, WeightField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("probability must lie strictly between 0 and 1, got {0}")]
    Probability(f64),
    #[error("intensity must be finite and positive, got {0}")]
    Intensity(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub const fn new(master_seed: u64, stream_index: u64) -> Self {
        SeedSpec {
            master_seed,
            stream_index,
        }
    }

    /// Generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// A master seed for an unrelated family of streams, keyed by `tag`.
    ///
    /// Used to give each experiment arm (size, side of an identity, aux field)
    /// its own replica streams under one user-facing seed.
    pub fn derive(master_seed: u64, tag: u64) -> u64 {
        splitmix64(master_seed ^ splitmix64(tag.wrapping_add(0x6a09_e667_f3bc_c909)))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intensity(f64);

impl Intensity {
    pub const UNIT: Intensity = Intensity(1.0);

    pub fn new(lambda: f64) -> Result<Self, SampleError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(SampleError::Intensity(lambda));
        }
        Ok(Intensity(lambda))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

pub(crate) fn check_probability(p: f64) -> Result<(), SampleError> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(SampleError::Probability(p))
    }
}

/// Poisson process of the given intensity on `(0, x) x (0, t)`.
///
/// Count first, then i.i.d. uniform placement. The (probability-zero)
/// event of a coordinate tie is handled by redrawing the whole sample from
/// the continuing stream, so the output always validates.
pub fn sample_poisson(
    x: f64,
    t: f64,
    lambda: Intensity,
    seed: SeedSpec,
) -> Result<PointCloud, SampleError> {
    if !(x.is_finite() && t.is_finite() && x > 0.0 && t > 0.0) {
        return Err(ModelError::InvalidRect { x, t }.into());
    }
    let mut rng = seed.rng();
    let mean = lambda.value() * x * t;
    let count_dist = Poisson::new(mean).map_err(|_| SampleError::Intensity(lambda.value()))?;
    loop {
        let count = count_dist.sample(&mut rng) as usize;
        let mut pts = Vec::with_capacity(count);
        for _ in 0..count {
            let u: f64 = rng.sample(Open01);
            let v: f64 = rng.sample(Open01);
            pts.push(Point::new(x * u, t * v));
        }
        match validate_cloud(pts, x, t) {
            Ok(cloud) => return Ok(cloud),
            Err(ModelError::DuplicateX(_) | ModelError::DuplicateY(_) | ModelError::OutOfRect { .. }) => {
                continue
            }
            Err(e) => return Err(e.into()),
        }
    }
}

/// Integer threshold such that `next_u64() < threshold` has probability `p`
/// (to within 2^-64).
pub(crate) fn bernoulli_threshold(p: f64) -> u64 {
    // 2^64 * p, saturating; p < 1 so this never reaches u64::MAX + 1.
    let scaled = p * 18_446_744_073_709_551_616.0;
    if scaled >= 18_446_744_073_709_551_615.0 {
        u64::MAX
    } else {
        scaled as u64
    }
}

/// Row-by-row Bernoulli generator; yields exactly the cells of
/// [`sample_bernoulli`] with the same arguments, in row order.
#[derive(Debug, Clone)]
pub struct BernoulliRows {
    rng: ChaCha8Rng,
    threshold: u64,
    m: usize,
}

impl BernoulliRows {
    pub fn new(m: usize, p: f64, seed: SeedSpec) -> Result<Self, SampleError> {
        check_probability(p)?;
        if m == 0 {
            return Err(ModelError::EmptyField { m, n: 1 }.into());
        }
        Ok(BernoulliRows {
            rng: seed.rng(),
            threshold: bernoulli_threshold(p),
            m,
        })
    }

    /// Fills `row` (length `m`) with the next row of bits.
    #[inline]
    pub fn next_row(&mut self, row: &mut [u8]) {
        debug_assert_eq!(row.len(), self.m);
        for cell in row.iter_mut() {
            *cell = (self.rng.next_u64() < self.threshold) as u8;
        }
    }
}

/// i.i.d. Bernoulli(p) field, one uniform draw per cell in row-major order.
pub fn sample_bernoulli(m: usize, n: usize, p: f64, seed: SeedSpec) -> Result<BitField, SampleError> {
    let mut field = BitField::zeros(m, n)?;
    let mut rows = BernoulliRows::new(m, p, seed)?;
    let mut row = alloc::vec![0u8; m];
    for j in 0..n {
        rows.next_row(&mut row);
        for (i, &b) in row.iter().enumerate() {
            field.set(i, j, b == 1);
        }
    }
    Ok(field)
}

/// Inverse-CDF geometric draw: `P(K = k) = p^k (1 - p)`.
#[inline]
pub fn geometric_from_uniform(u: f64, ln_p: f64) -> u32 {
    // u in (0, 1]; P(K >= k) = P(u <= p^k) = p^k.
    let k = libm::floor(libm::log(u) / ln_p);
    if k >= u32::MAX as f64 {
        u32::MAX
    } else {
        k as u32
    }
}

/// i.i.d. geometric field with `P(w = k) = p^k (1 - p)`, one uniform per cell.
pub fn sample_geometric(
    m: usize,
    n: usize,
    p: f64,
    seed: SeedSpec,
) -> Result<WeightField, SampleError> {
    check_probability(p)?;
    let mut field = WeightField::zeros(m, n)?;
    let mut rng = seed.rng();
    let ln_p = libm::log(p);
    for j in 0..n {
        for i in 0..m {
            // 1 - U with U in [0,1) gives (0, 1].
            let u = 1.0 - rng.random::<f64>();
            field.set(i, j, geometric_from_uniform(u, ln_p));
        }
    }
    Ok(field)
}
