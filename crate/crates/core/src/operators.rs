//! Variation operators over bit strings: three mutation operators and two
//! crossover operators, plus the radius law used by the unbiased operator.
//!
//! Every operator takes the parent(s) by reference, owns no state, and draws
//! all randomness from a caller-supplied stream, so a fixed seed reproduces
//! the exact output sequence regardless of thread count.

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

/// Tolerance for checking that explicit radius weights sum to one.
const WEIGHT_NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Distribution of the flip radius for the unbiased mutation operator.
///
/// The support is `0..=n` where `n` is the parent length; `validate` checks
/// a distribution against a concrete length before use.
#[derive(Clone, Debug, PartialEq)]
pub enum RadiusDistribution {
    /// All mass on one radius. Radius 0 is the identity operator; radius n
    /// always complements.
    Point(usize),
    /// Uniform over `0..=n`.
    Uniform,
    /// `Binomial(n, 1/n)`: the radius law of standard bit mutation.
    BinomialOneOverN,
    /// Explicit weights for radii `0..=n` (length must be n+1), summing to
    /// one within [`WEIGHT_NORMALIZATION_TOLERANCE`].
    Weighted(Vec<f64>),
}

impl RadiusDistribution {
    /// Checks the distribution against a concrete string length.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            RadiusDistribution::Point(k) => {
                if *k > n {
                    return Err(Error::BadParameter(format!(
                        "radius {k} exceeds string length {n}"
                    )));
                }
            }
            RadiusDistribution::Uniform | RadiusDistribution::BinomialOneOverN => {}
            RadiusDistribution::Weighted(w) => {
                if w.len() != n + 1 {
                    return Err(Error::BadParameter(format!(
                        "need {} radius weights for length {n}, got {}",
                        n + 1,
                        w.len()
                    )));
                }
                if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::BadParameter(
                        "radius weights must be finite and non-negative".into(),
                    ));
                }
                let sum: f64 = w.iter().sum();
                if (sum - 1.0).abs() > WEIGHT_NORMALIZATION_TOLERANCE {
                    return Err(Error::BadParameter(format!(
                        "radius weights sum to {sum}, expected 1"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Draws a radius for a parent of length `n`.
    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> usize {
        match self {
            RadiusDistribution::Point(k) => {
                debug_assert!(*k <= n);
                *k
            }
            RadiusDistribution::Uniform => rng.random_range(0..=n),
            RadiusDistribution::BinomialOneOverN => binomial_flip_count(n, rng),
            RadiusDistribution::Weighted(w) => {
                debug_assert_eq!(w.len(), n + 1);
                WeightedIndex::new(w)
                    .expect("weights were validated")
                    .sample(rng)
            }
        }
    }

    /// Expected radius for a parent of length `n`.
    pub fn mean_radius(&self, n: usize) -> f64 {
        match self {
            RadiusDistribution::Point(k) => *k as f64,
            RadiusDistribution::Uniform => n as f64 / 2.0,
            RadiusDistribution::BinomialOneOverN => {
                if n == 0 {
                    0.0
                } else {
                    1.0
                }
            }
            RadiusDistribution::Weighted(w) => {
                w.iter().enumerate().map(|(k, v)| k as f64 * v).sum()
            }
        }
    }
}

/// A configured mutation operator.
#[derive(Clone, Debug, PartialEq)]
pub enum Mutation {
    /// Each bit flips independently with probability 1/n.
    StandardBit,
    /// Radius drawn from the distribution, then a uniform point on that
    /// Hamming sphere.
    UnaryUnbiased(RadiusDistribution),
    /// Contiguous circular window, each window bit flipping with
    /// probability `r`.
    Hypermutation { r: f64 },
}

impl Mutation {
    pub fn standard_bit() -> Self {
        Mutation::StandardBit
    }

    pub fn unary_unbiased(radius: RadiusDistribution) -> Self {
        Mutation::UnaryUnbiased(radius)
    }

    /// Window flip probability `r` must lie in (0, 1]; r = 1 flips the
    /// whole window deterministically.
    pub fn hypermutation(r: f64) -> Result<Self> {
        if !r.is_finite() || r <= 0.0 || r > 1.0 {
            return Err(Error::BadParameter(format!(
                "hypermutation rate {r} outside (0, 1]"
            )));
        }
        Ok(Mutation::Hypermutation { r })
    }

    /// Checks the operator against a concrete string length.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Mutation::StandardBit | Mutation::Hypermutation { .. } => Ok(()),
            Mutation::UnaryUnbiased(d) => d.validate(n),
        }
    }

    pub fn apply(&self, x: &BitString, rng: &mut impl Rng) -> BitString {
        match self {
            Mutation::StandardBit => standard_bit_mutation(x, rng),
            Mutation::UnaryUnbiased(d) => unary_unbiased_mutation(x, d, rng),
            Mutation::Hypermutation { r } => hypermutation(x, *r, rng),
        }
    }

    /// Probability that any fixed position flips in one application, for a
    /// parent of length `n`.
    pub fn marginal_flip_rate(&self, n: usize) -> f64 {
        match self {
            Mutation::StandardBit => 1.0 / n as f64,
            Mutation::UnaryUnbiased(d) => d.mean_radius(n) / n as f64,
            Mutation::Hypermutation { r } => r / 2.0,
        }
    }
}

/// Flip count with the same law as n independent 1/n coin flips.
fn binomial_flip_count(n: usize, rng: &mut impl Rng) -> usize {
    if n == 0 {
        return 0;
    }
    let d = Binomial::new(n as u64, 1.0 / n as f64).expect("probability in range");
    d.sample(rng) as usize
}

/// Flips a uniformly chosen set of exactly `count` distinct positions.
fn flip_uniform_subset(x: &BitString, count: usize, rng: &mut impl Rng) -> BitString {
    debug_assert!(count <= x.len());
    let mut out = x.clone();
    for i in rand::seq::index::sample(rng, x.len(), count) {
        out.flip(i);
    }
    out
}

/// Standard bit mutation: each bit flips independently with probability
/// 1/n. Implemented as a binomial flip count followed by a uniform choice
/// of that many distinct positions, which has the identical distribution
/// and avoids touching every bit.
pub fn standard_bit_mutation(x: &BitString, rng: &mut impl Rng) -> BitString {
    let count = binomial_flip_count(x.len(), rng);
    flip_uniform_subset(x, count, rng)
}

/// Unbiased mutation: draws a radius, then a uniform point on the Hamming
/// sphere of that radius around `x`.
pub fn unary_unbiased_mutation(
    x: &BitString,
    radius: &RadiusDistribution,
    rng: &mut impl Rng,
) -> BitString {
    let r = radius.sample(x.len(), rng);
    flip_uniform_subset(x, r, rng)
}

/// Contiguous somatic hypermutation: window start uniform over the n
/// positions, window length uniform over `0..=n` (length 0 copies the
/// parent), each window bit flipping independently with probability `r`.
/// The window wraps circularly. The start draw is consumed even for an
/// empty window, keeping the stream layout independent of the outcome.
pub fn hypermutation(x: &BitString, r: f64, rng: &mut impl Rng) -> BitString {
    debug_assert!(r > 0.0 && r <= 1.0);
    let n = x.len();
    if n == 0 {
        return x.clone();
    }
    let start = rng.random_range(0..n);
    let window = rng.random_range(0..=n);
    let mut out = x.clone();
    for offset in 0..window {
        let pos = (start + offset) % n;
        if rng.random_bool(r) {
            out.flip(pos);
        }
    }
    out
}

/// One-point crossover at a fixed cut: the first offspring takes the first
/// `cut` bits from `x` and the rest from `y`; the second is the complementary
/// assembly.
pub fn one_point_crossover_at(
    x: &BitString,
    y: &BitString,
    cut: usize,
) -> Result<(BitString, BitString)> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: y.len(),
        });
    }
    if cut > n {
        return Err(Error::BadParameter(format!(
            "cut {cut} outside 0..={n}"
        )));
    }
    let xw = x.words();
    let yw = y.words();
    let mut z = Vec::with_capacity(xw.len());
    let mut zbar = Vec::with_capacity(xw.len());
    for (i, (&a, &b)) in xw.iter().zip(yw).enumerate() {
        let word_start = i * 64;
        // Mask of positions in this word that lie before the cut.
        let prefix = if cut >= word_start + 64 {
            !0u64
        } else if cut <= word_start {
            0
        } else {
            (1u64 << (cut - word_start)) - 1
        };
        z.push((a & prefix) | (b & !prefix));
        zbar.push((b & prefix) | (a & !prefix));
    }
    Ok((
        BitString::from_words(n, z),
        BitString::from_words(n, zbar),
    ))
}

/// One-point crossover with the cut uniform over the n + 1 positions.
pub fn one_point_crossover(
    x: &BitString,
    y: &BitString,
    rng: &mut impl Rng,
) -> Result<(BitString, BitString)> {
    let cut = rng.random_range(0..=x.len());
    one_point_crossover_at(x, y, cut)
}

/// Uniform crossover: each position of the first offspring takes either
/// parent's bit with equal probability; the second offspring takes the
/// other parent's bit. Positions where the parents agree are preserved in
/// both. One 64-bit mask is drawn per word, so the stream layout depends
/// only on the length.
pub fn uniform_crossover(
    x: &BitString,
    y: &BitString,
    rng: &mut impl Rng,
) -> Result<(BitString, BitString)> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: y.len(),
        });
    }
    let xw = x.words();
    let yw = y.words();
    let mut z = Vec::with_capacity(xw.len());
    let mut zbar = Vec::with_capacity(xw.len());
    for (&a, &b) in xw.iter().zip(yw) {
        let mask = rng.random::<u64>();
        // Where parents agree the mask is irrelevant; padding stays zero
        // because it is zero in both parents.
        z.push((a & !mask) | (b & mask));
        zbar.push((a & mask) | (b & !mask));
    }
    Ok((
        BitString::from_words(n, z),
        BitString::from_words(n, zbar),
    ))
}

/// Uniform choice between the two offspring of a crossover.
pub fn pick_one_offspring(pair: (BitString, BitString), rng: &mut impl Rng) -> BitString {
    if rng.random_bool(0.5) {
        pair.0
    } else {
        pair.1
    }
}

/// A configured recombination operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossover {
    /// No recombination: both parents pass through as clones.
    None,
    /// Single uniformly drawn cut point.
    OnePoint,
    /// Independent fair coin per position.
    Uniform,
}

impl Crossover {
    /// Produces the complementary offspring pair. Parents must have equal
    /// length; `None` clones them and consumes no randomness.
    pub fn recombine(
        &self,
        x: &BitString,
        y: &BitString,
        rng: &mut impl Rng,
    ) -> (BitString, BitString) {
        match self {
            Crossover::None => (x.clone(), y.clone()),
            Crossover::OnePoint => one_point_crossover(x, y, rng)
                .expect("parents must have equal length"),
            Crossover::Uniform => uniform_crossover(x, y, rng)
                .expect("parents must have equal length"),
        }
    }
}
