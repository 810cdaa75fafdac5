//! Bi-objective benchmark functions, dominance comparison, and closed-form
//! Pareto-front descriptions.
//!
//! Both benchmark families are maximized over bit strings. The one-point
//! family (`rrrmo_*`) rewards a single contiguous block of ones; the uniform
//! family (`urrrmo_*`) rewards a left-half path structure combined with
//! evenly split right-half blocks, and comes as an instance class closed
//! under position permutation and xor masking.

mod rrrmo;
mod urrrmo;

pub use rrrmo::{rrrmo_eval, rrrmo_front, rrrmo_membership, RrrmoMembership};
pub use urrrmo::{
    hypermutation_hard_sigma, urrrmo_eval, urrrmo_front, urrrmo_instance_eval, urrrmo_subsets,
    UrrrmoFront, UrrrmoSubsets,
};

use crate::bitstring::{BitString, Permutation};
use crate::error::{Error, Result};

/// Objective vector. Both components are exact non-negative integers; the
/// benchmarks stay far below `u64::MAX` for any practical length.
pub type Fitness = (u64, u64);

/// Outcome of comparing two fitness vectors under weak Pareto dominance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DominanceResult {
    /// `a` is at least as good everywhere and strictly better somewhere.
    Dominates,
    /// `b` is at least as good everywhere and strictly better somewhere.
    DominatedBy,
    Equal,
    Incomparable,
}

/// Compares `a` against `b` (maximization in both components).
pub fn compare(a: Fitness, b: Fitness) -> DominanceResult {
    use std::cmp::Ordering::*;
    match (a.0.cmp(&b.0), a.1.cmp(&b.1)) {
        (Equal, Equal) => DominanceResult::Equal,
        (Less, Greater) | (Greater, Less) => DominanceResult::Incomparable,
        (Less, _) | (_, Less) => DominanceResult::DominatedBy,
        _ => DominanceResult::Dominates,
    }
}

/// `a` is at least as good as `b` in every component (includes equality).
pub fn weakly_dominates(a: Fitness, b: Fitness) -> bool {
    a.0 >= b.0 && a.1 >= b.1
}

/// `a` weakly dominates `b` and is strictly better in some component.
pub fn strictly_dominates(a: Fitness, b: Fitness) -> bool {
    weakly_dominates(a, b) && a != b
}

#[derive(Clone, Debug)]
enum Kind {
    Rrrmo {
        n: usize,
    },
    Urrrmo {
        n: usize,
        sigma: Permutation,
        z: BitString,
        /// Fast path: identity permutation and all-zeros mask need no
        /// per-evaluation transform.
        plain: bool,
    },
}

/// An immutable problem instance: evaluation is pure, so instances are safe
/// to share across threads.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    kind: Kind,
}

impl ProblemInstance {
    /// One-point-crossover benchmark; `n` must be a positive multiple of 5.
    pub fn rrrmo(n: usize) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(5) {
            return Err(Error::NotDivisible { len: n, divisor: 5 });
        }
        Ok(ProblemInstance {
            kind: Kind::Rrrmo { n },
        })
    }

    /// Uniform-crossover benchmark with identity permutation and zero mask;
    /// `n` must be a positive multiple of 16.
    pub fn urrrmo(n: usize) -> Result<Self> {
        let sigma = Permutation::identity(n);
        let z = BitString::zeros(n);
        ProblemInstance::urrrmo_instance(n, sigma, z)
    }

    /// A member of the uniform-crossover instance class: evaluation
    /// transforms the genome by the permutation and xor mask first.
    pub fn urrrmo_instance(n: usize, sigma: Permutation, z: BitString) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(16) {
            return Err(Error::NotDivisible { len: n, divisor: 16 });
        }
        if sigma.len() != n {
            return Err(Error::LengthMismatch {
                left: sigma.len(),
                right: n,
            });
        }
        if z.len() != n {
            return Err(Error::LengthMismatch {
                left: z.len(),
                right: n,
            });
        }
        let plain = sigma.is_identity() && z.count_ones() == 0;
        Ok(ProblemInstance {
            kind: Kind::Urrrmo { n, sigma, z, plain },
        })
    }

    pub fn n(&self) -> usize {
        match &self.kind {
            Kind::Rrrmo { n } | Kind::Urrrmo { n, .. } => *n,
        }
    }

    pub fn is_rrrmo(&self) -> bool {
        matches!(self.kind, Kind::Rrrmo { .. })
    }

    /// Evaluates a genome. The genome length must equal the instance length.
    pub fn evaluate(&self, x: &BitString) -> Fitness {
        match &self.kind {
            Kind::Rrrmo { n } => rrrmo_eval(x, *n),
            Kind::Urrrmo { n, sigma, z, plain } => {
                if *plain {
                    urrrmo_eval(x, *n)
                } else {
                    urrrmo_instance_eval(x, sigma, z)
                }
            }
        }
    }

    /// Number of distinct Pareto-optimal fitness vectors.
    pub fn front_size(&self) -> usize {
        match &self.kind {
            Kind::Rrrmo { n } => n / 5 + 1,
            Kind::Urrrmo { n, .. } => n / 2 + 1,
        }
    }

    /// Index of `f` within the Pareto front, if `f` is a front vector.
    /// Permutation and mask leave objective values unchanged, so the front
    /// vectors are the same for every instance of a class.
    pub fn front_vector_index(&self, f: Fitness) -> Option<usize> {
        match &self.kind {
            Kind::Rrrmo { n } => {
                let n = *n as u64;
                let base = 4 * n * n / 5;
                let span = n / 5;
                if f.1 < base || f.1 > base + span {
                    return None;
                }
                let i = f.1 - base;
                (f.0 == base + span - i).then_some(i as usize)
            }
            Kind::Urrrmo { n, .. } => {
                let n = *n as u64;
                let base = 3 * n;
                let span = n / 2;
                if f.0 < base || f.0 > base + span {
                    return None;
                }
                let k = f.0 - base;
                (f.1 == base + span - k).then_some(k as usize)
            }
        }
    }

    /// All Pareto-optimal fitness vectors, in index order.
    pub fn pareto_fitness_vectors(&self) -> Vec<Fitness> {
        match &self.kind {
            Kind::Rrrmo { n } => rrrmo_front(*n).into_iter().map(|(_, f)| f).collect(),
            Kind::Urrrmo { n, .. } => {
                let n = *n as u64;
                (0..=n / 2).map(|k| (3 * n + k, 3 * n + n / 2 - k)).collect()
            }
        }
    }
}
