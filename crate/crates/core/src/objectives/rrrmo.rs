//! The one-point-crossover benchmark: positive fitness on strings with at
//! most 3n/5 ones plus a Pareto set of full-block strings with 4n/5 ones.

use crate::bitstring::BitString;
use crate::objectives::Fitness;

/// Structural set membership for the one-point benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RrrmoMembership {
    /// The region of positive fitness: at most 3n/5 ones, or Pareto-optimal.
    pub in_g: bool,
    /// The Pareto set: one block of 4n/5 ones, zeros only at the ends.
    pub in_f: bool,
    /// The inner plateau: one block of 3n/5 ones, zeros only at the ends.
    /// Everything outside the plateau and the front is dominated by some
    /// plateau member.
    pub in_f_prime: bool,
}

/// Evaluates the one-point benchmark. `n` must be a positive multiple of 5
/// (validated at instance construction) and `x.len() == n`.
pub fn rrrmo_eval(x: &BitString, n: usize) -> Fitness {
    debug_assert_eq!(x.len(), n);
    let stats = x.count_statistics();
    let ones = stats.ones;
    let in_f = ones == 4 * n / 5 && stats.leading_zeros + stats.trailing_zeros == n / 5;
    let in_g = ones <= 3 * n / 5 || in_f;
    if in_g {
        let base = (n as u64) * (ones as u64);
        (
            base + stats.trailing_zeros as u64,
            base + stats.leading_zeros as u64,
        )
    } else {
        (0, 0)
    }
}

/// Set memberships for the one-point benchmark.
///
/// A string with k ones whose leading and trailing zero runs sum to n - k
/// has all its zeros at the ends, so the ones form one contiguous block;
/// that makes the block-form checks pure run-statistics tests.
pub fn rrrmo_membership(x: &BitString, n: usize) -> RrrmoMembership {
    debug_assert_eq!(x.len(), n);
    let stats = x.count_statistics();
    let end_zeros = stats.leading_zeros + stats.trailing_zeros;
    let in_f = stats.ones == 4 * n / 5 && end_zeros == n / 5;
    let in_f_prime = stats.ones == 3 * n / 5 && end_zeros == 2 * n / 5;
    RrrmoMembership {
        in_g: stats.ones <= 3 * n / 5 || in_f,
        in_f,
        in_f_prime,
    }
}

/// The full Pareto set with fitness values: the n/5 + 1 strings
/// `0^i 1^(4n/5) 0^(n/5-i)` with fitness `(4n²/5 + n/5 - i, 4n²/5 + i)`.
pub fn rrrmo_front(n: usize) -> Vec<(BitString, Fitness)> {
    let block = 4 * n / 5;
    let slack = n / 5;
    let base = 4 * (n as u64) * (n as u64) / 5;
    (0..=slack)
        .map(|i| {
            let mut x = BitString::zeros(n);
            for p in i..i + block {
                x.set(p, true);
            }
            (x, (base + (slack - i) as u64, base + i as u64))
        })
        .collect()
}
