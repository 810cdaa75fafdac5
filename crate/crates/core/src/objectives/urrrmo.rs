//! The uniform-crossover benchmark: a left-half prefix path combined with
//! evenly split right-half blocks, plus an instance class closed under bit
//! permutation and xor masking.
//!
//! The string splits into halves and each half into four equal blocks. Off
//! the Pareto set, fitness first guides the right half toward a one-block
//! form, then rewards emptying the left half; the Pareto set itself needs a
//! left prefix of ones and four balanced right blocks, reachable by mixing
//! two complementary right halves while keeping an agreed left half.

use crate::bitstring::{apply_permutation, BitString, Permutation};
use crate::error::{Error, Result};
use crate::objectives::Fitness;

/// Structural set memberships for the uniform benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UrrrmoSubsets {
    /// Every left block's ones count c satisfies 24c >= n and 12c <= n,
    /// the integer points of the real interval [n/24, n/12]. Random strings
    /// land here with overwhelming probability.
    pub left_in_u: bool,
    /// Leading ones and trailing zeros of the left half sum to n/2, so the
    /// left half is a prefix of ones followed by zeros.
    pub left_in_p: bool,
    /// The right half is a block of ones then zeros, or zeros then ones.
    /// Exactly n right halves qualify.
    pub right_in_c: bool,
    /// Every right block holds exactly n/16 ones.
    pub right_in_t: bool,
    /// Positive fitness off the Pareto set: `left_in_u || right_in_c`.
    pub in_k: bool,
    /// The Pareto set: `left_in_p && right_in_t`.
    pub in_w: bool,
}

/// Closed-form Pareto front description.
#[derive(Clone, Debug)]
pub struct UrrrmoFront {
    /// The n/2 + 1 optimal vectors `(3n + k, 3n + n/2 - k)`, k ascending.
    pub fitness_vectors: Vec<Fitness>,
    /// Number of Pareto-optimal search points:
    /// `(n/2 + 1) * C(n/8, n/16)^4`.
    pub preimage_count: u128,
    /// Every Pareto-optimal search point, present when enumeration was
    /// requested and the count is within the enumeration guard.
    pub members: Option<Vec<BitString>>,
}

/// Counts shared by the membership flags and the fitness cases.
struct HalfStats {
    left: crate::bitstring::CountStats,
    right: crate::bitstring::CountStats,
    flags: UrrrmoSubsets,
}

fn half_stats(x: &BitString, n: usize) -> HalfStats {
    debug_assert_eq!(x.len(), n);
    debug_assert!(n > 0 && n.is_multiple_of(16));
    let half = n / 2;
    let block = n / 8;
    let left = x.range_statistics(0, half);
    let right = x.range_statistics(half, half);
    let left_in_u = (0..4).all(|j| {
        let c = x.ones_in_range(j * block, block);
        24 * c >= n && 12 * c <= n
    });
    let left_in_p = left.leading_ones + left.trailing_zeros == half;
    let right_in_c = right.leading_ones + right.trailing_zeros == half
        || right.leading_zeros + right.trailing_ones == half;
    let right_in_t = (0..4).all(|j| x.ones_in_range(half + j * block, block) == n / 16);
    HalfStats {
        left,
        right,
        flags: UrrrmoSubsets {
            left_in_u,
            left_in_p,
            right_in_c,
            right_in_t,
            in_k: left_in_u || right_in_c,
            in_w: left_in_p && right_in_t,
        },
    }
}

/// Set memberships for the uniform benchmark. `n` must be a positive
/// multiple of 16 (validated at instance construction) and `x.len() == n`.
pub fn urrrmo_subsets(x: &BitString, n: usize) -> UrrrmoSubsets {
    half_stats(x, n).flags
}

/// Evaluates the uniform benchmark. Preconditions as for [`urrrmo_subsets`].
pub fn urrrmo_eval(x: &BitString, n: usize) -> Fitness {
    let HalfStats { left, right, flags } = half_stats(x, n);
    let case_path = flags.left_in_u && !flags.right_in_c;
    let case_lift = flags.right_in_c;
    let case_front = flags.left_in_p && flags.right_in_t;
    // The raw conditions cannot overlap: a one-block half never has four
    // near-balanced or exactly balanced blocks.
    debug_assert!(
        usize::from(case_path) + usize::from(case_lift) + usize::from(case_front) <= 1,
        "fitness cases must be disjoint: {x}"
    );
    let half = (n / 2) as u64;
    let inner = if right.leading_ones != 0 {
        (
            right.leading_ones as u64,
            half + right.trailing_zeros as u64,
        )
    } else {
        (
            half + right.leading_zeros as u64,
            right.trailing_ones as u64,
        )
    };
    if case_path {
        inner
    } else if case_lift {
        // Rewards emptying the left half; the maximum sits at the all-zeros
        // left half, which is also the start of the Pareto set's prefix path.
        let lift = 2 * n as u64 - left.ones as u64;
        (inner.0 + lift, inner.1 + lift)
    } else if case_front {
        let base = 3 * n as u64;
        (
            base + left.leading_ones as u64,
            base + left.trailing_zeros as u64,
        )
    } else {
        (0, 0)
    }
}

/// Evaluates a class member: the genome is permuted, masked, and fed to the
/// base function. `sigma` and `z` must match the genome length.
pub fn urrrmo_instance_eval(x: &BitString, sigma: &Permutation, z: &BitString) -> Fitness {
    let transformed = apply_permutation(x, sigma)
        .and_then(|p| p.xor(z))
        .expect("instance transform lengths must match the genome");
    urrrmo_eval(&transformed, x.len())
}

/// All 64-bit words of `width` bits with exactly `ones` bits set, ascending.
fn block_patterns(width: usize, ones: usize) -> Vec<u64> {
    debug_assert!(width < 64 && ones <= width);
    if ones == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let limit = 1u64 << width;
    let mut v = (1u64 << ones) - 1;
    while v < limit {
        out.push(v);
        // Gosper's hack: next larger word with the same popcount.
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = r | (((v ^ r) >> 2) / c);
    }
    out
}

fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // Exact at every step: i consecutive integers divide by i!.
        acc = acc.checked_mul((n - k + i) as u128)? / i as u128;
    }
    Some(acc)
}

/// Enumerating the Pareto set is refused above this many members.
const ENUMERATION_GUARD: u128 = 1_000_000;

/// Closed-form Pareto front: n/2 + 1 fitness vectors and the exact number
/// of optimal search points. With `enumerate` the optimal points themselves
/// are produced, refused beyond [`ENUMERATION_GUARD`] members.
pub fn urrrmo_front(n: usize, enumerate: bool) -> Result<UrrrmoFront> {
    if n == 0 || !n.is_multiple_of(16) {
        return Err(Error::NotDivisible { len: n, divisor: 16 });
    }
    let half = n / 2;
    let block = n / 8;
    let nu = n as u64;
    let fitness_vectors: Vec<Fitness> = (0..=half as u64)
        .map(|k| (3 * nu + k, 3 * nu + half as u64 - k))
        .collect();
    let per_block = binomial_u128(block as u64, (n / 16) as u64)
        .ok_or_else(|| Error::BadParameter(format!("front size overflows at length {n}")))?;
    let preimage_count = per_block
        .checked_pow(4)
        .and_then(|r| r.checked_mul(half as u128 + 1))
        .ok_or_else(|| Error::BadParameter(format!("front size overflows at length {n}")))?;
    let members = if enumerate {
        if preimage_count > ENUMERATION_GUARD {
            return Err(Error::EnumerationTooLarge(format!(
                "{preimage_count} Pareto-optimal points at length {n} exceed the \
                 enumeration guard of {ENUMERATION_GUARD}"
            )));
        }
        let patterns = block_patterns(block, n / 16);
        let mut all = Vec::with_capacity(preimage_count as usize);
        for k in 0..=half {
            let mut base = BitString::zeros(n);
            for p in 0..k {
                base.set(p, true);
            }
            // Odometer over the four right blocks.
            let mut choice = [0usize; 4];
            loop {
                let mut x = base.clone();
                for (j, &c) in choice.iter().enumerate() {
                    let pat = patterns[c];
                    for t in 0..block {
                        if pat >> t & 1 == 1 {
                            x.set(half + j * block + t, true);
                        }
                    }
                }
                all.push(x);
                let mut j = 0;
                loop {
                    if j == 4 {
                        break;
                    }
                    choice[j] += 1;
                    if choice[j] < patterns.len() {
                        break;
                    }
                    choice[j] = 0;
                    j += 1;
                }
                if j == 4 {
                    break;
                }
            }
        }
        Some(all)
    } else {
        None
    };
    Ok(UrrrmoFront {
        fitness_vectors,
        preimage_count,
        members,
    })
}

/// The block permutation that defeats the circular-window mutation operator:
/// output block order (L1, L3, R1, R3, L2, L4, R2, R4). Interleaving the
/// halves leaves no contiguous window covering one half but not the other.
pub fn hypermutation_hard_sigma(n: usize) -> Result<Permutation> {
    if n == 0 || !n.is_multiple_of(16) {
        return Err(Error::NotDivisible { len: n, divisor: 16 });
    }
    let block = n / 8;
    const ORDER: [usize; 8] = [0, 2, 4, 6, 1, 3, 5, 7];
    let mut targets = Vec::with_capacity(n);
    for slot in ORDER {
        for t in 0..block {
            targets.push(slot * block + t);
        }
    }
    Permutation::from_zero_based(targets)
}
