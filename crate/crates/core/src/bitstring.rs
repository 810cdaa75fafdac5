//! Packed bit strings and index permutations.
//!
//! Genomes are fixed-length bit strings stored in 64-bit words so that the
//! run statistics every fitness evaluation needs (ones count, leading and
//! trailing runs of either symbol) cost O(len / 64) word operations instead
//! of a bit-by-bit scan. Positions are 0-based in code; documentation and
//! permutation literals follow the 1-based convention of the surrounding
//! literature, so code position `i` is documented position `i + 1`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Fixed-length bit string packed into `u64` words, least significant bit
/// first: position `i` lives in word `i / 64` at bit `i % 64`.
///
/// Invariant: unused high bits of the last word are always zero, so derived
/// equality and hashing are canonical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

/// Run statistics of a bit string: symbol counts plus the lengths of the
/// maximal prefix and suffix runs of each symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountStats {
    pub ones: usize,
    pub zeros: usize,
    pub leading_ones: usize,
    pub trailing_ones: usize,
    pub leading_zeros: usize,
    pub trailing_zeros: usize,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

impl BitString {
    /// All-zeros string of the given length.
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: vec![0; word_count(len)],
        }
    }

    /// All-ones string of the given length.
    pub fn ones_string(len: usize) -> Self {
        let mut s = BitString {
            len,
            words: vec![!0u64; word_count(len)],
        };
        s.mask_last_word();
        s
    }

    /// Uniform random string: every position is an independent fair bit.
    pub fn random(len: usize, rng: &mut impl Rng) -> Self {
        let mut words = vec![0u64; word_count(len)];
        for w in &mut words {
            *w = rng.random::<u64>();
        }
        let mut s = BitString { len, words };
        s.mask_last_word();
        s
    }

    /// Builds from explicit bit values, position 0 first.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = BitString::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.set(i, true);
            }
        }
        s
    }

    /// Parses a `0`/`1` literal, leftmost character = position 0.
    pub fn from_literal(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::BadLiteral("empty literal".into()));
        }
        let mut s = BitString::zeros(text.len());
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => s.set(i, true),
                other => {
                    return Err(Error::BadLiteral(format!(
                        "unexpected character {other:?} at position {}",
                        i + 1
                    )))
                }
            }
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Builds from raw words. Callers must supply exactly `len` bits' worth
    /// of words with zeroed padding; checked in debug builds only.
    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), word_count(len));
        let out = BitString { len, words };
        debug_assert!(
            out.words
                .last()
                .is_none_or(|&w| w & !out.last_word_mask() == 0),
            "padding bits must stay zero"
        );
        out
    }

    fn last_word_mask(&self) -> u64 {
        let rem = self.len % WORD_BITS;
        if rem == 0 {
            !0u64
        } else {
            (1u64 << rem) - 1
        }
    }

    fn mask_last_word(&mut self) {
        if let Some(last) = self.words.last_mut() {
            let mask = if self.len.is_multiple_of(WORD_BITS) {
                !0u64
            } else {
                (1u64 << (self.len % WORD_BITS)) - 1
            };
            *last &= mask;
        }
    }

    /// Mask of the bits of word `j` that are inside the string.
    fn word_mask(&self, j: usize) -> u64 {
        if j + 1 == self.words.len() {
            self.last_word_mask()
        } else {
            !0u64
        }
    }

    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range 0..{}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    /// Circular access: position `i` wraps modulo the length, so code
    /// position `len` is position 0 again (documented positions n + 1 and 1).
    pub fn bit_cyclic(&self, i: usize) -> bool {
        assert!(!self.is_empty(), "cyclic access on an empty string");
        self.bit(i % self.len)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range 0..{}", self.len);
        let w = &mut self.words[i / WORD_BITS];
        let bit = 1u64 << (i % WORD_BITS);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range 0..{}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Number of one-bits.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Position of the first one, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (j, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(j * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Position of the first zero, if any.
    pub fn first_zero(&self) -> Option<usize> {
        for (j, &w) in self.words.iter().enumerate() {
            let v = !w & self.word_mask(j);
            if v != 0 {
                return Some(j * WORD_BITS + v.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Position of the last one, if any.
    pub fn last_one(&self) -> Option<usize> {
        for (j, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(j * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize));
            }
        }
        None
    }

    /// Position of the last zero, if any.
    pub fn last_zero(&self) -> Option<usize> {
        for (j, &w) in self.words.iter().enumerate().rev() {
            let v = !w & self.word_mask(j);
            if v != 0 {
                return Some(j * WORD_BITS + (WORD_BITS - 1 - v.leading_zeros() as usize));
            }
        }
        None
    }

    /// All six run statistics in O(len / 64).
    pub fn count_statistics(&self) -> CountStats {
        let ones = self.count_ones();
        let n = self.len;
        let leading_zeros = self.first_one().unwrap_or(n);
        let leading_ones = self.first_zero().unwrap_or(n);
        let trailing_zeros = match self.last_one() {
            Some(p) => n - 1 - p,
            None => n,
        };
        let trailing_ones = match self.last_zero() {
            Some(p) => n - 1 - p,
            None => n,
        };
        CountStats {
            ones,
            zeros: n - ones,
            leading_ones,
            trailing_ones,
            leading_zeros,
            trailing_zeros,
        }
    }

    /// Reads 64 bits starting at `pos`, zero-padded past the end.
    fn read_word(&self, pos: usize) -> u64 {
        let j = pos / WORD_BITS;
        let off = pos % WORD_BITS;
        let lo = self.words.get(j).copied().unwrap_or(0);
        if off == 0 {
            lo
        } else {
            let hi = self.words.get(j + 1).copied().unwrap_or(0);
            (lo >> off) | (hi << (WORD_BITS - off))
        }
    }

    /// Copy of the bit range `[start, start + len)`.
    pub fn subrange(&self, start: usize, len: usize) -> BitString {
        assert!(
            start + len <= self.len,
            "subrange {start}..{} out of range 0..{}",
            start + len,
            self.len
        );
        let mut words = Vec::with_capacity(word_count(len));
        let mut pos = start;
        let mut remaining = len;
        while remaining > 0 {
            words.push(self.read_word(pos));
            pos += WORD_BITS;
            remaining = remaining.saturating_sub(WORD_BITS);
        }
        let mut s = BitString { len, words };
        s.mask_last_word();
        s
    }

    fn check_range(&self, start: usize, len: usize) {
        assert!(
            start + len <= self.len,
            "range {start}..{} out of range 0..{}",
            start + len,
            self.len
        );
    }

    /// Ones count inside `[start, start + len)`.
    pub fn ones_in_range(&self, start: usize, len: usize) -> usize {
        self.check_range(start, len);
        let mut count = 0usize;
        let mut pos = start;
        let end = start + len;
        while pos < end {
            let take = (end - pos).min(WORD_BITS);
            let mut w = self.read_word(pos);
            if take < WORD_BITS {
                w &= (1u64 << take) - 1;
            }
            count += w.count_ones() as usize;
            pos += take;
        }
        count
    }

    /// Offset (relative to `start`) of the first one in the range.
    pub fn first_one_in_range(&self, start: usize, len: usize) -> Option<usize> {
        self.check_range(start, len);
        let mut pos = start;
        let end = start + len;
        while pos < end {
            let take = (end - pos).min(WORD_BITS);
            let mut w = self.read_word(pos);
            if take < WORD_BITS {
                w &= (1u64 << take) - 1;
            }
            if w != 0 {
                return Some(pos - start + w.trailing_zeros() as usize);
            }
            pos += take;
        }
        None
    }

    /// Offset of the first zero in the range.
    pub fn first_zero_in_range(&self, start: usize, len: usize) -> Option<usize> {
        self.check_range(start, len);
        let mut pos = start;
        let end = start + len;
        while pos < end {
            let take = (end - pos).min(WORD_BITS);
            let mask = if take < WORD_BITS {
                (1u64 << take) - 1
            } else {
                !0u64
            };
            let v = !self.read_word(pos) & mask;
            if v != 0 {
                return Some(pos - start + v.trailing_zeros() as usize);
            }
            pos += take;
        }
        None
    }

    /// Offset of the last one in the range.
    pub fn last_one_in_range(&self, start: usize, len: usize) -> Option<usize> {
        self.check_range(start, len);
        let mut found = None;
        let mut pos = start;
        let end = start + len;
        while pos < end {
            let take = (end - pos).min(WORD_BITS);
            let mut w = self.read_word(pos);
            if take < WORD_BITS {
                w &= (1u64 << take) - 1;
            }
            if w != 0 {
                found = Some(pos - start + (WORD_BITS - 1 - w.leading_zeros() as usize));
            }
            pos += take;
        }
        found
    }

    /// Offset of the last zero in the range.
    pub fn last_zero_in_range(&self, start: usize, len: usize) -> Option<usize> {
        self.check_range(start, len);
        let mut found = None;
        let mut pos = start;
        let end = start + len;
        while pos < end {
            let take = (end - pos).min(WORD_BITS);
            let mask = if take < WORD_BITS {
                (1u64 << take) - 1
            } else {
                !0u64
            };
            let v = !self.read_word(pos) & mask;
            if v != 0 {
                found = Some(pos - start + (WORD_BITS - 1 - v.leading_zeros() as usize));
            }
            pos += take;
        }
        found
    }

    /// Run statistics of the range `[start, start + len)` without allocating.
    pub fn range_statistics(&self, start: usize, len: usize) -> CountStats {
        let ones = self.ones_in_range(start, len);
        let leading_zeros = self.first_one_in_range(start, len).unwrap_or(len);
        let leading_ones = self.first_zero_in_range(start, len).unwrap_or(len);
        let trailing_zeros = match self.last_one_in_range(start, len) {
            Some(p) => len - 1 - p,
            None => len,
        };
        let trailing_ones = match self.last_zero_in_range(start, len) {
            Some(p) => len - 1 - p,
            None => len,
        };
        CountStats {
            ones,
            zeros: len - ones,
            leading_ones,
            trailing_ones,
            leading_zeros,
            trailing_zeros,
        }
    }

    /// Position-wise exclusive or. Lengths must match.
    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitString {
            len: self.len,
            words,
        })
    }

    /// Hamming distance: number of differing positions. Lengths must match.
    pub fn hamming(&self, other: &BitString) -> Result<usize> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::with_capacity(self.len);
        for i in 0..self.len {
            out.push(if self.bit(i) { '1' } else { '0' });
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BitString::from_literal(s)
    }
}

/// Index permutation over positions 0..len. `apply` writes input position
/// `target(i)` to output position `i`, matching the convention that the
/// permuted string lists the input bits in the order the permutation names
/// them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    // target[i] = source position whose bit ends up at output position i.
    target: Vec<usize>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation {
            target: (0..len).collect(),
        }
    }

    /// Builds from 0-based targets, validating that the map is a bijection.
    pub fn from_zero_based(target: Vec<usize>) -> Result<Self> {
        let n = target.len();
        let mut seen = vec![false; n];
        for (i, &t) in target.iter().enumerate() {
            if t >= n {
                return Err(Error::BadPermutation(format!(
                    "target {} at position {} out of range 1..={n}",
                    t + 1,
                    i + 1
                )));
            }
            if seen[t] {
                return Err(Error::BadPermutation(format!(
                    "target {} appears more than once",
                    t + 1
                )));
            }
            seen[t] = true;
        }
        Ok(Permutation { target })
    }

    /// Builds from the 1-based literal convention used in documentation and
    /// on the command line.
    pub fn from_one_based(target: Vec<usize>) -> Result<Self> {
        for &t in &target {
            if t == 0 {
                return Err(Error::BadPermutation(
                    "1-based target cannot be 0".into(),
                ));
            }
        }
        Permutation::from_zero_based(target.into_iter().map(|t| t - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.target.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// Source position mapped to output position `i` (0-based).
    pub fn target(&self, i: usize) -> usize {
        self.target[i]
    }

    /// 1-based targets, as used in literals.
    pub fn one_based(&self) -> Vec<usize> {
        self.target.iter().map(|&t| t + 1).collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0usize; self.target.len()];
        for (i, &t) in self.target.iter().enumerate() {
            inv[t] = i;
        }
        Permutation { target: inv }
    }
}

/// Applies a permutation: output position `i` holds the input bit at the
/// permutation's target for `i`. Lengths must match.
pub fn apply_permutation(x: &BitString, sigma: &Permutation) -> Result<BitString> {
    if x.len() != sigma.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: sigma.len(),
        });
    }
    let mut out = BitString::zeros(x.len());
    for i in 0..x.len() {
        if x.bit(sigma.target(i)) {
            out.set(i, true);
        }
    }
    Ok(out)
}

/// Halves and eighth-blocks of a string whose length is divisible by 16:
/// `left`/`right` are the two halves, and each half splits into four equal
/// consecutive parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks {
    pub left: BitString,
    pub right: BitString,
    pub left_parts: [BitString; 4],
    pub right_parts: [BitString; 4],
}

/// Splits `x` into halves and eighths. The length must be divisible by 16 so
/// all parts are equal and the evenly-split block predicates are integral.
pub fn blocks(x: &BitString) -> Result<Blocks> {
    let n = x.len();
    if n == 0 || !n.is_multiple_of(16) {
        return Err(Error::NotDivisible { len: n, divisor: 16 });
    }
    let eighth = n / 8;
    let part = |k: usize| x.subrange(k * eighth, eighth);
    Ok(Blocks {
        left: x.subrange(0, n / 2),
        right: x.subrange(n / 2, n / 2),
        left_parts: [part(0), part(1), part(2), part(3)],
        right_parts: [part(4), part(5), part(6), part(7)],
    })
}
