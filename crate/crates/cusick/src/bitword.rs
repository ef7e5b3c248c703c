//! Binary-expansion utilities: digit access, the exponent λ with
//! 2^λ <= t < 2^(λ+1), the reflection t' = 3·2^λ − t, block counting, and
//! the pattern-position extraction behind the block gain estimate.
//!
//! Digits are indexed least-significant-first: ε_0 is the parity bit and
//! ε_ν (ν = bit length − 1) is the leading one.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// An arbitrary-size nonnegative integer viewed through its binary digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord(BigUint);

impl BitWord {
    pub fn new(value: impl Into<BigUint>) -> Self {
        BitWord(value.into())
    }

    /// t = sum of 4^i for i < count: `count` isolated 1-digits at even
    /// positions, hence exactly `count` blocks.
    pub fn spaced_ones(count: u64) -> Self {
        let mut v = BigUint::zero();
        for i in 0..count {
            v.set_bit(2 * i, true);
        }
        BitWord(v)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// ε_j.
    pub fn digit(&self, j: u64) -> bool {
        self.0.bit(j)
    }

    /// Number of binary digits (0 for t = 0).
    pub fn bit_length(&self) -> u64 {
        self.0.bits()
    }

    /// λ with 2^λ <= t < 2^(λ+1); undefined for t = 0.
    pub fn lambda(&self) -> Result<u64> {
        if self.0.is_zero() {
            return Err(Error::UndefinedForZero("lambda"));
        }
        Ok(self.0.bits() - 1)
    }

    /// t' = 3·2^λ − t, which lies in (2^λ, 2^(λ+1)].
    pub fn reflect(&self) -> Result<BitWord> {
        let lambda = self.lambda()?;
        let three_pow = BigUint::from(3u32) << lambda;
        Ok(BitWord(three_pow - &self.0))
    }

    /// Number of maximal runs of 1-digits; 0 for t = 0.
    pub fn count_blocks(&self) -> u64 {
        // A block ends at each 1-digit whose next-higher digit is 0, so
        // blocks = s(t) - s(t & (t << 1)).
        let shifted = &self.0 << 1u32;
        self.0.count_ones() - (&self.0 & shifted).count_ones()
    }

    /// Population count s(t) of the binary digits.
    pub fn digit_sum(&self) -> u64 {
        self.0.count_ones()
    }

    /// Maximal runs of 1-digits as inclusive position ranges (lo, hi),
    /// lowest run first.
    pub fn blocks(&self) -> Vec<(u64, u64)> {
        let mut runs = Vec::new();
        let mut j = 0;
        let len = self.bit_length();
        while j < len {
            if self.digit(j) {
                let lo = j;
                while j + 1 < len && self.digit(j + 1) {
                    j += 1;
                }
                runs.push((lo, j));
            }
            j += 1;
        }
        runs
    }

    /// Positions j <= ν−3, pairwise at distance >= 3, with digit window
    /// (ε_j, ε_{j+1}, ε_{j+2}) equal to (1,0,0) or (1,0,1).
    ///
    /// Candidates are the top positions of every maximal block except the
    /// leading one; a greedy low-to-high pass enforces the distance. If t
    /// has at least 2M+1 blocks, at least M positions are returned.
    pub fn pattern_positions(&self) -> Result<Vec<u64>> {
        if self.0.is_zero() {
            return Err(Error::UndefinedForZero("pattern_positions"));
        }
        let nu = self.bit_length() - 1;
        let blocks = self.blocks();
        let mut selected: Vec<u64> = Vec::new();
        for &(_, hi) in &blocks[..blocks.len() - 1] {
            if nu < 3 || hi > nu - 3 {
                continue;
            }
            match selected.last() {
                Some(&last) if hi - last < 3 => {}
                _ => selected.push(hi),
            }
        }
        Ok(selected)
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for BitWord {
    fn from(v: u64) -> Self {
        BitWord(BigUint::from(v))
    }
}

impl From<BigUint> for BitWord {
    fn from(v: BigUint) -> Self {
        BitWord(v)
    }
}

/// Accepts decimal or 0b-prefixed binary literals.
impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse("nonnegative integer", s);
        if let Some(bin) = s.strip_prefix("0b").or_else(|| s.strip_prefix("0B")) {
            let v = BigUint::parse_bytes(bin.as_bytes(), 2).ok_or_else(bad)?;
            return Ok(BitWord(v));
        }
        let v = BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(bad)?;
        Ok(BitWord(v))
    }
}

/// Digits ε_{ν−1}, …, ε_0 (the leading digit ε_ν skipped), as consumed by
/// the most-significant-first pair iterations.
pub(crate) fn digits_below_leading(t: &BitWord) -> impl Iterator<Item = bool> + '_ {
    let len = t.bit_length();
    (0..len.saturating_sub(1)).rev().map(move |j| t.digit(j))
}
