//! The correlation densities δ(k,t) and the densities
//! c_t = dens{n : s(n+t) >= s(n)}, computed exactly along two independent
//! routes: the digit recurrence on a window-plus-geometric-tail
//! representation, and the convolution of φ(·,t) against the base density
//! δ(·,1) = 2^(k−2) for k <= 1.

use crate::spectrum::{pair_iterate, PairMerge, Spectrum};
use crate::{BitWord, Dyadic, Error, Result};

/// δ(·,t): a finite window above `tail_start` plus an infinite geometric
/// tail of ratio ½ going downward from the anchor value at `tail_start`.
///
/// The window is minimal: the anchor is the largest k at which the
/// geometric law already holds, which makes the representation canonical
/// and representation equality value equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailedDistribution {
    tail_start: i64,
    /// vals[0] is the anchor value at `tail_start`; vals[i] sits at
    /// `tail_start + i`. All entries are positive.
    vals: Vec<Dyadic>,
}

impl TailedDistribution {
    /// δ(·,1): anchor ½ at k = 1, nothing above.
    fn base() -> Self {
        TailedDistribution {
            tail_start: 1,
            vals: vec![Dyadic::new(1, 1)],
        }
    }

    pub fn tail_start(&self) -> i64 {
        self.tail_start
    }

    pub fn tail_value(&self) -> &Dyadic {
        &self.vals[0]
    }

    /// Largest k with positive mass.
    pub fn max_support(&self) -> i64 {
        self.tail_start + self.vals.len() as i64 - 1
    }

    /// Exact value at any k, evaluating the geometric tail in closed form.
    pub fn value_at(&self, k: i64) -> Dyadic {
        if k <= self.tail_start {
            self.vals[0].scale_pow2(k - self.tail_start)
        } else {
            let i = (k - self.tail_start) as usize;
            self.vals.get(i).cloned().unwrap_or_else(Dyadic::zero)
        }
    }

    /// Window entries strictly above the tail anchor, in increasing k.
    pub fn window(&self) -> impl Iterator<Item = (i64, &Dyadic)> {
        self.vals
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, v)| (self.tail_start + i as i64, v))
    }

    /// Window sum plus 2·anchor, the closed form of the geometric series.
    pub fn total_mass(&self) -> Dyadic {
        let tail = self.vals[0].scale_pow2(1);
        self.vals[1..].iter().fold(tail, |acc, v| &acc + v)
    }

    /// Sum over k >= `from` (window part plus closed-form tail remainder).
    pub fn mass_at_or_above(&self, from: i64) -> Dyadic {
        if from <= self.tail_start {
            // Entire tail from `from` up to the anchor sums to
            // anchor·(2 − 2^(from − tail_start − 1)·2) = 2·anchor − value_at(from−1)·2;
            // fold it as total minus the part strictly below `from`.
            let below = self.value_at(from - 1).scale_pow2(1);
            return &self.total_mass() - &below;
        }
        let start = (from - self.tail_start) as usize;
        self.vals[start.min(self.vals.len())..]
            .iter()
            .fold(Dyadic::zero(), |acc, v| &acc + v)
    }

    fn canonicalize(&mut self) {
        while self.vals.len() >= 2 && self.vals[1] == self.vals[0].scale_pow2(1) {
            self.vals.remove(0);
            self.tail_start += 1;
        }
        debug_assert!(self.vals.iter().all(|v| v.is_positive()));
    }
}

impl PairMerge for TailedDistribution {
    fn merge(lo: &Self, hi: &Self) -> Self {
        let tail_start = (lo.tail_start + 1).min(hi.tail_start - 1);
        let top = (lo.max_support() + 1).max(hi.max_support() - 1);
        let vals = (tail_start..=top)
            .map(|k| &lo.value_at(k - 1).halve() + &hi.value_at(k + 1).halve())
            .collect();
        let mut out = TailedDistribution { tail_start, vals };
        out.canonicalize();
        out
    }
}

/// Exact δ(·,t) by the digit recurrence on the tailed representation.
pub fn delta_dist(t: &BitWord) -> Result<TailedDistribution> {
    if t.is_zero() {
        return Err(Error::UndefinedForZero("delta"));
    }
    // δ(·,2) = δ(·,1).
    Ok(pair_iterate(
        TailedDistribution::base(),
        TailedDistribution::base(),
        t,
    ))
}

/// δ(k,t) from the spectrum: sum over l >= 0 of φ(k−1+l, t)·2^(−l−1).
///
/// The sum is finite because φ has finite support above; below the support
/// it reproduces the geometric tail.
pub fn delta_from_phi(t: &BitWord, k: i64) -> Result<Dyadic> {
    Ok(delta_value_from_spectrum(&crate::spectrum::phi(t)?, k))
}

/// Same convolution, from an already-computed spectrum.
pub fn delta_value_from_spectrum(spectrum: &Spectrum, k: i64) -> Dyadic {
    let mut acc = Dyadic::zero();
    for (j, v) in spectrum.iter() {
        if j >= k - 1 {
            // l = j − k + 1, weight 2^(−l−1)
            acc = &acc + &v.scale_pow2(k - j - 2);
        }
    }
    acc
}

/// Exact c_t as a dyadic in (0, 1]; c_0 = 1 by the trivial comparison.
pub fn c(t: &BitWord) -> Result<Dyadic> {
    if t.is_zero() {
        return Ok(Dyadic::one());
    }
    Ok(c_from_spectrum(&crate::spectrum::phi(t)?))
}

/// c_t = sum over j >= −1 of φ(j,t)·(1 − 2^(−j−2)), the single-t form of
/// the fundamental pair identity.
pub fn c_from_spectrum(spectrum: &Spectrum) -> Dyadic {
    let mut acc = Dyadic::zero();
    for (j, v) in spectrum.iter() {
        if j >= -1 {
            let weight = &Dyadic::one() - &Dyadic::pow2_inv((j + 2) as u64);
            acc = &acc + &(v * &weight);
        }
    }
    acc
}

/// The exact pair (c_t, c_t', c_t + c_t').
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSum {
    pub c_t: Dyadic,
    pub c_t_prime: Dyadic,
    pub sum: Dyadic,
}

/// Computes c_t and c_t' independently (two spectra) and their sum.
pub fn pair_sum(t: &BitWord) -> Result<PairSum> {
    if t.is_zero() {
        return Err(Error::UndefinedForZero("pair_sum"));
    }
    let c_t = c(t)?;
    let c_t_prime = c(&t.reflect()?)?;
    let sum = &c_t + &c_t_prime;
    Ok(PairSum {
        c_t,
        c_t_prime,
        sum,
    })
}

/// Outcome of the dominance condition
/// φ(−1,t) + φ(0,t) + φ(1,t) >= φ(k,t) for all |k| >= 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SufficientCheck {
    pub holds: bool,
    /// Some offending k when the condition fails.
    pub witness: Option<i64>,
}

/// Exact evaluation of the dominance condition on a spectrum.
pub fn sufficient_condition(spectrum: &Spectrum) -> SufficientCheck {
    let center = &(&spectrum.value_at(-1) + &spectrum.value_at(0)) + &spectrum.value_at(1);
    let witness = spectrum
        .iter()
        .find(|(k, v)| k.abs() >= 2 && **v > center)
        .map(|(k, _)| k);
    SufficientCheck {
        holds: witness.is_none(),
        witness,
    }
}

/// Dominance condition for t, computing the spectrum first.
pub fn sufficient_condition_holds(t: &BitWord) -> Result<SufficientCheck> {
    Ok(sufficient_condition(&crate::spectrum::phi(t)?))
}
