//! The simplified correlation array φ(·,t): an exactly-normalized, finitely
//! supported mass distribution on the integers, computed by iterating the
//! digit recurrence most-significant-bit first on the coupled pair
//! (φ(·,u), φ(·,u+1)).

use std::collections::BTreeMap;
use std::collections::HashMap;

use crate::bitword::digits_below_leading;
use crate::{BitWord, Dyadic, Error, Result};

/// Exact φ(·,t) as a sparse map from offset k to positive mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    entries: BTreeMap<i64, Dyadic>,
    t: BitWord,
}

impl Spectrum {
    /// t this spectrum was computed for.
    pub fn t(&self) -> &BitWord {
        &self.t
    }

    /// φ(k,t); zero off the support.
    pub fn value_at(&self, k: i64) -> Dyadic {
        self.entries.get(&k).cloned().unwrap_or_else(Dyadic::zero)
    }

    /// Nonzero entries in increasing k order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Dyadic)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// (min k, max k) of the support.
    pub fn support(&self) -> (i64, i64) {
        let min = *self.entries.keys().next().expect("nonempty spectrum");
        let max = *self.entries.keys().next_back().expect("nonempty spectrum");
        (min, max)
    }

    /// Exact sum of all masses (1 for every φ).
    pub fn total_mass(&self) -> Dyadic {
        self.entries
            .values()
            .fold(Dyadic::zero(), |acc, v| &acc + v)
    }

    /// All k attaining the maximal mass, in increasing order.
    pub fn argmax_set(&self) -> Vec<i64> {
        let max = self.entries.values().max().expect("nonempty spectrum");
        self.entries
            .iter()
            .filter(|(_, v)| *v == max)
            .map(|(&k, _)| k)
            .collect()
    }
}

/// All k attaining max φ(k,t); no tie-breaking.
pub fn argmax_set(s: &Spectrum) -> Vec<i64> {
    s.argmax_set()
}

/// One digit-recurrence update: ½·shift(lo, +1) + ½·shift(hi, −1).
///
/// Implementors keep the invariant that `lo` and `hi` represent the
/// distributions for a consecutive pair (u, u+1); see [`pair_iterate`].
pub(crate) trait PairMerge: Sized {
    fn merge(lo: &Self, hi: &Self) -> Self;
}

/// Runs the coupled digit recurrence over the digits of t below the leading
/// one, starting from the pair for u = 1, and returns the distribution for
/// u = t.
///
/// Appending a digit ε to the binary prefix u maps (u, u+1) to
/// (2u+ε, 2u+ε+1); the doubling rule keeps one component and the odd rule
/// replaces the other with the merge of both.
pub(crate) fn pair_iterate<D: PairMerge>(seed_lo: D, seed_hi: D, t: &BitWord) -> D {
    let mut lo = seed_lo;
    let mut hi = seed_hi;
    for digit in digits_below_leading(t) {
        if digit {
            lo = D::merge(&lo, &hi);
        } else {
            hi = D::merge(&lo, &hi);
        }
    }
    lo
}

/// Dense working representation: `vals[i]` is the mass at `offset + i`.
/// Interior zeros are stored; both ends stay nonzero.
#[derive(Debug, Clone)]
struct DenseMass {
    offset: i64,
    vals: Vec<Dyadic>,
}

impl DenseMass {
    fn atom_at_zero() -> Self {
        DenseMass {
            offset: 0,
            vals: vec![Dyadic::one()],
        }
    }

    fn at(&self, k: i64) -> Option<&Dyadic> {
        let i = k.checked_sub(self.offset)?;
        if (0..self.vals.len() as i64).contains(&i) {
            Some(&self.vals[i as usize])
        } else {
            None
        }
    }

    fn top(&self) -> i64 {
        self.offset + self.vals.len() as i64 - 1
    }
}

impl PairMerge for DenseMass {
    fn merge(lo: &Self, hi: &Self) -> Self {
        let offset = (lo.offset + 1).min(hi.offset - 1);
        let top = (lo.top() + 1).max(hi.top() - 1);
        let mut vals = Vec::with_capacity((top - offset + 1) as usize);
        for k in offset..=top {
            let mut v = Dyadic::zero();
            if let Some(a) = lo.at(k - 1) {
                v = a.halve();
            }
            if let Some(b) = hi.at(k + 1) {
                v = &v + &b.halve();
            }
            vals.push(v);
        }
        DenseMass { offset, vals }
    }
}

/// Exact φ(·,t) via the pair iteration; linear in the bit length of t.
pub fn phi(t: &BitWord) -> Result<Spectrum> {
    if t.is_zero() {
        return Err(Error::UndefinedForZero("phi"));
    }
    // φ(·,1) = φ(·,2) = atom at 0.
    let DenseMass { offset, vals } =
        pair_iterate(DenseMass::atom_at_zero(), DenseMass::atom_at_zero(), t);
    let entries = vals
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (offset + i as i64, v))
        .collect();
    Ok(Spectrum {
        entries,
        t: t.clone(),
    })
}

/// Memoized top-down recursion for φ; the independent oracle for [`phi`].
///
/// Bounded to t < 2^24 so the memo table stays desk-scale.
#[derive(Debug, Default)]
pub struct NaivePhi {
    memo: HashMap<u64, BTreeMap<i64, Dyadic>>,
}

const NAIVE_LIMIT: u64 = 1 << 24;

impl NaivePhi {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&mut self, t: &BitWord, k: i64) -> Result<Dyadic> {
        let t = self.check(t)?;
        Ok(self
            .map(t)
            .get(&k)
            .cloned()
            .unwrap_or_else(Dyadic::zero))
    }

    pub fn full_map(&mut self, t: &BitWord) -> Result<BTreeMap<i64, Dyadic>> {
        let t = self.check(t)?;
        Ok(self.map(t).clone())
    }

    fn check(&self, t: &BitWord) -> Result<u64> {
        if t.is_zero() {
            return Err(Error::UndefinedForZero("phi_naive"));
        }
        match t.to_u64() {
            Some(v) if v < NAIVE_LIMIT => Ok(v),
            _ => Err(Error::NaiveLimitExceeded(t.to_string())),
        }
    }

    fn map(&mut self, t: u64) -> &BTreeMap<i64, Dyadic> {
        if !self.memo.contains_key(&t) {
            let computed = if t == 1 {
                BTreeMap::from([(0, Dyadic::one())])
            } else if t.is_multiple_of(2) {
                self.map(t / 2).clone()
            } else {
                let lo = self.map(t / 2).clone();
                let hi = self.map(t / 2 + 1).clone();
                let mut out: BTreeMap<i64, Dyadic> = BTreeMap::new();
                for (k, v) in &lo {
                    out.insert(k + 1, v.halve());
                }
                for (k, v) in &hi {
                    let half = v.halve();
                    out.entry(k - 1)
                        .and_modify(|acc| *acc = &*acc + &half)
                        .or_insert(half);
                }
                out.retain(|_, v| !v.is_zero());
                out
            };
            self.memo.insert(t, computed);
        }
        &self.memo[&t]
    }
}

/// φ(k,t) by fresh naive recursion; prefer [`NaivePhi`] for repeated use.
pub fn phi_naive(t: &BitWord, k: i64) -> Result<Dyadic> {
    NaivePhi::new().value(t, k)
}
