//! Weight profiles for the fundamental pair identity, the residue-class
//! lower bound for c_t + c_t', and the epsilon → (N, m, M, C) parameter
//! chain of the block theorem together with its three error-term margins.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::delta::{pair_sum, PairSum};
use crate::fourier::psi_direct;
use crate::{BitWord, Dyadic, Error, Result};

/// a_l = 1 − 2^(−|l|−2), the weight of φ(l) in the one-sided density sums.
pub fn base_weight(l: i64) -> Dyadic {
    &Dyadic::one() - &Dyadic::pow2_inv(l.unsigned_abs() + 2)
}

/// The combined pair weight: 3/2 at l = 0, 11/8 at |l| = 1, a_l beyond.
pub fn pair_weight(l: i64) -> Dyadic {
    match l.abs() {
        0 => Dyadic::new(3, 1),
        1 => Dyadic::new(11, 3),
        _ => base_weight(l),
    }
}

/// min over l ≡ b (mod m) of a_l, exact: by monotonicity and symmetry the
/// minimum sits at the representative closest to 0.
pub fn min_weight(b: u64, m: u64) -> Result<Dyadic> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    if b >= m {
        return Err(Error::ResidueOutOfRange {
            residue: b,
            modulus: m,
        });
    }
    let nearest = if 2 * b < m { b } else { m - b };
    Ok(base_weight(nearest as i64))
}

/// Certified exact lower bound
/// c_t + c_t' >= Σ_b ψ(b,m,t)·min_weight(b,m).
pub fn pair_lower_bound_via_residues(t: &BitWord, m: u64) -> Result<Dyadic> {
    let masses = psi_direct(t, m)?;
    let mut acc = Dyadic::zero();
    for (b, v) in masses.iter() {
        acc = &acc + &(v * &min_weight(b, m)?);
    }
    Ok(acc)
}

/// The theorem's parameter chain for a given epsilon.
///
/// Each of the three error terms 2^(−N−2), 2N/m and m·e^(−M/(2m²)) stays
/// strictly below epsilon/3; the first two are certified by exact dyadic
/// comparison, the third in floating point with a defensive retry at the
/// floor boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub epsilon: f64,
    /// N: index beyond which the tail weights 1 − 2^(−b−2) are good enough.
    pub cutoff: u64,
    /// m: the residue modulus.
    pub modulus: u64,
    /// M: the exponent in the Fourier decay e^(−M/(2m²)).
    pub decay_exponent: u64,
    /// C = 2M + 1: blocks of 1s required of t.
    pub required_blocks: u64,
}

impl BoundParams {
    /// The exact dyadic value of the (floating) epsilon.
    pub fn exact_epsilon(&self) -> Dyadic {
        Dyadic::from_f64_exact(self.epsilon).expect("validated on construction")
    }

    /// (2^(−N−2), 2N/m, m·e^(−M/(2m²))).
    pub fn error_terms(&self) -> (f64, f64, f64) {
        let m = self.modulus as f64;
        (
            Dyadic::pow2_inv(self.cutoff + 2).to_f64(),
            2.0 * self.cutoff as f64 / m,
            m * (-(self.decay_exponent as f64) / (2.0 * m * m)).exp(),
        )
    }

    /// The three strict epsilon/3 margins: the dyadic-tail and mean terms
    /// by exact comparison, the Fourier term in floating point.
    pub fn margins_hold(&self) -> bool {
        let eps = self.exact_epsilon();
        // 3·2^(−N−2) < eps
        let tail_ok = Dyadic::from(3u64) < eps.scale_pow2((self.cutoff + 2) as i64);
        // 6N < eps·m
        let mean_ok = Dyadic::from(6 * self.cutoff) < &eps * &Dyadic::from(self.modulus);
        let (_, _, fourier) = self.error_terms();
        tail_ok && mean_ok && fourier < self.epsilon / 3.0
    }
}

/// Builds the chain N = ⌊−log₂ ε⌋ + 1, m = ⌊6N/ε⌋ + 1,
/// M = ⌊−2m²·ln(ε/(3m))⌋ + 1, C = 2M + 1.
///
/// N is found by exact power-of-two comparison rather than floating
/// logarithms.
pub fn params_for(epsilon: f64) -> Result<BoundParams> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let eps = Dyadic::from_f64_exact(epsilon).expect("finite by the range check");

    // smallest N >= 1 with 2^(-N) < eps
    let mut cutoff = 1u64;
    while Dyadic::pow2_inv(cutoff) >= eps {
        cutoff += 1;
    }

    // m = floor(6N / eps) + 1, exactly: eps = num/2^e with num > 0
    let six_n = BigUint::from(6u64 * cutoff) << eps.exponent();
    let floor = six_n / eps.numerator().magnitude();
    let modulus = (floor + 1u32)
        .to_u64()
        .ok_or(Error::ParamOverflow(epsilon))?;

    // M = floor(2m² ln(3m/eps)) + 1 in floating point, then make sure the
    // strict margin really holds.
    let m = modulus as f64;
    let target = epsilon / 3.0;
    let raw = 2.0 * m * m * ((3.0 * m).ln() - epsilon.ln());
    if !raw.is_finite() || raw >= u64::MAX as f64 / 4.0 {
        return Err(Error::ParamOverflow(epsilon));
    }
    let mut decay_exponent = raw.floor() as u64 + 1;
    // retry once if the floor landed inside the rounding band of the boundary
    if m * (-(decay_exponent as f64) / (2.0 * m * m)).exp() >= target * (1.0 - 1e-9) {
        decay_exponent += 1;
    }

    let required_blocks = decay_exponent
        .checked_mul(2)
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::ParamOverflow(epsilon))?;

    let params = BoundParams {
        epsilon,
        cutoff,
        modulus,
        decay_exponent,
        required_blocks,
    };
    debug_assert!(params.margins_hold());
    Ok(params)
}

/// 1 − 2^(−N−2) − 2N/m − m·e^(−M/(2m²)), the theorem's lower bound for
/// the pair sum; exceeds 1 − epsilon by the margin construction.
pub fn theorem_lower_bound(p: &BoundParams) -> f64 {
    let (tail, mean, fourier) = p.error_terms();
    1.0 - tail - mean - fourier
}

/// m·(1 − 2^(−N−2)) − 2N, an exact lower bound for the sum of the m
/// minimal residue weights.
pub fn mean_weight_lower_bound(m: u64, cutoff: u64) -> Result<Dyadic> {
    if cutoff < 1 || cutoff > m {
        return Err(Error::CutoffOutOfRange { cutoff, modulus: m });
    }
    let per_class = base_weight(cutoff as i64);
    Ok(&(&Dyadic::from(m) * &per_class) - &Dyadic::from(2 * cutoff))
}

/// Full evaluation of the block theorem at one (t, epsilon).
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub params: BoundParams,
    pub blocks: u64,
    /// blocks >= C
    pub hypothesis_met: bool,
    pub pair: PairSum,
    /// 1 − epsilon, exactly.
    pub threshold: Dyadic,
    /// pair.sum > threshold (only asserted when the hypothesis holds).
    pub inequality_holds: bool,
    /// Σ_b ψ(b,m,t)·min_weight(b,m), the certified residue bound.
    pub residue_bound: Dyadic,
}

/// Checks the hypothesis blocks >= C, computes the exact pair sum and the
/// certified residue bound, and evaluates c_t + c_t' > 1 − epsilon.
///
/// A failed hypothesis downgrades the check to a report; a met hypothesis
/// with a violated inequality is a hard failure for callers to surface.
pub fn verify_main_theorem(t: &BitWord, epsilon: f64) -> Result<TheoremReport> {
    if t.is_zero() {
        return Err(Error::UndefinedForZero("verify_main_theorem"));
    }
    let params = params_for(epsilon)?;
    let blocks = t.count_blocks();
    let hypothesis_met = blocks >= params.required_blocks;
    let pair = pair_sum(t)?;
    let threshold = &Dyadic::one() - &params.exact_epsilon();
    let inequality_holds = pair.sum > threshold;
    let residue_bound = pair_lower_bound_via_residues(t, params.modulus)?;
    Ok(TheoremReport {
        params,
        blocks,
        hypothesis_met,
        pair,
        threshold,
        inequality_holds,
        residue_bound,
    })
}
