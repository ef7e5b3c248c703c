//! The characteristic function ω_t(θ) = Σ_k φ(k,t)·e(kθ), its 2×2
//! transfer-matrix evaluation over the digits of t, the row-sum norm
//! bounds that yield the block gain, and the residue-class masses
//! ψ(b,m,t) with their discrete Fourier identity.
//!
//! ω is evaluated in double-precision complex arithmetic; distances to the
//! integers are taken exactly from the reduced fraction, never from a
//! floating θ.

use std::str::FromStr;

use num_complex::Complex64;

use crate::spectrum::Spectrum;
use crate::{BitWord, Dyadic, Error, Result};

/// Comparison tolerance between the two ω routes and between ψ paths.
pub const CMP_TOL: f64 = 1e-9;
/// Slack granted to proven inequalities to absorb floating rounding.
pub const BOUND_SLACK: f64 = 1e-12;

/// A rational angle θ = j/m, stored reduced with 0 <= j < m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalAngle {
    numer: u64,
    denom: u64,
}

impl RationalAngle {
    /// Reduces j/m into [0, 1); j may be negative.
    pub fn new(j: i64, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        let numer = j.rem_euclid(m as i64) as u64;
        let g = gcd(numer, m);
        Ok(RationalAngle {
            numer: numer / g,
            denom: m / g,
        })
    }

    pub fn zero() -> Self {
        RationalAngle { numer: 0, denom: 1 }
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn as_f64(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }

    /// ‖θ‖ = min over integers n of |θ − n|, exactly, as (numerator, denominator).
    pub fn dist_to_integers(&self) -> (u64, u64) {
        (self.numer.min(self.denom - self.numer), self.denom)
    }

    /// ‖θ‖² in floating point (the only rounding is the final division).
    pub fn dist_to_integers_sq(&self) -> f64 {
        let (p, q) = self.dist_to_integers();
        let p = p as u128;
        let q = q as u128;
        (p * p) as f64 / (q * q) as f64
    }

    /// e(c·θ) = exp(2πi·c·θ), with the phase reduced exactly mod 1 first.
    pub fn e(&self, multiple: i64) -> Complex64 {
        let r = (multiple as i128 * self.numer as i128).rem_euclid(self.denom as i128);
        let phase = std::f64::consts::TAU * (r as f64) / self.denom as f64;
        Complex64::new(phase.cos(), phase.sin())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Parses "J/M"; a bare integer J is taken as the angle J/1 (i.e. 0).
impl FromStr for RationalAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse("rational angle J/M", s);
        match s.split_once('/') {
            Some((j, m)) => {
                let j = j.parse::<i64>().map_err(|_| bad())?;
                let m = m.parse::<u64>().map_err(|_| bad())?;
                RationalAngle::new(j, m)
            }
            None => {
                let j = s.parse::<i64>().map_err(|_| bad())?;
                RationalAngle::new(j, 1)
            }
        }
    }
}

/// One of the 2×2 digit matrices, or a product of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub rows: [[Complex64; 2]; 2],
}

impl TransferMatrix {
    /// Matrix applied for a 0-digit: rows (1, 0) and (e(θ)/2, e(−θ)/2).
    pub fn digit0(theta: &RationalAngle) -> Self {
        let e = theta.e(1) * 0.5;
        let e_conj = theta.e(-1) * 0.5;
        TransferMatrix {
            rows: [
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                [e, e_conj],
            ],
        }
    }

    /// Matrix applied for a 1-digit: rows (e(θ)/2, e(−θ)/2) and (0, 1).
    pub fn digit1(theta: &RationalAngle) -> Self {
        let e = theta.e(1) * 0.5;
        let e_conj = theta.e(-1) * 0.5;
        TransferMatrix {
            rows: [
                [e, e_conj],
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ],
        }
    }

    pub fn mul(&self, rhs: &TransferMatrix) -> TransferMatrix {
        let a = &self.rows;
        let b = &rhs.rows;
        let mut rows = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        TransferMatrix { rows }
    }

    /// Row-sum norm: max over rows of the sum of entry moduli.
    pub fn row_sum_norm(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r[0].norm() + r[1].norm())
            .fold(0.0, f64::max)
    }
}

/// ω_t(θ) as the row (1 0) times the digit-matrix product, LSB first, times
/// the column (1 1)ᵀ; the leading digit is absorbed by the terminal vector.
pub fn omega_matrix(t: &BitWord, theta: &RationalAngle) -> Result<Complex64> {
    if t.is_zero() {
        return Err(Error::UndefinedForZero("omega"));
    }
    let a0 = TransferMatrix::digit0(theta);
    let a1 = TransferMatrix::digit1(theta);
    let nu = t.bit_length() - 1;
    let mut row = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    for j in 0..nu {
        let m = if t.digit(j) { &a1 } else { &a0 };
        row = [
            row[0] * m.rows[0][0] + row[1] * m.rows[1][0],
            row[0] * m.rows[0][1] + row[1] * m.rows[1][1],
        ];
    }
    Ok(row[0] + row[1])
}

/// Reference evaluation of ω straight from the exact spectrum.
pub fn omega_direct(t: &BitWord, theta: &RationalAngle) -> Result<Complex64> {
    Ok(omega_from_spectrum(&crate::spectrum::phi(t)?, theta))
}

pub fn omega_from_spectrum(spectrum: &Spectrum, theta: &RationalAngle) -> Complex64 {
    spectrum
        .iter()
        .map(|(k, v)| theta.e(k) * v.to_f64())
        .sum()
}

/// The two digit windows whose matrix products carry the block gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriplePattern {
    /// digits (1, 0, 0) ⇒ product A₁A₀A₀
    OneZeroZero,
    /// digits (1, 0, 1) ⇒ product A₁A₀A₁
    OneZeroOne,
}

impl TriplePattern {
    pub fn product(&self, theta: &RationalAngle) -> TransferMatrix {
        let a0 = TransferMatrix::digit0(theta);
        let a1 = TransferMatrix::digit1(theta);
        match self {
            TriplePattern::OneZeroZero => a1.mul(&a0).mul(&a0),
            TriplePattern::OneZeroOne => a1.mul(&a0).mul(&a1),
        }
    }
}

/// Outcome of a floating-point inequality check: `value <= bound` up to
/// the recorded slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub value: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Checks the row-sum norm of the pattern product against 1 − ½‖θ‖².
pub fn triple_norm_bound_check(pattern: TriplePattern, theta: &RationalAngle) -> BoundCheck {
    let norm = pattern.product(theta).row_sum_norm();
    let bound = 1.0 - 0.5 * theta.dist_to_integers_sq();
    BoundCheck {
        value: norm,
        bound,
        ok: norm <= bound + BOUND_SLACK,
    }
}

/// The averaged-sum estimate |(1 + z_1 + … + z_{q−1})/q| <=
/// 1 − (1/2q)·max_j(1 − Re z_j), with q − 1 = z.len().
pub fn delange_bound(z: &[Complex64]) -> Result<f64> {
    for (index, zj) in z.iter().enumerate() {
        let modulus = zj.norm();
        if modulus > 1.0 + BOUND_SLACK {
            return Err(Error::OutsideUnitDisk { index, modulus });
        }
    }
    let q = (z.len() + 1) as f64;
    let worst = z.iter().map(|zj| 1.0 - zj.re).fold(0.0, f64::max);
    Ok(1.0 - worst / (2.0 * q))
}

/// Checks |ω_t(θ)| <= (1 − ½‖θ‖²)^M with M = ⌊(blocks − 1)/2⌋.
pub fn omega_block_bound_check(t: &BitWord, theta: &RationalAngle) -> Result<BoundCheck> {
    let value = omega_matrix(t, theta)?.norm();
    let gain_count = (t.count_blocks() - 1) / 2;
    let bound = (1.0 - 0.5 * theta.dist_to_integers_sq()).powi(gain_count as i32);
    Ok(BoundCheck {
        value,
        bound,
        ok: value <= bound + CMP_TOL,
    })
}

/// Exact residue-class masses ψ(b,m,t) = Σ over k ≡ b (mod m) of φ(k,t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMass {
    modulus: u64,
    masses: Vec<Dyadic>,
}

impl ResidueMass {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn mass(&self, b: u64) -> &Dyadic {
        &self.masses[b as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Dyadic)> {
        self.masses.iter().enumerate().map(|(b, v)| (b as u64, v))
    }

    pub fn total(&self) -> Dyadic {
        self.masses.iter().fold(Dyadic::zero(), |acc, v| &acc + v)
    }
}

/// ψ by direct exact summation over residue classes.
pub fn psi_direct(t: &BitWord, m: u64) -> Result<ResidueMass> {
    psi_from_spectrum(&crate::spectrum::phi(t)?, m)
}

pub fn psi_from_spectrum(spectrum: &Spectrum, m: u64) -> Result<ResidueMass> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut masses = vec![Dyadic::zero(); m as usize];
    for (k, v) in spectrum.iter() {
        let b = k.rem_euclid(m as i64) as usize;
        masses[b] = &masses[b] + v;
    }
    Ok(ResidueMass { modulus: m, masses })
}

/// ψ by Fourier inversion: ψ(b,m,t) = (1/m) Σ_j e(−jb/m)·ω_t(j/m), taking
/// the real part (the imaginary parts cancel).
pub fn psi_fourier(t: &BitWord, m: u64) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    let omegas: Vec<Complex64> = (0..m)
        .map(|j| omega_matrix(t, &RationalAngle::new(j as i64, m)?))
        .collect::<Result<_>>()?;
    let unit = RationalAngle::new(1, m)?;
    Ok((0..m)
        .map(|b| {
            let sum: Complex64 = omegas
                .iter()
                .enumerate()
                .map(|(j, w)| unit.e(-((j as i64) * (b as i64))) * w)
                .sum();
            sum.re / m as f64
        })
        .collect())
}

/// Checks |ψ(b,m,t) − 1/m| <= e^(−M/(2m²)) for every b, with ψ from the
/// exact direct path and M = ⌊(blocks − 1)/2⌋.
pub fn psi_estimate_check(t: &BitWord, m: u64) -> Result<BoundCheck> {
    let masses = psi_direct(t, m)?;
    let gain_count = (t.count_blocks() - 1) / 2;
    let bound = (-(gain_count as f64) / (2.0 * (m * m) as f64)).exp();
    let target = 1.0 / m as f64;
    let max_deviation = masses
        .iter()
        .map(|(_, v)| (v.to_f64() - target).abs())
        .fold(0.0, f64::max);
    Ok(BoundCheck {
        value: max_deviation,
        bound,
        ok: max_deviation <= bound + CMP_TOL,
    })
}
