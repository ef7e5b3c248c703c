//! Exact arithmetic over dyadic rationals num / 2^exp.
//!
//! Every quantity the digit recurrences produce has a power-of-two
//! denominator, so this type is closed under all operations used in the
//! crate. Values are kept in lowest terms: the numerator is odd unless the
//! exponent is zero, and zero is stored as 0/2^0. With that normalization
//! structural equality coincides with value equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

/// An exact dyadic rational `num / 2^exp` in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    /// Builds `num / 2^exp`, reducing to lowest terms.
    pub fn new(num: impl Into<BigInt>, exp: u64) -> Self {
        let mut d = Dyadic {
            num: num.into(),
            exp,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigInt::one(),
            exp: 0,
        }
    }

    /// 1 / 2^k.
    pub fn pow2_inv(k: u64) -> Self {
        Dyadic {
            num: BigInt::one(),
            exp: k,
        }
    }

    /// The exact value of an `f64` (every finite float is dyadic).
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e2) = if raw_exp == 0 {
            (frac, -1074i64) // subnormal
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let num = BigInt::from(sign) * BigInt::from(mant);
        Some(if e2 >= 0 {
            Dyadic::new(num << e2 as u64, 0)
        } else {
            Dyadic::new(num, (-e2) as u64)
        })
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        if self.exp == 0 {
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exp);
        if shift > 0 {
            self.num >>= shift;
            self.exp -= shift;
        }
    }

    /// Exact halving.
    pub fn halve(&self) -> Self {
        self.scale_pow2(-1)
    }

    /// Exact multiplication by 2^k (k may be negative).
    pub fn scale_pow2(&self, k: i64) -> Self {
        if self.num.is_zero() {
            return Dyadic::zero();
        }
        if k >= 0 {
            let k = k as u64;
            if self.exp >= k {
                Dyadic {
                    num: self.num.clone(),
                    exp: self.exp - k,
                }
            } else {
                Dyadic {
                    num: &self.num << (k - self.exp),
                    exp: 0,
                }
            }
        } else {
            let mut d = Dyadic {
                num: self.num.clone(),
                exp: self.exp + (-k) as u64,
            };
            d.normalize(); // num may be even when exp was 0
            d
        }
    }

    /// Rounds to `digits` decimal places, half away from zero.
    pub fn to_decimal(&self, digits: usize) -> String {
        let negative = self.num.is_negative();
        let mag = self.num.magnitude() * BigUint::from(10u32).pow(digits as u32);
        let den = BigUint::one() << self.exp;
        let (mut q, r) = mag.div_rem(&den);
        if r << 1u32 >= den {
            q += 1u32;
        }
        let sign = if negative && !q.is_zero() { "-" } else { "" };
        let scale = BigUint::from(10u32).pow(digits as u32);
        let (int, frac) = q.div_rem(&scale);
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac:0>width$}", width = digits)
        }
    }

    /// Nearest `f64` (approximate for large numerators; underflows to zero
    /// far below 2^-1074, which is harmless at the crate's tolerances).
    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        let mag = self.num.magnitude();
        let bits = mag.bits();
        let shift = bits.saturating_sub(64);
        let top = (mag >> shift).to_u64().expect("top word fits u64") as f64;
        let e = shift as i64 - self.exp as i64;
        let x = top * pow2_f64(e);
        if self.num.is_negative() {
            -x
        } else {
            x
        }
    }
}

fn pow2_f64(e: i64) -> f64 {
    match e {
        -1022..=1023 => f64::from_bits(((e + 1023) as u64) << 52),
        1024.. => f64::INFINITY,
        // Two-step through the subnormal range.
        e if e >= -1074 - 52 => f64::from_bits(1) * pow2_f64(e + 1074),
        _ => 0.0,
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic {
            num: BigInt::from(n),
            exp: 0,
        }
    }
}

impl From<u64> for Dyadic {
    fn from(n: u64) -> Self {
        Dyadic {
            num: BigInt::from(n),
            exp: 0,
        }
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        let num = (&self.num << (exp - self.exp)) + (&rhs.num << (exp - rhs.exp));
        Dyadic::new(num, exp)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        let num = (&self.num << (exp - self.exp)) - (&rhs.num << (exp - rhs.exp));
        Dyadic::new(num, exp)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: &Dyadic) -> Dyadic {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        a.cmp(&b)
    }
}

/// Canonical text form: `num/2^exp`, with `0` for zero.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::parse("dyadic rational", s);
        if s == "0" {
            return Ok(Dyadic::zero());
        }
        match s.split_once("/2^") {
            Some((num, exp)) => {
                let num = BigInt::from_str(num).map_err(|_| bad())?;
                let exp = exp.parse::<u64>().map_err(|_| bad())?;
                Ok(Dyadic::new(num, exp))
            }
            None => {
                let num = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(Dyadic::new(num, 0))
            }
        }
    }
}
