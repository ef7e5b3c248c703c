//! One sweep record per t: the exact densities, the conjecture and remark
//! checks, and the spectrum shape, serialized as one JSON object per line.

use serde::{Deserialize, Serialize};

use crate::delta::{c_from_spectrum, sufficient_condition};
use crate::spectrum::phi;
use crate::{BitWord, Dyadic, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// An exact value carried as canonical dyadic text plus a 12-digit decimal
/// approximation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueRepr {
    pub dyadic: String,
    pub decimal: String,
}

impl ValueRepr {
    pub fn of(v: &Dyadic) -> Self {
        ValueRepr {
            dyadic: v.to_string(),
            decimal: v.to_decimal(12),
        }
    }

    pub fn parse_dyadic(&self) -> Result<Dyadic> {
        self.dyadic.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub schema: u32,
    pub t: String,
    pub lambda: u64,
    pub t_prime: String,
    pub blocks: u64,
    pub c_t: ValueRepr,
    pub c_t_prime: ValueRepr,
    pub pair_sum: ValueRepr,
    /// proven floor: pair_sum >= 15/16
    pub pair_sum_ge_15_16: bool,
    /// conjectural: c_t > 1/2
    pub cusick_holds: bool,
    /// conjectural: pair_sum > 1
    pub pair_conjecture_holds: bool,
    /// conjectural: φ(−1)+φ(0)+φ(1) dominates all |k| >= 2
    pub sufficient_holds: bool,
    pub argmax_set: Vec<i64>,
    pub phi_support: [i64; 2],
}

impl SweepRecord {
    pub fn compute(t: u64) -> Result<SweepRecord> {
        let word = BitWord::from(t);
        let spectrum = phi(&word)?;
        let reflected = word.reflect()?;
        let spectrum_prime = phi(&reflected)?;

        let c_t = c_from_spectrum(&spectrum);
        let c_t_prime = c_from_spectrum(&spectrum_prime);
        let pair = &c_t + &c_t_prime;
        let (support_min, support_max) = spectrum.support();

        let floor = Dyadic::new(15, 4);
        let half = Dyadic::new(1, 1);

        Ok(SweepRecord {
            schema: SCHEMA_VERSION,
            t: word.to_string(),
            lambda: word.lambda()?,
            t_prime: reflected.to_string(),
            blocks: word.count_blocks(),
            c_t: ValueRepr::of(&c_t),
            c_t_prime: ValueRepr::of(&c_t_prime),
            pair_sum: ValueRepr::of(&pair),
            pair_sum_ge_15_16: pair >= floor,
            cusick_holds: c_t > half,
            pair_conjecture_holds: pair > Dyadic::one(),
            sufficient_holds: sufficient_condition(&spectrum).holds,
            argmax_set: spectrum.argmax_set(),
            phi_support: [support_min, support_max],
        })
    }

    pub fn to_json_line(&self) -> String {
        let mut line = serde_json::to_string(self).expect("record serializes");
        line.push('\n');
        line
    }

    pub fn from_json_line(line: &str) -> serde_json::Result<SweepRecord> {
        serde_json::from_str(line)
    }

    pub fn csv_header() -> &'static str {
        "t,lambda,t_prime,blocks,c_t,c_t_prime,pair_sum,pair_sum_ge_15_16,\
         cusick_holds,pair_conjecture_holds,sufficient_holds,argmax_set,\
         phi_support_min,phi_support_max\n"
    }

    /// Decimal approximations only; the exact values live in the JSON lines.
    pub fn to_csv_row(&self) -> String {
        let argmax = self
            .argmax_set
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            self.t,
            self.lambda,
            self.t_prime,
            self.blocks,
            self.c_t.decimal,
            self.c_t_prime.decimal,
            self.pair_sum.decimal,
            self.pair_sum_ge_15_16,
            self.cusick_holds,
            self.pair_conjecture_holds,
            self.sufficient_holds,
            argmax,
            self.phi_support[0],
            self.phi_support[1],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_fields_for_small_t() {
        let r = SweepRecord::compute(3).unwrap();
        assert_eq!(r.schema, SCHEMA_VERSION);
        assert_eq!(r.t, "3");
        assert_eq!(r.t_prime, "3");
        assert_eq!(r.lambda, 1);
        assert_eq!(r.blocks, 1);
        assert_eq!(r.c_t.dyadic, "11/2^4");
        assert_eq!(r.c_t.decimal, "0.687500000000");
        assert_eq!(r.pair_sum.dyadic, "11/2^3");
        assert!(r.pair_sum_ge_15_16);
        assert!(r.cusick_holds);
        assert!(r.pair_conjecture_holds);
        assert!(r.sufficient_holds);
        assert_eq!(r.argmax_set, vec![-1, 1]);
        assert_eq!(r.phi_support, [-1, 1]);
    }

    #[test]
    fn json_round_trip_and_exact_sum() {
        for t in [1u64, 5, 149, 1000] {
            let r = SweepRecord::compute(t).unwrap();
            let line = r.to_json_line();
            let back = SweepRecord::from_json_line(line.trim()).unwrap();
            assert_eq!(back, r);
            // serialized pair_sum is the exact dyadic sum of the parts
            let sum = &back.c_t.parse_dyadic().unwrap() + &back.c_t_prime.parse_dyadic().unwrap();
            assert_eq!(sum, back.pair_sum.parse_dyadic().unwrap());
        }
    }

    #[test]
    fn csv_row_shape() {
        let r = SweepRecord::compute(5).unwrap();
        let row = r.to_csv_row();
        assert_eq!(row.trim_end().split(',').count(), 14);
        assert_eq!(
            SweepRecord::csv_header().trim_end().split(',').count(),
            14
        );
        assert!(row.contains("0.625000000000"));
    }
}
