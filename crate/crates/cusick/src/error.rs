use thiserror::Error;

/// Errors produced by the math layers.
///
/// I/O and checkpoint failures of the sweep harness live in
/// [`crate::harness::SweepError`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is undefined for t = 0")]
    UndefinedForZero(&'static str),

    #[error("t = {0} exceeds the naive-recursion limit 2^24")]
    NaiveLimitExceeded(String),

    #[error("modulus must be >= 1")]
    ZeroModulus,

    #[error("residue {residue} out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },

    #[error("epsilon must lie strictly inside (0, 1), got {0}")]
    EpsilonOutOfRange(f64),

    #[error("epsilon = {0} requires parameters beyond the supported range")]
    ParamOverflow(f64),

    #[error("cutoff N = {cutoff} must satisfy 1 <= N <= m = {modulus}")]
    CutoffOutOfRange { cutoff: u64, modulus: u64 },

    #[error("|z_{index}| = {modulus} exceeds the unit disk")]
    OutsideUnitDisk { index: usize, modulus: f64 },

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.into(),
        }
    }
}
