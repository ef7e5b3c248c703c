//! Exact computation of binary digit-sum correlation densities.
//!
//! Everything the recurrences for the densities δ(k,t) and the simplified
//! array φ(k,t) produce is a dyadic rational, so the whole pipeline — the
//! densities `c_t`, their pair sums `c_t + c_t'`, residue-class masses and
//! the certified lower bounds built from them — is carried out in exact
//! arithmetic. A double-precision transfer-matrix layer evaluates the
//! characteristic function ω_t(θ) and the norm bounds behind the block
//! estimate; a brute-force counting oracle provides independent ground
//! truth.
//!
//! The `harness` module drives range sweeps with deterministic parallel
//! output and checkpoint/resume; the `cusick` binary exposes all of it on
//! the command line.

pub mod bitword;
pub mod bounds;
pub mod delta;
pub mod dyadic;
pub mod fourier;
pub mod harness;
pub mod oracle;
pub mod spectrum;

mod error;

pub use bitword::BitWord;
pub use dyadic::Dyadic;
pub use error::Error;
pub use spectrum::Spectrum;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
