//! Range-sweep driver: per-t records with exact serialized values,
//! deterministic parallel execution over contiguous t-blocks, and
//! checkpoint/resume with a digest of the emitted bytes.

mod checkpoint;
mod record;
mod sweep;

pub use checkpoint::Checkpoint;
pub use record::{SweepRecord, ValueRepr, SCHEMA_VERSION};
pub use sweep::{sweep, CheckSet, SweepError, SweepOptions, SweepSummary};

/// Contiguous t values handed to one worker at a time; records are
/// reassembled in block order, so output bytes never depend on scheduling.
pub const BLOCK_LEN: u64 = 1024;

/// Environment variable capping the worker count.
pub const MAX_JOBS_ENV: &str = "CUSICK_MAX_JOBS";
