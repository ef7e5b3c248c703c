//! Checkpoint persistence for resumable sweeps: a small text file holding
//! the range spec, the last completed t, byte counts, a SHA-256 digest of
//! the record bytes emitted so far, and the running summary.
//!
//! Writes go through a temporary sibling file plus rename, so a checkpoint
//! on disk is always either the previous or the next complete state.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::Dyadic;

const MAGIC: &str = "cusick-checkpoint 1";

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub from: u64,
    /// exclusive
    pub to: u64,
    /// canonical check-set spelling
    pub checks: String,
    /// last completed t
    pub last_t: u64,
    /// JSONL bytes emitted and digested
    pub bytes: u64,
    /// CSV bytes emitted (0 when CSV export is off)
    pub csv_bytes: u64,
    /// SHA-256 of the first `bytes` bytes of the output, lowercase hex
    pub digest_hex: String,
    pub records: u64,
    pub min_pair_sum: Option<(Dyadic, u64)>,
    pub floor_violations: u64,
    pub cusick_violations: u64,
    pub pair_violations: u64,
    pub sufficient_violations: u64,
}

impl Checkpoint {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(s, "from {}", self.from);
        let _ = writeln!(s, "to {}", self.to);
        let _ = writeln!(s, "checks {}", self.checks);
        let _ = writeln!(s, "last {}", self.last_t);
        let _ = writeln!(s, "bytes {}", self.bytes);
        let _ = writeln!(s, "csv_bytes {}", self.csv_bytes);
        let _ = writeln!(s, "sha256 {}", self.digest_hex);
        let _ = writeln!(s, "records {}", self.records);
        let _ = writeln!(s, "floor_violations {}", self.floor_violations);
        let _ = writeln!(s, "cusick_violations {}", self.cusick_violations);
        let _ = writeln!(s, "pair_violations {}", self.pair_violations);
        let _ = writeln!(s, "sufficient_violations {}", self.sufficient_violations);
        if let Some((min, at)) = &self.min_pair_sum {
            let _ = writeln!(s, "min_pair_sum {min}");
            let _ = writeln!(s, "min_pair_sum_t {at}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Checkpoint, String> {
        let mut lines = text.lines();
        if lines.next() != Some(MAGIC) {
            return Err("missing header".into());
        }
        let mut fields = std::collections::HashMap::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(' ')
                .ok_or_else(|| format!("malformed line {line:?}"))?;
            fields.insert(key.to_string(), value.to_string());
        }
        let take = |key: &str| -> Result<String, String> {
            fields
                .get(key)
                .cloned()
                .ok_or_else(|| format!("missing field {key:?}"))
        };
        let num = |key: &str| -> Result<u64, String> {
            take(key)?
                .parse::<u64>()
                .map_err(|_| format!("invalid number in field {key:?}"))
        };
        let min_pair_sum = match fields.get("min_pair_sum") {
            Some(text) => {
                let value: Dyadic = text
                    .parse()
                    .map_err(|_| "invalid min_pair_sum".to_string())?;
                let at = num("min_pair_sum_t")?;
                Some((value, at))
            }
            None => None,
        };
        Ok(Checkpoint {
            from: num("from")?,
            to: num("to")?,
            checks: take("checks")?,
            last_t: num("last")?,
            bytes: num("bytes")?,
            csv_bytes: num("csv_bytes")?,
            digest_hex: take("sha256")?,
            records: num("records")?,
            min_pair_sum,
            floor_violations: num("floor_violations")?,
            cusick_violations: num("cusick_violations")?,
            pair_violations: num("pair_violations")?,
            sufficient_violations: num("sufficient_violations")?,
        })
    }

    /// Write-then-rename so readers never observe a partial file.
    pub fn write_atomic(&self, path: &Path) -> io::Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        fs::write(&tmp, self.render())?;
        fs::rename(&tmp, path)
    }
}
