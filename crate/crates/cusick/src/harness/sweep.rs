//! Deterministic parallel sweep over a range of t.
//!
//! Work is sharded into contiguous blocks of [`BLOCK_LEN`](super::BLOCK_LEN)
//! t values. Workers pull block indices from a shared counter and emit
//! rendered bytes; the writer reassembles blocks in index order, so the
//! output is byte-identical for any worker count. A checkpoint (when
//! requested) is refreshed after every block.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc;
use std::thread;

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::checkpoint::Checkpoint;
use super::record::SweepRecord;
use super::{BLOCK_LEN, MAX_JOBS_ENV};
use crate::Dyadic;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep range: {0}")]
    InvalidRange(String),
    #[error("unknown check name {0:?} (expected floor, cusick, pair, sufficient or all)")]
    UnknownCheck(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),
    #[error("checkpoint does not match this sweep: {0}")]
    CheckpointMismatch(String),
    #[error(transparent)]
    Math(#[from] crate::Error),
    #[error("worker pool terminated unexpectedly")]
    WorkerLost,
}

/// Which summary checks a sweep reports on. Records always carry every
/// field; the set only selects what is counted, printed and allowed to
/// fail the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckSet {
    /// pair_sum >= 15/16 — proven, a violation is a hard failure
    pub floor: bool,
    /// c_t > 1/2 — conjectural, flagged only
    pub cusick: bool,
    /// pair_sum > 1 — conjectural, flagged only
    pub pair: bool,
    /// the dominance condition — flagged only
    pub sufficient: bool,
}

impl CheckSet {
    pub fn all() -> Self {
        CheckSet {
            floor: true,
            cusick: true,
            pair: true,
            sufficient: true,
        }
    }

    pub fn parse(text: &str) -> Result<Self, SweepError> {
        if text.trim() == "all" {
            return Ok(CheckSet::all());
        }
        let mut set = CheckSet {
            floor: false,
            cusick: false,
            pair: false,
            sufficient: false,
        };
        for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "floor" => set.floor = true,
                "cusick" => set.cusick = true,
                "pair" => set.pair = true,
                "sufficient" => set.sufficient = true,
                other => return Err(SweepError::UnknownCheck(other.to_string())),
            }
        }
        Ok(set)
    }

    /// Stable spelling used in checkpoints.
    pub fn canonical(&self) -> String {
        if *self == CheckSet::all() {
            return "all".to_string();
        }
        let mut names = Vec::new();
        if self.cusick {
            names.push("cusick");
        }
        if self.floor {
            names.push("floor");
        }
        if self.pair {
            names.push("pair");
        }
        if self.sufficient {
            names.push("sufficient");
        }
        names.join(",")
    }
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub from: u64,
    /// exclusive upper end
    pub to: u64,
    pub checks: CheckSet,
    pub jobs: usize,
    pub out: PathBuf,
    pub checkpoint: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// Aggregated sweep outcome. All four violation counters are maintained
/// regardless of the check set; reporting filters them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepSummary {
    pub records: u64,
    /// smallest exact pair sum and the first t attaining it
    pub min_pair_sum: Option<(Dyadic, u64)>,
    pub floor_violations: u64,
    pub cusick_violations: u64,
    pub pair_violations: u64,
    pub sufficient_violations: u64,
}

impl SweepSummary {
    fn absorb(&mut self, t: u64, record: &SweepRecord) -> Result<(), SweepError> {
        let pair = record.pair_sum.parse_dyadic()?;
        self.records += 1;
        match &self.min_pair_sum {
            Some((current, _)) if *current <= pair => {}
            _ => self.min_pair_sum = Some((pair, t)),
        }
        if !record.pair_sum_ge_15_16 {
            self.floor_violations += 1;
        }
        if !record.cusick_holds {
            self.cusick_violations += 1;
        }
        if !record.pair_conjecture_holds {
            self.pair_violations += 1;
        }
        if !record.sufficient_holds {
            self.sufficient_violations += 1;
        }
        Ok(())
    }

    fn merge(&mut self, block: &SweepSummary) {
        self.records += block.records;
        if let Some((pair, t)) = &block.min_pair_sum {
            match &self.min_pair_sum {
                Some((current, _)) if current <= pair => {}
                _ => self.min_pair_sum = Some((pair.clone(), *t)),
            }
        }
        self.floor_violations += block.floor_violations;
        self.cusick_violations += block.cusick_violations;
        self.pair_violations += block.pair_violations;
        self.sufficient_violations += block.sufficient_violations;
    }

    /// True when a selected hard (proven) check was violated.
    pub fn has_hard_violation(&self, checks: &CheckSet) -> bool {
        checks.floor && self.floor_violations > 0
    }

    /// Human-readable summary restricted to the selected checks.
    pub fn render(&self, checks: &CheckSet) -> String {
        let mut out = String::new();
        out.push_str(&format!("records {}\n", self.records));
        if let Some((pair, t)) = &self.min_pair_sum {
            out.push_str(&format!(
                "min_pair_sum {} ({}) at t = {}\n",
                pair,
                pair.to_decimal(12),
                t
            ));
        }
        if checks.floor {
            out.push_str(&format!(
                "floor violations (pair_sum < 15/16, hard) {}\n",
                self.floor_violations
            ));
        }
        if checks.cusick {
            out.push_str(&format!(
                "cusick violations (c_t <= 1/2, flagged) {}\n",
                self.cusick_violations
            ));
        }
        if checks.pair {
            out.push_str(&format!(
                "pair violations (pair_sum <= 1, flagged) {}\n",
                self.pair_violations
            ));
        }
        if checks.sufficient {
            out.push_str(&format!(
                "sufficient-condition failures (flagged) {}\n",
                self.sufficient_violations
            ));
        }
        out
    }
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&CheckSet::all()))
    }
}

struct BlockResult {
    index: u64,
    jsonl: Vec<u8>,
    csv: Vec<u8>,
    summary: SweepSummary,
}

struct Emitter {
    out: BufWriter<File>,
    csv: Option<BufWriter<File>>,
    hasher: Sha256,
    bytes: u64,
    csv_bytes: u64,
    summary: SweepSummary,
}

impl Emitter {
    fn write_block(&mut self, block: &BlockResult) -> Result<(), SweepError> {
        self.out.write_all(&block.jsonl)?;
        self.hasher.update(&block.jsonl);
        self.bytes += block.jsonl.len() as u64;
        if let Some(csv) = &mut self.csv {
            csv.write_all(&block.csv)?;
            self.csv_bytes += block.csv.len() as u64;
        }
        self.summary.merge(&block.summary);
        Ok(())
    }

    fn flush(&mut self) -> Result<(), SweepError> {
        self.out.flush()?;
        if let Some(csv) = &mut self.csv {
            csv.flush()?;
        }
        Ok(())
    }

    fn digest_hex(&self) -> String {
        let digest = self.hasher.clone().finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn effective_jobs(requested: usize) -> usize {
    let mut jobs = requested.clamp(1, 512);
    if let Ok(cap) = std::env::var(MAX_JOBS_ENV) {
        if let Ok(cap) = cap.trim().parse::<usize>() {
            jobs = jobs.min(cap.max(1));
        }
    }
    jobs
}

/// Runs the sweep described by `opts` and returns the summary.
///
/// Identical options produce byte-identical output files for any `jobs`
/// value, and a run resumed from a checkpoint reproduces exactly the bytes
/// an uninterrupted run would have written.
pub fn sweep(opts: &SweepOptions) -> Result<SweepSummary, SweepError> {
    if opts.from < 1 {
        return Err(SweepError::InvalidRange(
            "sweeps start at t >= 1 (t' is undefined at 0)".into(),
        ));
    }
    if opts.from > opts.to {
        return Err(SweepError::InvalidRange(format!(
            "from {} exceeds to {}",
            opts.from, opts.to
        )));
    }
    let span = opts.to - opts.from;
    let total_blocks = span.div_ceil(BLOCK_LEN);
    let (mut emitter, start_block) = prepare(opts)?;

    if start_block >= total_blocks {
        emitter.flush()?;
        return Ok(emitter.summary);
    }

    let next = AtomicU64::new(start_block);
    let jobs = effective_jobs(opts.jobs);
    let (tx, rx) = mpsc::channel::<Result<BlockResult, SweepError>>();

    let result = thread::scope(|scope| -> Result<SweepSummary, SweepError> {
        for _ in 0..jobs {
            let tx = tx.clone();
            let next = &next;
            let csv_enabled = opts.csv.is_some();
            let (from, to) = (opts.from, opts.to);
            scope.spawn(move || loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= total_blocks {
                    break;
                }
                match compute_block(index, from, to, csv_enabled) {
                    Ok(block) => {
                        if tx.send(Ok(block)).is_err() {
                            break;
                        }
                    }
                    Err(e) => {
                        let _ = tx.send(Err(e));
                        break;
                    }
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<u64, BlockResult> = BTreeMap::new();
        let mut expected = start_block;
        while expected < total_blocks {
            let block = rx.recv().map_err(|_| SweepError::WorkerLost)??;
            pending.insert(block.index, block);
            let mut advanced = false;
            while let Some(ready) = pending.remove(&expected) {
                emitter.write_block(&ready)?;
                expected += 1;
                advanced = true;
            }
            if advanced {
                emitter.flush()?;
                write_checkpoint(opts, &emitter, expected)?;
            }
        }
        emitter.flush()?;
        Ok(emitter.summary)
    })?;

    Ok(result)
}

fn compute_block(
    index: u64,
    from: u64,
    to: u64,
    csv_enabled: bool,
) -> Result<BlockResult, SweepError> {
    let start = from + index * BLOCK_LEN;
    let end = to.min(start + BLOCK_LEN);
    let mut jsonl = Vec::new();
    let mut csv = Vec::new();
    let mut summary = SweepSummary::default();
    for t in start..end {
        let record = SweepRecord::compute(t)?;
        summary.absorb(t, &record)?;
        jsonl.extend_from_slice(record.to_json_line().as_bytes());
        if csv_enabled {
            csv.extend_from_slice(record.to_csv_row().as_bytes());
        }
    }
    Ok(BlockResult {
        index,
        jsonl,
        csv,
        summary,
    })
}

fn write_checkpoint(
    opts: &SweepOptions,
    emitter: &Emitter,
    blocks_done: u64,
) -> Result<(), SweepError> {
    let Some(path) = &opts.checkpoint else {
        return Ok(());
    };
    let span = opts.to - opts.from;
    let done = span.min(blocks_done * BLOCK_LEN);
    let checkpoint = Checkpoint {
        from: opts.from,
        to: opts.to,
        checks: opts.checks.canonical(),
        last_t: opts.from + done - 1,
        bytes: emitter.bytes,
        csv_bytes: emitter.csv_bytes,
        digest_hex: emitter.digest_hex(),
        records: emitter.summary.records,
        min_pair_sum: emitter.summary.min_pair_sum.clone(),
        floor_violations: emitter.summary.floor_violations,
        cusick_violations: emitter.summary.cusick_violations,
        pair_violations: emitter.summary.pair_violations,
        sufficient_violations: emitter.summary.sufficient_violations,
    };
    checkpoint.write_atomic(path)?;
    Ok(())
}

/// Opens the output files, either fresh or positioned from a checkpoint,
/// and returns the emitter plus the first block still to compute.
fn prepare(opts: &SweepOptions) -> Result<(Emitter, u64), SweepError> {
    let existing = match &opts.checkpoint {
        Some(path) if path.exists() => Some(load_checkpoint(path, opts)?),
        _ => None,
    };

    match existing {
        Some(cp) => {
            let done = cp.last_t + 1 - opts.from;
            let start_block = if done.is_multiple_of(BLOCK_LEN) {
                done / BLOCK_LEN
            } else if cp.last_t == opts.to - 1 {
                (opts.to - opts.from).div_ceil(BLOCK_LEN)
            } else {
                return Err(SweepError::CorruptCheckpoint(format!(
                    "last t {} is not a block boundary",
                    cp.last_t
                )));
            };

            let (out, hasher) = reopen_digested(&opts.out, cp.bytes, &cp.digest_hex)?;
            let csv = match (&opts.csv, cp.csv_bytes) {
                (None, 0) => None,
                (None, _) => {
                    return Err(SweepError::CheckpointMismatch(
                        "checkpointed run exported CSV, this one does not".into(),
                    ))
                }
                (Some(_), 0) => {
                    return Err(SweepError::CheckpointMismatch(
                        "checkpointed run had no CSV export".into(),
                    ))
                }
                (Some(path), bytes) => Some(reopen_truncated(path, bytes)?),
            };

            let summary = SweepSummary {
                records: cp.records,
                min_pair_sum: cp.min_pair_sum,
                floor_violations: cp.floor_violations,
                cusick_violations: cp.cusick_violations,
                pair_violations: cp.pair_violations,
                sufficient_violations: cp.sufficient_violations,
            };
            Ok((
                Emitter {
                    out,
                    csv,
                    hasher,
                    bytes: cp.bytes,
                    csv_bytes: cp.csv_bytes,
                    summary,
                },
                start_block,
            ))
        }
        None => {
            let out = BufWriter::new(File::create(&opts.out)?);
            let mut csv_bytes = 0u64;
            let csv = match &opts.csv {
                Some(path) => {
                    let mut file = BufWriter::new(File::create(path)?);
                    let header = SweepRecord::csv_header();
                    file.write_all(header.as_bytes())?;
                    csv_bytes = header.len() as u64;
                    Some(file)
                }
                None => None,
            };
            Ok((
                Emitter {
                    out,
                    csv,
                    hasher: Sha256::new(),
                    bytes: 0,
                    csv_bytes,
                    summary: SweepSummary::default(),
                },
                0,
            ))
        }
    }
}

fn load_checkpoint(path: &Path, opts: &SweepOptions) -> Result<Checkpoint, SweepError> {
    let text = std::fs::read_to_string(path)?;
    let cp = Checkpoint::parse(&text).map_err(SweepError::CorruptCheckpoint)?;
    if cp.from != opts.from || cp.to != opts.to {
        return Err(SweepError::CheckpointMismatch(format!(
            "checkpoint covers [{}, {}), requested [{}, {})",
            cp.from, cp.to, opts.from, opts.to
        )));
    }
    let canonical = opts.checks.canonical();
    if cp.checks != canonical {
        return Err(SweepError::CheckpointMismatch(format!(
            "checkpoint checks {:?}, requested {:?}",
            cp.checks, canonical
        )));
    }
    if cp.last_t < opts.from || cp.last_t >= opts.to {
        return Err(SweepError::CorruptCheckpoint(format!(
            "last t {} outside the range",
            cp.last_t
        )));
    }
    Ok(cp)
}

/// Re-opens the output, verifies the digest of the checkpointed prefix,
/// truncates anything beyond it, and returns a hasher primed with that
/// prefix.
fn reopen_digested(
    path: &Path,
    bytes: u64,
    expect_hex: &str,
) -> Result<(BufWriter<File>, Sha256), SweepError> {
    let mut file = OpenOptions::new().read(true).write(true).open(path)?;
    let len = file.metadata()?.len();
    if len < bytes {
        return Err(SweepError::CorruptCheckpoint(format!(
            "output file holds {len} bytes, checkpoint claims {bytes}"
        )));
    }
    let mut hasher = Sha256::new();
    let mut remaining = bytes;
    let mut buf = vec![0u8; 1 << 16];
    while remaining > 0 {
        let take = buf.len().min(remaining as usize);
        file.read_exact(&mut buf[..take])?;
        hasher.update(&buf[..take]);
        remaining -= take as u64;
    }
    let got_hex: String = hasher
        .clone()
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    if got_hex != expect_hex {
        return Err(SweepError::CorruptCheckpoint(
            "output digest mismatch".into(),
        ));
    }
    file.set_len(bytes)?;
    file.seek(SeekFrom::End(0))?;
    Ok((BufWriter::new(file), hasher))
}

fn reopen_truncated(path: &Path, bytes: u64) -> Result<BufWriter<File>, SweepError> {
    let mut file = OpenOptions::new().read(true).write(true).open(path)?;
    if file.metadata()?.len() < bytes {
        return Err(SweepError::CorruptCheckpoint(
            "CSV file shorter than the checkpointed length".into(),
        ));
    }
    file.set_len(bytes)?;
    file.seek(SeekFrom::End(0))?;
    Ok(BufWriter::new(file))
}
