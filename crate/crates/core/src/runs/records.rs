//! Run stitching across sieve segments: E(x), its earliest witness, and
//! the first-occurrence table of each run length.

use rayon::prelude::*;
use serde::Serialize;

use super::sieve::{abundant_window, SieveConfig, SigmaStrategy};
use crate::arith::classify::{classify, Kind};
use crate::arith::primes::primes_up_to;
use crate::error::Error;

/// A maximal run of consecutive abundant numbers found by the sieve.
/// Maximality is within the sieved range `[1, limit]`: the left neighbor
/// is checked always, the right neighbor only when it does not exceed
/// the limit (E(x) counts runs truncated at x).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub start: u64,
    pub length: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordEntry {
    pub length: u64,
    pub start: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunsOutcome {
    pub limit: u64,
    /// E(limit): the largest number of consecutive abundant numbers <= limit.
    pub longest: u64,
    pub witness: Option<RunRecord>,
    /// records[l-1] = smallest start of a run of at least l abundant numbers.
    pub records: Vec<RecordEntry>,
}

/// Scan `[1, limit]`, stitching runs across segment boundaries. Segments
/// are sieved in parallel batches but consumed in order, so the outcome
/// does not depend on the thread count.
pub fn scan_runs(cfg: &SieveConfig, strategy: SigmaStrategy) -> Result<RunsOutcome, Error> {
    let limit = cfg.limit;
    let sqrt = (limit as f64).sqrt() as u64 + 2;
    let base = primes_up_to(sqrt)?;

    let mut ranges = Vec::new();
    let mut lo = 1u64;
    while lo <= limit {
        let hi = (lo + cfg.segment_size).min(limit + 1);
        ranges.push((lo, hi));
        lo = hi;
    }

    let mut records: Vec<u64> = Vec::new(); // records[l-1] = first start of run >= l
    let mut open: Option<(u64, u64)> = None; // (start, length) carried across segments

    let batch = rayon::current_num_threads().max(1);
    for chunk in ranges.chunks(batch) {
        let bitmaps: Vec<Vec<bool>> = chunk
            .par_iter()
            .map(|&(lo, hi)| abundant_window(lo, hi, strategy, &base))
            .collect();
        for (&(lo, _hi), bitmap) in chunk.iter().zip(&bitmaps) {
            for (i, &abundant) in bitmap.iter().enumerate() {
                let n = lo + i as u64;
                if abundant {
                    open = match open {
                        Some((s, len)) => Some((s, len + 1)),
                        None => Some((n, 1)),
                    };
                } else if let Some((s, len)) = open.take() {
                    close_run(&mut records, s, len);
                }
            }
        }
    }
    if let Some((s, len)) = open {
        close_run(&mut records, s, len);
    }

    let longest = records.len() as u64;
    let witness = if longest > 0 {
        let rec = RunRecord {
            start: records[(longest - 1) as usize],
            length: longest,
        };
        verify_maximality(&rec, limit)?;
        Some(rec)
    } else {
        None
    };
    Ok(RunsOutcome {
        limit,
        longest,
        witness,
        records: records
            .iter()
            .enumerate()
            .map(|(i, &s)| RecordEntry {
                length: i as u64 + 1,
                start: s,
            })
            .collect(),
    })
}

fn close_run(records: &mut Vec<u64>, start: u64, length: u64) {
    // runs arrive in start order, so only new lengths get an entry
    while (records.len() as u64) < length {
        records.push(start);
    }
}

fn verify_maximality(rec: &RunRecord, limit: u64) -> Result<(), Error> {
    for i in 0..rec.length {
        let c = classify(rec.start + i)?;
        debug_assert_eq!(c.kind, Kind::Abundant);
    }
    if rec.start > 1 {
        let left = classify(rec.start - 1)?;
        if left.kind == Kind::Abundant {
            return Err(Error::InvalidInput(format!(
                "run at {} is not left-maximal",
                rec.start
            )));
        }
    }
    let next = rec.start + rec.length;
    if next <= limit {
        let right = classify(next)?;
        if right.kind == Kind::Abundant {
            return Err(Error::InvalidInput(format!(
                "run at {} is not right-maximal",
                rec.start
            )));
        }
    }
    Ok(())
}

/// E(limit) and the earliest maximal run attaining it.
pub fn longest_run(cfg: &SieveConfig) -> Result<(u64, Option<RunRecord>), Error> {
    let out = scan_runs(cfg, SigmaStrategy::Multiplicative)?;
    Ok((out.longest, out.witness))
}

/// For each length 1..=E(limit), the smallest start of a run of at
/// least that many consecutive abundant numbers.
pub fn record_runs(limit: u64) -> Result<Vec<(u64, u64)>, Error> {
    let out = scan_runs(&SieveConfig::new(limit)?, SigmaStrategy::Multiplicative)?;
    Ok(out.records.iter().map(|r| (r.length, r.start)).collect())
}
