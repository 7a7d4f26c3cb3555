//! Exact computation of E(x) — the longest run of consecutive abundant
//! numbers not exceeding x — by segmented sum-of-divisors sieving.

pub mod records;
pub mod sieve;
pub mod window;

pub use records::{longest_run, record_runs, scan_runs, RunRecord, RunsOutcome};
pub use sieve::{SieveConfig, SigmaStrategy, DEFAULT_SEGMENT_SIZE};
pub use window::multiples_in_window;
