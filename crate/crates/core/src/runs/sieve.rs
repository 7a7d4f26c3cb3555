//! Two segmented sigma sieves over a window of integers. The
//! multiplicative sieve is the production path; divisor accumulation is
//! the slower cross-check (quadratic over many segments, fine at test
//! scale). Both must produce identical abundancy bitmaps.

use crate::error::Error;

/// 2^22 integers per segment: the working arrays stay cache-friendly.
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 22;

/// Practical ceiling for a full E(x) scan on one machine.
pub const LIMIT_BUDGET: u64 = 4_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaStrategy {
    /// Extract full prime powers with base primes up to sqrt, then the
    /// leftover prime factor.
    Multiplicative,
    /// `sigma[n] += d` for every divisor d; no base primes needed.
    DivisorAccumulation,
}

#[derive(Clone, Debug)]
pub struct SieveConfig {
    pub limit: u64,
    pub segment_size: u64,
}

impl SieveConfig {
    pub fn new(limit: u64) -> Result<Self, Error> {
        Self::with_segment_size(limit, DEFAULT_SEGMENT_SIZE)
    }

    pub fn with_segment_size(limit: u64, segment_size: u64) -> Result<Self, Error> {
        if limit < 1 {
            return Err(Error::InvalidInput("sieve limit must be >= 1".into()));
        }
        if segment_size < 2 {
            return Err(Error::InvalidInput("segment size must be >= 2".into()));
        }
        if limit > LIMIT_BUDGET {
            return Err(Error::SieveBudget {
                limit,
                budget: LIMIT_BUDGET,
            });
        }
        Ok(SieveConfig {
            limit,
            segment_size,
        })
    }
}

/// Exact sigma(n) for every n in `[lo, hi)`. `base` must contain all
/// primes p with p*p < hi for the multiplicative strategy.
pub fn sigma_window(lo: u64, hi: u64, strategy: SigmaStrategy, base: &[u64]) -> Vec<u64> {
    debug_assert!(lo >= 1 && hi > lo);
    match strategy {
        SigmaStrategy::Multiplicative => sigma_multiplicative(lo, hi, base),
        SigmaStrategy::DivisorAccumulation => sigma_divisor_accumulation(lo, hi),
    }
}

fn sigma_multiplicative(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut sigma = vec![1u64; len];
    let mut rem: Vec<u64> = (lo..hi).collect();
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = lo.div_ceil(p) * p;
        let mut m = start;
        while m < hi {
            let idx = (m - lo) as usize;
            let mut pe = 1u64;
            let mut sig_pp = 1u64;
            while rem[idx].is_multiple_of(p) {
                rem[idx] /= p;
                pe *= p;
                sig_pp += pe;
            }
            sigma[idx] *= sig_pp;
            m += p;
        }
    }
    for idx in 0..len {
        if rem[idx] > 1 {
            sigma[idx] *= rem[idx] + 1;
        }
    }
    // n = 1 has rem 1 and sigma 1 already
    sigma
}

fn sigma_divisor_accumulation(lo: u64, hi: u64) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut sigma = vec![0u64; len];
    for d in 1..hi {
        let mut m = lo.div_ceil(d) * d;
        while m < hi {
            sigma[(m - lo) as usize] += d;
            m += d;
        }
    }
    sigma
}

/// Abundancy bitmap for `[lo, hi)` under the sigma(n) >= 2n convention.
pub fn abundant_window(lo: u64, hi: u64, strategy: SigmaStrategy, base: &[u64]) -> Vec<bool> {
    sigma_window(lo, hi, strategy, base)
        .into_iter()
        .zip(lo..hi)
        .map(|(s, n)| s >= 2 * n)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes::primes_up_to;

    /// Per-integer trial-division oracle.
    fn sigma_naive(n: u64) -> u64 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
    }

    #[test]
    fn both_strategies_match_naive_sigma() {
        let base = primes_up_to(2000).unwrap();
        for (lo, hi) in [(1u64, 600), (500, 1200), (99_000, 100_000)] {
            let mult = sigma_window(lo, hi, SigmaStrategy::Multiplicative, &base);
            let acc = sigma_window(lo, hi, SigmaStrategy::DivisorAccumulation, &base);
            for n in lo..hi {
                let idx = (n - lo) as usize;
                assert_eq!(mult[idx], sigma_naive(n), "mult sigma({n})");
                assert_eq!(acc[idx], mult[idx], "strategies disagree at {n}");
            }
        }
    }

    #[test]
    fn bitmaps_identical_across_strategies() {
        let base = primes_up_to(1024).unwrap();
        for (lo, hi) in [(1u64, 5000), (40_000, 50_000)] {
            let a = abundant_window(lo, hi, SigmaStrategy::Multiplicative, &base);
            let b = abundant_window(lo, hi, SigmaStrategy::DivisorAccumulation, &base);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn perfect_numbers_count_as_abundant() {
        let base = primes_up_to(200).unwrap();
        let w = abundant_window(1, 30, SigmaStrategy::Multiplicative, &base);
        assert!(w[5], "6 is perfect, so abundant here");
        assert!(w[27], "28 is perfect, so abundant here");
        assert!(w[11], "12 is plainly abundant");
        assert!(!w[0], "1 is deficient");
        assert!(!w[7], "8 is deficient");
    }

    #[test]
    fn config_validation() {
        assert!(SieveConfig::new(0).is_err());
        assert!(SieveConfig::with_segment_size(100, 1).is_err());
        assert!(SieveConfig::new(LIMIT_BUDGET + 1).unwrap_err().is_budget());
        let c = SieveConfig::new(1000).unwrap();
        assert_eq!(c.segment_size, DEFAULT_SEGMENT_SIZE);
    }

    #[test]
    fn window_far_from_origin_matches_factorization() {
        // cross-check the sieve against the trial-division/rho path
        let (lo, hi) = (99_999_900u64, 100_000_100u64);
        let base = primes_up_to(10_001).unwrap();
        let sieved = sigma_window(lo, hi, SigmaStrategy::Multiplicative, &base);
        for n in lo..hi {
            let f = crate::arith::factor::Factorization::factorize(n).unwrap();
            assert_eq!(sieved[(n - lo) as usize], f.sigma(), "sigma({n})");
        }
    }
}
