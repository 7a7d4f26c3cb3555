//! Greedy construction of the prime blocks b_l: consecutive fresh primes
//! above M are consumed until sigma((l,M))/(l,M) * prod(1 + 1/q) reaches
//! the abundancy threshold.
//!
//! The scan tracks the running product as a directed-rounded interval;
//! a block closes only when the lower bound certifies the threshold and
//! the previous step's upper bound certified it had not been reached.
//! When an interval straddles the threshold (exact equality does occur,
//! e.g. (1+1/2)(1+1/3) = 2) the comparison falls back to an exact
//! cross-multiplied big-integer product, so every accept/reject decision
//! is exact.

use rug::float::Round;
use rug::ops::{DivAssignRound, MulAssignRound};
use rug::{Float, Integer, Rational};

use crate::arith::factor::Factorization;
use crate::arith::primes::PrimeStream;
use crate::arith::product::balanced_product_map;
use crate::error::Error;

/// Precision of the scan filter; decisions it cannot certify fall back
/// to exact arithmetic, so this only affects speed.
const SCAN_PREC: u32 = 192;

#[derive(Clone, Debug)]
pub struct Block {
    /// Position l in 1..=k.
    pub index: u64,
    /// (l, M) as a factorization.
    pub gcd_part: Factorization,
    /// The consecutive primes q_{j_{l-1}+1} .. q_{j_l}, ascending.
    pub primes: Vec<u64>,
}

impl Block {
    /// The block modulus b_l = product of the block primes.
    pub fn modulus(&self) -> Integer {
        balanced_product_map(&self.primes, &|q| q)
    }

    /// a_l = (l, M) * b_l.
    pub fn a_value(&self) -> Integer {
        self.gcd_part.value() * self.modulus()
    }
}

#[derive(Clone, Debug)]
pub struct WitnessBudget {
    /// The prime stream stops here; construction fails loudly beyond it.
    pub max_prime: u64,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        WitnessBudget { max_prime: 1 << 33 }
    }
}

/// Build the blocks for l = 1..=k over primes strictly greater than M,
/// consuming the stream greedily with no reuse.
pub fn build_blocks(
    m: &Factorization,
    k: u64,
    alpha: &Rational,
    budget: &WitnessBudget,
) -> Result<Vec<Block>, Error> {
    if k < 1 {
        return Err(Error::InvalidInput("k must be >= 1".into()));
    }
    if *alpha < 1 {
        return Err(Error::InvalidInput("alpha must be >= 1".into()));
    }
    let m_value = m.value().to_u64().ok_or(Error::PrimeStreamBudget {
        reached: u64::MAX,
        budget: budget.max_prime,
    })?;
    if m_value >= budget.max_prime {
        return Err(Error::PrimeStreamBudget {
            reached: m_value,
            budget: budget.max_prime,
        });
    }

    let mut stream = PrimeStream::above(m_value);
    let mut blocks = Vec::with_capacity(k as usize);
    for l in 1..=k {
        let gcd_part = m.gcd_factorization(l);
        // need prod (1 + 1/q) >= alpha * g / sigma(g) = t_num / t_den
        let t_num = Integer::from(alpha.numer() * &gcd_part.value());
        let t_den = Integer::from(alpha.denom() * &gcd_part.sigma());
        let threshold = Rational::from((t_num.clone(), t_den.clone()));

        let mut primes: Vec<u64> = Vec::new();
        let mut lo = Float::with_val(SCAN_PREC, 1);
        let mut hi = Float::with_val(SCAN_PREC, 1);
        // every iteration that continues has proven its prefix strictly
        // below the threshold, so the block that closes is minimal
        loop {
            let q = stream.next().expect("prime stream is unbounded");
            if q > budget.max_prime {
                return Err(Error::PrimeStreamBudget {
                    reached: q,
                    budget: budget.max_prime,
                });
            }
            primes.push(q);
            lo.mul_assign_round(q + 1, Round::Down);
            lo.div_assign_round(q, Round::Down);
            hi.mul_assign_round(q + 1, Round::Up);
            hi.div_assign_round(q, Round::Up);

            if hi < threshold {
                continue;
            }
            if lo >= threshold || exact_reaches_threshold(&primes, &t_num, &t_den) {
                break;
            }
        }
        blocks.push(Block {
            index: l,
            gcd_part,
            primes,
        });
    }
    Ok(blocks)
}

/// Exact test of t_den * prod(q+1) >= t_num * prod(q).
pub(crate) fn exact_reaches_threshold(primes: &[u64], t_num: &Integer, t_den: &Integer) -> bool {
    let (numer, denom) = rayon::join(
        || balanced_product_map(primes, &|q| q + 1),
        || balanced_product_map(primes, &|q| q),
    );
    t_den.clone() * numer >= t_num.clone() * denom
}
