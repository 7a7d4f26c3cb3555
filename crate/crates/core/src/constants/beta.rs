//! The prime double product
//!
//!   beta = prod_p prod_{t>=1} (sigma(p^t)/p^t)^((1/p^t)(1 - 1/p))
//!
//! evaluated as a certified interval: log beta is summed exactly over
//! p <= prime_limit, t <= depth_limit, and both truncation tails are
//! bounded above and added to the upper endpoint only.
//!
//! Tail bounds (unit-tested against partial-sum monotonicity):
//! - fixed p, t > T: each log factor is below log(p/(p-1)) and the
//!   remaining weights sum to p^-(T+1), so the tail is at most
//!   log(p/(p-1)) * p^-(T+1);
//! - p > P: a prime's whole contribution is below
//!   (1/p) log(1 + 1/(p-1)) <= 1/(p(p-1)), and primes above P >= 2 are
//!   odd, so the sum is below sum over odd n > P of 1/(n(n-1)), which is
//!   below 1/(2P) + 1/P^2.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::arith::factor::sigma_prime_power;
use crate::arith::interval::{ln_rational, CertifiedScalar};
use crate::arith::primes::primes_up_to;
use crate::error::Error;

/// Certified interval containing beta.
pub fn beta(prime_limit: u64, depth_limit: u32, prec: u32) -> Result<CertifiedScalar, Error> {
    if prime_limit < 2 {
        return Err(Error::InvalidInput("beta needs prime_limit >= 2".into()));
    }
    if depth_limit < 1 {
        return Err(Error::InvalidInput("beta needs depth_limit >= 1".into()));
    }
    let primes = primes_up_to(prime_limit)?;

    let mut log_sum = CertifiedScalar::zero(prec);
    let mut tails = CertifiedScalar::zero(prec);
    for &p in &primes {
        log_sum = log_sum.add(&prime_log_contribution(p, depth_limit, prec));
        tails = tails.add(&inner_tail(p, depth_limit, prec));
    }
    tails = tails.add(&outer_tail(prime_limit, prec));

    let upper = log_sum.add(&tails);
    let log_beta = CertifiedScalar::from_endpoints(log_sum.lo().clone(), upper.hi().clone());
    Ok(log_beta.exp())
}

/// sum_{t=1..T} (p-1)/p^(t+1) * log(sigma(p^t)/p^t), as an interval.
fn prime_log_contribution(p: u64, depth: u32, prec: u32) -> CertifiedScalar {
    let mut sum = CertifiedScalar::zero(prec);
    let mut p_pow = Integer::from(p); // p^t
    for t in 1..=depth {
        let ratio = Rational::from((sigma_prime_power(p, t), p_pow.clone()));
        let weight = Rational::from((Integer::from(p - 1), Integer::from(&p_pow * p)));
        sum = sum.add(&ln_rational(&ratio, prec).mul_rational(&weight));
        p_pow *= p;
    }
    sum
}

/// Upper bound on the dropped t > T terms for a fixed prime.
fn inner_tail(p: u64, depth: u32, prec: u32) -> CertifiedScalar {
    let log_cap = ln_rational(&Rational::from((p, p - 1)), prec);
    let weight = Rational::from((Integer::from(1), Integer::from(p).pow(depth + 1)));
    log_cap.mul_rational(&weight)
}

/// Upper bound on the dropped primes p > P: 1/(2P) + 1/P^2.
fn outer_tail(prime_limit: u64, prec: u32) -> CertifiedScalar {
    let bound =
        Rational::from((1u32, 2 * prime_limit)) + Rational::from((1u32, prime_limit)).square();
    CertifiedScalar::from_rational(&bound, prec)
}
