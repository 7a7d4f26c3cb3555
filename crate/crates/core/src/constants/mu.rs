//! The modulus family M_U = prod_{p < U} p^U, whose gcd-class profile
//! mimics every small prime power and drives delta*tau toward 2*beta.

use crate::arith::factor::Factorization;
use crate::arith::primes::primes_up_to;
use crate::error::Error;

/// Divisor count (U+1)^pi(U) past this makes downstream lattice walks
/// hopeless.
const DIVISOR_CAP: f64 = 1e12;

/// Build M_U as a factorization; U >= 2.
pub fn build_mu(u: u32) -> Result<Factorization, Error> {
    if u < 2 {
        return Err(Error::InvalidInput("M_U needs U >= 2".into()));
    }
    let primes = primes_up_to(u as u64 - 1)?;
    let count = primes.len() as f64;
    if ((u as f64) + 1.0).powf(count) > DIVISOR_CAP {
        return Err(Error::DivisorBudget {
            budget: DIVISOR_CAP as u64,
        });
    }
    Ok(Factorization::from_ascending_primes_unchecked(
        primes.into_iter().map(|p| (p, u)).collect(),
    ))
}
