//! Exact and certified computations around runs of consecutive abundant
//! numbers: sum-of-divisors sieves, gcd-class geometric means, the prime
//! double-product constant behind the growth rate, and CRT witness
//! certificates for arbitrarily long runs.
//!
//! Throughout the crate "abundant" means `sigma(n) >= 2n`, so perfect
//! numbers count as abundant. Every real-valued constant is carried as a
//! [`CertifiedScalar`] interval with outward rounding; every comparison
//! that decides a result is done on exact integers or rationals.

pub mod arith;
pub mod constants;
pub mod error;
pub mod runs;
pub mod witness;

pub use arith::classify::{classify, Classification, Kind};
pub use arith::crt::crt_solve;
pub use arith::factor::Factorization;
pub use arith::gcd_classes::{gcd_class_profile, GcdClassProfile};
pub use arith::interval::CertifiedScalar;
pub use arith::primes::{is_prime, primes_up_to, PrimeStream};
pub use error::Error;

/// Default precision (fractional bits) for certified scalars.
pub const DEFAULT_PRECISION: u32 = 128;

/// Serde helper: big integers go on the wire as decimal strings.
pub fn ser_integer<S: serde::Serializer>(v: &rug::Integer, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Serde helper: rationals go on the wire as "num/den".
pub fn ser_rational<S: serde::Serializer>(v: &rug::Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", v.numer(), v.denom()))
}

/// Parse a rational from "a/b" or a plain integer string.
pub fn parse_rational(s: &str) -> Result<rug::Rational, Error> {
    let r: rug::Rational = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
    Ok(r)
}
