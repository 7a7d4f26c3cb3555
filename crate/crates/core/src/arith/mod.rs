//! Exact integer and rational foundations: primes, factorizations,
//! divisor functions, gcd classes, CRT, and outward-rounded interval
//! scalars. Everything here is a pure function of its inputs.

pub mod classify;
pub mod crt;
pub mod factor;
pub mod gcd_classes;
pub mod interval;
pub mod primes;
pub mod product;

pub use classify::{classify, Classification, Kind};
pub use crt::crt_solve;
pub use factor::Factorization;
pub use gcd_classes::{gcd_class_profile, GcdClassProfile};
pub use interval::CertifiedScalar;
pub use primes::{is_prime, primes_up_to, PrimeStream};
