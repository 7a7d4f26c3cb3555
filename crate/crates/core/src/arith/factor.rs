//! Canonical prime-exponent factorizations and the multiplicative
//! functions evaluated on them.

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::primes::is_prime;
use crate::error::Error;

/// Trial division bound used by [`Factorization::factorize`] before
/// falling back to Miller-Rabin plus Pollard rho.
const TRIAL_LIMIT: u64 = 1_000_000;

/// A positive integer in canonical form: strictly increasing primes with
/// exponents `>= 1`. The empty list is 1.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FactorizationRepr", into = "FactorizationRepr")]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization {
            factors: Vec::new(),
        }
    }

    pub fn from_prime_power(p: u64, e: u32) -> Result<Self, Error> {
        Self::new(vec![(p, e)])
    }

    /// Validating constructor: primes ascending, each passing a primality
    /// check, exponents nonzero.
    pub fn new(factors: Vec<(u64, u32)>) -> Result<Self, Error> {
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidFactorization(format!(
                    "primes not strictly increasing: {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        for &(p, e) in &factors {
            if e == 0 {
                return Err(Error::InvalidFactorization(format!(
                    "zero exponent on prime {p}"
                )));
            }
            if !is_prime(p) {
                return Err(Error::InvalidFactorization(format!("{p} is not prime")));
            }
        }
        Ok(Factorization { factors })
    }

    /// Construction from primes already known to be prime and ascending
    /// (e.g. straight out of a sieve); only debug builds re-check.
    pub(crate) fn from_ascending_primes_unchecked(factors: Vec<(u64, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|&(p, e)| e >= 1 && is_prime(p)));
        Factorization { factors }
    }

    /// Factor a `u64`: trial division to 10^6, then a deterministic
    /// primality check, then Pollard rho for what remains.
    pub fn factorize(n: u64) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidInput("cannot factor 0".into()));
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut rest = n;
        let mut push = |p: u64, e: u32| {
            factors.push((p, e));
        };
        for p in std::iter::once(2).chain((3..=TRIAL_LIMIT).step_by(2)) {
            if p * p > rest {
                break;
            }
            if rest.is_multiple_of(p) {
                let mut e = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                push(p, e);
            }
        }
        if rest > 1 {
            if rest <= TRIAL_LIMIT * TRIAL_LIMIT || is_prime(rest) {
                // either prime, or a leftover prime below the trial square
                push(rest, 1);
            } else {
                let mut parts = Vec::new();
                split_hard(rest, &mut parts)?;
                parts.sort_unstable();
                let mut i = 0;
                while i < parts.len() {
                    let p = parts[i];
                    let mut e = 0;
                    while i < parts.len() && parts[i] == p {
                        e += 1;
                        i += 1;
                    }
                    push(p, e);
                }
            }
        }
        Ok(Factorization { factors })
    }

    /// Factor an arbitrary-precision integer. Smooth parts of any size
    /// are fine; a large rough cofactor beyond the rho budget fails.
    pub fn from_integer(n: &Integer) -> Result<Self, Error> {
        if *n <= 0 {
            return Err(Error::InvalidInput(format!("cannot factor {n}")));
        }
        if let Some(small) = n.to_u64() {
            return Self::factorize(small);
        }
        let mut rest = n.clone();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for p in std::iter::once(2u64).chain((3..=TRIAL_LIMIT).step_by(2)) {
            if rest.is_divisible_u(p as u32) {
                let mut e = 0u32;
                while rest.is_divisible_u(p as u32) {
                    rest.div_exact_u_mut(p as u32);
                    e += 1;
                }
                factors.push((p, e));
            }
            if let Some(small) = rest.to_u64() {
                // remaining cofactor fits a machine word; its factors all
                // exceed the primes already pushed
                if small > 1 {
                    let tail = Self::factorize(small)?;
                    factors.extend_from_slice(tail.factors());
                }
                return Ok(Factorization { factors });
            }
        }
        Err(Error::FactorBudget {
            n: n.to_string(),
            cofactor: rest.to_string(),
        })
    }

    /// Parse `"2^8,3^6,5^4"` (exponent omitted means 1).
    pub fn from_spec_str(s: &str) -> Result<Self, Error> {
        let mut factors = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (p_str, e_str) = match part.split_once('^') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (part, "1"),
            };
            let p: u64 = p_str
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad prime {p_str:?}")))?;
            let e: u32 = e_str
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad exponent {e_str:?}")))?;
            factors.push((p, e));
        }
        factors.sort_unstable_by_key(|&(p, _)| p);
        Self::new(factors)
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn value(&self) -> Integer {
        let mut v = Integer::from(1);
        for &(p, e) in &self.factors {
            v *= Integer::from(p).pow(e);
        }
        v
    }

    /// sigma(n): product of (p^(e+1) - 1)/(p - 1).
    pub fn sigma(&self) -> Integer {
        let mut s = Integer::from(1);
        for &(p, e) in &self.factors {
            s *= sigma_prime_power(p, e);
        }
        s
    }

    /// phi(n): product of p^(e-1) (p - 1).
    pub fn totient(&self) -> Integer {
        let mut t = Integer::from(1);
        for &(p, e) in &self.factors {
            t *= Integer::from(p).pow(e - 1) * Integer::from(p - 1);
        }
        t
    }

    /// sigma(n)/n in lowest terms.
    pub fn sigma_ratio(&self) -> Rational {
        Rational::from((self.sigma(), self.value()))
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(_, e)| acc.saturating_mul(e as u64 + 1))
    }

    /// gcd(i, n) for a machine-word i, via minimum exponents.
    pub fn gcd_u64(&self, i: u64) -> u64 {
        if i == 0 {
            // gcd(0, n) = n; only meaningful when n fits
            return self.value().to_u64().expect("modulus exceeds u64");
        }
        let mut g = 1u64;
        for &(p, e) in &self.factors {
            let mut rest = i;
            let mut v = 0u32;
            while v < e && rest.is_multiple_of(p) {
                rest /= p;
                v += 1;
            }
            g *= p.pow(v);
        }
        g
    }

    /// Factorization of gcd(i, n).
    pub fn gcd_factorization(&self, i: u64) -> Factorization {
        let mut factors = Vec::new();
        for &(p, e) in &self.factors {
            let mut rest = i;
            let mut v = 0u32;
            while v < e && rest.is_multiple_of(p) {
                rest /= p;
                v += 1;
            }
            if v > 0 {
                factors.push((p, v));
            }
        }
        Factorization { factors }
    }

    pub fn divides(&self, other: &Factorization) -> bool {
        self.factors
            .iter()
            .all(|&(p, e)| other.factors.iter().any(|&(q, f)| q == p && f >= e))
    }

    /// Visit every divisor as (exponent vector, value, sigma), in
    /// depth-first lattice order over the canonical prime list.
    pub fn for_each_divisor<F>(&self, budget: u64, f: &mut F) -> Result<(), Error>
    where
        F: FnMut(&[u32], &Integer, &Integer),
    {
        if self.divisor_count() > budget {
            return Err(Error::DivisorBudget { budget });
        }
        let mut exps = vec![0u32; self.factors.len()];
        let one = Integer::from(1);
        self.divisor_rec(0, &one, &one, &mut exps, f);
        Ok(())
    }

    fn divisor_rec<F>(&self, pos: usize, d: &Integer, s: &Integer, exps: &mut Vec<u32>, f: &mut F)
    where
        F: FnMut(&[u32], &Integer, &Integer),
    {
        if pos == self.factors.len() {
            f(exps, d, s);
            return;
        }
        let (p, e_max) = self.factors[pos];
        let mut d_cur = d.clone();
        let mut sig_pp = Integer::from(1); // sigma(p^j)
        let mut p_pow = Integer::from(1);
        for j in 0..=e_max {
            if j > 0 {
                p_pow *= p;
                d_cur = d.clone() * &p_pow;
                sig_pp += &p_pow;
            }
            let s_cur = if j == 0 {
                s.clone()
            } else {
                s.clone() * &sig_pp
            };
            exps[pos] = j;
            self.divisor_rec(pos + 1, &d_cur, &s_cur, exps, f);
        }
        exps[pos] = 0;
    }
}

/// sigma(p^e) = 1 + p + ... + p^e.
pub fn sigma_prime_power(p: u64, e: u32) -> Integer {
    let pe1 = Integer::from(p).pow(e + 1);
    (pe1 - 1u32) / (p - 1)
}

/// Pollard rho with Floyd cycle detection; `n` must be odd, composite, with no factor below
/// the trial limit. Splits recursively into primes.
fn split_hard(n: u64, out: &mut Vec<u64>) -> Result<(), Error> {
    if is_prime(n) {
        out.push(n);
        return Ok(());
    }
    for seed in 1..64u64 {
        if let Some(d) = pollard_rho(n, seed) {
            if d != 1 && d != n {
                split_hard(d, out)?;
                split_hard(n / d, out)?;
                return Ok(());
            }
        }
    }
    Err(Error::FactorBudget {
        n: n.to_string(),
        cofactor: n.to_string(),
    })
}

fn pollard_rho(n: u64, c: u64) -> Option<u64> {
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let step = |x: u64| {
        let t = mul(x, x);
        let t = t + c;
        if t >= n {
            t - n
        } else {
            t
        }
    };
    let mut x = 2u64;
    let mut y = 2u64;
    let mut d = 1u64;
    let mut count = 0u64;
    while d == 1 {
        x = step(x);
        y = step(step(y));
        d = gcd_u64(x.abs_diff(y), n);
        count += 1;
        if count > 10_000_000 {
            return None;
        }
    }
    if d == n {
        None
    } else {
        Some(d)
    }
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| {
                if e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

impl fmt::Debug for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Factorization({self})")
    }
}

/// Wire form: factor pairs plus the decimal value for readability; the
/// value is re-checked on deserialization.
#[derive(Serialize, Deserialize)]
struct FactorizationRepr {
    value: String,
    factors: Vec<(String, u32)>,
}

impl From<Factorization> for FactorizationRepr {
    fn from(f: Factorization) -> Self {
        FactorizationRepr {
            value: f.value().to_string(),
            factors: f.factors.iter().map(|&(p, e)| (p.to_string(), e)).collect(),
        }
    }
}

impl TryFrom<FactorizationRepr> for Factorization {
    type Error = Error;

    fn try_from(repr: FactorizationRepr) -> Result<Self, Error> {
        let mut factors = Vec::with_capacity(repr.factors.len());
        for (p_str, e) in &repr.factors {
            let p: u64 = p_str
                .parse()
                .map_err(|_| Error::InvalidFactorization(format!("bad prime {p_str:?}")))?;
            factors.push((p, *e));
        }
        let f = Factorization::new(factors)?;
        let claimed = Integer::from_str_radix(&repr.value, 10)
            .map_err(|_| Error::InvalidFactorization("bad value string".into()))?;
        if f.value() != claimed {
            return Err(Error::InvalidFactorization(
                "value does not match factors".into(),
            ));
        }
        Ok(f)
    }
}
