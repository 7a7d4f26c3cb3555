//! Chinese remainder solving over factored, pairwise-coprime moduli.

use rug::ops::{Pow, RemRounding};
use rug::Integer;

use super::factor::Factorization;
use super::product::ProductAccumulator;
use crate::error::Error;

/// Solve `x = r_i (mod m_i)` for factored moduli. Coprimality is checked
/// exactly via prime-set disjointness. Returns the least positive
/// solution, i.e. the representative in `[1, prod m_i]`.
///
/// Moduli are combined smallest first, so a system with one huge modulus
/// and several small ones never runs an extended gcd on two huge
/// operands.
pub fn crt_solve(congruences: &[(Integer, Factorization)]) -> Result<Integer, Error> {
    if congruences.is_empty() {
        return Err(Error::EmptyInput("no congruences"));
    }

    // pairwise coprime == no prime appears in two moduli
    let mut all_primes: Vec<u64> = congruences
        .iter()
        .flat_map(|(_, m)| m.factors().iter().map(|&(p, _)| p))
        .collect();
    all_primes.sort_unstable();
    if let Some(w) = all_primes.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::NonCoprimeModuli { prime: w[0] });
    }

    let mut parts: Vec<(Integer, Integer)> = Vec::with_capacity(congruences.len());
    for (r, m) in congruences {
        let mut acc = ProductAccumulator::new();
        for &(p, e) in m.factors() {
            if e == 1 {
                acc.push_u64(p);
            } else {
                acc.push(Integer::from(p).pow(e));
            }
        }
        let value = acc.finish();
        if *r < 0 || *r >= value {
            return Err(Error::UnreducedResidue {
                residue: r.to_string(),
                modulus: value.to_string(),
            });
        }
        parts.push((r.clone(), value));
    }
    Ok(combine_coprime(parts))
}

/// Core combine over pairwise-coprime (residue, modulus) pairs, smallest
/// modulus first; returns the representative in [1, prod moduli].
///
/// Residues may be any integers (reduction happens on the fly), which
/// lets callers pass tiny signed residues like -i: the inner multiply is
/// then small-by-big instead of big-by-big.
pub(crate) fn combine_coprime(mut parts: Vec<(Integer, Integer)>) -> Integer {
    assert!(!parts.is_empty());
    parts.sort_by(|a, b| a.1.cmp(&b.1));
    let mut x = Integer::from((&parts[0].0).rem_euc(&parts[0].1));
    let mut n = parts[0].1.clone();
    if parts.len() == 1 {
        return if x == 0 { n } else { x };
    }
    for (i, (r, m)) in parts.iter().enumerate().skip(1) {
        if m.significant_bits() > n.significant_bits() {
            // the new modulus is the big side; lift on it so the
            // extended gcd runs on the small modulus only:
            // x' = r + m*s with s = (x - r) / m  (mod n)
            let m_mod_n = Integer::from(m % &n);
            let inv = m_mod_n.invert(&n).expect("moduli must be pairwise coprime");
            let mut s = Integer::from(&x - r);
            s *= inv;
            s = s.rem_euc(&n);
            x = Integer::from(m * &s);
            x += r;
        } else {
            // x' = x + n*t with t = (r - x) / n  (mod m)
            let n_mod_m = Integer::from(&n % m);
            let inv = n_mod_m.invert(m).expect("moduli must be pairwise coprime");
            let mut t = Integer::from(r - &x);
            t *= inv;
            t = t.rem_euc(m);
            x += n.clone() * t;
        }
        if i + 1 < parts.len() {
            n *= m;
        } else if x < 1 {
            // normalize into [1, prod moduli]; only this corner needs
            // the full product
            x += Integer::from(&n * m);
        }
    }
    x
}
