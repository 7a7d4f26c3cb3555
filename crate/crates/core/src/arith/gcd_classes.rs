//! Gcd classes of a modulus M: the multiset `{(i, M) : 1 <= i <= M}`
//! compressed to one entry per divisor d with weight phi(M/d).

use rug::ops::Pow;
use rug::Integer;

use super::factor::Factorization;
use crate::error::Error;

#[derive(Clone, Debug)]
pub struct GcdClass {
    pub divisor: Factorization,
    /// Number of i in [1, M] with (i, M) equal to the divisor: phi(M/d).
    pub weight: Integer,
}

#[derive(Clone, Debug)]
pub struct GcdClassProfile {
    modulus: Factorization,
    classes: Vec<GcdClass>,
}

impl GcdClassProfile {
    pub fn modulus(&self) -> &Factorization {
        &self.modulus
    }

    pub fn classes(&self) -> &[GcdClass] {
        &self.classes
    }

    /// Sum of weights; always equals the modulus value.
    pub fn weight_sum(&self) -> Integer {
        self.classes.iter().map(|c| &c.weight).sum()
    }
}

/// One entry per divisor d | M with weight phi(M/d), in depth-first
/// lattice order over the canonical prime list.
pub fn gcd_class_profile(m: &Factorization, budget: u64) -> Result<GcdClassProfile, Error> {
    let m_factors = m.factors().to_vec();
    let mut classes = Vec::with_capacity(m.divisor_count().min(1 << 20) as usize);
    m.for_each_divisor(budget, &mut |exps, _d, _s| {
        let mut div_factors = Vec::new();
        let mut weight = Integer::from(1);
        for (&(p, e_m), &e_d) in m_factors.iter().zip(exps) {
            if e_d > 0 {
                div_factors.push((p, e_d));
            }
            let rem = e_m - e_d; // exponent of p in M/d
            if rem > 0 {
                weight *= Integer::from(p).pow(rem - 1) * Integer::from(p - 1);
            }
        }
        classes.push(GcdClass {
            divisor: Factorization::from_ascending_primes_unchecked(div_factors),
            weight,
        });
    })?;
    Ok(GcdClassProfile {
        modulus: m.clone(),
        classes,
    })
}
