//! Geometric means over the gcd classes of a modulus M.
//!
//! The product over i = 1..M compresses to divisors: i with (i, M) = d
//! number exactly phi(M/d), so
//!
//!   log delta = log a + (1/M) sum_{d | M, sigma(d)/d > a} phi(M/d)
//!               (log(sigma(d)/d) - log a)
//!
//! with a the abundancy threshold (2 in the main theorem). Only the
//! up-set of divisors past the threshold is enumerated; subtrees whose
//! largest member is still below threshold are pruned via the
//! divisibility monotonicity of sigma(n)/n. tau comes from the exact
//! pointwise identity max{x,a} min{x,a} = a x, giving tau = a G / delta,
//! and G has a per-prime closed form costing only the sum of exponents.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::arith::factor::{sigma_prime_power, Factorization};
use crate::arith::interval::{ln_rational, CertifiedScalar};
use crate::error::Error;

/// G_M = (prod_{i=1..M} sigma((i,M))/(i,M))^(1/M) via the per-prime
/// exponent counts: p^t divides exactly M/p^t of the i in [1, M].
pub fn g_mean(m: &Factorization, prec: u32) -> CertifiedScalar {
    let mut log_g = CertifiedScalar::zero(prec);
    for &(p, e) in m.factors() {
        let mut p_pow = Integer::from(p); // p^t
        for t in 1..=e {
            let ratio = Rational::from((sigma_prime_power(p, t), p_pow.clone()));
            // weight p^-t - p^-(t-1-...) collapses to (p-1)/p^(t+1) below
            // the top exponent and p^-e at the top
            let weight = if t < e {
                Rational::from((Integer::from(p - 1), Integer::from(&p_pow * p)))
            } else {
                Rational::from((Integer::from(1), p_pow.clone()))
            };
            log_g = log_g.add(&ln_rational(&ratio, prec).mul_rational(&weight));
            p_pow *= p;
        }
    }
    log_g.exp()
}

/// delta_M at threshold alpha: geometric mean of max{sigma((i,M))/(i,M), alpha}.
pub fn delta(
    m: &Factorization,
    alpha: &Rational,
    prec: u32,
    budget: u64,
) -> Result<CertifiedScalar, Error> {
    if *alpha < 1 {
        return Err(Error::InvalidInput("alpha must be >= 1".into()));
    }
    let ln_alpha = ln_rational(alpha, prec);
    let correction = upset_log_sum(m, alpha, &ln_alpha, prec, budget, UpsetSide::Above)?;
    let log_delta = ln_alpha.add(&scale_by_inverse_modulus(&correction, m, prec));
    Ok(log_delta.exp())
}

/// tau_M from the identity tau = alpha G / delta.
pub fn tau_from_identity(
    alpha: &Rational,
    delta_val: &CertifiedScalar,
    g_val: &CertifiedScalar,
) -> CertifiedScalar {
    g_val.mul_rational(alpha).div(delta_val)
}

/// tau_M the slow way, enumerating the divisors below threshold;
/// cross-check path for moderate divisor counts.
pub fn tau_direct(
    m: &Factorization,
    alpha: &Rational,
    prec: u32,
    budget: u64,
) -> Result<CertifiedScalar, Error> {
    if *alpha < 1 {
        return Err(Error::InvalidInput("alpha must be >= 1".into()));
    }
    let ln_alpha = ln_rational(alpha, prec);
    let correction = upset_log_sum(m, alpha, &ln_alpha, prec, budget, UpsetSide::Below)?;
    let log_tau = ln_alpha.add(&scale_by_inverse_modulus(&correction, m, prec));
    Ok(log_tau.exp())
}

/// upsilon_M = alpha/tau_M = delta_M/G_M, the quantity whose infimum
/// over M is the base of the limit.
pub fn upsilon(
    m: &Factorization,
    alpha: &Rational,
    prec: u32,
    budget: u64,
) -> Result<CertifiedScalar, Error> {
    let d = delta(m, alpha, prec, budget)?;
    let g = g_mean(m, prec);
    Ok(d.div(&g))
}

/// rho1 = 1/(log delta - log beta); errors when the bound is vacuous
/// (delta not certifiably above beta).
pub fn rho1(
    delta_val: &CertifiedScalar,
    beta_val: &CertifiedScalar,
) -> Result<CertifiedScalar, Error> {
    if delta_val.lo() <= beta_val.hi() {
        return Err(Error::VacuousBound(format!(
            "delta {delta_val} does not exceed beta {beta_val}"
        )));
    }
    let diff = delta_val.ln().sub(&beta_val.ln());
    // the value-space gap can be below log rounding resolution
    if diff.lo().is_sign_negative() || diff.lo().is_zero() {
        return Err(Error::VacuousBound(
            "delta - beta gap is below the working precision".into(),
        ));
    }
    Ok(diff.recip())
}

/// rho2 = 1/(log alpha - log tau); errors when tau is not certifiably
/// below alpha (e.g. alpha = 1).
pub fn rho2(alpha: &Rational, tau_val: &CertifiedScalar) -> Result<CertifiedScalar, Error> {
    if !tau_val.certainly_below(alpha) {
        return Err(Error::VacuousBound(format!(
            "tau {tau_val} not certifiably below alpha {alpha}"
        )));
    }
    let diff = ln_rational(alpha, tau_val.precision_bits()).sub(&tau_val.ln());
    if diff.lo().is_sign_negative() || diff.lo().is_zero() {
        return Err(Error::VacuousBound(
            "alpha - tau gap is below the working precision".into(),
        ));
    }
    Ok(diff.recip())
}

#[derive(Clone, Copy, PartialEq)]
enum UpsetSide {
    /// Divisors with sigma(d)/d > alpha (they carry the max-branch).
    Above,
    /// Divisors with sigma(d)/d < alpha (they carry the min-branch).
    Below,
}

/// sum over the selected side of phi(M/d) (log(sigma(d)/d) - log alpha).
/// Divisors exactly on the threshold contribute log alpha to both
/// branches, so neither side includes them; the comparison is exact
/// rational, never floating.
fn upset_log_sum(
    m: &Factorization,
    alpha: &Rational,
    ln_alpha: &CertifiedScalar,
    prec: u32,
    budget: u64,
    side: UpsetSide,
) -> Result<CertifiedScalar, Error> {
    let factors = m.factors();
    let n = factors.len();
    // suffix[i] = (value, sigma) of prod_{j >= i} p_j^{e_j}: the largest
    // extension available below position i in the lattice walk
    let mut suffix_value = vec![Integer::from(1); n + 1];
    let mut suffix_sigma = vec![Integer::from(1); n + 1];
    for i in (0..n).rev() {
        let (p, e) = factors[i];
        suffix_value[i] = Integer::from(&suffix_value[i + 1] * &Integer::from(p).pow(e));
        suffix_sigma[i] = Integer::from(&suffix_sigma[i + 1] * &sigma_prime_power(p, e));
    }

    let mut walker = UpsetWalker {
        factors,
        alpha_num: alpha.numer().clone(),
        alpha_den: alpha.denom().clone(),
        suffix_value,
        suffix_sigma,
        exps: vec![0u32; n],
        sum: CertifiedScalar::zero(prec),
        ln_alpha,
        prec,
        side,
        visited: 0,
        budget,
    };
    walker.walk(0, &Integer::from(1), &Integer::from(1))?;
    Ok(walker.sum)
}

struct UpsetWalker<'a> {
    factors: &'a [(u64, u32)],
    alpha_num: Integer,
    alpha_den: Integer,
    suffix_value: Vec<Integer>,
    suffix_sigma: Vec<Integer>,
    exps: Vec<u32>,
    sum: CertifiedScalar,
    ln_alpha: &'a CertifiedScalar,
    prec: u32,
    side: UpsetSide,
    visited: u64,
    budget: u64,
}

impl UpsetWalker<'_> {
    /// sigma(d)/d versus alpha by exact cross-multiplication.
    fn cmp_threshold(&self, d: &Integer, s: &Integer) -> std::cmp::Ordering {
        let lhs = Integer::from(s * &self.alpha_den);
        let rhs = Integer::from(d * &self.alpha_num);
        lhs.cmp(&rhs)
    }

    fn walk(&mut self, pos: usize, d: &Integer, s: &Integer) -> Result<(), Error> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::DivisorBudget {
                budget: self.budget,
            });
        }
        if pos == self.factors.len() {
            // a complete exponent assignment: one divisor
            let wanted = match self.side {
                UpsetSide::Above => std::cmp::Ordering::Greater,
                UpsetSide::Below => std::cmp::Ordering::Less,
            };
            if self.cmp_threshold(d, s) == wanted {
                self.emit(d, s);
            }
            return Ok(());
        }
        match self.side {
            UpsetSide::Above => {
                // largest index in this subtree is at d * full suffix;
                // if even that stays <= alpha nothing here qualifies
                let max_d = Integer::from(d * &self.suffix_value[pos]);
                let max_s = Integer::from(s * &self.suffix_sigma[pos]);
                if self.cmp_threshold(&max_d, &max_s) != std::cmp::Ordering::Greater {
                    return Ok(());
                }
            }
            UpsetSide::Below => {
                // the index only grows along divisibility; once d itself
                // reaches alpha the whole subtree is out of the down-set
                if self.cmp_threshold(d, s) != std::cmp::Ordering::Less {
                    return Ok(());
                }
            }
        }
        let (p, e_max) = self.factors[pos];
        let mut p_pow = Integer::from(1);
        let mut sig_pp = Integer::from(1);
        for j in 0..=e_max {
            if j > 0 {
                p_pow *= p;
                sig_pp += &p_pow;
            }
            let d_next = Integer::from(d * &p_pow);
            let s_next = Integer::from(s * &sig_pp);
            self.exps[pos] = j;
            self.walk(pos + 1, &d_next, &s_next)?;
        }
        self.exps[pos] = 0;
        Ok(())
    }

    fn emit(&mut self, d: &Integer, s: &Integer) {
        let weight = self.phi_complement();
        let ratio = Rational::from((s.clone(), d.clone()));
        let term = ln_rational(&ratio, self.prec)
            .sub(self.ln_alpha)
            .mul(&CertifiedScalar::from_integer(&weight, self.prec));
        self.sum = self.sum.add(&term);
    }

    /// phi(M/d) from the current exponent vector.
    fn phi_complement(&self) -> Integer {
        let mut w = Integer::from(1);
        for (&(p, e_m), &e_d) in self.factors.iter().zip(&self.exps) {
            let rem = e_m - e_d;
            if rem > 0 {
                w *= Integer::from(p).pow(rem - 1) * Integer::from(p - 1);
            }
        }
        w
    }
}

fn scale_by_inverse_modulus(
    sum: &CertifiedScalar,
    m: &Factorization,
    prec: u32,
) -> CertifiedScalar {
    sum.div(&CertifiedScalar::from_integer(&m.value(), prec))
}
