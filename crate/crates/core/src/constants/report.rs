//! The assembled bounds report for one modulus: every constant the
//! theorems attach to M, plus the bracket they imply for the limit of
//! E(x)/logloglog x.

use rug::Rational;
use serde::Serialize;

use super::beta::beta;
use super::means::{delta, g_mean, rho1, rho2, tau_from_identity};
use crate::arith::factor::Factorization;
use crate::arith::interval::CertifiedScalar;
use crate::error::Error;

#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub alpha: Rational,
    pub precision_bits: u32,
    pub beta_prime_limit: u64,
    pub beta_depth: u32,
    pub divisor_budget: u64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            alpha: Rational::from(2),
            precision_bits: crate::DEFAULT_PRECISION,
            beta_prime_limit: 10_000,
            beta_depth: 40,
            divisor_budget: 1 << 24,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub modulus: Factorization,
    #[serde(serialize_with = "crate::ser_rational")]
    pub alpha: Rational,
    pub delta: CertifiedScalar,
    pub tau: CertifiedScalar,
    #[serde(rename = "G")]
    pub g: CertifiedScalar,
    pub upsilon: CertifiedScalar,
    /// Absent when delta does not certifiably exceed beta (possible for
    /// alpha below 2); the upper-bound rate is then unavailable.
    pub rho1: Option<CertifiedScalar>,
    pub rho2: CertifiedScalar,
    pub beta_used: CertifiedScalar,
    pub omega_lower: CertifiedScalar,
    pub omega_upper: CertifiedScalar,
    pub limit_lower: CertifiedScalar,
    pub limit_upper: Option<CertifiedScalar>,
}

/// Full report; beta is computed fresh at the configured budget.
pub fn bounds_report(m: &Factorization, cfg: &ReportConfig) -> Result<BoundsReport, Error> {
    let beta_val = beta(cfg.beta_prime_limit, cfg.beta_depth, cfg.precision_bits)?;
    bounds_report_with_beta(m, cfg, &beta_val)
}

/// Same, reusing an already certified beta (the search path computes
/// beta once for many candidate moduli).
pub fn bounds_report_with_beta(
    m: &Factorization,
    cfg: &ReportConfig,
    beta_val: &CertifiedScalar,
) -> Result<BoundsReport, Error> {
    let prec = cfg.precision_bits;
    let d = delta(m, &cfg.alpha, prec, cfg.divisor_budget)?;
    let g = g_mean(m, prec);
    let t = tau_from_identity(&cfg.alpha, &d, &g);
    let u = d.div(&g); // alpha/tau = delta/G
    let r2 = rho2(&cfg.alpha, &t)?;
    let r1 = match rho1(&d, beta_val) {
        Ok(v) => Some(v),
        Err(Error::VacuousBound(_)) => None,
        Err(e) => return Err(e),
    };
    let omega_lower = d.div(beta_val);
    let omega_upper = u.clone();

    debug_assert!(
        d.mul(&t).overlaps(&g.mul_rational(&cfg.alpha)),
        "delta*tau != alpha*G"
    );
    debug_assert!(
        t.recip().mul_rational(&cfg.alpha).overlaps(&u),
        "upsilon != alpha/tau"
    );

    Ok(BoundsReport {
        modulus: m.clone(),
        alpha: cfg.alpha.clone(),
        delta: d,
        tau: t,
        g,
        upsilon: u,
        limit_lower: r2.clone(),
        limit_upper: r1.clone(),
        rho1: r1,
        rho2: r2,
        beta_used: beta_val.clone(),
        omega_lower,
        omega_upper,
    })
}

impl BoundsReport {
    pub const CSV_HEADER: &'static str = "modulus,alpha,delta_lo,delta_hi,tau_lo,tau_hi,G_lo,G_hi,upsilon_lo,upsilon_hi,rho1_lo,rho1_hi,rho2_lo,rho2_hi,beta_lo,beta_hi,omega_lower_lo,omega_lower_hi,omega_upper_lo,omega_upper_hi,limit_lower_lo,limit_lower_hi,limit_upper_lo,limit_upper_hi";

    /// One CSV row matching [`Self::CSV_HEADER`].
    pub fn to_csv_row(&self) -> String {
        fn pair(v: &CertifiedScalar) -> String {
            let (lo, hi) = v.endpoint_strings();
            format!("{lo},{hi}")
        }
        fn opt_pair(v: &Option<CertifiedScalar>) -> String {
            match v {
                Some(v) => pair(v),
                None => ",".to_string(),
            }
        }
        format!(
            "{},{}/{},{},{},{},{},{},{},{},{},{},{},{}",
            self.modulus.value(),
            self.alpha.numer(),
            self.alpha.denom(),
            pair(&self.delta),
            pair(&self.tau),
            pair(&self.g),
            pair(&self.upsilon),
            opt_pair(&self.rho1),
            pair(&self.rho2),
            pair(&self.beta_used),
            pair(&self.omega_lower),
            pair(&self.omega_upper),
            pair(&self.limit_lower),
            opt_pair(&self.limit_upper),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact(n: u64) -> Factorization {
        Factorization::factorize(n).unwrap()
    }

    fn small_cfg() -> ReportConfig {
        ReportConfig {
            beta_prime_limit: 500,
            beta_depth: 20,
            ..Default::default()
        }
    }

    #[test]
    fn trivial_modulus_report() {
        let r = bounds_report(&fact(1), &small_cfg()).unwrap();
        // delta = 2 and tau = 1 exactly; omega bracket [2/beta, 2]
        assert!(r.delta.contains_rational(&Rational::from(2)));
        assert!(r.tau.contains_rational(&Rational::from(1)));
        assert!(r.omega_upper.contains_rational(&Rational::from(2)));
        let two_over_beta =
            CertifiedScalar::from_rational(&Rational::from(2), 128).div(&r.beta_used);
        assert!(r.omega_lower.overlaps(&two_over_beta));
        // identities wired into the report
        assert!(r.limit_lower.overlaps(&r.rho2));
        assert!(r
            .limit_upper
            .as_ref()
            .unwrap()
            .overlaps(r.rho1.as_ref().unwrap()));
    }

    #[test]
    fn internal_consistency_across_moduli() {
        let cfg = small_cfg();
        let beta_val = beta(cfg.beta_prime_limit, cfg.beta_depth, cfg.precision_bits).unwrap();
        for m in [1u64, 2, 6, 12, 30, 720, 720_720] {
            let r = bounds_report_with_beta(&fact(m), &cfg, &beta_val).unwrap();
            // delta*tau and alpha*G overlap
            assert!(
                r.delta.mul(&r.tau).overlaps(&r.g.mul_rational(&r.alpha)),
                "m={m} identity delta*tau = alpha*G"
            );
            // upsilon and alpha/tau overlap
            assert!(
                r.upsilon.overlaps(&r.tau.recip().mul_rational(&r.alpha)),
                "m={m} identity upsilon = alpha/tau"
            );
            // rho2 <= rho1 inside one report
            let r1 = r.rho1.as_ref().unwrap();
            assert!(r.rho2.lo() <= r1.hi(), "m={m} rho2 > rho1");
            // tau <= alpha <= delta up to rounding
            assert!(
                !r.tau.certainly_at_least(&Rational::from((20_001, 10_000))),
                "m={m}"
            );
            assert!(
                !r.delta.certainly_below(&Rational::from((19_999, 10_000))),
                "m={m}"
            );
        }
    }

    #[test]
    fn alpha_three_halves_report_is_consistent() {
        let cfg = ReportConfig {
            alpha: Rational::from((3, 2)),
            ..small_cfg()
        };
        let r = bounds_report(&fact(6), &cfg).unwrap();
        assert!(r.delta.mul(&r.tau).overlaps(&r.g.mul_rational(&r.alpha)));
        // delta^(3/2)_6 = (3/2)(4/3)^(1/6) ~ 1.5737 stays above beta ~ 1.562
        assert!(r.rho1.is_some());
    }

    #[test]
    fn csv_row_has_header_arity() {
        let r = bounds_report(&fact(6), &small_cfg()).unwrap();
        let row = r.to_csv_row();
        assert_eq!(
            row.split(',').count(),
            BoundsReport::CSV_HEADER.split(',').count()
        );
    }

    #[test]
    fn json_fields_present() {
        let r = bounds_report(&fact(2), &small_cfg()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "modulus",
            "alpha",
            "delta",
            "tau",
            "G",
            "upsilon",
            "rho1",
            "rho2",
            "beta_used",
            "omega_lower",
            "omega_upper",
            "limit_lower",
            "limit_upper",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["alpha"].as_str().unwrap(), "2/1");
    }
}
