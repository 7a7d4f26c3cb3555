//! Finite search over candidate moduli for the narrowest bracket on the
//! limit value; beta is certified once and shared.

use serde::Serialize;

use super::beta::beta;
use super::report::{bounds_report_with_beta, BoundsReport, ReportConfig};
use crate::arith::factor::Factorization;
use crate::error::Error;

#[derive(Clone, Debug, Serialize)]
pub struct CandidateSummary {
    pub modulus: String,
    /// Bracket [limit_lower.lo, limit_upper.hi]; upper missing when the
    /// rho1 bound is vacuous for this candidate.
    pub bracket: Option<(String, String)>,
    pub width: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SearchOutcome {
    pub best_index: usize,
    pub best: BoundsReport,
    pub candidates: Vec<CandidateSummary>,
}

/// Evaluate every candidate and keep the narrowest finite bracket;
/// ties break to the earliest candidate.
pub fn search_modulus(
    candidates: &[Factorization],
    cfg: &ReportConfig,
) -> Result<SearchOutcome, Error> {
    if candidates.is_empty() {
        return Err(Error::EmptyInput("no candidate moduli"));
    }
    let beta_val = beta(cfg.beta_prime_limit, cfg.beta_depth, cfg.precision_bits)?;

    let mut best: Option<(usize, f64, BoundsReport)> = None;
    let mut summaries = Vec::with_capacity(candidates.len());
    for (i, m) in candidates.iter().enumerate() {
        let report = bounds_report_with_beta(m, cfg, &beta_val)?;
        let (bracket, width) = match &report.limit_upper {
            Some(upper) => {
                let w = upper.hi().to_f64() - report.limit_lower.lo().to_f64();
                (
                    Some((
                        report.limit_lower.endpoint_strings().0,
                        upper.endpoint_strings().1,
                    )),
                    Some(w),
                )
            }
            None => (None, None),
        };
        summaries.push(CandidateSummary {
            modulus: m.to_string(),
            bracket,
            width,
        });
        let w = width.unwrap_or(f64::INFINITY);
        let better = match &best {
            Some((_, best_w, _)) => w < *best_w,
            None => true,
        };
        if better {
            best = Some((i, w, report));
        }
    }
    let (best_index, _, best) = best.expect("nonempty candidates");
    Ok(SearchOutcome {
        best_index,
        best,
        candidates: summaries,
    })
}
