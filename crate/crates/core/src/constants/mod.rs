//! Certified evaluation of the constants controlling the growth of
//! E(x): the prime double product beta, the gcd-class geometric means
//! G_M, delta_M, tau_M, upsilon_M, the rate constants rho1/rho2, and the
//! bracket for the limit value.

pub mod beta;
pub mod means;
pub mod mu;
pub mod report;
pub mod search;

pub use beta::beta;
pub use means::{delta, g_mean, rho1, rho2, tau_direct, tau_from_identity, upsilon};
pub use mu::build_mu;
pub use report::{bounds_report, bounds_report_with_beta, BoundsReport, ReportConfig};
pub use search::{search_modulus, SearchOutcome};
