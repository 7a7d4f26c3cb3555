//! Crate-wide error type. Oversized inputs fail with a budget error
//! instead of silently degrading.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("sieve limit {limit} exceeds the configured budget of {budget}")]
    SieveBudget { limit: u64, budget: u64 },

    #[error("factorization budget exceeded for {n}: cofactor {cofactor} has no small factor")]
    FactorBudget { n: String, cofactor: String },

    #[error("divisor enumeration budget exceeded: more than {budget} lattice nodes")]
    DivisorBudget { budget: u64 },

    #[error("prime stream exhausted: needed a prime above {reached}, budget ends at {budget}")]
    PrimeStreamBudget { reached: u64, budget: u64 },

    #[error("moduli are not pairwise coprime: prime {prime} is shared")]
    NonCoprimeModuli { prime: u64 },

    #[error("residue {residue} is not reduced modulo {modulus}")]
    UnreducedResidue { residue: String, modulus: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("vacuous bound: {0}")]
    VacuousBound(String),

    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by a compute/memory budget, as opposed to
    /// malformed input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::SieveBudget { .. }
                | Error::FactorBudget { .. }
                | Error::DivisorBudget { .. }
                | Error::PrimeStreamBudget { .. }
        )
    }
}
