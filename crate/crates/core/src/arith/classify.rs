//! Abundant/deficient classification under the convention
//! `sigma(n) >= 2n`, which makes perfect numbers abundant. The perfect
//! flag is reported separately for users of the strict convention.

use rug::Integer;
use serde::Serialize;

use super::factor::Factorization;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Abundant,
    Deficient,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub n: u64,
    pub kind: Kind,
    pub is_perfect: bool,
    #[serde(serialize_with = "crate::ser_integer")]
    pub sigma: Integer,
}

/// Classify n by comparing sigma(n) with 2n exactly.
pub fn classify(n: u64) -> Result<Classification, Error> {
    let f = Factorization::factorize(n)?;
    Ok(classify_factored(n, &f))
}

pub fn classify_factored(n: u64, f: &Factorization) -> Classification {
    let sigma = f.sigma();
    let twice = Integer::from(n) * 2u32;
    let kind = if sigma >= twice {
        Kind::Abundant
    } else {
        Kind::Deficient
    };
    Classification {
        n,
        kind,
        is_perfect: sigma == twice,
        sigma,
    }
}
