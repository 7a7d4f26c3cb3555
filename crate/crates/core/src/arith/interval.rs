//! Outward-rounded interval scalars on top of MPFR directed rounding.
//! Every operation rounds the lower endpoint down and the upper endpoint
//! up, so the exact real value of any mirrored exact computation stays
//! inside the interval.

use rug::float::Round;
use rug::ops::{DivAssignRound, PowAssignRound};
use rug::{Float, Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

/// A certified enclosure `[lo, hi]` of a real number.
#[derive(Clone, PartialEq)]
pub struct CertifiedScalar {
    lo: Float,
    hi: Float,
}

impl CertifiedScalar {
    fn make(lo: Float, hi: Float) -> Self {
        debug_assert!(lo.is_finite() && hi.is_finite(), "non-finite endpoint");
        debug_assert!(lo <= hi, "inverted interval: {lo} > {hi}");
        CertifiedScalar { lo, hi }
    }

    pub fn exact_u64(v: u64, prec: u32) -> Self {
        let f = Float::with_val(prec.max(64), v);
        Self::make(f.clone(), f)
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        let lo = Float::with_val_round(prec, v, Round::Down).0;
        let hi = Float::with_val_round(prec, v, Round::Up).0;
        Self::make(lo, hi)
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        let lo = Float::with_val_round(prec, v, Round::Down).0;
        let hi = Float::with_val_round(prec, v, Round::Up).0;
        Self::make(lo, hi)
    }

    /// Zero-width zero, the additive identity for accumulation.
    pub fn zero(prec: u32) -> Self {
        let f = Float::with_val(prec, 0);
        Self::make(f.clone(), f)
    }

    /// Assemble from endpoints that are already directed correctly.
    pub(crate) fn from_endpoints(lo: Float, hi: Float) -> Self {
        Self::make(lo, hi)
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.lo.prec()
    }

    pub fn width(&self) -> Float {
        Float::with_val_round(self.lo.prec(), &self.hi - &self.lo, Round::Up).0
    }

    pub fn midpoint(&self) -> Float {
        let sum = Float::with_val(self.lo.prec(), &self.lo + &self.hi);
        sum / 2u32
    }

    fn prec_with(&self, other: &Self) -> u32 {
        self.lo.prec().max(other.lo.prec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec_with(other);
        Self::make(
            Float::with_val_round(p, &self.lo + &other.lo, Round::Down).0,
            Float::with_val_round(p, &self.hi + &other.hi, Round::Up).0,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prec_with(other);
        Self::make(
            Float::with_val_round(p, &self.lo - &other.hi, Round::Down).0,
            Float::with_val_round(p, &self.hi - &other.lo, Round::Up).0,
        )
    }

    pub fn neg(&self) -> Self {
        Self::make(
            Float::with_val(self.lo.prec(), -&self.hi),
            Float::with_val(self.lo.prec(), -&self.lo),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prec_with(other);
        let corners = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in corners {
            let down = Float::with_val_round(p, a * b, Round::Down).0;
            let up = Float::with_val_round(p, a * b, Round::Up).0;
            lo = Some(match lo {
                Some(cur) => cur.min(&down),
                None => down,
            });
            hi = Some(match hi {
                Some(cur) => cur.max(&up),
                None => up,
            });
        }
        Self::make(lo.unwrap(), hi.unwrap())
    }

    /// Reciprocal; the interval must not contain zero.
    pub fn recip(&self) -> Self {
        assert!(
            self.lo.is_sign_positive() && !self.lo.is_zero()
                || self.hi.is_sign_negative() && !self.hi.is_zero(),
            "reciprocal of an interval containing zero"
        );
        let p = self.lo.prec();
        let mut lo = Float::with_val(p, 1);
        lo.div_assign_round(&self.hi, Round::Down);
        let mut hi = Float::with_val(p, 1);
        hi.div_assign_round(&self.lo, Round::Up);
        Self::make(lo, hi)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// Natural log; requires a strictly positive interval.
    pub fn ln(&self) -> Self {
        assert!(
            self.lo.is_sign_positive() && !self.lo.is_zero(),
            "log of a non-positive interval"
        );
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo.ln_round(Round::Down);
        hi.ln_round(Round::Up);
        Self::make(lo, hi)
    }

    pub fn exp(&self) -> Self {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo.exp_round(Round::Down);
        hi.exp_round(Round::Up);
        Self::make(lo, hi)
    }

    /// k-th root; requires a nonnegative interval.
    pub fn root(&self, k: u32) -> Self {
        assert!(
            self.lo.is_sign_positive() || self.lo.is_zero(),
            "root of negative"
        );
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo.root_round(k, Round::Down);
        hi.root_round(k, Round::Up);
        Self::make(lo, hi)
    }

    pub fn pow_u32(&self, e: u32) -> Self {
        assert!(
            self.lo.is_sign_positive() || self.lo.is_zero(),
            "pow of negative base"
        );
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo.pow_assign_round(e, Round::Down);
        hi.pow_assign_round(e, Round::Up);
        Self::make(lo, hi)
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        self.mul(&Self::from_rational(r, self.lo.prec()))
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        self.lo <= *r && *r <= self.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn encloses(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// The whole interval lies strictly below `r`.
    pub fn certainly_below(&self, r: &Rational) -> bool {
        self.hi < *r
    }

    /// The whole interval lies at or above `r`.
    pub fn certainly_at_least(&self, r: &Rational) -> bool {
        self.lo >= *r
    }

    /// The whole interval lies strictly above `r`.
    pub fn certainly_above(&self, r: &Rational) -> bool {
        self.lo > *r
    }

    /// Decimal endpoint strings, lower rounded down and upper rounded up,
    /// so the printed interval still contains the value.
    pub fn endpoint_strings(&self) -> (String, String) {
        let digits = (self.lo.prec() as f64 * std::f64::consts::LOG10_2) as usize + 2;
        (
            self.lo.to_string_radix_round(10, Some(digits), Round::Down),
            self.hi.to_string_radix_round(10, Some(digits), Round::Up),
        )
    }
}

/// Enclosure of ln(r) for an exact positive rational.
pub fn ln_rational(r: &Rational, prec: u32) -> CertifiedScalar {
    CertifiedScalar::from_rational(r, prec).ln()
}

impl fmt::Debug for CertifiedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.endpoint_strings();
        write!(f, "[{lo}, {hi}]")
    }
}

impl fmt::Display for CertifiedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.endpoint_strings();
        write!(f, "[{lo}, {hi}]")
    }
}

impl Serialize for CertifiedScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (lo, hi) = self.endpoint_strings();
        let mut s = serializer.serialize_struct("CertifiedScalar", 3)?;
        s.serialize_field("lo", &lo)?;
        s.serialize_field("hi", &hi)?;
        s.serialize_field("bits", &self.precision_bits())?;
        s.end()
    }
}
