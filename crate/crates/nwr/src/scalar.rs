//! Exact scalar arithmetic for payoffs.
//!
//! Every utility comparison in this crate is exact; floating point is never
//! used for payoffs. The [`Scalar`] trait abstracts over the concrete
//! rational representation so that games, solvers, and reductions work with
//! either machine-word rationals ([`Rational`]) or arbitrary-precision ones
//! ([`BigRat`]).

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};
use std::fmt::{Debug, Display};

use crate::error::ParseError;

/// Machine-word exact rational, the default payoff type.
pub type Rational = Ratio<i64>;

/// Arbitrary-precision exact rational.
pub type BigRat = BigRational;

/// An exact, totally ordered rational scalar.
pub trait Scalar:
    Num + Signed + Clone + Ord + Debug + Display + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self;

    /// Exact quotient of two integers. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Canonical `num/den` rendering (the denominator is always printed).
    fn to_frac_string(&self) -> String;

    /// Parses a `num/den` string (both parts decimal integers).
    fn parse_frac(s: &str) -> Result<Self, ParseError>;
}

fn split_frac(s: &str) -> Result<(&str, &str), ParseError> {
    s.split_once('/')
        .ok_or_else(|| ParseError::new(format!("expected <num>/<den>, got `{s}`")))
}

impl Scalar for Rational {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn to_frac_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_frac(s: &str) -> Result<Self, ParseError> {
        let (n, d) = split_frac(s)?;
        let num: i64 = n
            .parse()
            .map_err(|_| ParseError::new(format!("bad numerator `{n}`")))?;
        let den: i64 = d
            .parse()
            .map_err(|_| ParseError::new(format!("bad denominator `{d}`")))?;
        if den <= 0 {
            return Err(ParseError::new(format!("denominator must be positive: `{s}`")));
        }
        Ok(Ratio::new(num, den))
    }
}

impl Scalar for BigRat {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_frac_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_frac(s: &str) -> Result<Self, ParseError> {
        let (n, d) = split_frac(s)?;
        let num = BigInt::from_str_radix(n, 10)
            .map_err(|_| ParseError::new(format!("bad numerator `{n}`")))?;
        let den = BigInt::from_str_radix(d, 10)
            .map_err(|_| ParseError::new(format!("bad denominator `{d}`")))?;
        if !den.is_positive() {
            return Err(ParseError::new(format!("denominator must be positive: `{s}`")));
        }
        Ok(BigRational::new(num, den))
    }
}

/// Integer ceiling of `num * k / den` for a non-negative exact fraction.
pub fn ceil_mul(num: i64, den: i64, k: u64) -> u64 {
    debug_assert!(num >= 0 && den > 0);
    let prod = (num as u128) * (k as u128);
    prod.div_ceil(den as u128) as u64
}
