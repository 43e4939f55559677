//! Exact integers and rationals, plus the factorial family used by every
//! count and coefficient formula.
//!
//! Rationals are `num_rational::BigRational`, which normalizes on
//! construction (lowest terms, positive denominator), so equality is value
//! equality.

use std::str::FromStr;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("double factorial is only defined here for odd n >= -1, got {0}")]
    InvalidDoubleFactorial(i64),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// `n!` for `n >= 0`.
///
/// Panics on negative input; use [`inv_factorial_or_zero`] where a negative
/// argument is meaningful.
pub fn factorial(n: i64) -> BigInt {
    assert!(n >= 0, "factorial of negative number {n}");
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `1/x!`, taken to be `0` when `x < 0`.
pub fn inv_factorial_or_zero(x: i64) -> BigRational {
    if x < 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::one(), factorial(x))
    }
}

/// `(2m+1)!! = 1·3·…·(2m+1)`, with `(-1)!! = 1`.
pub fn double_factorial_odd(n: i64) -> Result<BigInt, ExactError> {
    if n < -1 || n.rem_euclid(2) == 0 {
        return Err(ExactError::InvalidDoubleFactorial(n));
    }
    Ok((1..=n).step_by(2).fold(BigInt::one(), |acc, k| acc * k))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^e` as a rational, for any sign of `e`.
pub fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Inverse of [`format_rational`]; also accepts non-reduced input.
pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let err = || ExactError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| err())?,
        )),
    }
}

/// Least common multiple of the denominators of `xs` (1 for an empty slice).
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    use num_integer::Integer;
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Number of bits in the numerator and denominator; a cheap size measure
/// for pivot selection.
pub fn bit_size(x: &BigRational) -> u64 {
    x.numer().abs().bits() + x.denom().bits()
}
