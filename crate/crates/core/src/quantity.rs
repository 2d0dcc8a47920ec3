//! Resource amounts. Exact runs use integers (checked `u64` or unbounded
//! `BigUint`) so strict inequalities and conservation are decided exactly;
//! `f64` is for i.i.d. continuous experiments.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Quantity:
    Clone + PartialEq + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Whether comparisons and sums are exact.
    const EXACT: bool;

    fn zero() -> Self;

    fn is_zero(&self) -> bool;

    fn from_u64(v: u64) -> Self;

    /// Converts a finite nonnegative sample; exact types demand an integer.
    fn from_f64(v: f64) -> Result<Self>;

    fn checked_sum(&self, other: &Self) -> Result<Self>;

    fn to_f64(&self) -> f64;

    fn parse(s: &str) -> Result<Self>;

    fn accumulate(&mut self, other: &Self) -> Result<()> {
        *self = self.checked_sum(other)?;
        Ok(())
    }
}

fn check_sample(v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::Domain(format!("resource amount {v} is not finite")));
    }
    if v < 0.0 {
        return Err(Error::Domain(format!("resource amount {v} is negative")));
    }
    Ok(())
}

fn integral(v: f64) -> Result<f64> {
    check_sample(v)?;
    if v.fract() != 0.0 {
        return Err(Error::Domain(format!(
            "{v} is not an integer; exact mode needs integer amounts"
        )));
    }
    Ok(v)
}

impl Quantity for u64 {
    const EXACT: bool = true;

    fn zero() -> Self {
        0
    }

    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn from_u64(v: u64) -> Self {
        v
    }

    fn from_f64(v: f64) -> Result<Self> {
        let v = integral(v)?;
        if v >= u64::MAX as f64 {
            return Err(Error::Overflow(format!("{v} does not fit in 64 bits")));
        }
        Ok(v as u64)
    }

    fn checked_sum(&self, other: &Self) -> Result<Self> {
        self.checked_add(*other)
            .ok_or_else(|| Error::Overflow(format!("{self} + {other} exceeds 64 bits")))
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn parse(s: &str) -> Result<Self> {
        s.trim()
            .parse()
            .map_err(|e| Error::Domain(format!("`{s}` is not a nonnegative integer: {e}")))
    }
}

impl Quantity for BigUint {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }

    fn from_f64(v: f64) -> Result<Self> {
        let v = integral(v)?;
        // exact for integral floats of any size, unlike a cast through u128
        <BigUint as num_traits::FromPrimitive>::from_f64(v)
            .ok_or_else(|| Error::Domain(format!("cannot represent {v}")))
    }

    fn checked_sum(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }

    fn accumulate(&mut self, other: &Self) -> Result<()> {
        *self += other;
        Ok(())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }

    fn parse(s: &str) -> Result<Self> {
        s.trim()
            .parse()
            .map_err(|e| Error::Domain(format!("`{s}` is not a nonnegative integer: {e}")))
    }
}

impl Quantity for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn from_u64(v: u64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Result<Self> {
        check_sample(v)?;
        Ok(v)
    }

    fn checked_sum(&self, other: &Self) -> Result<Self> {
        let s = self + other;
        if s.is_finite() {
            Ok(s)
        } else {
            Err(Error::Overflow(format!("{self} + {other} is not finite")))
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse(s: &str) -> Result<Self> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|e| Error::Domain(format!("`{s}` is not a number: {e}")))?;
        check_sample(v)?;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u64_overflow_is_an_error() {
        assert!(matches!(u64::MAX.checked_sum(&1), Err(Error::Overflow(_))));
        assert_eq!(2u64.checked_sum(&3).unwrap(), 5);
    }

    #[test]
    fn big_integers_do_not_overflow() {
        let big = BigUint::from(u64::MAX);
        let s = big.checked_sum(&BigUint::from(1u8)).unwrap();
        assert_eq!(s.to_string(), "18446744073709551616");
    }

    #[test]
    fn huge_integral_floats_convert_exactly() {
        let v = <BigUint as Quantity>::from_f64(2f64.powi(200)).unwrap();
        assert_eq!(v, BigUint::from(1u8) << 200usize);
        assert!(<BigUint as Quantity>::from_f64(0.5).is_err());
    }

    #[test]
    fn samples_are_validated() {
        assert!(f64::from_f64(f64::INFINITY).is_err());
        assert!(f64::from_f64(-1.0).is_err());
        assert!(u64::from_f64(1.5).is_err());
        assert_eq!(u64::from_f64(7.0).unwrap(), 7);
        assert!(f64::parse("inf").is_err());
        assert!(u64::parse("-3").is_err());
        assert_eq!(
            <BigUint as Quantity>::parse("12").unwrap(),
            BigUint::from(12u8)
        );
    }
}
