//! The numeric abstraction the analytic layer is written against.
//!
//! Verification runs on [`crate::Rational`]; `f64` and `f32` are there for
//! plotting and quick exploration only.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive};
use std::fmt::Debug;

pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed {
    /// `num / den` with `den > 0`.
    fn ratio(num: i64, den: i64) -> Self;

    fn floor(&self) -> Self;

    fn approx(&self) -> f64;

    fn from_int(v: i64) -> Self {
        Self::ratio(v, 1)
    }

    /// `k / 2^depth`.
    fn dyadic(k: i64, depth: u32) -> Self {
        Self::ratio(k, 1i64 << depth)
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }
}

impl Scalar for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn floor(&self) -> Self {
        f64::floor(*self)
    }

    fn approx(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn floor(&self) -> Self {
        f32::floor(*self)
    }

    fn approx(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn approx(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Fixed-width rationals. Overflows panic, so keep depths small.
impl Scalar for Ratio<i128> {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn approx(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}
