//! Number types shared by the certifier, the decoders and the experiments.

use std::fmt::Debug;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

/// Exact rational used for path costs, deviations and decompositions.
pub type Rational = Ratio<i128>;

/// Floating-point values this close to zero are treated as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Scalar weights the certifier and the ML decoder can work with.
pub trait Weight:
    Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> + Debug
{
    fn zero() -> Self;
    /// Whether the value counts as zero for strict-inequality decisions.
    fn is_tie(self) -> bool;
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_tie(self) -> bool {
        self.abs() <= TIE_TOLERANCE
    }
}

impl Weight for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_tie(self) -> bool {
        Zero::is_zero(&self)
    }
}

impl Weight for i128 {
    fn zero() -> Self {
        0
    }
    fn is_tie(self) -> bool {
        self == 0
    }
}

/// Exact value of a finite float as a big rational.
pub fn big_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Exact value of a finite float, if numerator and denominator fit in `i128`.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    let big = big_from_f64(x)?;
    Some(Rational::new(big.numer().to_i128()?, big.denom().to_i128()?))
}

pub fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn big_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `num/den` text form.
pub fn big_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn inner<T>(a: &[T], b: &[T]) -> T
where
    T: Weight + std::ops::Mul<Output = T>,
{
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_float_conversion() {
        assert_eq!(rational_from_f64(0.375), Some(Rational::new(3, 8)));
        assert_eq!(rational_from_f64(-2.0), Some(Rational::from_integer(-2)));
        assert!(rational_from_f64(f64::NAN).is_none());
        let tenth = big_from_f64(0.1).unwrap();
        assert_eq!(tenth.denom(), &(BigInt::from(1) << 55u32));
    }

    #[test]
    fn ties() {
        assert!(1e-13f64.is_tie());
        assert!(!1e-11f64.is_tie());
        assert!(<Rational as Zero>::zero().is_tie());
        assert!(!Rational::new(1, 1000).is_tie());
    }
}
