//! Coefficient fields.
//!
//! Everything in this crate is generic over a [`Scalar`]: a field of
//! characteristic zero that can absorb exact rationals. The exact
//! instantiation ([`Rational`]) is what every identity check relies on;
//! `f64` is provided for quick numeric exploration.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational numbers.
pub type Rational = BigRational;

/// A coefficient field of characteristic zero.
pub trait Scalar: Num + Neg<Output = Self> + Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    /// Embeds an exact rational.
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn to_f64(&self) -> f64;

    /// Whether the value should be treated as zero by elimination routines.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Pivot preference used by Gaussian elimination; larger is better.
    fn pivot_weight(&self) -> f64 {
        self.to_f64().abs()
    }

    /// The exact rational value, when the type has one.
    fn to_rational(&self) -> Option<Rational>;
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    // Any nonzero pivot is exact; prefer small heights to limit coefficient growth.
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.numer().bits() + self.denom().bits();
        1.0 / (1.0 + bits as f64)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-12
    }

    fn to_rational(&self) -> Option<Rational> {
        Rational::from_float(*self)
    }
}

/// `(-1)^bit` as a scalar.
pub(crate) fn sign<C: Scalar>(odd: bool) -> C {
    if odd {
        -C::one()
    } else {
        C::one()
    }
}

/// Formats a float with the given number of significant digits in plain decimal notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(1.0, 12), "1.00000000000");
        assert_eq!(format_significant(2.0 / 3.0, 12), "0.666666666667");
        assert_eq!(format_significant(1234.5, 6), "1234.50");
    }

    #[test]
    fn rational_embedding() {
        let q = Rational::new(BigInt::from(-3), BigInt::from(4));
        assert_eq!(<f64 as Scalar>::from_rational(&q), -0.75);
        assert_eq!(<Rational as Scalar>::from_i64(5), Rational::from_integer(5.into()));
    }
}
