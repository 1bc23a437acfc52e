//! Scalar types the metric code is generic over.
//!
//! Stability values are ratios of small cardinalities, so the canonical
//! instantiation is an exact rational. Floating point instantiations are
//! provided for callers that only want approximate numbers.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};

/// Number type usable for stability metrics.
pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// `numerator / denominator`; `denominator` is never zero at call sites.
    fn from_ratio(numerator: usize, denominator: usize) -> Self;

    /// Text rendering used in reports. Rationals are always `p/q`.
    fn render(&self) -> String;
}

impl Scalar for f64 {
    fn from_ratio(numerator: usize, denominator: usize) -> Self {
        numerator as f64 / denominator as f64
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for f32 {
    fn from_ratio(numerator: usize, denominator: usize) -> Self {
        numerator as f32 / denominator as f32
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for Ratio<i64> {
    fn from_ratio(numerator: usize, denominator: usize) -> Self {
        Ratio::new(numerator as i64, denominator as i64)
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

impl Scalar for BigRational {
    fn from_ratio(numerator: usize, denominator: usize) -> Self {
        Ratio::new(BigInt::from(numerator), BigInt::from(denominator))
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_always_render_with_denominator() {
        assert_eq!(Ratio::<i64>::from_ratio(0, 5).render(), "0/1");
        assert_eq!(Ratio::<i64>::from_ratio(4, 5).render(), "4/5");
        assert_eq!(BigRational::from_ratio(6, 4).render(), "3/2");
    }

    #[test]
    fn float_ratio() {
        assert_eq!(f64::from_ratio(1, 4), 0.25);
        assert_eq!(f32::from_ratio(3, 4), 0.75);
    }
}
