//! Exact ordered-field scalars.
//!
//! Every decision procedure in this crate (sign tests, cell emptiness,
//! equality of affine forms) is exact, so the scalar type must be an exact
//! ordered field. [`Ratio`] over any signed integer type qualifies; the
//! crate-level aliases fix it to [`BigRational`](num_rational::BigRational).

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// An exact ordered field usable as the coefficient type of polyhedra and
/// piecewise-linear functions.
pub trait Scalar:
    Clone + Ord + Hash + Debug + Display + Num + Signed + Send + Sync + 'static
{
    /// Embeds a machine integer.
    fn from_int(n: i64) -> Self;

    fn floor_value(&self) -> Self;

    fn ceil_value(&self) -> Self;

    fn is_integral(&self) -> bool;

    /// Parses `p` or `p/q` in base ten.
    fn parse_decimal(text: &str) -> Option<Self> {
        if text.contains('/') {
            Self::from_str_radix(text, 10).ok()
        } else {
            Self::from_str_radix(&format!("{text}/1"), 10).ok()
        }
    }

    fn half() -> Self {
        Self::one() / Self::from_int(2)
    }

    /// Converts an integral value to `i64`, if it fits.
    fn to_i64_exact(&self) -> Option<i64>;

    /// Denominator in lowest terms, as a scalar.
    fn denominator_value(&self) -> Self;
}

impl<T> Scalar for Ratio<T>
where
    T: Clone
        + Integer
        + Signed
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + num_traits::ToPrimitive
        + Send
        + Sync
        + 'static,
{
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(T::from_i64(n).expect("integer out of range for scalar type"))
    }

    fn floor_value(&self) -> Self {
        self.floor()
    }

    fn ceil_value(&self) -> Self {
        self.ceil()
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn to_i64_exact(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn denominator_value(&self) -> Self {
        Ratio::from_integer(self.denom().clone())
    }
}

/// Writes a scalar the way reports print it: `p` or `p/q`, never decimals.
pub fn fmt_exact<S: Scalar>(value: &S) -> String {
    value.to_string()
}
