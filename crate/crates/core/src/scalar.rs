//! Scalar abstractions shared by every numeric module.
//!
//! Two families are used:
//!
//! * [`Scalar`] is a binary floating-point type (`f32` or `f64`). Scores,
//!   thresholds and embedding components live here. Transcendental
//!   functions go through `libm` so that simulated worlds produce identical
//!   bits on every platform.
//! * [`Ratio`] is anything the MAP aggregation can be evaluated in: the
//!   floats, and exact rationals ([`Rational`]) for reference arithmetic.

use std::fmt::{Debug, Display, LowerExp};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, Num};

/// Exact rational used to evaluate MAP percentages, curves and `MAP_Avg`
/// without rounding.
pub type Rational = num_rational::Ratio<i128>;

/// Floating-point scalar for scores and embeddings.
pub trait Scalar:
    Float + FromPrimitive + FromStr + Default + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Smallest representable value strictly greater than `self`.
    fn next_up(self) -> Self;

    fn portable_sin(self) -> Self;
    fn portable_cos(self) -> Self;
    fn portable_atan2(self, x: Self) -> Self;
    fn portable_ln(self) -> Self;

    /// Lossless widening used by the file formats.
    fn widen(self) -> f64;

    /// Narrowing from the file formats. Exact for values produced by
    /// [`Scalar::widen`].
    fn narrow(v: f64) -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as float")
    }
}

impl Scalar for f64 {
    fn next_up(self) -> Self {
        f64::next_up(self)
    }
    fn portable_sin(self) -> Self {
        libm::sin(self)
    }
    fn portable_cos(self) -> Self {
        libm::cos(self)
    }
    fn portable_atan2(self, x: Self) -> Self {
        libm::atan2(self, x)
    }
    fn portable_ln(self) -> Self {
        libm::log(self)
    }
    fn widen(self) -> f64 {
        self
    }
    fn narrow(v: f64) -> Self {
        v
    }
}

impl Scalar for f32 {
    fn next_up(self) -> Self {
        f32::next_up(self)
    }
    fn portable_sin(self) -> Self {
        libm::sinf(self)
    }
    fn portable_cos(self) -> Self {
        libm::cosf(self)
    }
    fn portable_atan2(self, x: Self) -> Self {
        libm::atan2f(self, x)
    }
    fn portable_ln(self) -> Self {
        libm::logf(self)
    }
    fn widen(self) -> f64 {
        f64::from(self)
    }
    fn narrow(v: f64) -> Self {
        v as f32
    }
}

/// Field in which MAP aggregates are evaluated.
pub trait Ratio: Num + Clone + PartialOrd + Debug {
    fn from_count(n: u64) -> Self;
}

impl Ratio for f64 {
    fn from_count(n: u64) -> Self {
        n as f64
    }
}

impl Ratio for f32 {
    fn from_count(n: u64) -> Self {
        n as f32
    }
}

impl Ratio for Rational {
    fn from_count(n: u64) -> Self {
        Rational::from_integer(i128::from(n))
    }
}
