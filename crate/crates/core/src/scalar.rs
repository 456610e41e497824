//! Scalar abstractions.
//!
//! [`Scalar`] covers the field operations the symbolic Pauli algebra needs, so
//! commutator sums can run in exact rationals as well as floats. [`Real`] adds
//! the transcendental functions the simulator and optimizer rely on.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num};
use rand::distributions::uniform::SampleUniform;

pub trait Scalar: Num + Neg<Output = Self> + Clone + PartialOrd + Debug + Send + Sync + 'static {
    fn from_int(v: i64) -> Self;

    fn as_f64(&self) -> f64;
}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            #[inline]
            fn from_int(v: i64) -> Self {
                v as $t
            }

            #[inline]
            fn as_f64(&self) -> f64 {
                *self as f64
            }
        }
    )*};
}

float_scalar!(f32, f64);

impl Scalar for i64 {
    #[inline]
    fn from_int(v: i64) -> Self {
        v
    }

    #[inline]
    fn as_f64(&self) -> f64 {
        *self as f64
    }
}

macro_rules! ratio_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for Ratio<$t> {
            #[inline]
            fn from_int(v: i64) -> Self {
                Ratio::from_integer(v as $t)
            }

            #[inline]
            fn as_f64(&self) -> f64 {
                *self.numer() as f64 / *self.denom() as f64
            }
        }
    )*};
}

ratio_scalar!(i64, i128);

/// Floating-point scalar used for amplitudes, costs and statistics.
pub trait Real: Scalar + Float + FromPrimitive + Display + SampleUniform {
    /// Converts an `f64` literal. Every `Real` can represent (a rounding of) any finite `f64`.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}
