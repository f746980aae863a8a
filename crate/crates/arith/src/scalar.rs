use std::fmt::Display;
use std::ops::{Div, Sub};

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use tc_core::Weight;

/// Numbers an arithmetic circuit can carry: floats by default, exact
/// rationals when every digit matters.
pub trait Scalar: Weight + Sub<Output = Self> + Div<Output = Self> + Display {
    fn from_rational(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    /// Equality up to 1e-9 relative for floats, exact for rationals.
    fn approx_eq(&self, other: &Self) -> bool;

    fn from_u64(n: u64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }
}

impl Scalar for f64 {
    fn from_rational(r: &BigRational) -> f64 {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &f64) -> bool {
        (self - other).abs() <= 1e-9 * (1.0 + self.abs().max(other.abs()))
    }
}

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> BigRational {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &BigRational) -> bool {
        self == other
    }
}

/// `|a - 1| <= 1e-9`, the tolerance used for normalization checks on input
/// distributions.
pub(crate) fn near_one(r: &BigRational) -> bool {
    let tol = BigRational::new(1.into(), 1_000_000_000.into());
    (r - BigRational::from_integer(1.into())).abs() <= tol
}
