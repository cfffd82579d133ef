//! Coefficient types for [`Poly`](crate::Poly).
//!
//! The polynomial code is written once against [`Scalar`] and instantiated
//! with arbitrary-precision integers and rationals for all verification work.
//! Machine types (`i64`, `f64`) implement the traits too, which is handy for
//! quick experiments but never used where exactness matters.

use std::fmt::Debug;
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A commutative ring element usable as a polynomial coefficient.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Product without consuming either operand.
    fn mul_ref(&self, rhs: &Self) -> Self;

    /// Embeds a machine integer.
    fn from_i64(v: i64) -> Self;

    /// Embeds an arbitrary-precision integer (lossy for machine types).
    fn from_bigint(v: &BigInt) -> Self;
}

/// A [`Scalar`] with division by non-zero elements.
pub trait FieldScalar: Scalar {
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
}

impl Scalar for BigInt {
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }
}

impl Scalar for BigRational {
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

impl FieldScalar for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Scalar for i64 {
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn from_i64(v: i64) -> Self {
        v
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_i64().expect("integer fits in i64")
    }
}

impl Scalar for f64 {
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
}

impl FieldScalar for f64 {
    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}
