use std::fmt;
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::tree::Prob;

/// Field of polynomial coefficients: `f64` for speed, [`BigRational`] for
/// exact results.
pub trait Coefficient:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    const EXACT: bool;

    fn from_prob(p: &Prob) -> Self;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    #[inline]
    fn add_ref(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r += other;
        r
    }

    #[inline]
    fn sub_ref(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r -= other;
        r
    }

    #[inline]
    fn mul_ref(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r *= other;
        r
    }
}

impl Coefficient for f64 {
    const EXACT: bool = false;

    #[inline]
    fn from_prob(p: &Prob) -> Self {
        p.value()
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Coefficient for BigRational {
    const EXACT: bool = true;

    fn from_prob(p: &Prob) -> Self {
        p.exact().clone()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}
