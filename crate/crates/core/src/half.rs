use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};
use core::str::FromStr;

use crate::error::{invalid, Error};
#[allow(unused_imports)] // inherent f64 methods win when std is in the graph
use num_traits::Float;

/// A half-integer `k/2`, stored as the doubled value `k`.
///
/// Spins, magnetic quantum numbers and coupled quantum numbers are all of this
/// kind. Arithmetic stays exact; use [`HalfInt::as_f64`] at the boundary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    #[inline]
    pub const fn from_doubled(doubled: i32) -> Self {
        HalfInt(doubled)
    }

    #[inline]
    pub const fn from_int(value: i32) -> Self {
        HalfInt(2 * value)
    }

    /// Converts a float that must be an exact multiple of ½.
    pub fn from_f64(value: f64) -> Result<Self, Error> {
        let doubled = value * 2.0;
        if !doubled.is_finite() || doubled != doubled.round() || doubled.abs() > i32::MAX as f64 {
            return Err(invalid!("{value} is not a half-integer"));
        }
        Ok(HalfInt(doubled as i32))
    }

    /// Twice the value.
    #[inline]
    pub const fn doubled(self) -> i32 {
        self.0
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    #[inline]
    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    #[inline]
    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// `j(j+1)`, the eigenvalue of a squared angular momentum.
    #[inline]
    pub fn casimir(self) -> f64 {
        let j = self.as_f64();
        j * (j + 1.0)
    }

    /// True when `self - other` is an integer.
    #[inline]
    pub const fn same_parity(self, other: HalfInt) -> bool {
        (self.0 - other.0) % 2 == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl PartialEq<i32> for HalfInt {
    fn eq(&self, other: &i32) -> bool {
        self.0 == 2 * other
    }
}

impl PartialOrd<i32> for HalfInt {
    fn partial_cmp(&self, other: &i32) -> Option<Ordering> {
        self.0.partial_cmp(&(2 * other))
    }
}

/// Integers print bare (`-1`), odd halves as a fraction (`-3/2`).
impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || invalid!("'{s}' is not a half-integer (expected k or k/2)");
        match s.split_once('/') {
            Some((num, "2")) => {
                let k: i32 = num.parse().map_err(|_| bad())?;
                if k % 2 == 0 {
                    // "2/2" style is not canonical; integers are written bare.
                    return Err(bad());
                }
                Ok(HalfInt(k))
            }
            Some(_) => Err(bad()),
            None => {
                let k: i32 = s.parse().map_err(|_| bad())?;
                k.checked_mul(2).map(HalfInt).ok_or_else(bad)
            }
        }
    }
}
