//! Exact Clebsch–Gordan coefficients.
//!
//! Values come from the Racah closed-form sum evaluated in exact rational
//! arithmetic. A coefficient is always `±√(p/q)`, so it is stored as a sign and
//! a rational square; floating point only appears in [`SignedSqrt::to_f64`].

use core::fmt;
use core::ops::{Mul, Neg};

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, Zero};

use crate::error::invalid;
use crate::{Error, HalfInt, Result};
#[allow(unused_imports)] // inherent f64 methods win when std is in the graph
use num_traits::Float;

type Q = Ratio<i128>;

/// `sign · √square` with `square ≥ 0` rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedSqrt {
    negative: bool,
    square: Q,
}

impl SignedSqrt {
    pub fn zero() -> Self {
        SignedSqrt {
            negative: false,
            square: Q::zero(),
        }
    }

    pub fn one() -> Self {
        SignedSqrt {
            negative: false,
            square: Q::one(),
        }
    }

    /// `±√(num/den)`.
    pub fn new(negative: bool, num: i128, den: i128) -> Result<Self> {
        if den <= 0 || num < 0 {
            return Err(invalid!("√({num}/{den}) needs num ≥ 0 and den > 0"));
        }
        Ok(Self::from_square(negative, Q::new(num, den)))
    }

    fn from_square(negative: bool, square: Q) -> Self {
        SignedSqrt {
            negative: negative && !square.is_zero(),
            square,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.square.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// The exact square as a reduced `(numerator, denominator)` pair.
    pub fn square(&self) -> (i128, i128) {
        (*self.square.numer(), *self.square.denom())
    }

    pub fn to_f64(&self) -> f64 {
        let v = (*self.square.numer() as f64 / *self.square.denom() as f64).sqrt();
        if self.negative {
            -v
        } else {
            v
        }
    }

    /// Rewrites the value as `±a/√b` with `b` as small as possible, the form
    /// used by listing files. `√(n/d)` with `n = k·q²`, `k` squarefree, equals
    /// `q·k/√(d·k)`.
    pub fn radical_form(&self) -> Result<(u64, u64, bool)> {
        let (n, d) = self.square();
        if n == 0 {
            return Ok((0, 1, false));
        }
        let (q, k) = squarefree_split(n as u128);
        let a = q.checked_mul(k).ok_or(Error::Overflow("radical form"))?;
        let b = (d as u128)
            .checked_mul(k)
            .ok_or(Error::Overflow("radical form"))?;
        let a = u64::try_from(a).map_err(|_| Error::Overflow("radical form"))?;
        let b = u64::try_from(b).map_err(|_| Error::Overflow("radical form"))?;
        Ok((a, b, self.negative))
    }

    pub fn checked_mul(&self, other: &SignedSqrt) -> Result<SignedSqrt> {
        let square = self
            .square
            .checked_mul(&other.square)
            .ok_or(Error::Overflow("SignedSqrt product"))?;
        Ok(Self::from_square(self.negative != other.negative, square))
    }
}

impl Neg for SignedSqrt {
    type Output = SignedSqrt;
    fn neg(self) -> SignedSqrt {
        Self::from_square(!self.negative, self.square)
    }
}

/// Panics on overflow; use [`SignedSqrt::checked_mul`] where inputs are not
/// known to be small.
impl Mul for SignedSqrt {
    type Output = SignedSqrt;
    fn mul(self, rhs: SignedSqrt) -> SignedSqrt {
        self.checked_mul(&rhs).expect("SignedSqrt product overflow")
    }
}

/// `-√(2/3)`, `√(1/6)`, `0`.
impl fmt::Display for SignedSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.square();
        let sign = if self.negative { "-" } else { "" };
        match (n, d) {
            (0, _) => f.write_str("0"),
            (1, 1) => write!(f, "{sign}1"),
            (n, 1) => write!(f, "{sign}√{n}"),
            (n, d) => write!(f, "{sign}√({n}/{d})"),
        }
    }
}

/// Returns `(q, k)` with `n = k·q²` and `k` squarefree.
fn squarefree_split(mut n: u128) -> (u128, u128) {
    let mut q = 1u128;
    let mut k = 1u128;
    let mut p = 2u128;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        q *= p.pow(e / 2);
        if e % 2 == 1 {
            k *= p;
        }
        p += 1;
    }
    (q, k * n)
}

fn factorial(n: i32) -> Result<i128> {
    if n < 0 {
        return Err(invalid!("negative factorial argument {n}"));
    }
    (1..=n as i128)
        .try_fold(1i128, |acc, k| acc.checked_mul(k))
        .ok_or(Error::Overflow("factorial"))
}

fn check_label(j: HalfInt, m: HalfInt, name: &str) -> Result<()> {
    if j.doubled() < 0 {
        return Err(invalid!(
            "{name}: angular momentum must be non-negative, got {j}"
        ));
    }
    if !j.same_parity(m) {
        return Err(invalid!("{name}: m = {m} is not compatible with j = {j}"));
    }
    Ok(())
}

/// `⟨j1 m1; j2 m2 | J M⟩` exactly, Condon–Shortley phase.
///
/// Zero when `M ≠ m1 + m2`, when `J` is outside `|j1−j2|..=j1+j2`, or when some
/// `|m| > j`. Labels whose `m` and `j` differ by a half-integer are rejected.
pub fn clebsch_gordan_exact(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<SignedSqrt> {
    check_label(j1, m1, "j1")?;
    check_label(j2, m2, "j2")?;
    check_label(j, m, "J")?;
    if m1 + m2 != m
        || m1.abs() > j1
        || m2.abs() > j2
        || m.abs() > j
        || j > j1 + j2
        || j < (j1 - j2).abs()
        || !(j1 + j2).same_parity(j)
    {
        return Ok(SignedSqrt::zero());
    }

    // Every quantity below is an integer once the doubled values are halved.
    let h = |x: HalfInt| x.doubled() / 2;
    let (a, b, c) = (j1, j2, j);
    let j12 = h(a + b - c);
    let jm1 = h(a - m1);
    let jp2 = h(b + m2);
    let c_b_m1 = h(c - b + m1);
    let c_a_m2 = h(c - a - m2);

    let prefactor_num = [
        h(c + a - b),
        h(c - a + b),
        j12,
        h(c + m),
        h(c - m),
        jm1,
        h(a + m1),
        h(b - m2),
        jp2,
    ]
    .iter()
    .try_fold(Q::from_integer(i128::from(c.doubled() + 1)), |acc, &n| {
        acc.checked_mul(&Q::from_integer(factorial(n)?))
            .ok_or(Error::Overflow("CG prefactor"))
    })?;
    let prefactor = prefactor_num
        .checked_mul(&Q::new(1, factorial(h(a + b + c) + 1)?))
        .ok_or(Error::Overflow("CG prefactor"))?;

    let k_min = 0.max(-c_b_m1).max(-c_a_m2);
    let k_max = j12.min(jm1).min(jp2);
    let mut sum = Q::zero();
    for k in k_min..=k_max {
        let denom = [k, j12 - k, jm1 - k, jp2 - k, c_b_m1 + k, c_a_m2 + k]
            .iter()
            .try_fold(1i128, |acc, &n| {
                acc.checked_mul(factorial(n)?)
                    .ok_or(Error::Overflow("CG sum"))
            })?;
        let term = Q::new(if k % 2 == 0 { 1 } else { -1 }, denom);
        sum = sum.checked_add(&term).ok_or(Error::Overflow("CG sum"))?;
    }

    let square = prefactor
        .checked_mul(&sum)
        .and_then(|p| p.checked_mul(&sum))
        .ok_or(Error::Overflow("CG square"))?;
    Ok(SignedSqrt::from_square(sum.is_negative(), square))
}

/// Floating-point value of [`clebsch_gordan_exact`].
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64> {
    clebsch_gordan_exact(j1, m1, j2, m2, j, m).map(|c| c.to_f64())
}

/// Allowed total angular momenta `|j1−j2|, …, j1+j2`, descending.
pub fn coupled_values(j1: HalfInt, j2: HalfInt) -> alloc::vec::Vec<HalfInt> {
    let lo = (j1 - j2).abs().doubled();
    let hi = (j1 + j2).doubled();
    (0..=(hi - lo) / 2)
        .map(|k| HalfInt::from_doubled(hi - 2 * k))
        .collect()
}

/// `m = j, j−1, …, −j`.
pub fn projections(j: HalfInt) -> alloc::vec::Vec<HalfInt> {
    (0..=j.doubled())
        .map(|k| HalfInt::from_doubled(j.doubled() - 2 * k))
        .collect()
}
