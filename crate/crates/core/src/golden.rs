//! Exact arithmetic in `Z[e]`, where `e` is a formal root of `x^2 - x - 1`.
//!
//! Elements are stored as `a + b*e` with checked 128-bit coefficients. The
//! root is never evaluated numerically. Coefficient overflow is treated as a
//! fatal error and panics.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GoldenError {
    #[error("negative power of a non-unit (norm {0})")]
    NonUnitNegativePower(i128),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible in Z[e]")]
    NotDivisible,
}

/// An element `a + b*e` of the ring `Z[e]`, `e^2 = e + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GoldenInt {
    pub a: i128,
    pub b: i128,
}

fn ck(v: Option<i128>) -> i128 {
    v.expect("Z[e] coefficient overflow")
}

impl GoldenInt {
    pub const ZERO: GoldenInt = GoldenInt { a: 0, b: 0 };
    pub const ONE: GoldenInt = GoldenInt { a: 1, b: 0 };
    /// The formal root `e`.
    pub const E: GoldenInt = GoldenInt { a: 0, b: 1 };

    pub const fn new(a: i128, b: i128) -> Self {
        GoldenInt { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Galois conjugate, sending `e` to `1 - e`.
    pub fn conj(self) -> Self {
        GoldenInt::new(ck(self.a.checked_add(self.b)), ck(self.b.checked_neg()))
    }

    /// Field norm `a^2 + ab - b^2`, equal to `x * conj(x)`.
    pub fn norm(self) -> i128 {
        let aa = ck(self.a.checked_mul(self.a));
        let ab = ck(self.a.checked_mul(self.b));
        let bb = ck(self.b.checked_mul(self.b));
        ck(ck(aa.checked_add(ab)).checked_sub(bb))
    }

    pub fn is_unit(self) -> bool {
        self.norm().abs() == 1
    }

    pub fn inverse(self) -> Option<Self> {
        match self.norm() {
            1 => Some(self.conj()),
            -1 => Some(-self.conj()),
            _ => None,
        }
    }

    /// `self^k`; negative exponents require a unit.
    pub fn pow(self, k: i64) -> Result<Self, GoldenError> {
        let base = if k < 0 {
            self.inverse()
                .ok_or(GoldenError::NonUnitNegativePower(self.norm()))?
        } else {
            self
        };
        let mut exp = k.unsigned_abs();
        let mut acc = GoldenInt::ONE;
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= sq;
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq * sq;
            }
        }
        Ok(acc)
    }

    /// `e^k` for any integer `k`.
    pub fn e_pow(k: i64) -> Self {
        GoldenInt::E.pow(k).expect("e is a unit")
    }

    /// Exact quotient `self / divisor`, if it lies in `Z[e]`.
    pub fn div_exact(self, divisor: Self) -> Result<Self, GoldenError> {
        if divisor.is_zero() {
            return Err(GoldenError::DivisionByZero);
        }
        let n = divisor.norm();
        let num = self * divisor.conj();
        if num.a % n != 0 || num.b % n != 0 {
            return Err(GoldenError::NotDivisible);
        }
        Ok(GoldenInt::new(num.a / n, num.b / n))
    }
}

impl From<i128> for GoldenInt {
    fn from(a: i128) -> Self {
        GoldenInt::new(a, 0)
    }
}

impl Add for GoldenInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GoldenInt::new(ck(self.a.checked_add(o.a)), ck(self.b.checked_add(o.b)))
    }
}

impl Sub for GoldenInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GoldenInt::new(ck(self.a.checked_sub(o.a)), ck(self.b.checked_sub(o.b)))
    }
}

impl Neg for GoldenInt {
    type Output = Self;
    fn neg(self) -> Self {
        GoldenInt::new(ck(self.a.checked_neg()), ck(self.b.checked_neg()))
    }
}

impl Mul for GoldenInt {
    type Output = Self;
    // (a1 + b1 e)(a2 + b2 e) = (a1 a2 + b1 b2) + (a1 b2 + a2 b1 + b1 b2) e
    fn mul(self, o: Self) -> Self {
        let aa = ck(self.a.checked_mul(o.a));
        let bb = ck(self.b.checked_mul(o.b));
        let ab = ck(self.a.checked_mul(o.b));
        let ba = ck(self.b.checked_mul(o.a));
        GoldenInt::new(
            ck(aa.checked_add(bb)),
            ck(ck(ab.checked_add(ba)).checked_add(bb)),
        )
    }
}

impl AddAssign for GoldenInt {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for GoldenInt {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for GoldenInt {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl Sum for GoldenInt {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(GoldenInt::ZERO, |acc, x| acc + x)
    }
}

impl Product for GoldenInt {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(GoldenInt::ONE, |acc, x| acc * x)
    }
}

/// Renders as `a+b*e`, dropping zero terms and unit coefficients: `0`, `1`,
/// `e`, `1+e`, `2-3*e`, `-e`.
impl fmt::Display for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eterm = match self.b {
            0 => String::new(),
            1 => "e".to_string(),
            -1 => "-e".to_string(),
            b => format!("{b}*e"),
        };
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, _) => write!(f, "{eterm}"),
            (a, b) if b > 0 => write!(f, "{a}+{eterm}"),
            (a, _) => write!(f, "{a}{eterm}"),
        }
    }
}
