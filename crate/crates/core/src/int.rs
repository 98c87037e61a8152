//! Integers that start as `i64` and promote to `BigInt` on overflow.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub enum Int {
    Small(i64),
    Big(BigInt),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn norm(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(b),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => b.clone(),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Euclidean-style quotient rounding toward negative infinity.
    pub fn div_floor(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if !(*a == i64::MIN && *b == -1) => {
                Int::Small(a.div_floor(b))
            }
            _ => Int::norm(self.to_big().div_floor(&other.to_big())),
        }
    }

    pub fn is_multiple_of(&self, other: &Int) -> bool {
        if other.is_zero() {
            return self.is_zero();
        }
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => (*a as i128) % (*b as i128) == 0,
            _ => (self.to_big() % other.to_big()).is_zero(),
        }
    }

    /// Exact division; panics if `other` does not divide `self`.
    pub fn div_exact(&self, other: &Int) -> Int {
        assert!(self.is_multiple_of(other), "inexact division");
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => Int::from((*a as i128) / (*b as i128)),
            _ => Int::norm(self.to_big() / other.to_big()),
        }
    }

    pub fn gcd(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => Int::from((*a as i128).gcd(&(*b as i128))),
            _ => Int::norm(self.to_big().gcd(&other.to_big())),
        }
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g = gcd >= 0`.
    pub fn ext_gcd(&self, other: &Int) -> (Int, Int, Int) {
        let e = self.to_big().extended_gcd(&other.to_big());
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        (Int::norm(g), Int::norm(s), Int::norm(t))
    }

    pub fn signum(&self) -> i32 {
        match self.cmp(&Int::ZERO) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<i128> for Int {
    fn from(v: i128) -> Self {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::Big(BigInt::from(v)),
        }
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::norm(b)
    }
}

impl PartialEq for Int {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Int {}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl std::hash::Hash for Int {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Int::Small(v) => v.hash(state),
            Int::Big(b) => b.hash(state),
        }
    }
}

impl Add for &Int {
    type Output = Int;
    fn add(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_add(*b) {
                Some(v) => Int::Small(v),
                None => Int::Big(BigInt::from(*a) + BigInt::from(*b)),
            },
            _ => Int::norm(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for &Int {
    type Output = Int;
    fn sub(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_sub(*b) {
                Some(v) => Int::Small(v),
                None => Int::Big(BigInt::from(*a) - BigInt::from(*b)),
            },
            _ => Int::norm(self.to_big() - rhs.to_big()),
        }
    }
}

impl Mul for &Int {
    type Output = Int;
    fn mul(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_mul(*b) {
                Some(v) => Int::Small(v),
                None => Int::Big(BigInt::from(*a) * BigInt::from(*b)),
            },
            _ => Int::norm(self.to_big() * rhs.to_big()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Int {
            type Output = Int;
            fn $f(self, rhs: Int) -> Int {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Int> for Int {
            type Output = Int;
            fn $f(self, rhs: &Int) -> Int {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Int> for Int {
    fn add_assign(&mut self, rhs: &Int) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Int> for Int {
    fn sub_assign(&mut self, rhs: &Int) {
        *self = &*self - rhs;
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::Big(-BigInt::from(v)),
            },
            Int::Big(b) => Int::norm(-b),
        }
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        -self.clone()
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for Int {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.strip_prefix('+').unwrap_or(s);
        Ok(Int::norm(s.parse::<BigInt>()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes() {
        let a = Int::from(i64::MAX);
        let b = &a + &Int::ONE;
        assert!(matches!(b, Int::Big(_)));
        let c = &b - &Int::ONE;
        assert!(matches!(c, Int::Small(_)));
        assert_eq!(c, a);
        let sq = &a * &a;
        assert_eq!(sq.div_exact(&a), a);
        assert_eq!(-Int::from(i64::MIN), &Int::from(i64::MAX) + &Int::ONE);
    }

    #[test]
    fn parse_and_gcd() {
        assert_eq!("+12".parse::<Int>().unwrap(), Int::from(12));
        assert_eq!(Int::from(12).gcd(&Int::from(-18)), Int::from(6));
        let (g, s, t) = Int::from(12).ext_gcd(&Int::from(-18));
        assert_eq!(g, Int::from(6));
        assert_eq!(&(&s * &Int::from(12)) + &(&t * &Int::from(-18)), g);
    }
}
