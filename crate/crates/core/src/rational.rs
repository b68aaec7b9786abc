//! Exact rational coefficients.
//!
//! Values that fit in machine words stay on an allocation-free fast path;
//! anything that would overflow is promoted to an arbitrary-precision
//! `BigRational`. Results are demoted back whenever they fit again, so equal
//! values always share one representation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, `den > 0`.
    Small { num: i64, den: i64 },
    /// Only used when the value does not fit `Small`.
    Big(BigRational),
}

/// An exact rational number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Q(Repr);

impl Q {
    pub const fn zero() -> Q {
        Q(Repr::Small { num: 0, den: 1 })
    }

    pub const fn one() -> Q {
        Q(Repr::Small { num: 1, den: 1 })
    }

    pub const fn from_int(n: i64) -> Q {
        Q(Repr::Small { num: n, den: 1 })
    }

    /// `num / den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Q {
        assert!(den != 0, "zero denominator");
        Q::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Q {
        let (mut num, mut den) = (num, den);
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(n), Ok(d)) if n != i64::MIN => Q(Repr::Small { num: n, den: d }),
            _ => Q(Repr::Big(BigRational::new(BigInt::from(num), BigInt::from(den)))),
        }
    }

    fn from_big(r: BigRational) -> Q {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Q(Repr::Small { num: n, den: d });
            }
        }
        Q(Repr::Big(r))
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { num: 1, den: 1 })
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn abs(&self) -> Q {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Q> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Small { num, den } => Q::from_i128(*den as i128, *num as i128),
            Repr::Big(r) => Q::from_big(r.recip()),
        })
    }

    pub fn pow(&self, e: u32) -> Q {
        let mut acc = Q::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Numerator and denominator as decimal strings (denominator positive).
    pub fn parts(&self) -> (String, String) {
        match &self.0 {
            Repr::Small { num, den } => (num.to_string(), den.to_string()),
            Repr::Big(r) => (r.numer().to_string(), r.denom().to_string()),
        }
    }
}

impl Default for Q {
    fn default() -> Self {
        Q::zero()
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::from_int(n)
    }
}

impl From<i32> for Q {
    fn from(n: i32) -> Q {
        Q::from_int(n as i64)
    }
}

impl<'a> Add<&'a Q> for &'a Q {
    type Output = Q;
    fn add(self, rhs: &Q) -> Q {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &rhs.0) {
            if b == d {
                return Q::from_i128(*a as i128 + *c as i128, *b as i128);
            }
            let n = *a as i128 * *d as i128 + *c as i128 * *b as i128;
            let m = *b as i128 * *d as i128;
            return Q::from_i128(n, m);
        }
        Q::from_big(self.to_big() + rhs.to_big())
    }
}

impl<'a> Mul<&'a Q> for &'a Q {
    type Output = Q;
    fn mul(self, rhs: &Q) -> Q {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &rhs.0) {
            if *b == 1 && *d == 1 {
                if let Some(p) = a.checked_mul(*c) {
                    if p != i64::MIN {
                        return Q(Repr::Small { num: p, den: 1 });
                    }
                }
            }
            return Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Q::from_big(self.to_big() * rhs.to_big())
    }
}

impl<'a> Div<&'a Q> for &'a Q {
    type Output = Q;
    fn div(self, rhs: &Q) -> Q {
        let inv = rhs.recip().expect("division by zero");
        self * &inv
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self.0 {
            Repr::Small { num, den } => Q(Repr::Small { num: -num, den }),
            Repr::Big(r) => Q::from_big(-r),
        }
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        -self.clone()
    }
}

impl<'a> Sub<&'a Q> for &'a Q {
    type Output = Q;
    fn sub(self, rhs: &Q) -> Q {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Q {
            type Output = Q;
            fn $m(self, rhs: Q) -> Q {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Q> for Q {
    fn add_assign(&mut self, rhs: &Q) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Q> for Q {
    fn sub_assign(&mut self, rhs: &Q) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Q> for Q {
    fn mul_assign(&mut self, rhs: &Q) {
        *self = &*self * rhs;
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Q) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Q) -> Ordering {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &other.0) {
            return (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128));
        }
        self.to_big().cmp(&other.to_big())
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.parts();
        if d == "1" {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

/// Accepts `n`, `-n`, `n/m`.
impl FromStr for Q {
    type Err = String;
    fn from_str(s: &str) -> Result<Q, String> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| format!("bad integer `{n}`"))?;
        let d: BigInt = d.parse().map_err(|_| format!("bad integer `{d}`"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Q::from_big(BigRational::new(n, d)))
    }
}

impl Zero for Q {
    fn zero() -> Q {
        Q::zero()
    }
    fn is_zero(&self) -> bool {
        Q::is_zero(self)
    }
}

impl One for Q {
    fn one() -> Q {
        Q::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arithmetic_reduces() {
        let a = Q::new(1, 2);
        let b = Q::new(1, 3);
        assert_eq!(&a + &b, Q::new(5, 6));
        assert_eq!(&a * &b, Q::new(1, 6));
        assert_eq!(&a - &a, Q::zero());
        assert_eq!(Q::new(2, -4), Q::new(-1, 2));
        assert_eq!(&a / &b, Q::new(3, 2));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Q::from_int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small { .. }));
    }

    #[test]
    fn parse_and_display() {
        let q: Q = "-6/4".parse().unwrap();
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!("7".parse::<Q>().unwrap(), Q::from_int(7));
        assert!("1/0".parse::<Q>().is_err());
    }

    #[test]
    fn ordering() {
        assert!(Q::new(1, 3) < Q::new(1, 2));
        assert!(Q::new(-1, 2) < Q::zero());
    }
}
