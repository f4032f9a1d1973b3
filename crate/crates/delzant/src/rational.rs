//! Exact rational scalars and the `p/q` text form used everywhere in this crate.
//!
//! Every quantity that is not explicitly a multiple of a power of pi is a
//! [`Rational`]: arbitrary precision, always in lowest terms, denominator
//! positive. Equality is therefore canonical and all arithmetic is exact.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational number, stored in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self, Error> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Result<Self, Error> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(BigRational::new(numer, denom)))
    }

    pub fn from_int(n: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(&self.0 / &rhs.0))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self(self.0.pow(exp as i32))
    }

    /// Nearest 64-bit float; only used for rendering and for optimizer seeds,
    /// never on an exact code path.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Fall back to a long division when numerator/denominator exceed f64.
            let n = self.numer().to_f64().unwrap_or(f64::INFINITY * self.signum() as f64);
            let d = self.denom().to_f64().unwrap_or(f64::INFINITY);
            n / d
        })
    }

    /// Best rational approximation of a finite float with denominator bounded
    /// by `max_denom`, via the continued-fraction convergents of `x`.
    pub fn approx_f64(x: f64, max_denom: u64) -> Result<Self, Error> {
        if !x.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite value {x}")));
        }
        let max_denom = max_denom.max(1);
        let negative = x < 0.0;
        let mut x = x.abs();

        if x >= u64::MAX as f64 {
            return Err(Error::InvalidParameter(format!(
                "value {x} is too large for rational approximation"
            )));
        }

        // Convergents p/q of the continued fraction of |x|.
        let target = x;
        let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
        for _ in 0..64 {
            let a = x.floor();
            if a >= u64::MAX as f64 {
                break;
            }
            let a = a as u128;
            let p2 = a * p1 + p0;
            let q2 = a * q1 + q0;
            if q2 > max_denom as u128 {
                break;
            }
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            let frac = x - a as f64;
            if frac <= 0.0
                || (p1 as f64 / q1 as f64 - target).abs() <= f64::EPSILON * target.max(1.0)
            {
                break;
            }
            x = 1.0 / frac;
        }
        let mut num = BigInt::from(p1);
        if negative {
            num = -num;
        }
        Self::from_big(num, BigInt::from(q1.max(1)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `p` or `p/q` with integer `p`, positive integer `q`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::ParseRational(s.to_string());
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(Self::from_bigint(n))
            }
            Some((num, den)) => {
                let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if !d.is_positive() {
                    return Err(bad());
                }
                Self::from_big(n, d)
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division panics on a zero divisor, like integer division; use
// `checked_div` where the divisor is not known to be nonzero.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl MulAssign for Rational {
    fn mul_assign(&mut self, rhs: Rational) {
        self.0 *= rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

/// Shorthand for `Rational::new(n, d).unwrap()` in tests and constants.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = Rational::new(4, 6).unwrap();
        assert_eq!(r.numer(), &BigInt::from(2));
        assert_eq!(r.denom(), &BigInt::from(3));
        let r = Rational::new(1, -2).unwrap();
        assert_eq!(r, rat(-1, 2));
        assert!(r.denom().is_positive());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(Rational::new(1, 0), Err(Error::DivisionByZero)));
        assert!(matches!(rat(1, 2).checked_div(&Rational::zero()), Err(Error::DivisionByZero)));
        assert!(matches!(Rational::zero().recip(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/4".parse::<Rational>().unwrap(), rat(3, 4));
        assert_eq!("-7".parse::<Rational>().unwrap(), rat(-7, 1));
        assert_eq!(" 10/4 ".parse::<Rational>().unwrap(), rat(5, 2));
        assert_eq!(rat(5, 2).to_string(), "5/2");
        assert_eq!(rat(-4, 2).to_string(), "-2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("2/-3".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn arithmetic_is_exact() {
        let third = rat(1, 3);
        let sum: Rational = (0..3).map(|_| third.clone()).sum();
        assert_eq!(sum, Rational::one());
        assert_eq!(rat(1, 2) - rat(1, 3), rat(1, 6));
        assert_eq!(rat(2, 3) * rat(9, 4), rat(3, 2));
        assert_eq!(rat(1, 2).checked_div(&rat(1, 4)).unwrap(), rat(2, 1));
        assert_eq!(rat(-2, 5).pow(2), rat(4, 25));
    }

    #[test]
    fn float_approximation() {
        assert_eq!(Rational::approx_f64(0.5, 1_000_000).unwrap(), rat(1, 2));
        assert_eq!(Rational::approx_f64(-0.25, 1_000_000).unwrap(), rat(-1, 4));
        let pi = Rational::approx_f64(std::f64::consts::PI, 1_000_000).unwrap();
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-11);
        assert!(pi.denom() <= &BigInt::from(1_000_000));
        assert!(Rational::approx_f64(f64::NAN, 10).is_err());
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = rat(n, d);
            let back: Rational = r.to_string().parse().unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn approx_recovers_small_rationals(n in -500i64..500, d in 1i64..500) {
            let r = rat(n, d);
            let back = Rational::approx_f64(r.to_f64(), 1_000_000).unwrap();
            prop_assert_eq!(back, r);
        }
    }
}
