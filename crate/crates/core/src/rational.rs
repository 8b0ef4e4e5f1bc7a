//! Exact rational numbers.
//!
//! Every quantity in the engine — returns, probabilities, weights, gains,
//! thresholds — is a [`Rat`]. There is no floating point anywhere on the
//! computation path, so every comparison in the test suite is exact
//! equality. Values are kept in canonical reduced form (positive
//! denominator, gcd 1) by the underlying `num` rational.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use thiserror::Error;

/// Exact rational number in canonical reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRatError {
    #[error("empty number")]
    Empty,
    #[error("invalid rational `{0}`")]
    Invalid(String),
    #[error("denominator must be positive in `{0}`")]
    NonPositiveDenominator(String),
    #[error("exponent out of range in `{0}`")]
    ExponentOutOfRange(String),
}

impl Rat {
    /// Builds `numerator / denominator`. Panics if `denominator` is zero;
    /// use [`Rat::from_str`] for untrusted input.
    pub fn new(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "zero denominator");
        Rat(BigRational::new(
            BigInt::from(numerator),
            BigInt::from(denominator),
        ))
    }

    pub fn from_int(value: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_big(numerator: BigInt, denominator: BigInt) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        Rat(BigRational::new(numerator, denominator))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
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

    /// −1, 0, or +1 according to the sign of the value.
    pub fn sign(&self) -> i8 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// Nearest integer, ties rounded away from zero.
    pub fn round_ties_away(&self) -> Rat {
        Rat(self.0.round())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Largest integer ≤ self, as a BigInt.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Lossy conversion for presentation (plots); never used in the engine.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Sign of a rational as an integer in {−1, 0, +1}.
pub fn sign(x: &Rat) -> i8 {
    x.sign()
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `n` for integers, `n/d` otherwise; the inner ratio is reduced.
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts `n`, `n/d` (d > 0), decimal strings like `-1.6`, and
    /// exponent forms like `2.5e-3`. All forms parse exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRatError::Empty);
        }
        if let Some((numer, denom)) = s.split_once('/') {
            let n: BigInt = numer
                .trim()
                .parse()
                .map_err(|_| ParseRatError::Invalid(s.to_string()))?;
            let d: BigInt = denom
                .trim()
                .parse()
                .map_err(|_| ParseRatError::Invalid(s.to_string()))?;
            if d.is_zero() || d.is_negative() {
                return Err(ParseRatError::NonPositiveDenominator(s.to_string()));
            }
            return Ok(Rat(BigRational::new(n, d)));
        }
        parse_decimal(s).ok_or_else(|| classify_decimal_error(s))
    }
}

fn classify_decimal_error(s: &str) -> ParseRatError {
    if let Some((_, exp)) = s.split_once(['e', 'E']) {
        if exp.parse::<i64>().is_ok() && exp.parse::<i32>().is_err() {
            return ParseRatError::ExponentOutOfRange(s.to_string());
        }
    }
    ParseRatError::Invalid(s.to_string())
}

fn parse_decimal(s: &str) -> Option<Rat> {
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    if exp.unsigned_abs() > 65_536 {
        return None;
    }
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let ten = BigInt::from(10);
    let mut numer: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().ok()?
    };
    let mut denom = BigInt::one();
    for b in frac_part.bytes() {
        numer = &numer * &ten + BigInt::from(b - b'0');
        denom *= &ten;
    }
    if exp >= 0 {
        numer *= ten.pow(exp as u32);
    } else {
        denom *= ten.pow(exp.unsigned_abs());
    }
    if negative {
        numer = -numer;
    }
    Some(Rat(BigRational::new(numer, denom)))
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
    };
}

rat_binop!(Add, add, +);
rat_binop!(Sub, sub, -);
rat_binop!(Mul, mul, *);

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        let mut acc = Rat::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl From<i64> for Rat {
    fn from(value: i64) -> Self {
        Rat::from_int(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_cases() {
        assert_eq!(sign(&Rat::from_int(3)), 1);
        assert_eq!(sign(&Rat::from_int(0)), 0);
        assert_eq!(sign(&Rat::from_int(-2)), -1);
        assert_eq!(sign(&Rat::new(1, 1000)), 1);
        assert_eq!(sign(&Rat::new(-1, 1000)), -1);
    }

    #[test]
    fn canonical_display() {
        assert_eq!(Rat::new(4, 2).to_string(), "2");
        assert_eq!(Rat::new(-4, 6).to_string(), "-2/3");
        assert_eq!(Rat::new(3, -6).to_string(), "-1/2");
        assert_eq!(Rat::zero().to_string(), "0");
    }

    #[test]
    fn parse_fraction_and_integer() {
        assert_eq!("7".parse::<Rat>().unwrap(), Rat::from_int(7));
        assert_eq!("-2".parse::<Rat>().unwrap(), Rat::from_int(-2));
        assert_eq!("1/8".parse::<Rat>().unwrap(), Rat::new(1, 8));
        assert_eq!(" -3/9 ".parse::<Rat>().unwrap(), Rat::new(-1, 3));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("1/-2".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn parse_decimal_exactly() {
        assert_eq!("0.4".parse::<Rat>().unwrap(), Rat::new(2, 5));
        assert_eq!("-1.6".parse::<Rat>().unwrap(), Rat::new(-8, 5));
        assert_eq!(".5".parse::<Rat>().unwrap(), Rat::new(1, 2));
        assert_eq!("5.".parse::<Rat>().unwrap(), Rat::from_int(5));
        assert_eq!("2e3".parse::<Rat>().unwrap(), Rat::from_int(2000));
        assert_eq!("2.5e-3".parse::<Rat>().unwrap(), Rat::new(1, 400));
        assert!("1.2.3".parse::<Rat>().is_err());
        assert!(".".parse::<Rat>().is_err());
        assert!("1e99999999999".parse::<Rat>().is_err());
    }

    #[test]
    fn round_ties_away_from_zero() {
        let r = |s: &str| s.parse::<Rat>().unwrap().round_ties_away();
        assert_eq!(r("0.4"), Rat::zero());
        assert_eq!(r("-1.6"), Rat::from_int(-2));
        assert_eq!(r("0.5"), Rat::one());
        assert_eq!(r("-0.5"), Rat::from_int(-1));
        assert_eq!(r("1.5"), Rat::from_int(2));
    }

    #[test]
    fn roundtrip_display_parse() {
        for (n, d) in [(0, 1), (5, 3), (-7, 2), (22, 11), (-9, 12)] {
            let x = Rat::new(n, d);
            assert_eq!(x.to_string().parse::<Rat>().unwrap(), x);
        }
    }
}
