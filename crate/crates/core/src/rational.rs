//! Exact rational scalars for matrix parameters and hypothesis predicates.
//!
//! Parameters such as `7/3` or `100 - 1/6` are carried exactly so that the
//! hypothesis inequalities can be decided without rounding. Conversion to
//! `f64` happens once, at the boundary to the numerical kernels, and is
//! correctly rounded to nearest (ties to even).

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision signed rational, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self, Error> {
        if denom.is_zero() {
            return Err(Error::ParseRational {
                input: format!("{numer}/{denom}"),
                reason: "zero denominator".into(),
            });
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    /// Exact value of a finite `f64`. Returns `None` for NaN or infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
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

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Nearest `f64` (round half to even). Saturates to ±inf on overflow.
    pub fn to_f64(&self) -> f64 {
        match self.0.to_f64() {
            Some(x) => x,
            None if self.is_negative() => f64::NEG_INFINITY,
            None => f64::INFINITY,
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
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
        write!(f, "Rational({self})")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer((*other).into())
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0
            .partial_cmp(&BigRational::from_integer((*other).into()))
    }
}

/// Parses a sum of signed terms, each term an integer, a decimal (optionally
/// with exponent) or a fraction `p/q`.
///
/// Accepted: `"7/3"`, `"-2"`, `"0.25"`, `"1e-30"`, `"100-1/6"`, `"3 + 1/2"`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| Error::ParseRational {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(fail("empty input"));
        }

        let bytes = compact.as_bytes();
        let mut total = BigRational::zero();
        let mut pos = 0;
        let mut first = true;
        while pos < bytes.len() {
            let mut negative = false;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                negative = bytes[pos] == b'-';
                pos += 1;
            } else if !first {
                return Err(fail("expected '+' or '-' between terms"));
            }
            first = false;

            // A term ends at the next '+'/'-' that is not part of an exponent.
            let start = pos;
            while pos < bytes.len() {
                let b = bytes[pos];
                let after_exp = pos > start && matches!(bytes[pos - 1], b'e' | b'E');
                if (b == b'+' || b == b'-') && !after_exp {
                    break;
                }
                pos += 1;
            }
            let term = parse_term(&compact[start..pos]).map_err(|r| fail(&r))?;
            if negative {
                total -= term;
            } else {
                total += term;
            }
        }
        Ok(Rational(total))
    }
}

fn parse_term(term: &str) -> Result<BigRational, String> {
    if term.is_empty() {
        return Err("empty term".into());
    }
    if let Some((p, q)) = term.split_once('/') {
        let p = parse_decimal(p)?;
        let q = parse_decimal(q)?;
        if q.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(p / q);
    }
    parse_decimal(term)
}

fn parse_decimal(text: &str) -> Result<BigRational, String> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(idx) => {
            let exp: i32 = text[idx + 1..]
                .parse()
                .map_err(|_| format!("bad exponent in {text:?}"))?;
            (&text[..idx], exp)
        }
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("no digits in {text:?}"));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(format!("unexpected character in {text:?}"));
    }
    if exponent.unsigned_abs() > 10_000 {
        return Err(format!("exponent out of range in {text:?}"));
    }

    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::parse_bytes(digits.as_bytes(), 10)
        .ok_or_else(|| format!("no digits in {text:?}"))?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_fractions_and_composites() {
        assert_eq!(r("7/3"), Rational::new(7, 3));
        assert_eq!(r("100-1/6"), Rational::new(599, 6));
        assert_eq!(r(" 100 - 1/6 "), Rational::new(599, 6));
        assert_eq!(r("-1/3"), Rational::new(-1, 3));
        assert_eq!(r("3+1/2"), Rational::new(7, 2));
        assert_eq!(r("0.25"), Rational::new(1, 4));
        assert_eq!(r("1e-3"), Rational::new(1, 1000));
        assert_eq!(r("2.5e1"), Rational::from_integer(25));
        assert_eq!(r("1-1e-2"), Rational::new(99, 100));
        assert_eq!(r("4/6"), Rational::new(2, 3));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "abc", "1/0", "1//2", "1+", "--1", "1.2.3", "1/2x", "."] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(Rational::new(10, 4).to_string(), "5/2");
        assert_eq!(Rational::new(-6, 3).to_string(), "-2");
        assert_eq!(Rational::new(3, -9).to_string(), "-1/3");
    }

    #[test]
    fn to_f64_rounds_to_nearest() {
        assert_eq!(Rational::new(1, 3).to_f64(), 1.0 / 3.0);
        assert_eq!(Rational::new(599, 6).to_f64(), 100.0 - 1.0 / 6.0);
        // 1 + 2^-53 is a tie between 1 and 1 + 2^-52; ties go to even.
        let tie = Rational::one() + Rational::from_f64(2f64.powi(-53)).unwrap();
        assert_eq!(tie.to_f64(), 1.0);
        let above = tie + Rational::from_f64(2f64.powi(-80)).unwrap();
        assert_eq!(above.to_f64(), 1.0 + f64::EPSILON);
    }

    proptest! {
        #[test]
        fn always_normalized(p in -10_000i64..10_000, q in 1i64..10_000, s in -50i64..50, t in 1i64..50) {
            let x = Rational::new(p, q) * Rational::new(s, t) + Rational::new(s, q);
            prop_assert!(x.denom() > &BigInt::from(0));
            prop_assert!(x.numer().gcd(x.denom()) == BigInt::from(1) || x.is_zero());
        }

        #[test]
        fn display_parse_round_trip(p in any::<i64>(), q in 1i64..i64::MAX) {
            let x = Rational::new(p, q);
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }

        #[test]
        fn f64_round_trip_is_exact(x in -1e300f64..1e300) {
            let q = Rational::from_f64(x).unwrap();
            prop_assert_eq!(q.to_f64(), x);
        }
    }
}
