//! Exact signed rational amounts.
//!
//! Every monetary value, quantity and coefficient in the engines is a
//! [`Money`]: an arbitrary-precision rational. Sums, differences and products
//! never round, so accounting identities can be checked with `==`. Rounding
//! happens only when a value is rendered with [`Money::to_fixed`].

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact signed rational amount.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Money(BigRational);

/// Units of product or input. Same exact representation as [`Money`].
pub type Quantity = Money;

/// Dimensionless ratio (coefficients, elasticities, weights).
pub type Fraction = Money;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid exact number {input:?}: {reason}")]
pub struct ParseMoneyError {
    pub input: String,
    pub reason: &'static str,
}

impl Money {
    pub fn zero() -> Self {
        Money(BigRational::zero())
    }

    pub fn one() -> Self {
        Money(BigRational::one())
    }

    pub fn from_int(value: i64) -> Self {
        Money(BigRational::from_integer(BigInt::from(value)))
    }

    /// `numer / denom`, or `None` when `denom` is zero.
    pub fn from_ratio(numer: i64, denom: i64) -> Option<Self> {
        if denom == 0 {
            return None;
        }
        Some(Money(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    pub fn from_rational(value: BigRational) -> Self {
        Money(value)
    }

    /// Exact value of a finite float (every finite `f64` is a dyadic rational).
    pub fn from_f64(value: f64) -> Option<Self> {
        BigRational::from_float(value).map(Money)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
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

    pub fn abs(&self) -> Self {
        Money(self.0.abs())
    }

    pub fn signum(&self) -> Ordering {
        self.0.cmp(&BigRational::zero())
    }

    pub fn checked_div(&self, rhs: &Money) -> Option<Money> {
        if rhs.is_zero() {
            None
        } else {
            Some(Money(&self.0 / &rhs.0))
        }
    }

    pub fn floor(&self) -> Money {
        Money(self.0.floor())
    }

    pub fn ceil(&self) -> Money {
        Money(self.0.ceil())
    }

    /// Integer part as `i64`, if it fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn max_of(self, other: Money) -> Money {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min_of(self, other: Money) -> Money {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering with `places` fractional digits, rounded half-to-even.
    pub fn to_fixed(&self, places: u32) -> String {
        let scale = BigInt::from(10u32).pow(places);
        let scaled = self.0.numer() * &scale;
        let denom = self.0.denom();
        let (mut quotient, remainder) = scaled.div_mod_floor(denom);
        let twice = &remainder * 2u32;
        match twice.cmp(denom) {
            Ordering::Greater => quotient += 1u32,
            Ordering::Equal if quotient.is_odd() => quotient += 1u32,
            _ => {}
        }
        let negative = quotient.sign() == Sign::Minus;
        let digits = quotient.abs().to_string();
        let places = places as usize;
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        if places == 0 {
            out.push_str(&digits);
            return out;
        }
        let padded = if digits.len() <= places {
            let mut s: String = "0".repeat(places + 1 - digits.len());
            s.push_str(&digits);
            s
        } else {
            digits
        };
        let split = padded.len() - places;
        out.push_str(&padded[..split]);
        out.push('.');
        out.push_str(&padded[split..]);
        out
    }

    /// Exact rendering: `"n"` for integers, `"n/d"` otherwise.
    pub fn to_raw_string(&self) -> String {
        if self.0.is_integer() {
            self.0.numer().to_string()
        } else {
            alloc::format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Money {
    type Err = ParseMoneyError;

    /// Accepts `"-12"`, `"3.25"`, `".5"`, `"1/3"` and `"-7/4"`.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let fail = |reason| ParseMoneyError {
            input: input.to_string(),
            reason,
        };
        let text = input.trim();
        if text.is_empty() {
            return Err(fail("empty"));
        }
        if let Some((numer, denom)) = text.split_once('/') {
            let numer = parse_signed_integer(numer.trim()).ok_or_else(|| fail("bad numerator"))?;
            let denom = parse_signed_integer(denom.trim()).ok_or_else(|| fail("bad denominator"))?;
            if denom.is_zero() {
                return Err(fail("zero denominator"));
            }
            return Ok(Money(BigRational::new(numer, denom)));
        }
        let (negative, body) = match text.as_bytes()[0] {
            b'-' => (true, &text[1..]),
            b'+' => (false, &text[1..]),
            _ => (false, text),
        };
        let (whole, frac) = match body.split_once('.') {
            Some((w, f)) => (w, f),
            None => (body, ""),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(fail("no digits"));
        }
        if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(fail("unexpected character"));
        }
        let mut digits: Vec<u8> = Vec::with_capacity(whole.len() + frac.len());
        digits.extend(whole.bytes().map(|b| b - b'0'));
        digits.extend(frac.bytes().map(|b| b - b'0'));
        let magnitude = BigInt::from_radix_be(Sign::Plus, &digits, 10).unwrap_or_default();
        let denom = BigInt::from(10u32).pow(frac.len() as u32);
        let value = BigRational::new(magnitude, denom);
        Ok(Money(if negative { -value } else { value }))
    }
}

fn parse_signed_integer(text: &str) -> Option<BigInt> {
    let (negative, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: Vec<u8> = body.bytes().map(|b| b - b'0').collect();
    let value = BigInt::from_radix_be(Sign::Plus, &digits, 10)?;
    Some(if negative { -value } else { value })
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_raw_string())
    }
}

impl fmt::Debug for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Money({})", self.to_raw_string())
    }
}

impl From<i64> for Money {
    fn from(value: i64) -> Self {
        Money::from_int(value)
    }
}

impl From<i32> for Money {
    fn from(value: i32) -> Self {
        Money::from_int(value.into())
    }
}

impl From<u32> for Money {
    fn from(value: u32) -> Self {
        Money::from_int(value.into())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Money> for Money {
            type Output = Money;
            fn $method(self, rhs: Money) -> Money {
                Money($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a Money> for Money {
            type Output = Money;
            fn $method(self, rhs: &'a Money) -> Money {
                Money($trait::$method(self.0, &rhs.0))
            }
        }
        impl<'a> $trait<Money> for &'a Money {
            type Output = Money;
            fn $method(self, rhs: Money) -> Money {
                Money($trait::$method(&self.0, rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Money> for &'a Money {
            type Output = Money;
            fn $method(self, rhs: &'b Money) -> Money {
                Money($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like the underlying rational. Engines use
// `checked_div` wherever the divisor comes from user input.
forward_binop!(Div, div);

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Neg for &Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-&self.0)
    }
}

impl AddAssign<&Money> for Money {
    fn add_assign(&mut self, rhs: &Money) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Money> for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Money> for Money {
    fn sub_assign(&mut self, rhs: &Money) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign<Money> for Money {
    fn sub_assign(&mut self, rhs: Money) {
        self.0 -= rhs.0;
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Money> for Money {
    fn sum<I: Iterator<Item = &'a Money>>(iter: I) -> Money {
        iter.fold(Money::zero(), |acc, x| acc + x)
    }
}
