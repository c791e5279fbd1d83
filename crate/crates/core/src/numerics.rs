//! Scalar backends: exact rationals and binary floats of configurable precision.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. The two
//! implementations are [`Rational`] (exact, always in lowest terms) and
//! [`BigFloat`] (a sign/magnitude/exponent triple rounded to nearest-even at
//! a fixed number of significand bits). Comparisons are exact on both
//! backends; tolerance logic belongs to callers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

/// Smallest float precision accepted anywhere in the crate.
pub const MIN_BITS: u32 = 64;
/// Float precision used when none is configured.
pub const DEFAULT_BITS: u32 = 256;

/// Which arithmetic a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Backend {
    Exact,
    Float { bits: u32 },
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float { bits } => write!(f, "float({bits} bits)"),
        }
    }
}

/// Working precision (float significand bits) and the interval-width target.
#[derive(Debug, Clone, PartialEq)]
pub struct Precision {
    bits: u32,
    epsilon: Rational,
}

impl Precision {
    pub fn new(bits: u32, epsilon: Rational) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::Input(format!("precision must be at least {MIN_BITS} bits, got {bits}")));
        }
        if !epsilon.is_positive() {
            return Err(Error::Input(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Precision { bits, epsilon })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }
}

/// Arithmetic contract shared by both backends.
///
/// Binary operators never coerce between backends: the type system rules
/// that out, and [`Scalar::from_rational`] refuses a foreign [`Backend`].
/// Float operands of different precisions produce a result at the larger
/// precision.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    /// True for the rational backend.
    const EXACT: bool;

    fn backend(&self) -> Backend;

    /// Converts an exact rational into this backend. Fails if `backend`
    /// names the other backend.
    fn from_rational(r: &Rational, backend: Backend) -> Result<Self>;

    /// Converts `r` into the same backend (and precision) as `self`.
    fn lift(&self, r: &Rational) -> Self;

    fn lift_int(&self, v: i64) -> Self {
        self.lift(&Rational::from_integer(BigInt::from(v)))
    }

    fn zero_like(&self) -> Self {
        self.lift_int(0)
    }

    fn one_like(&self) -> Self {
        self.lift_int(1)
    }

    fn is_zero(&self) -> bool;

    /// -1, 0 or 1.
    fn sign(&self) -> i8;

    fn magnitude(&self) -> Self;

    /// Square root; only the float backend supports it.
    fn sqrt(&self) -> Result<Self>;

    /// The exact value of `self`.
    fn to_rational(&self) -> Rational;

    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn backend(&self) -> Backend {
        Backend::Exact
    }

    fn from_rational(r: &Rational, backend: Backend) -> Result<Self> {
        match backend {
            Backend::Exact => Ok(r.clone()),
            other => Err(Error::BackendMismatch(format!("cannot build an exact scalar for backend {other}"))),
        }
    }

    fn lift(&self, r: &Rational) -> Self {
        r.clone()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn sign(&self) -> i8 {
        match self.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    fn magnitude(&self) -> Self {
        Signed::abs(self)
    }

    fn sqrt(&self) -> Result<Self> {
        Err(Error::Unsupported("square roots are not available in exact mode".into()))
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    if Zero::is_zero(r) {
        return 0.0;
    }
    BigFloat::from_rational(r, MIN_BITS).to_f64()
}

/// Parses a decimal literal (optionally signed, optional fraction and
/// exponent) or a fraction `p/q` into the exact rational it denotes.
///
/// `"0.625"` becomes 5/8 with no rounding anywhere.
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let token = text.trim();
    let bad = |reason: &str| Error::Parse { token: token.to_string(), reason: reason.to_string() };

    if let Some((num, den)) = token.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad("numerator is not an integer"))?;
        let den: BigInt = den.trim().parse().map_err(|_| bad("denominator is not an integer"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }

    let (negative, body) = match token.as_bytes().first() {
        Some(b'-') => (true, &token[1..]),
        Some(b'+') => (false, &token[1..]),
        Some(_) => (false, token),
        None => return Err(bad("empty literal")),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp_text = &body[pos + 1..];
            let exp: i64 = exp_text.parse().map_err(|_| bad("exponent is not an integer"))?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad("unexpected character"));
    }
    if exponent.unsigned_abs() > 100_000 {
        return Err(bad("exponent out of range"));
    }

    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad("bad digits"))? };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    Ok(if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Correctly rounded conversion of an exact rational to `bits` of precision.
pub fn to_float(r: &Rational, bits: u32) -> BigFloat {
    assert!(bits >= MIN_BITS, "float precision must be at least {MIN_BITS} bits");
    BigFloat::from_rational(r, bits)
}

/// Renders `r` as a terminating decimal, or `None` when its denominator has
/// prime factors other than 2 and 5.
pub fn render_decimal_exact(r: &Rational) -> Option<String> {
    let mut den = r.denom().clone();
    let (two, five) = (BigInt::from(2u32), BigInt::from(5u32));
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10u32), places));
    debug_assert!(scaled.is_integer());
    let digits = scaled.numer().abs().to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    if places == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let frac_part = frac_part.trim_end_matches('0');
    Some(if frac_part.is_empty() { format!("{sign}{int_part}") } else { format!("{sign}{int_part}.{frac_part}") })
}

/// Scientific rendering of `r` with `digits` significant digits, rounded to
/// nearest. Trailing zeros of the significand are dropped.
pub fn render_scientific(r: &Rational, digits: usize) -> String {
    assert!(digits >= 1);
    if Zero::is_zero(r) {
        return "0".to_string();
    }
    let x = Signed::abs(r);
    let ten = BigInt::from(10u32);
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    let log2 = x.numer().bits() as f64 - x.denom().bits() as f64;
    let mut k = (log2 * std::f64::consts::LOG10_2).floor() as i64;
    let lower = num_traits::pow(ten.clone(), digits - 1);
    let upper = &lower * &ten;
    let significand = loop {
        let n = (&x * pow10(digits as i64 - 1 - k)).round().to_integer();
        if n >= upper {
            k += 1;
        } else if n < lower {
            k -= 1;
        } else {
            break n;
        }
    };
    let s = significand.to_string();
    let (lead, rest) = s.split_at(1);
    let rest = rest.trim_end_matches('0');
    let sign = if r.is_negative() { "-" } else { "" };
    if rest.is_empty() {
        format!("{sign}{lead}e{k}")
    } else {
        format!("{sign}{lead}.{rest}e{k}")
    }
}

/// Binary floating point number `(-1)^neg * mag * 2^exp` with at most `prec`
/// significand bits, rounded to nearest, ties to even.
///
/// Non-zero values keep `mag` odd, so equal values have equal
/// representations regardless of precision.
#[derive(Clone)]
pub struct BigFloat {
    neg: bool,
    mag: BigUint,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { neg: false, mag: BigUint::zero(), exp: 0, prec }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        let mag = BigUint::from(v.unsigned_abs());
        Self::round(v < 0, mag, 0, prec, false)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        if Zero::is_zero(r) {
            return Self::zero(prec);
        }
        let neg = r.is_negative();
        let num = r.numer().magnitude().clone();
        let den = r.denom().magnitude().clone();
        Self::divide_magnitudes(neg, &num, 0, &den, 0, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Same value, re-rounded (if necessary) to `prec` bits.
    pub fn with_precision(&self, prec: u32) -> Self {
        Self::round(self.neg, self.mag.clone(), self.exp, prec, false)
    }

    /// Unit in the last place of `self` at its own precision; zero maps to
    /// zero.
    pub fn ulp(&self) -> Self {
        if self.mag.is_zero() {
            return Self::zero(self.prec);
        }
        let e = self.top() - self.prec as i64;
        BigFloat { neg: false, mag: BigUint::one(), exp: e, prec: self.prec }
    }

    fn is_zero_value(&self) -> bool {
        self.mag.is_zero()
    }

    /// Exponent such that `2^(top-1) <= |self| < 2^top`.
    fn top(&self) -> i64 {
        self.mag.bits() as i64 + self.exp
    }

    fn round(neg: bool, mag: BigUint, exp: i64, prec: u32, sticky: bool) -> Self {
        if mag.is_zero() {
            debug_assert!(!sticky);
            return Self::zero(prec);
        }
        let bits = mag.bits();
        let (mut m, mut e) = if bits > prec as u64 {
            let shift = bits - prec as u64;
            let kept = &mag >> shift;
            let dropped = &mag - (&kept << shift);
            let half = BigUint::one() << (shift - 1);
            let up = match dropped.cmp(&half) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => sticky || kept.bit(0),
            };
            (if up { kept + 1u32 } else { kept }, exp + shift as i64)
        } else {
            debug_assert!(!sticky, "inexact results must carry guard bits");
            (mag, exp)
        };
        if let Some(tz) = m.trailing_zeros() {
            if tz > 0 {
                m >>= tz;
                e += tz as i64;
            }
        }
        BigFloat { neg, mag: m, exp: e, prec }
    }

    fn divide_magnitudes(neg: bool, num: &BigUint, num_exp: i64, den: &BigUint, den_exp: i64, prec: u32) -> Self {
        let shift = (prec as i64 + 3 + den.bits() as i64 - num.bits() as i64).max(0);
        let scaled = num << shift as u64;
        let (q, r) = scaled.div_rem(den);
        Self::round(neg, q, num_exp - den_exp - shift, prec, !r.is_zero())
    }

    fn add_signed(&self, other: &Self, negate_other: bool) -> Self {
        let prec = self.prec.max(other.prec);
        let other_neg = other.neg ^ negate_other;
        if other.is_zero_value() {
            return self.with_precision(prec);
        }
        if self.is_zero_value() {
            let mut r = other.with_precision(prec);
            r.neg = other_neg && !r.mag.is_zero();
            return r;
        }
        let (ta, tb) = (self.top(), other.top());
        let guard = prec as i64 + 2;
        if tb < ta - guard {
            return self.with_precision(prec);
        }
        if ta < tb - guard {
            let mut r = other.with_precision(prec);
            r.neg = other_neg;
            return r;
        }
        let e = self.exp.min(other.exp);
        let ma = &self.mag << (self.exp - e) as u64;
        let mb = &other.mag << (other.exp - e) as u64;
        let (neg, mag) = if self.neg == other_neg {
            (self.neg, ma + mb)
        } else if ma >= mb {
            (self.neg, ma - mb)
        } else {
            (other_neg, mb - ma)
        };
        let neg = neg && !mag.is_zero();
        Self::round(neg, mag, e, prec, false)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_zero_value() || other.is_zero_value() {
            return Self::zero(prec);
        }
        Self::round(self.neg ^ other.neg, &self.mag * &other.mag, self.exp + other.exp, prec, false)
    }

    fn div_ref(&self, other: &Self) -> Self {
        assert!(!other.is_zero_value(), "BigFloat division by zero");
        let prec = self.prec.max(other.prec);
        if self.is_zero_value() {
            return Self::zero(prec);
        }
        Self::divide_magnitudes(self.neg ^ other.neg, &self.mag, self.exp, &other.mag, other.exp, prec)
    }

    /// Correctly rounded square root; `None` for negative input.
    pub fn checked_sqrt(&self) -> Option<Self> {
        if self.neg {
            return None;
        }
        if self.is_zero_value() {
            return Some(self.clone());
        }
        let want = 2 * self.prec as i64 + 6;
        let mut k = (want - self.mag.bits() as i64).max(0);
        if (self.exp - k).rem_euclid(2) == 1 {
            k += 1;
        }
        let scaled = &self.mag << k as u64;
        let root = scaled.sqrt();
        let sticky = &root * &root != scaled;
        Some(Self::round(false, root, (self.exp - k) / 2, self.prec, sticky))
    }

    pub fn to_rational(&self) -> Rational {
        let m = BigInt::from_biguint(if self.neg { Sign::Minus } else { Sign::Plus }, self.mag.clone());
        if self.exp >= 0 {
            Rational::from_integer(m << self.exp as u64)
        } else {
            Rational::new(m, BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero_value() {
            return 0.0;
        }
        let bits = self.mag.bits();
        let (m, e) = if bits > 64 {
            (&self.mag >> (bits - 64), self.exp + (bits - 64) as i64)
        } else {
            (self.mag.clone(), self.exp)
        };
        let base = m.to_u64().expect("at most 64 bits") as f64;
        let e = e.clamp(-4000, 4000) as i32;
        let half = e / 2;
        let v = base * 2f64.powi(half) * 2f64.powi(e - half);
        if self.neg {
            -v
        } else {
            v
        }
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        let sa = self.sign_i8();
        let sb = other.sign_i8();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let by_magnitude = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let ma = &self.mag << (self.exp - e) as u64;
                let mb = &other.mag << (other.exp - e) as u64;
                ma.cmp(&mb)
            }
            o => o,
        };
        if sa < 0 {
            by_magnitude.reverse()
        } else {
            by_magnitude
        }
    }

    fn sign_i8(&self) -> i8 {
        if self.mag.is_zero() {
            0
        } else if self.neg {
            -1
        } else {
            1
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for BigFloat {}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Enough digits that parsing the text back at the same precision
        // recovers this exact value.
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
        f.write_str(&render_scientific(&self.to_rational(), digits))
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({}, {} bits)", render_scientific(&self.to_rational(), 20), self.prec)
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(mut self) -> BigFloat {
        if !self.mag.is_zero() {
            self.neg = !self.neg;
        }
        self
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -self.clone()
    }
}

macro_rules! float_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                let f: fn(&BigFloat, &BigFloat) -> BigFloat = $body;
                f(self, rhs)
            }
        }
        impl $trait<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                (&self).$method(rhs)
            }
        }
        impl $trait<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                self.$method(&rhs)
            }
        }
    };
}

float_binop!(Add, add, |a, b| a.add_signed(b, false));
float_binop!(Sub, sub, |a, b| a.add_signed(b, true));
float_binop!(Mul, mul, |a, b| a.mul_ref(b));
float_binop!(Div, div, |a, b| a.div_ref(b));

impl AddAssign<&BigFloat> for BigFloat {
    fn add_assign(&mut self, rhs: &BigFloat) {
        *self = self.add_signed(rhs, false);
    }
}

impl SubAssign<&BigFloat> for BigFloat {
    fn sub_assign(&mut self, rhs: &BigFloat) {
        *self = self.add_signed(rhs, true);
    }
}

impl Scalar for BigFloat {
    const EXACT: bool = false;

    fn backend(&self) -> Backend {
        Backend::Float { bits: self.prec }
    }

    fn from_rational(r: &Rational, backend: Backend) -> Result<Self> {
        match backend {
            Backend::Float { bits } if bits >= MIN_BITS => Ok(BigFloat::from_rational(r, bits)),
            Backend::Float { bits } => Err(Error::Input(format!("float precision {bits} is below {MIN_BITS} bits"))),
            Backend::Exact => Err(Error::BackendMismatch("cannot build a float scalar for the exact backend".into())),
        }
    }

    fn lift(&self, r: &Rational) -> Self {
        BigFloat::from_rational(r, self.prec)
    }

    fn lift_int(&self, v: i64) -> Self {
        BigFloat::from_i64(v, self.prec)
    }

    fn is_zero(&self) -> bool {
        self.mag.is_zero()
    }

    fn sign(&self) -> i8 {
        self.sign_i8()
    }

    fn magnitude(&self) -> Self {
        BigFloat { neg: false, ..self.clone() }
    }

    fn sqrt(&self) -> Result<Self> {
        self.checked_sqrt()
            .ok_or_else(|| Error::Internal(format!("square root of negative value {self:?}")))
    }

    fn to_rational(&self) -> Rational {
        BigFloat::to_rational(self)
    }

    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_exact_decimals() {
        assert_eq!(parse_decimal("0.5").unwrap(), q(1, 2));
        assert_eq!(parse_decimal("0.625").unwrap(), q(5, 8));
        assert_eq!(parse_decimal("0").unwrap(), q(0, 1));
        assert_eq!(parse_decimal("-8.875").unwrap(), q(-71, 8));
        assert_eq!(parse_decimal("1e-7").unwrap(), q(1, 10_000_000));
        assert_eq!(parse_decimal("2.5E2").unwrap(), q(250, 1));
        assert_eq!(parse_decimal(".25").unwrap(), q(1, 4));
        assert_eq!(parse_decimal(" 3/6 ").unwrap(), q(1, 2));
        assert_eq!(parse_decimal("+7").unwrap(), q(7, 1));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "-", "1.2.3", "abc", "1e", "0x10", "1/0", "."] {
            match parse_decimal(bad) {
                Err(Error::Parse { token, .. }) => assert_eq!(token, bad.trim()),
                other => panic!("{bad:?} parsed as {other:?}"),
            }
        }
    }

    #[test]
    fn dyadic_rationals_convert_exactly() {
        assert_eq!(to_float(&q(1, 2), 64).to_rational(), q(1, 2));
        assert_eq!(to_float(&q(5, 8), 256).to_rational(), q(5, 8));
        assert_eq!(to_float(&q(0, 1), 64).to_rational(), q(0, 1));
    }

    #[test]
    fn one_third_rounds_to_nearest() {
        let third = to_float(&q(1, 3), 64);
        // nearest 64-bit value is round(2^65 / 3) * 2^-65
        let expected = Rational::new(BigInt::from(0xAAAA_AAAA_AAAA_AAABu64), BigInt::one() << 65u32);
        assert_eq!(third.to_rational(), expected);
        let err = Signed::abs(&(third.to_rational() - q(1, 3)));
        let half_ulp = Rational::new(BigInt::one(), BigInt::one() << 66u32);
        assert!(err <= half_ulp);
    }

    #[test]
    fn ties_round_to_even() {
        // 2^64 + 1 needs 65 bits; at 64 bits the tie goes to the even neighbour 2^64.
        let v = Rational::from_integer((BigInt::one() << 64u32) + 1);
        assert_eq!(to_float(&v, 64).to_rational(), Rational::from_integer(BigInt::one() << 64u32));
        // 2^64 + 3 ties between 2^64+2 and 2^64+4; even significand is 2^64+4.
        let v = Rational::from_integer((BigInt::one() << 64u32) + 3);
        assert_eq!(to_float(&v, 64).to_rational(), Rational::from_integer((BigInt::one() << 64u32) + 4));
    }

    #[test]
    fn precision_never_decreases() {
        let a = to_float(&q(1, 3), 64);
        let b = to_float(&q(1, 7), 256);
        assert_eq!((a.clone() + &b).precision(), 256);
        assert_eq!((b.clone() * &a).precision(), 256);
        assert_eq!((a / &b).precision(), 256);
    }

    #[test]
    fn backend_mismatch_is_an_error() {
        assert!(matches!(
            <Rational as Scalar>::from_rational(&q(1, 2), Backend::Float { bits: 64 }),
            Err(Error::BackendMismatch(_))
        ));
        assert!(matches!(
            <BigFloat as Scalar>::from_rational(&q(1, 2), Backend::Exact),
            Err(Error::BackendMismatch(_))
        ));
        assert!(Precision::new(32, q(1, 10)).is_err());
        assert!(Precision::new(64, q(0, 1)).is_err());
    }

    #[test]
    fn sqrt_is_correctly_rounded() {
        let two = BigFloat::from_i64(2, 128);
        let r = two.checked_sqrt().unwrap();
        let rr = r.to_rational();
        // r is the nearest 128-bit value to sqrt(2): (r - ulp/2)^2 < 2 < (r + ulp/2)^2
        let half_ulp = r.ulp().to_rational() / Rational::from_integer(2.into());
        let lo = &rr - &half_ulp;
        let hi = &rr + &half_ulp;
        assert!(&lo * &lo < q(2, 1) && &hi * &hi > q(2, 1));
        assert_eq!(BigFloat::from_i64(9, 64).checked_sqrt().unwrap().to_rational(), q(3, 1));
        assert!(BigFloat::from_i64(-1, 64).checked_sqrt().is_none());
    }

    #[test]
    fn comparisons_are_exact() {
        let a = to_float(&q(1, 3), 256);
        let b = a.clone() + &a.ulp();
        assert!(a < b);
        assert!(-b.clone() < -a.clone());
        assert_eq!(a.clone() - &a, BigFloat::zero(256));
        assert_eq!(BigFloat::from_i64(3, 64), BigFloat::from_i64(3, 512));
    }

    #[test]
    fn display_round_trips_at_same_precision() {
        for (n, d) in [(1, 3), (-22, 7), (5, 8), (123456789, 1000), (1, 1 << 40)] {
            let x = to_float(&q(n, d), 256);
            let back = to_float(&parse_decimal(&x.to_string()).unwrap(), 256);
            assert_eq!(back, x, "{x}");
        }
    }

    #[test]
    fn scientific_rendering() {
        assert_eq!(render_scientific(&q(-71, 8), 6), "-8.875e0");
        assert_eq!(render_scientific(&q(1, 3), 4), "3.333e-1");
        assert_eq!(render_scientific(&q(394523, 1), 3), "3.95e5");
        assert_eq!(render_scientific(&q(0, 1), 3), "0");
    }

    #[test]
    fn exact_rendering() {
        assert_eq!(render_decimal_exact(&q(5, 8)).as_deref(), Some("0.625"));
        assert_eq!(render_decimal_exact(&q(-71, 8)).as_deref(), Some("-8.875"));
        assert_eq!(render_decimal_exact(&q(40, 1)).as_deref(), Some("40"));
        assert_eq!(render_decimal_exact(&q(1, 3)), None);
        assert_eq!(render_decimal_exact(&q(-1, 20)).as_deref(), Some("-0.05"));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..5_000).prop_map(|(n, d)| q(n, d))
    }

    fn decimal_literal() -> impl Strategy<Value = String> {
        (any::<bool>(), 0u64..1_000_000_000, proptest::collection::vec(0u8..10, 0..=64)).prop_map(
            |(neg, int_part, mut frac)| {
                while frac.last() == Some(&0) {
                    frac.pop();
                }
                let frac: String = frac.iter().map(|d| char::from(b'0' + d)).collect();
                let body = if frac.is_empty() { int_part.to_string() } else { format!("{int_part}.{frac}") };
                if neg && !body.trim_matches(['0', '.']).is_empty() {
                    format!("-{body}")
                } else {
                    body
                }
            },
        )
    }

    proptest! {
        #[test]
        fn rational_arithmetic_is_exact(a in small_rational(), b in small_rational()) {
            prop_assert_eq!((a.clone() + &b) - &b, a.clone());
            if !Zero::is_zero(&b) {
                prop_assert_eq!((a.clone() * &b) / &b, a);
            }
        }

        #[test]
        fn decimal_literals_round_trip(lit in decimal_literal()) {
            let r = parse_decimal(&lit).unwrap();
            prop_assert_eq!(render_decimal_exact(&r).unwrap(), lit);
        }

        #[test]
        fn float_ops_within_one_rounding(a in small_rational(), b in small_rational(), bits in prop_oneof![Just(64u32), Just(113u32), Just(256u32)]) {
            let fa = to_float(&a, bits);
            let fb = to_float(&b, bits);
            let (ra, rb) = (fa.to_rational(), fb.to_rational());
            let bound = Rational::new(BigInt::one(), BigInt::one() << (bits - 1));
            let mut checks = vec![(fa.clone() + &fb, &ra + &rb), (fa.clone() - &fb, &ra - &rb), (fa.clone() * &fb, &ra * &rb)];
            if !Zero::is_zero(&rb) {
                checks.push((fa.clone() / &fb, &ra / &rb));
            }
            for (got, exact) in checks {
                let err = Signed::abs(&(got.to_rational() - &exact));
                prop_assert!(err <= &bound * Signed::abs(&exact), "{:?} vs {}", got, exact);
            }
        }
    }
}
