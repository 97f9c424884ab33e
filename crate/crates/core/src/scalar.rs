//! Coefficient rings: arbitrary-precision integers and rationals, the
//! quadratic field ℚ(√2), and `f64` for numeric evaluation.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A commutative integral domain with exact division where the quotient exists.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    /// `Some(q)` with `self = q * rhs` when such `q` exists in the ring.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;
}

/// An ordered field that rational coefficients embed into.
pub trait Scalar: Ring + Div<Output = Self> {
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn is_positive(&self) -> bool;
}

impl Ring for BigInt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }

    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl Ring for Rational {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

impl Ring for f64 {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (*rhs != 0.0).then(|| self / rhs)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_positive(&self) -> bool {
        *self > 0.0
    }
}

/// Converts with correct rounding for moderate sizes and graceful scaling for huge ones.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scaled = if shift > 0 {
        r / Rational::from_integer(BigInt::one() << (shift as usize))
    } else {
        r * Rational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    let n = scaled.numer().to_f64().unwrap_or(f64::NAN);
    let d = scaled.denom().to_f64().unwrap_or(f64::NAN);
    libm::ldexp(n / d, shift as i32)
}

/// Exact binary expansion of a finite float.
pub fn f64_to_rational(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q` or a finite decimal such as `-2.5e3`, exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(n));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all: String = [int_part, frac_part].concat();
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

/// Element `a + b√2` of ℚ(√2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn sqrt2() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 2b²`, nonzero for every nonzero element.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - int(2) * &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // opposite signs: compare a² with 2b²
        let diff = self.norm();
        if Signed::is_positive(&diff) {
            sa
        } else {
            sb
        }
    }
}

impl core::str::FromStr for QuadExt {
    type Err = Error;

    /// Accepts the display form: `a`, `b*sqrt2`, `a+b*sqrt2`, `a-sqrt2`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = t.find("sqrt2") else {
            return Ok(Self::from(parse_rational(&t)?));
        };
        if pos + 5 != t.len() {
            return Err(Error::Parse(format!("trailing input after sqrt2 in '{s}'")));
        }
        let head = &t[..pos];
        let head = head.strip_suffix('*').unwrap_or(head);
        let bytes = head.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
            .unwrap_or(0);
        let (a, b) = head.split_at(split);
        let a = if a.is_empty() {
            Rational::zero()
        } else {
            parse_rational(a)?
        };
        let b = match b {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            _ => parse_rational(b.strip_prefix('+').unwrap_or(b))?,
        };
        Ok(Self::new(a, b))
    }
}

fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if Signed::is_positive(r) {
        1
    } else {
        -1
    }
}

impl From<Rational> for QuadExt {
    fn from(a: Rational) -> Self {
        Self::new(a, Rational::zero())
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt2", self.b),
            (false, false) => {
                let b = if Signed::is_negative(&self.b) {
                    format!("-{}", -self.b.clone())
                } else {
                    format!("+{}", self.b)
                };
                write!(f, "{}{}*sqrt2", self.a, b)
            }
        }
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }
}

impl Neg for QuadExt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl<'a> Add<&'a QuadExt> for QuadExt {
    type Output = Self;
    fn add(self, rhs: &'a QuadExt) -> Self {
        Self::new(self.a + &rhs.a, self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a QuadExt> for QuadExt {
    type Output = Self;
    fn sub(self, rhs: &'a QuadExt) -> Self {
        Self::new(self.a - &rhs.a, self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a QuadExt> for QuadExt {
    type Output = Self;
    fn mul(self, rhs: &'a QuadExt) -> Self {
        let a = &self.a * &rhs.a + int(2) * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Self::new(a, b)
    }
}

impl Add for QuadExt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self + &rhs
    }
}

impl Sub for QuadExt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self - &rhs
    }
}

impl Mul for QuadExt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self * &rhs
    }
}

impl Div for QuadExt {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in Q(sqrt2)")
    }
}

impl AddAssign for QuadExt {
    fn add_assign(&mut self, rhs: Self) {
        *self += &rhs;
    }
}

impl<'a> AddAssign<&'a QuadExt> for QuadExt {
    fn add_assign(&mut self, rhs: &'a QuadExt) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign for QuadExt {
    fn sub_assign(&mut self, rhs: Self) {
        *self -= &rhs;
    }
}

impl<'a> SubAssign<&'a QuadExt> for QuadExt {
    fn sub_assign(&mut self, rhs: &'a QuadExt) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl MulAssign for QuadExt {
    fn mul_assign(&mut self, rhs: Self) {
        let lhs = core::mem::replace(self, QuadExt::zero());
        *self = lhs * &rhs;
    }
}

impl Ring for QuadExt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.clone() * &r)
    }

    fn from_i64(v: i64) -> Self {
        int(v).into()
    }
}

impl Scalar for QuadExt {
    fn from_rational(r: &Rational) -> Self {
        r.clone().into()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * core::f64::consts::SQRT_2
    }

    fn is_positive(&self) -> bool {
        self.signum() > 0
    }
}

/// Prints a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}
