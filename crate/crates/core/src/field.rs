//! Exact scalar arithmetic over `Q` and quadratic extensions `Q(sqrt D)`.
//!
//! Every value here is immutable and kept in canonical form: rationals are
//! gcd-reduced with a positive denominator, and a quadratic number stores its
//! rational and radical coefficients separately so that equality is
//! structural. Sign determination is exact — no floating point is involved
//! anywhere in this module.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors from scalar construction, arithmetic, and parsing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("mixed discriminants: sqrt({0}) vs sqrt({1})")]
    MixedDiscriminants(u64, u64),
    #[error("discriminant {0} must be a squarefree integer >= 2")]
    BadDiscriminant(u64),
    #[error("value has a nonzero sqrt coefficient; not a rational")]
    NotRational,
    #[error("scalar `{0}` does not belong to {1}")]
    FieldMismatch(String, FieldDescriptor),
    #[error("cannot parse scalar `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

/// Exact sign of a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        self != Sign::Negative
    }

    fn from_bigint(n: &BigInt) -> Sign {
        if n.is_zero() {
            Sign::Zero
        } else if n.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        match self.as_i8() * rhs.as_i8() {
            0 => Sign::Zero,
            1 => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// An arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`, reducing to canonical form. Fails when `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, FieldError> {
        let den = den.into();
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
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

    pub fn sign(&self) -> Sign {
        Sign::from_bigint(self.0.numer())
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, FieldError> {
        if rhs.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Parses the rational grammar `p` or `p/q` with an optional leading sign.
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        match Scalar::parse(text, FieldDescriptor::Rationals)? {
            Scalar::Rational(r) => Ok(r),
            Scalar::Quadratic(_) => unreachable!("rational context cannot yield a quadratic"),
        }
    }

}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
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

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }

        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

fn is_squarefree(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub(crate) fn check_discriminant(d: u64) -> Result<(), FieldError> {
    if d < 2 || !is_squarefree(d) {
        return Err(FieldError::BadDiscriminant(d));
    }
    Ok(())
}

/// A number `a + b*sqrt(d)` with rational `a`, `b` and squarefree `d >= 2`.
///
/// Since `sqrt(d)` is irrational the pair `(a, b)` is unique, so structural
/// equality coincides with value equality within a fixed discriminant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadraticNumber {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self, FieldError> {
        check_discriminant(d)?;
        Ok(QuadraticNumber { a, b, d })
    }

    /// Embeds a rational as `a + 0*sqrt(d)`.
    pub fn from_rational(a: Rational, d: u64) -> Result<Self, FieldError> {
        QuadraticNumber::new(a, Rational::zero(), d)
    }

    pub fn zero(d: u64) -> Result<Self, FieldError> {
        QuadraticNumber::from_rational(Rational::zero(), d)
    }

    pub fn one(d: u64) -> Result<Self, FieldError> {
        QuadraticNumber::from_rational(Rational::one(), d)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    pub fn discriminant(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Extracts the rational value; fails when the sqrt coefficient is nonzero.
    pub fn to_rational(&self) -> Result<Rational, FieldError> {
        if self.b.is_zero() {
            Ok(self.a.clone())
        } else {
            Err(FieldError::NotRational)
        }
    }

    fn check_same_field(&self, rhs: &Self) -> Result<(), FieldError> {
        if self.d != rhs.d {
            return Err(FieldError::MixedDiscriminants(self.d, rhs.d));
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.check_same_field(rhs)?;
        Ok(QuadraticNumber {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            d: self.d,
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.check_same_field(rhs)?;
        Ok(QuadraticNumber {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            d: self.d,
        })
    }

    /// `(a1 + b1 s)(a2 + b2 s) = (a1 a2 + d b1 b2) + (a1 b2 + a2 b1) s`.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.check_same_field(rhs)?;
        let d = Rational::from_int(self.d as i64);
        Ok(QuadraticNumber {
            a: &(&self.a * &rhs.a) + &(&d * &(&self.b * &rhs.b)),
            b: &(&self.a * &rhs.b) + &(&rhs.a * &self.b),
            d: self.d,
        })
    }

    /// Divides by multiplying with the conjugate and dividing by the norm.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.check_same_field(rhs)?;
        if rhs.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let num = self.checked_mul(&rhs.conjugate())?;
        let norm = rhs.norm();
        Ok(QuadraticNumber {
            a: num.a.checked_div(&norm)?,
            b: num.b.checked_div(&norm)?,
            d: self.d,
        })
    }

    pub fn neg(&self) -> Self {
        QuadraticNumber {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }

    pub fn conjugate(&self) -> Self {
        QuadraticNumber {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d,
        }
    }

    /// Field norm `a^2 - d b^2`; zero exactly when the number is zero.
    pub fn norm(&self) -> Rational {
        let d = Rational::from_int(self.d as i64);
        &(&self.a * &self.a) - &(&d * &(&self.b * &self.b))
    }

    /// Exact sign of `a + b*sqrt(d)`.
    ///
    /// When `a` and `b` agree in sign the answer is immediate. When they
    /// disagree, `|a|` and `|b| sqrt(d)` compete, and comparing `a^2` with
    /// `d b^2` settles it: the sign is `sign(a) * sign(a^2 - d b^2)`.
    pub fn sign(&self) -> Sign {
        let sa = self.a.sign();
        let sb = self.b.sign();
        match (sa, sb) {
            (Sign::Zero, s) | (s, Sign::Zero) => s,
            (Sign::Positive, Sign::Positive) => Sign::Positive,
            (Sign::Negative, Sign::Negative) => Sign::Negative,
            _ => sa * self.norm().sign(),
        }
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sep = if self.b.sign() == Sign::Negative { '-' } else { '+' };
        write!(f, "{}{}{}*sqrt({})", self.a, sep, self.b.abs(), self.d)
    }
}

impl fmt::Debug for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Identifies the scalar field a matrix or certificate lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    Quadratic(u64),
}

impl FieldDescriptor {
    pub fn quadratic(d: u64) -> Result<Self, FieldError> {
        check_discriminant(d)?;
        Ok(FieldDescriptor::Quadratic(d))
    }

    /// The smallest descriptor containing both; `Q` embeds in any `Q(sqrt d)`.
    pub fn join(self, other: FieldDescriptor) -> Result<FieldDescriptor, FieldError> {
        match (self, other) {
            (FieldDescriptor::Rationals, f) | (f, FieldDescriptor::Rationals) => Ok(f),
            (FieldDescriptor::Quadratic(d1), FieldDescriptor::Quadratic(d2)) => {
                if d1 == d2 {
                    Ok(self)
                } else {
                    Err(FieldError::MixedDiscriminants(d1, d2))
                }
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldDescriptor::Rationals => Scalar::Rational(Rational::zero()),
            FieldDescriptor::Quadratic(d) => {
                Scalar::Quadratic(QuadraticNumber::zero(*d).expect("descriptor is validated"))
            }
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldDescriptor::Rationals => Scalar::Rational(Rational::one()),
            FieldDescriptor::Quadratic(d) => {
                Scalar::Quadratic(QuadraticNumber::one(*d).expect("descriptor is validated"))
            }
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Quadratic(d) => write!(f, "Q(sqrt {d})"),
        }
    }
}

impl std::str::FromStr for FieldDescriptor {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, FieldError> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldDescriptor::Rationals);
        }
        let inner = s
            .strip_prefix("Q(sqrt ")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| FieldError::Parse {
                text: s.to_string(),
                reason: "expected `Q` or `Q(sqrt D)`".to_string(),
            })?;
        let d: u64 = inner.parse().map_err(|_| FieldError::Parse {
            text: s.to_string(),
            reason: "discriminant is not an integer".to_string(),
        })?;
        FieldDescriptor::quadratic(d)
    }
}

/// A scalar from either `Q` or some `Q(sqrt d)`.
///
/// Equality is structural: a rational and its embedding into `Q(sqrt d)` are
/// distinct representations. Matrices normalize all entries to one variant,
/// and [`Scalar::promote`] converts explicitly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Quadratic(QuadraticNumber),
}

impl Scalar {
    pub fn from_int(n: i64) -> Scalar {
        Scalar::Rational(Rational::from_int(n))
    }

    pub fn field(&self) -> FieldDescriptor {
        match self {
            Scalar::Rational(_) => FieldDescriptor::Rationals,
            Scalar::Quadratic(q) => FieldDescriptor::Quadratic(q.discriminant()),
        }
    }

    pub fn sign(&self) -> Sign {
        match self {
            Scalar::Rational(r) => r.sign(),
            Scalar::Quadratic(q) => q.sign(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Sign::Zero
    }

    /// Rewrites the scalar in the given field; rationals embed into any
    /// quadratic field, while leaving a quadratic field requires a zero
    /// sqrt coefficient.
    pub fn promote(&self, field: FieldDescriptor) -> Result<Scalar, FieldError> {
        match (self, field) {
            (Scalar::Rational(r), FieldDescriptor::Rationals) => Ok(Scalar::Rational(r.clone())),
            (Scalar::Rational(r), FieldDescriptor::Quadratic(d)) => Ok(Scalar::Quadratic(
                QuadraticNumber::from_rational(r.clone(), d)?,
            )),
            (Scalar::Quadratic(q), FieldDescriptor::Quadratic(d)) if q.discriminant() == d => {
                Ok(Scalar::Quadratic(q.clone()))
            }
            (Scalar::Quadratic(q), FieldDescriptor::Rationals) => {
                q.to_rational().map(Scalar::Rational)
            }
            (Scalar::Quadratic(q), FieldDescriptor::Quadratic(d)) => {
                Err(FieldError::MixedDiscriminants(q.discriminant(), d))
            }
        }
    }

    pub fn to_rational(&self) -> Result<Rational, FieldError> {
        match self {
            Scalar::Rational(r) => Ok(r.clone()),
            Scalar::Quadratic(q) => q.to_rational(),
        }
    }

    fn lift(&self, rhs: &Scalar) -> Result<(QuadraticOrRational, QuadraticOrRational), FieldError> {
        let field = self.field().join(rhs.field())?;
        Ok(match field {
            FieldDescriptor::Rationals => {
                let (Scalar::Rational(a), Scalar::Rational(b)) = (self, rhs) else {
                    unreachable!("join of rationals is rational")
                };
                (
                    QuadraticOrRational::Rational(a.clone()),
                    QuadraticOrRational::Rational(b.clone()),
                )
            }
            FieldDescriptor::Quadratic(d) => {
                let pa = self.promote(FieldDescriptor::Quadratic(d))?;
                let pb = rhs.promote(FieldDescriptor::Quadratic(d))?;
                let (Scalar::Quadratic(a), Scalar::Quadratic(b)) = (pa, pb) else {
                    unreachable!("promotion to a quadratic field yields quadratics")
                };
                (
                    QuadraticOrRational::Quadratic(a),
                    QuadraticOrRational::Quadratic(b),
                )
            }
        })
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        match self.lift(rhs)? {
            (QuadraticOrRational::Rational(a), QuadraticOrRational::Rational(b)) => {
                Ok(Scalar::Rational(&a + &b))
            }
            (QuadraticOrRational::Quadratic(a), QuadraticOrRational::Quadratic(b)) => {
                Ok(Scalar::Quadratic(a.checked_add(&b)?))
            }
            _ => unreachable!("lift yields matching variants"),
        }
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        match self.lift(rhs)? {
            (QuadraticOrRational::Rational(a), QuadraticOrRational::Rational(b)) => {
                Ok(Scalar::Rational(&a - &b))
            }
            (QuadraticOrRational::Quadratic(a), QuadraticOrRational::Quadratic(b)) => {
                Ok(Scalar::Quadratic(a.checked_sub(&b)?))
            }
            _ => unreachable!("lift yields matching variants"),
        }
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        match self.lift(rhs)? {
            (QuadraticOrRational::Rational(a), QuadraticOrRational::Rational(b)) => {
                Ok(Scalar::Rational(&a * &b))
            }
            (QuadraticOrRational::Quadratic(a), QuadraticOrRational::Quadratic(b)) => {
                Ok(Scalar::Quadratic(a.checked_mul(&b)?))
            }
            _ => unreachable!("lift yields matching variants"),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        match self.lift(rhs)? {
            (QuadraticOrRational::Rational(a), QuadraticOrRational::Rational(b)) => {
                Ok(Scalar::Rational(a.checked_div(&b)?))
            }
            (QuadraticOrRational::Quadratic(a), QuadraticOrRational::Quadratic(b)) => {
                Ok(Scalar::Quadratic(a.checked_div(&b)?))
            }
            _ => unreachable!("lift yields matching variants"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quadratic(q) => Scalar::Quadratic(q.neg()),
        }
    }

    /// Parses the scalar grammar in the context of `field`.
    ///
    /// Rational form: `p` or `p/q`. Quadratic form: `p/q+r/s*sqrt(D)` (or with
    /// `-`). Whitespace is ignored; a leading sign is permitted on each
    /// rational. Quadratic syntax is rejected in a rational context, and the
    /// written discriminant must match the field's.
    pub fn parse(text: &str, field: FieldDescriptor) -> Result<Scalar, FieldError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason: &str| FieldError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };

        let mut cursor = Cursor::new(&compact);
        let first = cursor.rational().map_err(|r| err(&r))?;
        if cursor.at_end() {
            return match field {
                FieldDescriptor::Rationals => Ok(Scalar::Rational(first)),
                FieldDescriptor::Quadratic(d) => Ok(Scalar::Quadratic(
                    QuadraticNumber::from_rational(first, d)?,
                )),
            };
        }

        let sep = cursor.sign().map_err(|r| err(&r))?;
        let coeff = cursor.rational().map_err(|r| err(&r))?;
        let written_d = cursor.sqrt_suffix().map_err(|r| err(&r))?;
        if !cursor.at_end() {
            return Err(err("trailing characters after sqrt(...)"));
        }

        let FieldDescriptor::Quadratic(d) = field else {
            return Err(err("sqrt term is not a rational"));
        };
        if written_d != d {
            return Err(err(&format!(
                "discriminant {written_d} does not match field {field}"
            )));
        }
        let b = if sep == '-' { -coeff } else { coeff };
        Ok(Scalar::Quadratic(QuadraticNumber::new(first, b, d)?))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Quadratic(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Scalar {
        Scalar::Rational(r)
    }
}

impl From<QuadraticNumber> for Scalar {
    fn from(q: QuadraticNumber) -> Scalar {
        Scalar::Quadratic(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

enum QuadraticOrRational {
    Rational(Rational),
    Quadratic(QuadraticNumber),
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn sign(&mut self) -> Result<char, String> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Ok('+')
            }
            Some(b'-') => {
                self.pos += 1;
                Ok('-')
            }
            _ => Err("expected `+` or `-`".to_string()),
        }
    }

    fn digits(&mut self) -> Result<&'a str, String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err("expected digits".to_string());
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
    }

    /// `[+-]? digits (/ digits)?`
    fn rational(&mut self) -> Result<Rational, String> {
        let negative = match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                false
            }
            Some(b'-') => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        let num: BigInt = self.digits()?.parse().expect("digits parse as BigInt");
        let den: BigInt = if self.peek() == Some(b'/') {
            self.pos += 1;
            self.digits()?.parse().expect("digits parse as BigInt")
        } else {
            BigInt::one()
        };
        let num = if negative { -num } else { num };
        Rational::new(num, den).map_err(|_| "denominator is zero".to_string())
    }

    fn expect_str(&mut self, s: &str) -> Result<(), String> {
        if self.bytes[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            Ok(())
        } else {
            Err(format!("expected `{s}`"))
        }
    }

    /// `*sqrt( digits )`
    fn sqrt_suffix(&mut self) -> Result<u64, String> {
        self.expect_str("*sqrt(")?;
        let d: u64 = self
            .digits()?
            .parse()
            .map_err(|_| "discriminant overflows u64".to_string())?;
        self.expect_str(")")?;
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn quad(a: Rational, b: Rational) -> QuadraticNumber {
        QuadraticNumber::new(a, b, 2).unwrap()
    }

    #[test]
    fn rational_canonical_form() {
        assert_eq!(rat(6, 4), rat(3, 2));
        assert_eq!(rat(1, -2), rat(-1, 2));
        assert_eq!(rat(0, 7), Rational::zero());
        assert_eq!(rat(-4, -2), Rational::from_int(2));
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn product_identity_for_certificate_coefficients() {
        // (2 - sqrt 2)(1 + sqrt(2)/2) = 1
        let x = quad(rat(2, 1), rat(-1, 1));
        let y = quad(rat(1, 1), rat(1, 2));
        assert_eq!(x.checked_mul(&y).unwrap(), QuadraticNumber::one(2).unwrap());
    }

    #[test]
    fn self_division_is_one() {
        let s = quad(rat(0, 1), rat(1, 1));
        assert_eq!(s.checked_div(&s).unwrap(), QuadraticNumber::one(2).unwrap());
    }

    #[test]
    fn conjugate_sum_is_rational() {
        let x = quad(rat(1, 1), rat(1, 2));
        let sum = x.checked_add(&x.conjugate()).unwrap();
        assert_eq!(sum, QuadraticNumber::from_rational(rat(2, 1), 2).unwrap());
        assert!(sum.is_rational());
    }

    #[test]
    fn sign_with_competing_terms() {
        // 1 - sqrt(2) < 0: the radical dominates.
        assert_eq!(quad(rat(1, 1), rat(-1, 1)).sign(), Sign::Negative);
        // 2 - sqrt(2) > 0: 4 > 2.
        assert_eq!(quad(rat(2, 1), rat(-1, 1)).sign(), Sign::Positive);
        assert_eq!(quad(rat(0, 1), rat(0, 1)).sign(), Sign::Zero);
        assert_eq!(quad(rat(-2, 1), rat(1, 1)).sign(), Sign::Negative);
        assert_eq!(quad(rat(-1, 1), rat(1, 1)).sign(), Sign::Positive);
    }

    #[test]
    fn division_by_zero_and_mixed_fields_error() {
        let x = quad(rat(1, 1), rat(1, 1));
        let zero = QuadraticNumber::zero(2).unwrap();
        assert_eq!(x.checked_div(&zero), Err(FieldError::DivisionByZero));

        let y = QuadraticNumber::new(rat(1, 1), rat(1, 1), 3).unwrap();
        assert_eq!(
            x.checked_add(&y),
            Err(FieldError::MixedDiscriminants(2, 3))
        );
    }

    #[test]
    fn discriminant_validation() {
        assert!(QuadraticNumber::new(rat(1, 1), rat(1, 1), 4).is_err());
        assert!(QuadraticNumber::new(rat(1, 1), rat(1, 1), 12).is_err());
        assert!(QuadraticNumber::new(rat(1, 1), rat(1, 1), 1).is_err());
        assert!(QuadraticNumber::new(rat(1, 1), rat(1, 1), 30).is_ok());
    }

    #[test]
    fn parse_rational_context() {
        let s = Scalar::parse("3/2", FieldDescriptor::Rationals).unwrap();
        assert_eq!(s, Scalar::Rational(rat(3, 2)));
        assert_eq!(
            Scalar::parse(" -7 / 3 ", FieldDescriptor::Rationals).unwrap(),
            Scalar::Rational(rat(-7, 3))
        );
        assert!(Scalar::parse("1/0", FieldDescriptor::Rationals).is_err());
        assert!(Scalar::parse("1+1*sqrt(2)", FieldDescriptor::Rationals).is_err());
        assert!(Scalar::parse("", FieldDescriptor::Rationals).is_err());
        assert!(Scalar::parse("3//2", FieldDescriptor::Rationals).is_err());
    }

    #[test]
    fn parse_quadratic_context() {
        let f = FieldDescriptor::quadratic(2).unwrap();
        let alpha = Scalar::parse("1+1/2*sqrt(2)", f).unwrap();
        assert_eq!(alpha, Scalar::Quadratic(quad(rat(1, 1), rat(1, 2))));

        let neg = Scalar::parse("0-1*sqrt(2)", f).unwrap();
        assert_eq!(neg, Scalar::Quadratic(quad(rat(0, 1), rat(-1, 1))));

        // Plain rationals embed.
        assert_eq!(
            Scalar::parse("5/3", f).unwrap(),
            Scalar::Quadratic(quad(rat(5, 3), rat(0, 1)))
        );

        // Discriminant must match the field.
        assert!(Scalar::parse("1+1*sqrt(3)", f).is_err());
        assert!(Scalar::parse("1+1*sqrt(2)x", f).is_err());
    }

    #[test]
    fn format_round_trips_examples() {
        let f = FieldDescriptor::quadratic(2).unwrap();
        for text in ["1+1/2*sqrt(2)", "0-1*sqrt(2)", "7", "-3/2", "0+1*sqrt(2)"] {
            let s = Scalar::parse(text, f).unwrap();
            let reparsed = Scalar::parse(&s.to_string(), f).unwrap();
            assert_eq!(s, reparsed);
        }
    }

    #[test]
    fn field_descriptor_display_parse() {
        let f: FieldDescriptor = "Q(sqrt 2)".parse().unwrap();
        assert_eq!(f, FieldDescriptor::Quadratic(2));
        assert_eq!(f.to_string(), "Q(sqrt 2)");
        let q: FieldDescriptor = "Q".parse().unwrap();
        assert_eq!(q, FieldDescriptor::Rationals);
        assert!("Q(sqrt 4)".parse::<FieldDescriptor>().is_err());
        assert!("R".parse::<FieldDescriptor>().is_err());
    }

    #[test]
    fn promotion_rules() {
        let f2 = FieldDescriptor::Quadratic(2);
        let r = Scalar::Rational(rat(3, 2));
        let promoted = r.promote(f2).unwrap();
        assert_eq!(promoted.field(), f2);
        // Going back down requires a zero radical part.
        assert_eq!(promoted.promote(FieldDescriptor::Rationals).unwrap(), r);
        let irrational = Scalar::Quadratic(quad(rat(0, 1), rat(1, 1)));
        assert_eq!(
            irrational.promote(FieldDescriptor::Rationals),
            Err(FieldError::NotRational)
        );
    }

    #[test]
    fn scalar_mixed_arithmetic_embeds_rationals() {
        let r = Scalar::Rational(rat(1, 2));
        let q = Scalar::Quadratic(quad(rat(0, 1), rat(1, 1)));
        let sum = r.checked_add(&q).unwrap();
        assert_eq!(sum, Scalar::Quadratic(quad(rat(1, 2), rat(1, 1))));
        let d3 = Scalar::Quadratic(QuadraticNumber::new(rat(1, 1), rat(1, 1), 3).unwrap());
        assert!(q.checked_mul(&d3).is_err());
    }
}
