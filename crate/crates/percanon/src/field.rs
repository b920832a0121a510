//! Exact field arithmetic: arbitrary-precision rationals and prime fields Z/p.
//!
//! Every matrix entry in this crate is a [`Scalar`] tagged with its
//! [`FieldSpec`]; there is no floating point anywhere on the reduction path.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the 2^31 bound")]
    PrimeTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched field specs: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("invalid scalar literal `{0}`")]
    BadScalarLiteral(String),
    #[error("invalid decimal literal `{0}`")]
    BadDecimalLiteral(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

const PRIME_BOUND: u64 = 1 << 31;

/// The coefficient field: the rationals, or Z/p for a prime p < 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// Z/p, rejecting composite p (trial division) and p >= 2^31.
    pub fn prime_field(p: u64) -> Result<Self, FieldError> {
        if p >= PRIME_BOUND {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p as u32))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Residue { value: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::one()),
            FieldSpec::PrimeField(p) => Scalar::Residue { value: 1 % *p, p: *p },
        }
    }

    /// The image of a signed integer in this field.
    pub fn from_integer(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::PrimeField(p) => {
                let r = n.rem_euclid(*p as i64) as u32;
                Scalar::Residue { value: r, p: *p }
            }
        }
    }

    /// Parse a scalar literal: `a` or `a/b` over the rationals, an integer
    /// (reduced mod p) over a prime field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, FieldError> {
        let text = text.trim();
        match self {
            FieldSpec::Rationals => {
                let (num_str, den_str) = match text.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (text, None),
                };
                let num = BigInt::from_str(num_str)
                    .map_err(|_| FieldError::BadScalarLiteral(text.to_string()))?;
                let den = match den_str {
                    Some(d) => BigInt::from_str(d)
                        .map_err(|_| FieldError::BadScalarLiteral(text.to_string()))?,
                    None => BigInt::one(),
                };
                if den.is_zero() {
                    return Err(FieldError::ZeroDenominator(text.to_string()));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            FieldSpec::PrimeField(p) => {
                let n = BigInt::from_str(text)
                    .map_err(|_| FieldError::BadScalarLiteral(text.to_string()))?;
                let p_big = BigInt::from(*p);
                let r = ((n % &p_big) + &p_big) % &p_big;
                let value: u32 = r.try_into().expect("residue fits in u32");
                Ok(Scalar::Residue { value, p: *p })
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::PrimeField(p) => write!(f, "z{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Field tokens as used by the matrix interchange format: `q`, or `z<p>`.
    fn from_str(s: &str) -> Result<Self, FieldError> {
        if s == "q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(digits) = s.strip_prefix('z') {
            if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                if let Ok(p) = digits.parse::<u64>() {
                    return FieldSpec::prime_field(p);
                }
            }
        }
        Err(FieldError::BadScalarLiteral(s.to_string()))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms with positive
/// denominator; residues are kept in `[0, p)`. Equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u32, p: u32 },
}

impl Scalar {
    pub fn spec(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { p, .. } => FieldSpec::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    fn check_same_spec(&self, other: &Scalar) -> Result<(), FieldError> {
        if self.spec() != other.spec() {
            return Err(FieldError::FieldMismatch(self.spec(), other.spec()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check_same_spec(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => {
                let s = (*a as u64 + *b as u64) % *p as u64;
                Scalar::Residue { value: s as u32, p: *p }
            }
            _ => unreachable!("specs checked above"),
        })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check_same_spec(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => {
                let m = (*a as u64 * *b as u64) % *p as u64;
                Scalar::Residue { value: m as u32, p: *p }
            }
            _ => unreachable!("specs checked above"),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, p } => {
                let v = if *value == 0 { 0 } else { p - value };
                Scalar::Residue { value: v, p: *p }
            }
        }
    }

    /// Multiplicative inverse; division by zero is signalled explicitly.
    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Residue { value, p } => {
                let v = mod_inverse(*value as i64, *p as i64);
                Scalar::Residue { value: v as u32, p: *p }
            }
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.mul(&other.inv()?)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Inverse of `a` mod prime `p` via the extended Euclidean algorithm.
fn mod_inverse(a: i64, p: i64) -> i64 {
    let (mut old_r, mut r) = (a, p);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r.abs(), 1, "p prime and a nonzero mod p");
    (old_s * old_r.signum()).rem_euclid(p)
}

/// Parse a decimal literal (e.g. `1.12`, `-0.5`, `3e-2`) into an exact
/// rational. Used wherever ties between filtration values must be decided
/// deterministically.
pub fn decimal_to_rational(text: &str) -> Result<BigRational, FieldError> {
    let s = text.trim();
    let bad = || FieldError::BadDecimalLiteral(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    if exp.unsigned_abs() > 9999 {
        return Err(bad());
    }
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, fr)) => (i, fr),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    if joined.is_empty() || joined.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let numer = BigInt::from_str(&joined).map_err(|_| bad())? * BigInt::from(sign);
    let scale = frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if exp - scale >= 0 {
        BigRational::from_integer(numer * ten.pow((exp - scale) as u32))
    } else {
        BigRational::new(numer, ten.pow((scale - exp) as u32))
    };
    Ok(value)
}
