//! Exact scalars over the rationals and over prime fields.
//!
//! A [`Scalar`] carries enough information to know which field it lives in,
//! so matrices and tensors can be built without threading a field handle
//! through every arithmetic call. Mixing scalars from different fields is a
//! programming error and panics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("malformed scalar `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("fractions are not allowed over {field}: `{text}`")]
    FractionInPrimeField { text: String, field: FieldSpec },
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("zero has no square class")]
    Zero,
    #[error("scalar belongs to {found}, expected {expected}")]
    FieldMismatch { expected: FieldSpec, found: FieldSpec },
}

/// The coefficient field: the rationals or `F_p` for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// Checked constructor for `F_p`.
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    /// The field tag used in `.lie` files: `Q` or `F <p>`.
    pub fn tag(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::Prime(p) => format!("F {p}"),
        }
    }

    /// Every element of a finite field, in residue order. `None` over Q.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some((0..*p).map(|r| Scalar::residue(r, *p)).collect()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// Accepts `Q`, `F5` and `F 5`.
impl FromStr for FieldSpec {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let rest = s
            .strip_prefix('F')
            .ok_or_else(|| ScalarError::Malformed(s.to_string()))?
            .trim_start();
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ScalarError::Malformed(s.to_string()));
        }
        let p: u64 = rest.parse().map_err(|_| ScalarError::Malformed(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact element of Q or of `F_p`.
///
/// Rationals are kept in lowest terms with positive denominator (guaranteed
/// by `BigRational`), residues in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        Scalar::from_i64(0, field)
    }

    pub fn one(field: FieldSpec) -> Self {
        Scalar::from_i64(1, field)
    }

    pub fn from_i64(n: i64, field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::residue(n.rem_euclid(p as i64) as u64, p),
        }
    }

    /// `num / den` over Q. Panics on a zero denominator.
    pub fn rational(num: i64, den: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn residue(value: u64, modulus: u64) -> Self {
        Scalar::Residue {
            value: value % modulus,
            modulus,
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::residue(pow_mod(*value, modulus - 2, *modulus), *modulus),
        })
    }

    /// `self / rhs`, `None` when `rhs` is zero.
    pub fn div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Residue value for prime-field scalars.
    pub fn as_residue(&self) -> Option<u64> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    pub(crate) fn ensure_field(&self, field: FieldSpec) -> Result<(), ScalarError> {
        if self.field() == field {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch {
                expected: field,
                found: self.field(),
            })
        }
    }
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue {
                    value: ((*a as u128 + (*p - *b) as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::residue(modulus - value, *modulus),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(_) => write!(f, "{self}"),
            Scalar::Residue { value, modulus } => write!(f, "{value} (mod {modulus})"),
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses `int` or `int "/" posint` (rationals only), where
/// `int := ["-"] digit+`. No whitespace is accepted inside a scalar.
pub fn parse_scalar(text: &str, field: FieldSpec) -> Result<Scalar, ScalarError> {
    let malformed = || ScalarError::Malformed(text.to_string());
    match text.split_once('/') {
        Some((num, den)) => {
            if let FieldSpec::Prime(_) = field {
                return Err(ScalarError::FractionInPrimeField {
                    text: text.to_string(),
                    field,
                });
            }
            if den.starts_with('-') {
                return Err(malformed());
            }
            let num = parse_int(num).ok_or_else(malformed)?;
            let den = parse_int(den).ok_or_else(malformed)?;
            if den.is_zero() {
                return Err(ScalarError::ZeroDenominator(text.to_string()));
            }
            Ok(Scalar::Rational(BigRational::new(num, den)))
        }
        None => {
            let n = parse_int(text).ok_or_else(malformed)?;
            Ok(match field {
                FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n)),
                FieldSpec::Prime(p) => {
                    let r = n.mod_floor(&BigInt::from(p));
                    Scalar::residue(r.to_u64().expect("residue fits in u64"), p)
                }
            })
        }
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// A square root of `a` in its own field, if one exists.
///
/// Over `F_p` the smallest residue root is returned.
pub fn sqrt_in_field(a: &Scalar) -> Option<Scalar> {
    match a {
        Scalar::Rational(q) => {
            let num = exact_isqrt(q.numer())?;
            let den = exact_isqrt(q.denom())?;
            Some(Scalar::Rational(BigRational::new(num, den)))
        }
        Scalar::Residue { value, modulus } => {
            let (v, p) = (*value, *modulus);
            if p == 2 || v == 0 {
                return Some(a.clone());
            }
            if pow_mod(v, (p - 1) / 2, p) != 1 {
                return None;
            }
            (1..p)
                .find(|r| (*r as u128 * *r as u128 % p as u128) as u64 == v)
                .map(|r| Scalar::residue(r, p))
        }
    }
}

fn squarefree_part(n: &BigInt) -> BigInt {
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut f = BigInt::from(2u32);
    while &f * &f <= m {
        let mut odd = false;
        while (&m % &f).is_zero() {
            m /= &f;
            odd = !odd;
        }
        if odd {
            out *= &f;
        }
        f += 1u32;
    }
    out * m
}

/// Canonical representative of the square class of a nonzero scalar.
///
/// Over Q this is the signed squarefree integer in the class; over odd `F_p`
/// it is 1 for residues and the smallest non-residue otherwise; over `F_2` it
/// is always 1.
pub fn square_class_rep(a: &Scalar) -> Result<Scalar, ScalarError> {
    if a.is_zero() {
        return Err(ScalarError::Zero);
    }
    Ok(match a {
        Scalar::Rational(q) => {
            let prod = q.numer() * q.denom();
            let mut r = squarefree_part(&prod);
            if prod.is_negative() {
                r = -r;
            }
            Scalar::Rational(BigRational::from_integer(r))
        }
        Scalar::Residue { modulus, .. } => {
            let p = *modulus;
            if p == 2 || sqrt_in_field(a).is_some() {
                Scalar::residue(1, p)
            } else {
                smallest_non_residue(p)
            }
        }
    })
}

fn smallest_non_residue(p: u64) -> Scalar {
    (2..p)
        .map(|r| Scalar::residue(r, p))
        .find(|s| sqrt_in_field(s).is_none())
        .expect("odd prime field has a non-residue")
}
