//! Exact scalar arithmetic.
//!
//! The engine is generic over [`Field`], a context object that owns the
//! arithmetic while elements stay plain values. Two backends exist: a prime
//! field with canonical representatives in `[0, p)` (the default, used for
//! every large run) and arbitrary-precision rationals for cross-checks.
//! [`FieldScalar`] is a self-describing value for callers that mix backends at
//! runtime and want the mismatch reported instead of silently ignored.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_CHARACTERISTIC: u64 = 32003;

pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync + 'static;

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Human-readable form. Prime-field values print as the representative of
    /// least absolute value so that `-1` reads as `-1`, not `p - 1`.
    fn display(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `a - c * b`, the elimination step.
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(c, b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 {
            return Err(Error::CharacteristicTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_CHARACTERISTIC }
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn characteristic(&self) -> u64 {
        self.p
    }
    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p - *b as u64) % self.p) as u32
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            (self.p - *a as u64) as u32
        }
    }
    fn inv(&self, a: &u32) -> Result<u32> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(t0.rem_euclid(self.p as i64) as u32)
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn display(&self, a: &u32) -> String {
        let v = *a as u64;
        if v > self.p / 2 {
            format!("-{}", self.p - v)
        } else {
            v.to_string()
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn display(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// Deterministic trial division; characteristics are below 2^32.
pub fn is_prime(n: u64) -> bool {
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

/// Runtime choice of backend, made from the `characteristic` setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Prime(PrimeField),
    Rational,
}

impl Backend {
    /// `0` selects the rationals, anything else must be a prime below 2^32.
    pub fn from_characteristic(c: u64) -> Result<Self> {
        if c == 0 {
            Ok(Backend::Rational)
        } else {
            PrimeField::new(c).map(Backend::Prime)
        }
    }
}

/// A scalar tagged with its backend.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Prime { value: u32, modulus: u64 },
    Rational(BigRational),
}

impl FieldScalar {
    pub fn prime(value: i64, field: PrimeField) -> Self {
        FieldScalar::Prime { value: field.from_i64(value), modulus: field.modulus() }
    }

    pub fn rational(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldScalar::Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Prime { value, .. } => *value == 0,
            FieldScalar::Rational(q) => q.is_zero(),
        }
    }

    fn backend_name(&self) -> String {
        match self {
            FieldScalar::Prime { modulus, .. } => format!("F_{modulus}"),
            FieldScalar::Rational(_) => "Q".to_string(),
        }
    }

    fn binary(
        &self,
        other: &Self,
        prime: impl Fn(&PrimeField, &u32, &u32) -> u32,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Result<Self> {
        match (self, other) {
            (
                FieldScalar::Prime { value: a, modulus: p },
                FieldScalar::Prime { value: b, modulus: q },
            ) if p == q => {
                let field = PrimeField { p: *p };
                Ok(FieldScalar::Prime { value: prime(&field, a, b), modulus: *p })
            }
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => {
                Ok(FieldScalar::Rational(rat(a, b)))
            }
            _ => Err(Error::MixedBackends(self.backend_name(), other.backend_name())),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.binary(other, |f, a, b| f.add(a, b), |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.binary(other, |f, a, b| f.sub(a, b), |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.binary(other, |f, a, b| f.mul(a, b), |a, b| a * b)
    }

    pub fn mul_inv(&self) -> Result<Self> {
        match self {
            FieldScalar::Prime { value, modulus } => {
                let field = PrimeField { p: *modulus };
                Ok(FieldScalar::Prime { value: field.inv(value)?, modulus: *modulus })
            }
            FieldScalar::Rational(q) => RationalField.inv(q).map(FieldScalar::Rational),
        }
    }

    /// Reduce a rational modulo `p`. `None` when `p` divides the denominator.
    pub fn reduce_mod(&self, field: PrimeField) -> Option<Self> {
        match self {
            FieldScalar::Rational(q) => {
                let p = BigInt::from(field.modulus());
                let num = q.numer() % &p;
                let den = q.denom() % &p;
                if den.is_zero() {
                    return None;
                }
                let to_u32 = |v: BigInt| -> u32 {
                    let v = if v.is_negative() { v + &p } else { v };
                    u32::try_from(v).expect("reduced below p")
                };
                let value = field.mul(&to_u32(num), &field.inv(&to_u32(den)).ok()?);
                Some(FieldScalar::Prime { value, modulus: field.modulus() })
            }
            FieldScalar::Prime { .. } => Some(self.clone()),
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Prime { value, .. } => write!(f, "{value}"),
            FieldScalar::Rational(q) => write!(f, "{q}"),
        }
    }
}
