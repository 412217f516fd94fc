//! Exact coefficient rings: arbitrary-precision rationals and prime fields.
//!
//! Every polynomial and matrix in this crate is generic over [`Coeff`]. A
//! coefficient type carries a context ([`Coeff::Ctx`]) that names the ring it
//! lives in; for the rationals this is `()`, for a prime field it is the
//! [`PrimeField`] descriptor.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, DeserializeOwned};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Prime used by every finite-field verification unless the caller picks another.
pub const DEFAULT_PRIME: u32 = 32003;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different prime fields (p = {left} and p = {right})")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("denominator of {value} is divisible by p = {p}")]
    DenominatorDivisibleByP { value: String, p: u32 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse ring element: {0}")]
    Parse(String),
}

/// The coefficient-ring contract shared by [`Rational`] and [`Fp`].
///
/// All operations are exact. Binary operations on prime-field elements with
/// different moduli panic; use the `checked_*` methods on [`Fp`] when the
/// operands are not known to agree.
pub trait Coeff:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + Serialize + DeserializeOwned + 'static
{
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn from_i64(n: i64, ctx: &Self::Ctx) -> Self;
    fn from_rational(q: &Rational, ctx: &Self::Ctx) -> Result<Self, CoeffError>;
    fn ctx(&self) -> Self::Ctx;

    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn times_int(&self, k: i64) -> Self;
    fn inverse(&self) -> Result<Self, CoeffError>;

    fn one(ctx: &Self::Ctx) -> Self {
        Self::from_i64(1, ctx)
    }

    fn divide(&self, other: &Self) -> Result<Self, CoeffError> {
        Ok(self.times(&other.inverse()?))
    }

    fn add_assign(&mut self, other: &Self) {
        *self = self.plus(other);
    }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// An arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self, CoeffError> {
        if den == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
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
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
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

impl FromStr for Rational {
    type Err = CoeffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| CoeffError::Parse(s.to_string()))
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::from_bigints(parse(n)?, parse(d)?),
            None => Ok(Rational(BigRational::from_integer(parse(s)?))),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl Coeff for Rational {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        Rational(BigRational::zero())
    }

    fn from_i64(n: i64, _: &()) -> Self {
        Rational::from_integer(n)
    }

    fn from_rational(q: &Rational, _: &()) -> Result<Self, CoeffError> {
        Ok(q.clone())
    }

    fn ctx(&self) {}

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn plus(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }

    fn minus(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }

    fn times(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }

    fn negate(&self) -> Self {
        Rational(-&self.0)
    }

    fn times_int(&self, k: i64) -> Self {
        Rational(&self.0 * BigRational::from_integer(k.into()))
    }

    fn inverse(&self) -> Result<Self, CoeffError> {
        if self.0.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    fn add_assign(&mut self, other: &Self) {
        self.0 += &other.0;
    }
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// Descriptor of the prime field 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// Checks primality by trial division up to √p.
    pub fn new(p: u32) -> Result<Self, CoeffError> {
        if is_prime(p as u64) {
            Ok(PrimeField { p })
        } else {
            Err(CoeffError::NotPrime(p as u64))
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn element(&self, n: i64) -> Fp {
        let p = self.p as i64;
        Fp {
            residue: n.rem_euclid(p) as u32,
            p: self.p,
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

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

/// An element of 𝔽_p. The modulus travels with the value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    residue: u32,
    p: u32,
}

impl Fp {
    pub fn residue(&self) -> u32 {
        self.residue
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    fn same_field(&self, other: &Fp) -> Result<(), CoeffError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(CoeffError::ModulusMismatch {
                left: self.p,
                right: other.p,
            })
        }
    }

    pub fn checked_add(&self, other: &Fp) -> Result<Fp, CoeffError> {
        self.same_field(other)?;
        Ok(self.plus(other))
    }

    pub fn checked_sub(&self, other: &Fp) -> Result<Fp, CoeffError> {
        self.same_field(other)?;
        Ok(self.minus(other))
    }

    pub fn checked_mul(&self, other: &Fp) -> Result<Fp, CoeffError> {
        self.same_field(other)?;
        Ok(self.times(other))
    }

    pub fn checked_div(&self, other: &Fp) -> Result<Fp, CoeffError> {
        self.same_field(other)?;
        self.divide(other)
    }

    fn pow(&self, mut e: u64) -> Fp {
        let p = self.p as u64;
        let mut base = self.residue as u64;
        let mut acc = 1u64 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp {
            residue: acc as u32,
            p: self.p,
        }
    }

    #[inline]
    fn assert_same(&self, other: &Fp) {
        assert_eq!(self.p, other.p, "mixed-modulus prime field operands");
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.p)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

#[derive(Serialize, Deserialize)]
struct FpRepr {
    residue: u32,
    p: u32,
}

impl Serialize for Fp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FpRepr {
            residue: self.residue,
            p: self.p,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Fp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FpRepr::deserialize(deserializer)?;
        let field = PrimeField::new(repr.p).map_err(de::Error::custom)?;
        if repr.residue >= repr.p {
            return Err(de::Error::custom(format!(
                "residue {} out of range for p = {}",
                repr.residue, repr.p
            )));
        }
        Ok(field.element(repr.residue as i64))
    }
}

impl Coeff for Fp {
    type Ctx = PrimeField;

    fn zero(ctx: &PrimeField) -> Self {
        Fp { residue: 0, p: ctx.p }
    }

    fn from_i64(n: i64, ctx: &PrimeField) -> Self {
        ctx.element(n)
    }

    fn from_rational(q: &Rational, ctx: &PrimeField) -> Result<Self, CoeffError> {
        reduce_mod_p(q, ctx)
    }

    fn ctx(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    #[inline]
    fn is_zero(&self) -> bool {
        self.residue == 0
    }

    #[inline]
    fn plus(&self, other: &Self) -> Self {
        self.assert_same(other);
        let s = self.residue as u64 + other.residue as u64;
        let p = self.p as u64;
        Fp {
            residue: if s >= p { s - p } else { s } as u32,
            p: self.p,
        }
    }

    #[inline]
    fn minus(&self, other: &Self) -> Self {
        self.assert_same(other);
        let r = if self.residue >= other.residue {
            self.residue - other.residue
        } else {
            (self.residue as u64 + self.p as u64 - other.residue as u64) as u32
        };
        Fp { residue: r, p: self.p }
    }

    #[inline]
    fn times(&self, other: &Self) -> Self {
        self.assert_same(other);
        Fp {
            residue: (self.residue as u64 * other.residue as u64 % self.p as u64) as u32,
            p: self.p,
        }
    }

    #[inline]
    fn negate(&self) -> Self {
        Fp {
            residue: if self.residue == 0 { 0 } else { self.p - self.residue },
            p: self.p,
        }
    }

    #[inline]
    fn times_int(&self, k: i64) -> Self {
        let k = k.rem_euclid(self.p as i64) as u64;
        Fp {
            residue: (self.residue as u64 * k % self.p as u64) as u32,
            p: self.p,
        }
    }

    fn inverse(&self) -> Result<Self, CoeffError> {
        if self.residue == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(self.pow(self.p as u64 - 2))
    }
}

/// Image of `x` under ℚ → 𝔽_p, defined on p-integral rationals.
pub fn reduce_mod_p(x: &Rational, field: &PrimeField) -> Result<Fp, CoeffError> {
    let p = BigInt::from(field.p);
    if x.denom().is_multiple_of(&p) {
        return Err(CoeffError::DenominatorDivisibleByP {
            value: x.to_string(),
            p: field.p,
        });
    }
    let residue = |n: &BigInt| -> i64 {
        n.mod_floor(&p)
            .to_i64()
            .expect("residue below a u32 modulus fits in i64")
    };
    let num = field.element(residue(x.numer()));
    let den = field.element(residue(x.denom()));
    num.divide(&den)
}
