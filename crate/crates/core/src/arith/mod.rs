//! Exact coefficient fields and tolerance-tracked complex numbers.
//!
//! Every exact field implements [`Field`]. Elements carry (or are given) a
//! context describing the concrete field: `()` for the rationals, the modulus
//! for a prime field and a shared [`NumberField`] for algebraic extensions.

mod complex;
mod numfield;
mod prime;
mod rational;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use complex::ComplexApprox;
pub use numfield::{nf_embed_complex, NfElem, NumberField};
pub use prime::{Fp, PrimeField};
pub use rational::{rational_to_f64_exact, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("cannot parse `{input}` as {expected}")]
    Parse { input: String, expected: String },
    #[error("elements belong to different fields")]
    FieldMismatch,
}

/// An exact commutative field.
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self;
    fn from_bigint(ctx: &Self::Ctx, n: &BigInt) -> Self;
    /// Image of a rational number; fails in characteristic p when p divides the denominator.
    fn from_rational(ctx: &Self::Ctx, q: &BigRational) -> Result<Self, ArithError>;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, ArithError>;
    fn div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self.mul(&other.inv()?))
    }
    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn characteristic(ctx: &Self::Ctx) -> u64;
    /// Short tag naming the field in serialized documents.
    fn tag(ctx: &Self::Ctx) -> String;
    fn parse_tag(tag: &str) -> Result<Self::Ctx, ArithError>;
    /// Inverse of `Display`.
    fn parse(ctx: &Self::Ctx, s: &str) -> Result<Self, ArithError>;

    /// Image of the field generator under some ring map into 𝔽_p, or `None`
    /// when no such map is available. Used for modular shortcuts only.
    fn reduction_point(_ctx: &Self::Ctx, _p: PrimeField) -> Option<Fp> {
        None
    }
    /// Image under the map fixed by `reduction_point`; `None` when p divides a denominator.
    fn reduce(&self, _p: PrimeField, _point: Fp) -> Option<Fp> {
        None
    }

    /// Ascending coefficients of the monic polynomial defining the field over ℚ
    /// (t for ℚ itself), or `None` in positive characteristic.
    fn defining_polynomial(_ctx: &Self::Ctx) -> Option<Vec<BigRational>> {
        None
    }
    /// Coordinates in the power basis 1, t, …, t^(d−1).
    fn power_basis(&self) -> Option<Vec<BigRational>> {
        None
    }
    fn from_power_basis(_ctx: &Self::Ctx, _coords: &[BigRational]) -> Option<Self> {
        None
    }
}

/// Fields of characteristic zero with chosen complex embeddings.
pub trait Embed: Field {
    fn embed(&self, root_index: usize) -> Result<ComplexApprox, ArithError>;
    /// Rough base-2 logarithm of the largest rational component, for rescaling.
    fn log2_size(&self) -> i64;
    /// Multiply by 2^k exactly.
    fn scale_pow2(&self, k: i64) -> Self;
}

/// Parse helper shared by the rational-coefficient fields.
pub(crate) fn parse_rational(s: &str) -> Result<BigRational, ArithError> {
    let err = || ArithError::Parse { input: s.to_string(), expected: "rational".into() };
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d == BigInt::from(0) {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| err())?)),
    }
}
