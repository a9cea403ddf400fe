use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use super::prime::rational_mod;
use super::{parse_rational, ArithError, ComplexApprox, Embed, Field, Fp, PrimeField};

/// Arbitrary-precision rational numbers in lowest terms.
pub type Rational = BigRational;

/// Nearest `f64` together with a bound on the conversion error (0 when exact).
pub fn rational_to_f64_exact(q: &BigRational) -> (f64, f64) {
    let f = q.to_f64().unwrap_or(f64::NAN);
    match BigRational::from_f64(f) {
        Some(back) if &back == q => (f, 0.0),
        _ => (f, f.abs() * f64::EPSILON),
    }
}

fn bit_length(n: &BigInt) -> i64 {
    n.bits() as i64
}

impl Field for BigRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        Zero::zero()
    }
    fn one(_: &()) -> Self {
        One::one()
    }
    fn from_i64(_: &(), n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn from_bigint(_: &(), n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(_: &(), q: &BigRational) -> Result<Self, ArithError> {
        Ok(q.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, ArithError> {
        if Zero::is_zero(self) {
            return Err(ArithError::DivisionByZero);
        }
        Ok(self.recip())
    }
    fn characteristic(_: &()) -> u64 {
        0
    }
    fn tag(_: &()) -> String {
        "Q".into()
    }
    fn parse_tag(tag: &str) -> Result<(), ArithError> {
        if tag == "Q" {
            Ok(())
        } else {
            Err(ArithError::Parse { input: tag.into(), expected: "Q".into() })
        }
    }
    fn parse(_: &(), s: &str) -> Result<Self, ArithError> {
        parse_rational(s)
    }
    fn reduction_point(_: &(), p: PrimeField) -> Option<Fp> {
        Some(p.elem(0))
    }
    fn reduce(&self, p: PrimeField, _point: Fp) -> Option<Fp> {
        rational_mod(self, p)
    }
    fn defining_polynomial(_: &()) -> Option<Vec<BigRational>> {
        Some(vec![Zero::zero(), One::one()])
    }
    fn power_basis(&self) -> Option<Vec<BigRational>> {
        Some(vec![self.clone()])
    }
    fn from_power_basis(_: &(), coords: &[BigRational]) -> Option<Self> {
        coords.first().cloned()
    }
}

impl Embed for BigRational {
    fn embed(&self, _root_index: usize) -> Result<ComplexApprox, ArithError> {
        let (re, err) = rational_to_f64_exact(self);
        Ok(ComplexApprox::new(re, 0.0, err))
    }
    fn log2_size(&self) -> i64 {
        if Zero::is_zero(self) {
            return i64::MIN / 4;
        }
        bit_length(self.numer()) - bit_length(self.denom())
    }
    fn scale_pow2(&self, k: i64) -> Self {
        let two = BigInt::from(2);
        if k >= 0 {
            self * BigRational::from_integer(num_traits::pow(two, k as usize))
        } else {
            self / BigRational::from_integer(num_traits::pow(two, (-k) as usize))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn half_embeds_exactly() {
        let e = q(1, 2).embed(0).unwrap();
        assert_eq!((e.re, e.im, e.err), (0.5, 0.0, 0.0));
        let third = q(1, 3).embed(0).unwrap();
        assert!(third.err > 0.0 && third.err < 1e-16);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(q(6, -4).to_string(), "-3/2");
        assert_eq!(q(4, 2).to_string(), "2");
        assert_eq!(BigRational::parse(&(), "-3/2").unwrap(), q(-3, 2));
        assert_eq!(BigRational::parse(&(), "2").unwrap(), q(2, 1));
        assert!(BigRational::parse(&(), "1/0").is_err());
    }

    #[test]
    fn scaling_is_exact() {
        assert_eq!(q(3, 4).scale_pow2(2), q(3, 1));
        assert_eq!(q(3, 1).scale_pow2(-2), q(3, 4));
    }
}
