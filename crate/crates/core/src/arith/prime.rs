use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{ArithError, Field};

/// The prime field of order `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, ArithError> {
        if p < 2 || (2..).take_while(|d: &u32| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(ArithError::InvalidField(format!("{p} is not prime")));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn elem(&self, n: i64) -> Fp {
        Fp { r: n.rem_euclid(self.p as i64) as u32, p: self.p }
    }
}

/// Image of a rational number in 𝔽_p, `None` when p divides the denominator.
pub(crate) fn rational_mod(q: &BigRational, f: PrimeField) -> Option<Fp> {
    let p = BigInt::from(f.p);
    let d = q.denom().mod_floor(&p).to_i64()?;
    if d == 0 {
        return None;
    }
    let n = q.numer().mod_floor(&p).to_i64()?;
    f.elem(n).div(&f.elem(d)).ok()
}

/// Residue class modulo a prime, stored canonically in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    r: u32,
    p: u32,
}

impl Fp {
    pub fn residue(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn make(&self, r: u64) -> Fp {
        Fp { r: (r % self.p as u64) as u32, p: self.p }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.r, self.p)
    }
}

impl Field for Fp {
    type Ctx = PrimeField;

    fn ctx(&self) -> PrimeField {
        PrimeField { p: self.p }
    }
    fn zero(ctx: &PrimeField) -> Self {
        Fp { r: 0, p: ctx.p }
    }
    fn one(ctx: &PrimeField) -> Self {
        Fp { r: 1 % ctx.p, p: ctx.p }
    }
    fn from_i64(ctx: &PrimeField, n: i64) -> Self {
        ctx.elem(n)
    }
    fn from_bigint(ctx: &PrimeField, n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(ctx.p)).to_u32().unwrap();
        Fp { r, p: ctx.p }
    }
    fn from_rational(ctx: &PrimeField, q: &BigRational) -> Result<Self, ArithError> {
        let n = Self::from_bigint(ctx, q.numer());
        let d = Self::from_bigint(ctx, q.denom());
        n.div(&d)
    }
    fn is_zero(&self) -> bool {
        self.r == 0
    }
    fn is_one(&self) -> bool {
        self.r == 1
    }
    fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        self.make(self.r as u64 + o.r as u64)
    }
    fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        self.make(self.r as u64 + (self.p - o.r) as u64)
    }
    fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        self.make(self.r as u64 * o.r as u64)
    }
    fn neg(&self) -> Self {
        self.make((self.p - self.r) as u64)
    }
    fn inv(&self) -> Result<Self, ArithError> {
        if self.r == 0 {
            return Err(ArithError::DivisionByZero);
        }
        Ok(self.pow(self.p as u64 - 2))
    }
    fn characteristic(ctx: &PrimeField) -> u64 {
        ctx.p as u64
    }
    fn tag(ctx: &PrimeField) -> String {
        format!("F_{}", ctx.p)
    }
    fn parse_tag(tag: &str) -> Result<PrimeField, ArithError> {
        let p = tag
            .strip_prefix("F_")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ArithError::Parse { input: tag.into(), expected: "F_p tag".into() })?;
        PrimeField::new(p)
    }
    fn parse(ctx: &PrimeField, s: &str) -> Result<Self, ArithError> {
        let err = || ArithError::Parse { input: s.into(), expected: format!("r mod {}", ctx.p) };
        let (r, p) = s.split_once(" mod ").ok_or_else(err)?;
        let p: u32 = p.trim().parse().map_err(|_| err())?;
        let r: u32 = r.trim().parse().map_err(|_| err())?;
        if p != ctx.p || r >= p {
            return Err(err());
        }
        Ok(Fp { r, p })
    }
}

macro_rules! fp_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl std::ops::$tr for Fp {
            type Output = Fp;
            fn $m(self, o: Fp) -> Fp {
                Field::$m(&self, &o)
            }
        }
    )*};
}
fp_ops!(Add add, Sub sub, Mul mul);

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Field::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_moduli() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(9).is_err());
        for p in [2, 3, 5, 7, 11] {
            assert!(PrimeField::new(p).is_ok());
        }
    }

    #[test]
    fn inverse_in_f3() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(f3.elem(2).inv().unwrap(), f3.elem(2));
        assert_eq!(f3.elem(0).inv(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn display_round_trip() {
        let f7 = PrimeField::new(7).unwrap();
        let a = f7.elem(-3);
        assert_eq!(a.to_string(), "4 mod 7");
        assert_eq!(Fp::parse(&f7, "4 mod 7").unwrap(), a);
        assert!(Fp::parse(&f7, "9 mod 7").is_err());
    }

    #[test]
    fn rational_reduction() {
        let f5 = PrimeField::new(5).unwrap();
        let q = BigRational::new(3.into(), 2.into());
        assert_eq!(Fp::from_rational(&f5, &q).unwrap(), f5.elem(4));
        let bad = BigRational::new(1.into(), 5.into());
        assert!(Fp::from_rational(&f5, &bad).is_err());
    }
}
