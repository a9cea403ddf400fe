use std::fmt;

use crate::arith::{Field, Fp, PrimeField};

/// Dense univariate polynomial over a field, ascending coefficients, trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<F: Field> {
    ctx: F::Ctx,
    coeffs: Vec<F>,
}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| format!("[{c}]")).collect();
        write!(f, "UniPoly({})", parts.join(" "))
    }
}

impl<F: Field> UniPoly<F> {
    pub fn new(ctx: &F::Ctx, mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { ctx: ctx.clone(), coeffs }
    }

    pub fn from_i64(ctx: &F::Ctx, coeffs: &[i64]) -> Self {
        Self::new(ctx, coeffs.iter().map(|&c| F::from_i64(ctx, c)).collect())
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        Self { ctx: ctx.clone(), coeffs: vec![] }
    }

    pub fn constant(ctx: &F::Ctx, c: F) -> Self {
        Self::new(ctx, vec![c])
    }

    pub fn x(ctx: &F::Ctx) -> Self {
        Self::new(ctx, vec![F::zero(ctx), F::one(ctx)])
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(&self.ctx, (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(&self.ctx, (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(F::neg).collect())
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = vec![F::zero(&self.ctx); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.ctx, out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(&self.ctx, F::one(&self.ctx)), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lc().unwrap().inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(&self.ctx), self.clone());
        }
        let mut q = vec![F::zero(&self.ctx); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = r[k].mul(&inv);
            if c.is_zero() {
                continue;
            }
            for (i, b) in d.coeffs.iter().enumerate() {
                r[k - dd + i] = r[k - dd + i].sub(&c.mul(b));
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        (Self::new(&self.ctx, q), Self::new(&self.ctx, r))
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            &self.ctx,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul(&F::from_i64(&self.ctx, i as i64))).collect(),
        )
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(&self.ctx), |acc, c| acc.mul(x).add(c))
    }

    /// p(x + c).
    pub fn taylor_shift(&self, c: &F) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                a[j] = a[j].add(&c.mul(&a[j + 1]));
            }
        }
        Self::new(&self.ctx, a)
    }

    /// True when some reduction modulo a large prime keeps the degree and is
    /// squarefree, which forces the discriminant to be nonzero.
    pub fn squarefree_mod_p(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        for p in [1_000_003u32, 1_000_033, 1_000_037] {
            let fp = PrimeField::new(p).expect("prime");
            let Some(point) = F::reduction_point(&self.ctx, fp) else { continue };
            let Some(coeffs) = self.coeffs.iter().map(|c| c.reduce(fp, point)).collect::<Option<Vec<Fp>>>() else {
                continue;
            };
            let red = UniPoly::new(&fp, coeffs);
            if red.degree() == Some(n) && red.gcd(&red.derivative()).degree() == Some(0) {
                return true;
            }
        }
        false
    }

    /// Yun's squarefree decomposition for characteristic zero (or p larger
    /// than the degree): pairs (multiplicity, monic squarefree factor).
    pub fn squarefree_decomposition(&self) -> Vec<(usize, Self)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        if self.squarefree_mod_p() {
            return vec![(1, f)];
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).0;
        let mut c = df.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((i, a.clone()));
            }
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Writes `self = lc · s²` with `s` monic, if possible.
    pub fn exact_sqrt(&self) -> Option<(F, Self)> {
        let n2 = self.degree()?;
        if n2 % 2 == 1 {
            return None;
        }
        let n = n2 / 2;
        let lc = self.lc().unwrap().clone();
        let f = self.monic();
        let two_inv = F::from_i64(&self.ctx, 2).inv().ok()?;
        let mut s = vec![F::zero(&self.ctx); n + 1];
        s[n] = F::one(&self.ctx);
        for k in 1..=n {
            let mut acc = f.coeff(n2 - k);
            for i in 1..k {
                acc = acc.sub(&s[n - i].mul(&s[n - k + i]));
            }
            s[n - k] = acc.mul(&two_inv);
        }
        let s = Self::new(&self.ctx, s);
        (s.mul(&s) == f).then_some((lc, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    type Q = UniPoly<Rational>;

    #[test]
    fn gcd_examples() {
        let x4 = Q::from_i64(&(), &[0, 0, 0, 0, 1]);
        let d = Q::from_i64(&(), &[0, 0, 0, 4]);
        assert_eq!(x4.gcd(&d), Q::from_i64(&(), &[0, 0, 0, 1]));
        let a = Q::from_i64(&(), &[-1, 0, 1]);
        let b = Q::from_i64(&(), &[-1, 1]);
        assert_eq!(a.gcd(&b), b);
        let f2 = PrimeField::new(2).unwrap();
        let p = UniPoly::<crate::arith::Fp>::from_i64(&f2, &[0, 1, 1]);
        let x = UniPoly::<crate::arith::Fp>::from_i64(&f2, &[0, 1]);
        assert_eq!(p.gcd(&x), x);
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let p = Q::from_i64(&(), &[3, -2, 0, 5, 1]);
        let c = Rational::from_i64(&(), -3);
        let s = p.taylor_shift(&c);
        for x in -4..5 {
            let x = Rational::from_i64(&(), x);
            assert_eq!(s.eval(&x), p.eval(&x.add(&c)));
        }
    }

    #[test]
    fn divrem_identity() {
        let a = Q::from_i64(&(), &[3, -2, 0, 5, 1]);
        let b = Q::from_i64(&(), &[1, 0, 2]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn squarefree_parts() {
        // (x-1)^2 (x-2)^3 (x+5)
        let l = |c: i64| Q::from_i64(&(), &[c, 1]);
        let f = l(-1).pow(2).mul(&l(-2).pow(3)).mul(&l(5)).scale(&Rational::from_integer(7.into()));
        let parts = f.squarefree_decomposition();
        assert_eq!(parts, vec![(1, l(5)), (2, l(-1)), (3, l(-2))]);
        assert!(!f.squarefree_mod_p());
        assert!(l(1).mul(&l(2)).squarefree_mod_p());
    }

    #[test]
    fn exact_square_roots() {
        let g = Q::from_i64(&(), &[2, -3, 1]);
        let f = g.mul(&g).scale(&Rational::from_integer(5.into()));
        let (lc, s) = f.exact_sqrt().unwrap();
        assert_eq!(lc, Rational::from_integer(5.into()));
        assert_eq!(s, g);
        assert!(Q::from_i64(&(), &[1, 0, 0, 1]).exact_sqrt().is_none());
        assert!(Q::from_i64(&(), &[2, 0, 1]).exact_sqrt().is_none());
    }
}
