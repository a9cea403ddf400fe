use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::arith::{ArithError, Field};

use super::{Monomial, PolyError, VariableTable};

/// Sparse multivariate polynomial over an exact field.
///
/// Terms are kept in a map without zero coefficients. The map order is
/// lexicographic on exponent vectors (used for exact division); printing and
/// serialization use the weighted grevlex order of the table.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    table: Arc<VariableTable>,
    ctx: F::Ctx,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (Arc::ptr_eq(&self.table, &other.table) || self.table == other.table)
    }
}
impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> Hash for Polynomial<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(table: &Arc<VariableTable>, ctx: &F::Ctx) -> Self {
        Self { table: table.clone(), ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(table: &Arc<VariableTable>, c: F) -> Self {
        let mut p = Self::zero(table, &c.ctx());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(table.len()), c);
        }
        p
    }

    pub fn from_i64(table: &Arc<VariableTable>, ctx: &F::Ctx, n: i64) -> Self {
        Self::constant(table, F::from_i64(ctx, n))
    }

    pub fn one(table: &Arc<VariableTable>, ctx: &F::Ctx) -> Self {
        Self::constant(table, F::one(ctx))
    }

    pub fn var(table: &Arc<VariableTable>, ctx: &F::Ctx, i: usize) -> Self {
        Self::term(table, Monomial::var(table.len(), i, 1), F::one(ctx))
    }

    pub fn var_named(table: &Arc<VariableTable>, ctx: &F::Ctx, name: &str) -> Result<Self, PolyError> {
        let i = table.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.into()))?;
        Ok(Self::var(table, ctx, i))
    }

    pub fn term(table: &Arc<VariableTable>, m: Monomial, c: F) -> Self {
        assert_eq!(m.0.len(), table.len(), "monomial length differs from table size");
        let mut p = Self::zero(table, &c.ctx());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, summing repeats.
    pub fn from_terms<I>(table: &Arc<VariableTable>, ctx: &F::Ctx, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, F)>,
    {
        let mut p = Self::zero(table, ctx);
        for (e, c) in terms {
            assert_eq!(e.len(), table.len(), "monomial length differs from table size");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms(table: &Arc<VariableTable>, ctx: &F::Ctx, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(table, ctx, terms.iter().map(|(e, c)| (e.to_vec(), F::from_i64(ctx, *c))))
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in internal (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    /// Terms in canonical descending grevlex order.
    pub fn canonical_terms(&self) -> Vec<(&Monomial, &F)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| self.table.grevlex(b.0, a.0));
        v
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::one(self.table.len()))
    }

    fn same_ring(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.table, &other.table) || self.table == other.table,
            "polynomials over different variable tables"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_terms(|c| c.neg())
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(&self.table, &self.ctx);
        }
        self.map_terms(|c| c.mul(s))
    }

    fn map_terms(&self, f: impl Fn(&F) -> F) -> Self {
        Self {
            table: self.table.clone(),
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f(c))).filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table, &self.ctx);
        }
        Self {
            table: self.table.clone(),
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.mul(c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out = Self::zero(&self.table, &self.ctx);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.table, &self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Largest weighted degree of a term; `None` for the zero polynomial.
    pub fn weighted_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.table.weighted_degree(m)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// The common weighted degree of all terms, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| self.table.weighted_degree(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| self.table.weighted_degree(m) == d)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    /// Coefficients with respect to `var`: entry k is the coefficient of var^k,
    /// as a polynomial in the same table not involving `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(&self.table, &self.ctx); if self.is_zero() { 1 } else { d + 1 }];
        for (m, c) in &self.terms {
            let mut e = m.clone();
            let k = e.0[var] as usize;
            e.0[var] = 0;
            out[k].terms.insert(e, c.clone());
        }
        out
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(table: &Arc<VariableTable>, ctx: &F::Ctx, var: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero(table, ctx);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut e = m.clone();
                e.0[var] += k as u32;
                out.add_term(e, v.clone());
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.table, &self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, c.mul(&F::from_i64(&self.ctx, e as i64)));
        }
        out
    }

    pub fn eval(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.table.len());
        let mut acc = F::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = t.mul(&x.pow(e as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitute a field value for one variable, keeping the table.
    pub fn eval_var(&self, var: usize, value: &F) -> Self {
        let mut out = Self::zero(&self.table, &self.ctx);
        let mut powers: Vec<F> = vec![F::one(&self.ctx)];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out.add_term(m2, c.mul(&powers[e]));
        }
        out
    }

    /// Same terms over another table (exponents extended or permuted by `index_map`).
    pub fn relabel(&self, target: &Arc<VariableTable>, index_map: &[usize]) -> Self {
        assert_eq!(index_map.len(), self.table.len());
        let mut out = Self::zero(target, &self.ctx);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[index_map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Coefficientwise conversion into another field.
    pub fn map_coeffs<G: Field>(
        &self,
        ctx: &G::Ctx,
        f: impl Fn(&F) -> Result<G, ArithError>,
    ) -> Result<Polynomial<G>, ArithError> {
        let mut out = Polynomial::<G>::zero(&self.table, ctx);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Leading term in the internal lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.same_ring(d);
        let (dm, dc) = d.leading_term()?;
        let dc_inv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut quo = Self::zero(&self.table, &self.ctx);
        while let Some((rm, rc)) = rem.leading_term() {
            if !dm.divides(rm) {
                return None;
            }
            let qm = dm.quotient_of(rm);
            let qc = rc.mul(&dc_inv);
            for (m, c) in &d.terms {
                rem.add_term(m.mul(&qm), c.mul(&qc).neg());
            }
            quo.add_term(qm, qc);
        }
        Some(quo)
    }

    /// Coefficients of a univariate polynomial in `var`, ascending.
    pub fn univariate_coeffs(&self, var: usize) -> Result<Vec<F>, PolyError> {
        if self.support_vars().iter().any(|&v| v != var) {
            return Err(PolyError::InvalidInput(format!(
                "polynomial is not univariate in `{}`",
                self.table.names()[var]
            )));
        }
        let d = self.degree_in(var) as usize;
        let mut out = vec![F::zero(&self.ctx); d + 1];
        for (m, c) in &self.terms {
            out[m.0[var] as usize] = c.clone();
        }
        Ok(out)
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.canonical_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let n = &self.table.names()[i];
                    if e == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "({c})*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

macro_rules! poly_binops {
    ($($tr:ident $m:ident),*) => {$(
        impl<F: Field> std::ops::$tr<&Polynomial<F>> for &Polynomial<F> {
            type Output = Polynomial<F>;
            fn $m(self, o: &Polynomial<F>) -> Polynomial<F> {
                Polynomial::$m(self, o)
            }
        }
    )*};
}
poly_binops!(Add add, Sub sub, Mul mul);

impl<F: Field> std::ops::Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp, PrimeField, Rational};

    fn xyz() -> Arc<VariableTable> {
        VariableTable::uniform(&["x", "y", "z"])
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let t = xyz();
        let x = Polynomial::<Rational>::var(&t, &(), 0);
        let y = Polynomial::<Rational>::var(&t, &(), 1);
        let s = &x + &y;
        let d = &x - &y;
        let p = &s * &d;
        let expect = &x.pow(2) - &y.pow(2);
        assert_eq!(p, expect);
        assert!((&p - &expect).is_zero());
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn exact_division() {
        let t = xyz();
        let x = Polynomial::<Rational>::var(&t, &(), 0);
        let y = Polynomial::<Rational>::var(&t, &(), 1);
        let z = Polynomial::<Rational>::var(&t, &(), 2);
        let a = &(&x + &z) * &(&y.pow(3) - &z);
        let b = &x + &z;
        assert_eq!(a.div_exact(&b).unwrap(), &y.pow(3) - &z);
        assert!(a.div_exact(&(&x + &y)).is_none());
    }

    #[test]
    fn coefficients_round_trip() {
        let t = xyz();
        let f = Polynomial::<Rational>::from_int_terms(&t, &(), &[(&[2, 1, 0], 3), (&[0, 1, 1], -1), (&[1, 0, 0], 5)]);
        let cs = f.coefficients_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(Polynomial::from_coefficients_in(&t, &(), 0, &cs), f);
        assert_eq!(f.derivative(0), Polynomial::from_int_terms(&t, &(), &[(&[1, 1, 0], 6), (&[0, 0, 0], 5)]));
    }

    #[test]
    fn display_uses_grevlex() {
        let t = xyz();
        let f3 = PrimeField::new(3).unwrap();
        let f = Polynomial::<Fp>::from_int_terms(&t, &f3, &[(&[0, 0, 1], 1), (&[2, 0, 0], 2), (&[1, 1, 0], 1)]);
        assert_eq!(f.to_string(), "(2 mod 3)*x^2 + x*y + z");
    }

    #[test]
    fn homogeneity() {
        let t = VariableTable::indexed("c", 3, 2);
        let f = Polynomial::<Rational>::from_int_terms(&t, &(), &[(&[2, 0, 0], 1), (&[0, 1, 0], -3)]);
        assert_eq!(f.homogeneous_degree(), Some(4));
        let g = &f + &Polynomial::var(&t, &(), 0);
        assert_eq!(g.homogeneous_degree(), None);
        assert_eq!(g.weighted_degree(), Some(4));
    }
}
