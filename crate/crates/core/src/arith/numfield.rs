use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::rational::rational_to_f64_exact;
use super::prime::rational_mod;
use super::{parse_rational, ArithError, ComplexApprox, Embed, Field, Fp, PrimeField};
use crate::numeric;

/// The algebraic number field ℚ[t]/(m(t)) for a monic minimal polynomial m.
#[derive(Debug)]
pub struct NumberField {
    /// Ascending coefficients of m; the last entry is 1.
    minpoly: Vec<BigRational>,
    roots: OnceLock<Result<Vec<(Complex64, f64)>, ArithError>>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}
impl Eq for NumberField {}

impl NumberField {
    pub fn new(minpoly: Vec<BigRational>) -> Result<Arc<Self>, ArithError> {
        if minpoly.len() < 2 {
            return Err(ArithError::InvalidField("minimal polynomial must have degree >= 1".into()));
        }
        if !minpoly.last().unwrap().is_one() {
            return Err(ArithError::InvalidField("minimal polynomial must be monic".into()));
        }
        Ok(Arc::new(Self { minpoly, roots: OnceLock::new() }))
    }

    pub fn from_ints(minpoly: &[i64]) -> Result<Arc<Self>, ArithError> {
        Self::new(minpoly.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// ℚ(ζ_q) for a prime q, via the cyclotomic polynomial 1 + t + … + t^(q−1).
    pub fn cyclotomic(q: u32) -> Result<Arc<Self>, ArithError> {
        crate::arith::PrimeField::new(q)?;
        Self::from_ints(&vec![1; q as usize])
    }

    /// ℚ(√−7) as ℚ[t]/(t² + 7).
    pub fn sqrt_minus_7() -> Arc<Self> {
        Self::from_ints(&[7, 0, 1]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[BigRational] {
        &self.minpoly
    }

    pub fn elem(self: &Arc<Self>, coeffs: Vec<BigRational>) -> NfElem {
        NfElem { field: self.clone(), coeffs: reduce(&self.minpoly, coeffs) }
    }

    pub fn elem_ints(self: &Arc<Self>, coeffs: &[i64]) -> NfElem {
        self.elem(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn rational(self: &Arc<Self>, q: BigRational) -> NfElem {
        self.elem(vec![q])
    }

    /// The class of t.
    pub fn generator(self: &Arc<Self>) -> NfElem {
        self.elem_ints(&[0, 1])
    }

    /// Complex roots of the minimal polynomial with error radii, sorted
    /// lexicographically by (re, im).
    pub fn complex_roots(&self) -> Result<&[(Complex64, f64)], ArithError> {
        self.roots
            .get_or_init(|| compute_roots(&self.minpoly))
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }
}

fn compute_roots(minpoly: &[BigRational]) -> Result<Vec<(Complex64, f64)>, ArithError> {
    let c: Vec<Complex64> = minpoly.iter().map(|q| Complex64::new(rational_to_f64_exact(q).0, 0.0)).collect();
    let roots = numeric::aberth(&c).map_err(|e| ArithError::NumericFailure(e.to_string()))?;
    let mut out: Vec<(Complex64, f64)> = roots
        .into_iter()
        .map(|r| {
            let r = numeric::polish(&c, r, 5);
            let radius = numeric::inclusion_radius(&c, r) + 4.0 * f64::EPSILON * r.norm();
            (r, radius)
        })
        .collect();
    let scale = out.iter().map(|(r, _)| r.norm()).fold(1.0, f64::max);
    out.sort_by(|(a, _), (b, _)| lex_with_tolerance(*a, *b, 1e-9 * scale));
    for w in out.windows(2) {
        if (w[0].0 - w[1].0).norm() <= w[0].1 + w[1].1 {
            return Err(ArithError::NumericFailure("roots of minimal polynomial not separated".into()));
        }
    }
    Ok(out)
}

/// Lexicographic order on (re, im) treating real parts within `tol` as equal.
pub(crate) fn lex_with_tolerance(a: Complex64, b: Complex64, tol: f64) -> Ordering {
    if (a.re - b.re).abs() > tol {
        a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal)
    } else {
        a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal)
    }
}

fn qzero() -> BigRational {
    BigRational::from_integer(0.into())
}

fn qone() -> BigRational {
    BigRational::from_integer(1.into())
}

fn reduce(m: &[BigRational], mut c: Vec<BigRational>) -> Vec<BigRational> {
    let d = m.len() - 1;
    for k in (d..c.len()).rev() {
        let lead = std::mem::replace(&mut c[k], qzero());
        if lead.is_zero() {
            continue;
        }
        for i in 0..d {
            let t = &lead * &m[i];
            c[k - d + i] -= t;
        }
    }
    c.resize(d, qzero());
    c
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![qzero(); r.len() - db];
    for k in (db..r.len()).rev() {
        let c = &r[k] / lb;
        if c.is_zero() {
            continue;
        }
        for i in 0..=db {
            let t = &c * &b[i];
            r[k - db + i] -= t;
        }
        q[k - db] = c;
    }
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![qzero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(qzero);
            let y = b.get(i).cloned().unwrap_or_else(qzero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// An element of a [`NumberField`], stored as its reduced coefficient vector.
#[derive(Clone)]
pub struct NfElem {
    field: Arc<NumberField>,
    coeffs: Vec<BigRational>,
}

impl NfElem {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Coefficients of the reduced representative, length = degree of the field.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| &self.coeffs[0])
    }

    fn same_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "number-field elements from different fields"
        );
    }

    fn with(&self, coeffs: Vec<BigRational>) -> Self {
        Self { field: self.field.clone(), coeffs }
    }
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}
impl Eq for NfElem {}

impl Hash for NfElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NfElem[{self}]")
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Field for NfElem {
    type Ctx = Arc<NumberField>;

    fn ctx(&self) -> Arc<NumberField> {
        self.field.clone()
    }
    fn zero(ctx: &Arc<NumberField>) -> Self {
        NfElem { field: ctx.clone(), coeffs: vec![qzero(); ctx.degree()] }
    }
    fn one(ctx: &Arc<NumberField>) -> Self {
        ctx.elem_ints(&[1])
    }
    fn from_i64(ctx: &Arc<NumberField>, n: i64) -> Self {
        ctx.elem_ints(&[n])
    }
    fn from_bigint(ctx: &Arc<NumberField>, n: &BigInt) -> Self {
        ctx.rational(BigRational::from_integer(n.clone()))
    }
    fn from_rational(ctx: &Arc<NumberField>, q: &BigRational) -> Result<Self, ArithError> {
        Ok(ctx.rational(q.clone()))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        self.same_field(o);
        self.with(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect())
    }
    fn sub(&self, o: &Self) -> Self {
        self.same_field(o);
        self.with(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect())
    }
    fn mul(&self, o: &Self) -> Self {
        self.same_field(o);
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        if let Some(q) = self.as_rational() {
            return self.with(o.coeffs.iter().map(|c| c * q).collect());
        }
        if let Some(q) = o.as_rational() {
            return self.with(self.coeffs.iter().map(|c| c * q).collect());
        }
        self.with(reduce(&self.field.minpoly, poly_mul(&self.coeffs, &o.coeffs)))
    }
    fn neg(&self) -> Self {
        self.with(self.coeffs.iter().map(|c| -c).collect())
    }
    fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.field.rational(q.recip()));
        }
        // Extended Euclid on (m, a), tracking the cofactor of a.
        let m = &self.field.minpoly;
        let mut a = self.coeffs.clone();
        trim(&mut a);
        let (mut r0, mut r1) = (m.clone(), a);
        let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) = (vec![], vec![qone()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            return Err(ArithError::InvalidField(format!(
                "minimal polynomial is reducible: shares a degree-{} factor with {}",
                r0.len() - 1,
                self
            )));
        }
        let g = r0[0].recip();
        Ok(self.field.elem(s0.into_iter().map(|c| c * &g).collect()))
    }
    fn characteristic(_: &Arc<NumberField>) -> u64 {
        0
    }
    fn tag(ctx: &Arc<NumberField>) -> String {
        let parts: Vec<String> = ctx.minpoly.iter().map(|c| c.to_string()).collect();
        format!("Q[t]/({})", parts.join(","))
    }
    fn parse_tag(tag: &str) -> Result<Arc<NumberField>, ArithError> {
        let inner = tag
            .strip_prefix("Q[t]/(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| ArithError::Parse { input: tag.into(), expected: "Q[t]/(m0,...,1)".into() })?;
        let coeffs = inner.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
        NumberField::new(coeffs)
    }
    fn parse(ctx: &Arc<NumberField>, s: &str) -> Result<Self, ArithError> {
        let coeffs = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() != ctx.degree() {
            return Err(ArithError::Parse {
                input: s.into(),
                expected: format!("{} comma-separated rationals", ctx.degree()),
            });
        }
        Ok(NfElem { field: ctx.clone(), coeffs })
    }
    fn reduction_point(ctx: &Arc<NumberField>, p: PrimeField) -> Option<Fp> {
        let m: Vec<Fp> = ctx.minpoly.iter().map(|c| rational_mod(c, p)).collect::<Option<_>>()?;
        (0..p.modulus() as i64)
            .map(|r| p.elem(r))
            .find(|r| m.iter().rev().fold(p.elem(0), |acc, c| acc.mul(r).add(c)).is_zero())
    }
    fn reduce(&self, p: PrimeField, point: Fp) -> Option<Fp> {
        self.coeffs.iter().rev().try_fold(p.elem(0), |acc, c| Some(acc.mul(&point).add(&rational_mod(c, p)?)))
    }
    fn defining_polynomial(ctx: &Arc<NumberField>) -> Option<Vec<BigRational>> {
        Some(ctx.minpoly.clone())
    }
    fn power_basis(&self) -> Option<Vec<BigRational>> {
        let mut c = self.coeffs.clone();
        c.resize(self.field.degree(), qzero());
        Some(c)
    }
    fn from_power_basis(ctx: &Arc<NumberField>, coords: &[BigRational]) -> Option<Self> {
        (coords.len() == ctx.degree()).then(|| ctx.elem(coords.to_vec()))
    }
}

/// Image of `a` under the embedding sending t to the `root_index`-th complex
/// root of the minimal polynomial (roots ordered lexicographically by (re, im)).
pub fn nf_embed_complex(a: &NfElem, root_index: usize) -> Result<ComplexApprox, ArithError> {
    let roots = a.field.complex_roots()?;
    let &(r, rerr) = roots.get(root_index).ok_or_else(|| {
        ArithError::NumericFailure(format!("root index {root_index} out of range (degree {})", roots.len()))
    })?;
    if let Some(q) = a.as_rational() {
        let (v, e) = rational_to_f64_exact(q);
        return Ok(ComplexApprox::new(v, 0.0, e));
    }
    let root = ComplexApprox::new(r.re, r.im, rerr);
    let mut acc = ComplexApprox::new(0.0, 0.0, 0.0);
    for c in a.coeffs.iter().rev() {
        let (v, e) = rational_to_f64_exact(c);
        acc = acc * root + ComplexApprox::new(v, 0.0, e);
    }
    if !(acc.err <= 1e-12 * (1.0 + acc.abs())) {
        return Err(ArithError::NumericFailure(format!("embedding error {:e} too large", acc.err)));
    }
    Ok(acc)
}

impl Embed for NfElem {
    fn embed(&self, root_index: usize) -> Result<ComplexApprox, ArithError> {
        nf_embed_complex(self, root_index)
    }
    fn log2_size(&self) -> i64 {
        self.coeffs.iter().map(|c| c.log2_size()).max().unwrap_or(i64::MIN / 4)
    }
    fn scale_pow2(&self, k: i64) -> Self {
        self.with(self.coeffs.iter().map(|c| c.scale_pow2(k)).collect())
    }
}

macro_rules! nf_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl std::ops::$tr<&NfElem> for &NfElem {
            type Output = NfElem;
            fn $m(self, o: &NfElem) -> NfElem {
                Field::$m(self, o)
            }
        }
    )*};
}
nf_ops!(Add add, Sub sub, Mul mul);

impl std::ops::Neg for &NfElem {
    type Output = NfElem;
    fn neg(self) -> NfElem {
        Field::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn inverse_of_t_mod_t2_plus_7() {
        let k = NumberField::sqrt_minus_7();
        let t = k.generator();
        let inv = t.inv().unwrap();
        assert_eq!(inv, k.elem(vec![q(0, 1), q(-1, 7)]));
        assert!(Field::mul(&t, &inv).is_one());
    }

    #[test]
    fn reducible_minpoly_detected() {
        let k = NumberField::from_ints(&[-1, 0, 1]).unwrap();
        let a = k.elem_ints(&[1, 1]);
        assert!(matches!(a.inv(), Err(ArithError::InvalidField(_))));
        assert_eq!(k.elem_ints(&[0, 0]).inv(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn embeddings() {
        let k = NumberField::sqrt_minus_7();
        let e = nf_embed_complex(&k.generator(), 1).unwrap();
        assert!(e.re.abs() < 1e-15);
        assert!((e.im - 7f64.sqrt()).abs() < 1e-12);
        let z3 = NumberField::cyclotomic(3).unwrap();
        let w = nf_embed_complex(&z3.generator(), 1).unwrap();
        let ang = 2.0 * std::f64::consts::PI / 3.0;
        assert!((w.re - ang.cos()).abs() < 1e-12 && (w.im - ang.sin()).abs() < 1e-12);
        let half = k.rational(q(1, 2));
        let h = nf_embed_complex(&half, 0).unwrap();
        assert_eq!((h.re, h.im, h.err), (0.5, 0.0, 0.0));
    }

    #[test]
    fn roots_sorted_lexicographically() {
        let z7 = NumberField::cyclotomic(7).unwrap();
        let roots = z7.complex_roots().unwrap();
        assert_eq!(roots.len(), 6);
        for w in roots.windows(2) {
            assert_ne!(lex_with_tolerance(w[0].0, w[1].0, 1e-9), Ordering::Greater);
        }
    }

    #[test]
    fn sqrt_minus_7_inside_q_zeta7() {
        let z7 = NumberField::cyclotomic(7).unwrap();
        let z = z7.generator();
        let s = [1u64, 2, 4].iter().fold(z7.elem_ints(&[1]), |acc, &e| acc.add(&Field::mul(&z.pow(e), &z7.elem_ints(&[2]))));
        assert_eq!(Field::mul(&s, &s), z7.elem_ints(&[-7]));
    }

    #[test]
    fn serialization_round_trip() {
        let k = NumberField::sqrt_minus_7();
        let a = k.elem(vec![q(3, 2), q(-1, 7)]);
        assert_eq!(a.to_string(), "3/2,-1/7");
        assert_eq!(NfElem::parse(&k, "3/2,-1/7").unwrap(), a);
        let tag = NfElem::tag(&k);
        assert_eq!(tag, "Q[t]/(7,0,1)");
        assert_eq!(*NfElem::parse_tag(&tag).unwrap(), *k);
    }
}
