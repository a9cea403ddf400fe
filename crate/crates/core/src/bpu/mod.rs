//! The degree-lowering derivation on H*(BU_n) whose kernel is the image of
//! H*(BPU_n), and checks of explicit generating sets for that kernel.

mod generators;

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Field, Fp, PrimeField, Rational};
use crate::linalg::{span_rank, Matrix};
use crate::poly::{Monomial, PolyError, Polynomial, VariableTable};

pub use generators::{standard_generators, GeneratorEntry, GeneratorList};

/// Largest degree for which the kernel is known to equal the image.
pub const CERTIFIED_MAX_DEGREE: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BpuError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("degree {degree}: {check} failed ({witness})")]
    CheckFailed { degree: u32, check: String, witness: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// H*(BU_n) with c_k in weighted degree 2k, over a chosen field.
#[derive(Debug, Clone)]
pub struct NablaContext<F: Field> {
    n: usize,
    ctx: F::Ctx,
    table: Arc<VariableTable>,
}

impl<F: Field> NablaContext<F> {
    pub fn new(n: usize, ctx: &F::Ctx) -> Result<Self, BpuError> {
        if n < 2 {
            return Err(BpuError::InvalidInput(format!("rank n = {n} must be at least 2")));
        }
        Ok(Self { n, ctx: ctx.clone(), table: VariableTable::indexed("c", n, 2) })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }
    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    /// Zero for ℚ.
    pub fn characteristic(&self) -> u64 {
        F::characteristic(&self.ctx)
    }

    pub fn p_divides_n(&self) -> bool {
        let p = self.characteristic();
        p != 0 && (self.n as u64).is_multiple_of(p)
    }

    /// c_k, 1-based.
    pub fn c(&self, k: usize) -> Polynomial<F> {
        Polynomial::var(&self.table, &self.ctx, k - 1)
    }

    pub fn from_int_terms(&self, terms: &[(&[u32], i64)]) -> Polynomial<F> {
        Polynomial::from_int_terms(&self.table, &self.ctx, terms)
    }

    fn nabla_monomial(&self, m: &Monomial, coeff: &F, out: &mut Polynomial<F>) {
        let e = m.exponents();
        for k in 0..self.n {
            if e[k] == 0 {
                continue;
            }
            // c_{k+1} ↦ (n−k) c_k, times the exponent from the Leibniz rule.
            let factor = F::from_i64(&self.ctx, e[k] as i64 * (self.n - k) as i64);
            let c = coeff.mul(&factor);
            if c.is_zero() {
                continue;
            }
            let mut ex = e.to_vec();
            ex[k] -= 1;
            if k > 0 {
                ex[k - 1] += 1;
            }
            out.add_term(Monomial(ex), c);
        }
    }

    pub fn nabla(&self, f: &Polynomial<F>) -> Result<Polynomial<F>, BpuError> {
        if f.table() != &self.table {
            return Err(BpuError::InvalidInput(format!(
                "polynomial in variables {:?} is not in c1..c{}",
                f.table().names(),
                self.n
            )));
        }
        let mut out = Polynomial::zero(&self.table, &self.ctx);
        for (m, c) in f.terms() {
            self.nabla_monomial(m, c, &mut out);
        }
        Ok(out)
    }

    pub fn monomial_basis(&self, degree: u32) -> Vec<Monomial> {
        self.table.monomials_of_degree(degree)
    }

    /// Coordinates of `f` in [`Self::monomial_basis`] of its degree.
    pub fn coordinates(&self, f: &Polynomial<F>, basis: &[Monomial]) -> Vec<F> {
        basis.iter().map(|m| f.coeff(m)).collect()
    }

    pub fn from_coordinates(&self, v: &[F], basis: &[Monomial]) -> Polynomial<F> {
        Polynomial::from_terms(&self.table, &self.ctx, basis.iter().map(|m| m.0.clone()).zip(v.iter().cloned()))
    }

    /// Matrix of ∇ from degree `degree` to `degree − 2` in the monomial bases.
    pub fn nabla_matrix(&self, degree: u32) -> Matrix<F> {
        let src = self.monomial_basis(degree);
        let dst = if degree >= 2 { self.monomial_basis(degree - 2) } else { Vec::new() };
        let index: HashMap<&Monomial, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = Matrix::zeros(&self.ctx, dst.len(), src.len());
        let one = F::one(&self.ctx);
        for (j, m) in src.iter().enumerate() {
            let mut img = Polynomial::zero(&self.table, &self.ctx);
            self.nabla_monomial(m, &one, &mut img);
            for (t, c) in img.terms() {
                mat.set(index[t], j, c.clone());
            }
        }
        mat
    }

    /// Basis of Ker ∇ in degree `degree`, computed directly over the field.
    pub fn kernel_of_nabla(&self, degree: u32) -> NablaKernel<F> {
        if degree % 2 == 1 {
            return NablaKernel { degree, basis: Vec::new(), within_certified_window: degree <= CERTIFIED_MAX_DEGREE };
        }
        let basis = self.monomial_basis(degree);
        let vectors = self.nabla_matrix(degree).kernel_basis();
        NablaKernel {
            degree,
            basis: vectors.iter().map(|v| self.from_coordinates(v, &basis)).collect(),
            within_certified_window: degree <= CERTIFIED_MAX_DEGREE,
        }
    }

    /// Reduction of the integral kernel (saturated at p) into the field.
    ///
    /// Over ℚ this is the ordinary kernel. Over 𝔽_p it is the image of
    /// Ker(∇ over ℤ_(p)), which can be strictly smaller than the kernel of
    /// the reduced map.
    pub fn integral_kernel(&self, degree: u32) -> Vec<Polynomial<F>> {
        let basis = self.monomial_basis(degree);
        let p = self.characteristic();
        let qctx = NablaContext::<Rational>::new(self.n, &()).expect("n already validated");
        let mut ints: Vec<Vec<BigInt>> = qctx.nabla_matrix(degree).kernel_basis().iter().map(|v| clear_denominators(v)).collect();
        if p != 0 {
            saturate_at(&mut ints, p as u32);
        }
        ints.iter()
            .map(|v| {
                let coords: Vec<F> = v.iter().map(|x| F::from_bigint(&self.ctx, x)).collect();
                self.from_coordinates(&coords, &basis)
            })
            .collect()
    }

    /// Number of monomials in c_2..c_n of the given degree.
    pub fn bsu_dimension(&self, degree: u32) -> usize {
        self.monomial_basis(degree).iter().filter(|m| m.exponents()[0] == 0).count()
    }
}

#[derive(Debug, Clone)]
pub struct NablaKernel<F: Field> {
    pub degree: u32,
    pub basis: Vec<Polynomial<F>>,
    pub within_certified_window: bool,
}

fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Replaces `basis` by a basis of (span_ℚ basis) ∩ ℤ_(p)^m, so that its
/// reduction mod p stays linearly independent.
fn saturate_at(basis: &mut [Vec<BigInt>], p: u32) {
    let fp = PrimeField::new(p).expect("characteristic is prime");
    let pb = BigInt::from(p);
    loop {
        if basis.is_empty() {
            return;
        }
        let len = basis[0].len();
        let columns: Vec<Vec<Fp>> =
            basis.iter().map(|v| v.iter().map(|x| Fp::from_bigint(&fp, x)).collect()).collect();
        let rel = Matrix::from_columns(&fp, len, &columns).expect("columns share a length").kernel_basis();
        let Some(c) = rel.first() else { return };
        let pivot = c.iter().position(|x| x.is_one()).expect("kernel vectors carry a unit entry");
        let mut combo = vec![BigInt::zero(); len];
        for (coef, v) in c.iter().zip(basis.iter()) {
            let k = BigInt::from(coef.residue());
            if k.is_zero() {
                continue;
            }
            for (acc, x) in combo.iter_mut().zip(v) {
                *acc += &k * x;
            }
        }
        debug_assert!(combo.iter().all(|x| (x % &pb).is_zero()));
        basis[pivot] = combo.into_iter().map(|x| x / &pb).collect();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Pass,
    Fail,
}

/// One degree of a generator check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NablaReportRow {
    pub n: usize,
    pub p: u64,
    pub degree: u32,
    pub kernel_dim: usize,
    pub bsu_dim: usize,
    pub generated_dim: usize,
    /// dim Ker(∇ ⊗ 𝔽_p); can exceed `kernel_dim` over 𝔽_p.
    pub naive_kernel_dim: usize,
    pub within_certified_window: bool,
    pub status: RowStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NablaReport {
    pub rows: Vec<NablaReportRow>,
}

impl NablaReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status == RowStatus::Pass)
    }

    /// First failing row as an error.
    pub fn ensure(&self) -> Result<(), BpuError> {
        match self.rows.iter().find(|r| r.status == RowStatus::Fail) {
            None => Ok(()),
            Some(r) => {
                let msg = r.failure.clone().unwrap_or_default();
                let (check, witness) = msg.split_once(": ").unwrap_or(("check", msg.as_str()));
                Err(BpuError::CheckFailed { degree: r.degree, check: check.to_string(), witness: witness.to_string() })
            }
        }
    }
}

/// All products of generators landing in `degree`.
fn products_of_degree<F: Field>(gens: &[(u32, Polynomial<F>)], degree: u32, one: &Polynomial<F>) -> Vec<Polynomial<F>> {
    fn rec<F: Field>(gens: &[(u32, Polynomial<F>)], from: usize, left: u32, acc: &Polynomial<F>, out: &mut Vec<Polynomial<F>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for i in from..gens.len() {
            let (d, g) = &gens[i];
            if *d > 0 && *d <= left {
                rec(gens, i, left - d, &acc.mul(g), out);
            }
        }
    }
    let mut out = Vec::new();
    rec(gens, 0, degree, one, &mut out);
    out
}

/// Checks, for each even degree up to `max_degree`, that the generators lie
/// in Ker ∇, that their products span it, and that its dimension matches
/// H^k(BSU_n).
pub fn verify_generators<F: Field>(
    nctx: &NablaContext<F>,
    gens: &GeneratorList,
    max_degree: u32,
) -> Result<NablaReport, BpuError> {
    if nctx.p_divides_n() {
        return Err(BpuError::Precondition(format!("p = {} divides n = {}", nctx.characteristic(), nctx.n())));
    }
    if gens.n != nctx.n() {
        return Err(BpuError::InvalidInput(format!("generators are for n = {}, context has n = {}", gens.n, nctx.n())));
    }
    let instantiated = gens.instantiate(nctx);
    let one = Polynomial::one(nctx.table(), nctx.ctx());
    let degrees: Vec<u32> = (2..=max_degree).step_by(2).collect();
    let rows = degrees
        .par_iter()
        .map(|&degree| {
            let basis = nctx.monomial_basis(degree);
            let mut failure = None;
            for (entry, g) in gens.entries.iter().zip(&instantiated) {
                if entry.degree == degree && !nctx.nabla(g).map(|d| d.is_zero()).unwrap_or(false) {
                    failure.get_or_insert(format!("generator in kernel: {} = {}", entry.name, g));
                }
            }
            let kernel = nctx.integral_kernel(degree);
            let kvecs: Vec<Vec<F>> = kernel.iter().map(|k| nctx.coordinates(k, &basis)).collect();
            let kernel_dim = kvecs.len();
            let naive_kernel_dim = nctx.nabla_matrix(degree).kernel_basis().len();
            let with_degrees: Vec<(u32, Polynomial<F>)> =
                gens.entries.iter().map(|e| e.degree).zip(instantiated.iter().cloned()).collect();
            let prods: Vec<Vec<F>> = products_of_degree(&with_degrees, degree, &one)
                .iter()
                .map(|p| nctx.coordinates(p, &basis))
                .collect();
            let generated_dim = span_rank(nctx.ctx(), basis.len(), &prods);
            let joint = span_rank(nctx.ctx(), basis.len(), &[kvecs.clone(), prods].concat());
            let bsu_dim = nctx.bsu_dimension(degree);
            if generated_dim != kernel_dim || joint != kernel_dim {
                failure.get_or_insert(format!(
                    "generation: products span dimension {generated_dim}, kernel dimension {kernel_dim}, joint {joint}"
                ));
            }
            if kernel_dim != bsu_dim {
                failure.get_or_insert(format!("BSU dimension: kernel {kernel_dim} vs BSU count {bsu_dim}"));
            }
            NablaReportRow {
                n: nctx.n(),
                p: nctx.characteristic(),
                degree,
                kernel_dim,
                bsu_dim,
                generated_dim,
                naive_kernel_dim,
                within_certified_window: degree <= CERTIFIED_MAX_DEGREE,
                status: if failure.is_none() { RowStatus::Pass } else { RowStatus::Fail },
                failure,
            }
        })
        .collect();
    Ok(NablaReport { rows })
}

/// ∇(g) = 0 over ℤ for every integer generator (name, holds).
pub fn integer_membership(gens: &GeneratorList) -> Result<Vec<(String, bool)>, BpuError> {
    let q = NablaContext::<Rational>::new(gens.n, &())?;
    gens.entries
        .iter()
        .zip(gens.instantiate(&q))
        .map(|(e, g)| Ok((e.name.clone(), q.nabla(&g)?.is_zero())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize) -> NablaContext<Rational> {
        NablaContext::new(n, &()).unwrap()
    }

    #[test]
    fn nabla_examples() {
        let c3 = q(3);
        assert_eq!(c3.nabla(&c3.c(2)).unwrap(), c3.from_int_terms(&[(&[1, 0, 0], 2)]));
        assert!(c3.nabla(&Polynomial::one(c3.table(), &())).unwrap().is_zero());
        let c4 = q(4);
        let e4 = c4.from_int_terms(&[(&[2, 0, 0, 0], 3), (&[0, 1, 0, 0], -8)]);
        assert!(c4.nabla(&e4).unwrap().is_zero());
        let foreign = Polynomial::<Rational>::var(&VariableTable::uniform(&["x"]), &(), 0);
        assert!(matches!(c4.nabla(&foreign), Err(BpuError::InvalidInput(_))));
    }

    #[test]
    fn kernels() {
        assert!(q(3).kernel_of_nabla(2).basis.is_empty());
        assert_eq!(q(4).kernel_of_nabla(8).basis.len(), 2);
        let k = q(3).kernel_of_nabla(4);
        assert_eq!(k.basis.len(), 1);
        let target = q(3).from_int_terms(&[(&[2, 0, 0], 1), (&[0, 1, 0], -3)]);
        let b = &k.basis[0];
        let ratio = b.coeff(&Monomial(vec![2, 0, 0]));
        assert_eq!(target.scale(&ratio), *b);
        assert!(q(3).kernel_of_nabla(5).basis.is_empty());
        assert!(!q(3).kernel_of_nabla(14).within_certified_window);
    }

    #[test]
    fn nabla8_matrix_columns() {
        let m = q(4).nabla_matrix(8);
        assert_eq!((m.rows(), m.cols()), (3, 5));
        assert_eq!(m.rank(), 3);
        assert_eq!(q(4).bsu_dimension(8), 2);
    }

    #[test]
    fn saturated_kernel_over_f2() {
        let f2 = PrimeField::new(2).unwrap();
        let c = NablaContext::<Fp>::new(3, &f2).unwrap();
        assert_eq!(c.integral_kernel(4).len(), 1);
        assert_eq!(c.kernel_of_nabla(4).basis.len(), 2);
    }

    #[test]
    fn generator_reports() {
        let f2 = PrimeField::new(2).unwrap();
        let r = verify_generators(&NablaContext::<Fp>::new(3, &f2).unwrap(), &standard_generators(3).unwrap(), 12).unwrap();
        assert!(r.passed(), "{r:?}");
        let f3 = PrimeField::new(3).unwrap();
        let r = verify_generators(&NablaContext::<Fp>::new(4, &f3).unwrap(), &standard_generators(4).unwrap(), 12).unwrap();
        assert!(r.passed(), "{r:?}");
        let f2 = PrimeField::new(2).unwrap();
        assert!(matches!(
            verify_generators(&NablaContext::<Fp>::new(4, &f2).unwrap(), &standard_generators(4).unwrap(), 12),
            Err(BpuError::Precondition(_))
        ));
    }

    #[test]
    fn failing_generators_are_named() {
        let mut gens = standard_generators(3).unwrap();
        gens.entries[0].terms = vec![(vec![2, 0, 0], 1), (vec![0, 1, 0], -2)];
        let r = verify_generators(&q(3), &gens, 6).unwrap();
        let err = r.ensure().unwrap_err();
        assert!(matches!(err, BpuError::CheckFailed { degree: 4, .. }), "{err}");
    }
}
