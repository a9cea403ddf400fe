//! Koszul complexes of homogeneous sequences, regularity certificates and
//! Hilbert series of the quotient rings.

mod hilbert;

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Field;
use crate::linalg::Matrix;
use crate::poly::{Monomial, Polynomial, VariableTable};

pub use hilbert::HilbertSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KoszulError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("homological index {index} outside 1..={len}")]
    InvalidIndex { index: usize, len: usize },
    #[error("sequence of length {elements} in {variables} variables; only maximal sequences are certified")]
    UnsupportedLength { elements: usize, variables: usize },
    #[error("sequence is not regular: {0}")]
    NotRegular(String),
    #[error("permutation {order:?} of a regular sequence failed to certify")]
    PermutationNotRegular { order: Vec<usize> },
    #[error("collapse hypothesis unmet: {0}")]
    CollapseHypothesisUnmet(String),
}

/// Homogeneous, nonconstant elements of a weighted polynomial ring.
#[derive(Debug, Clone)]
pub struct GradedSequence<F: Field> {
    table: Arc<VariableTable>,
    ctx: F::Ctx,
    elements: Vec<Polynomial<F>>,
    degrees: Vec<u32>,
}

impl<F: Field> GradedSequence<F> {
    pub fn new(table: &Arc<VariableTable>, ctx: &F::Ctx, elements: Vec<Polynomial<F>>) -> Result<Self, KoszulError> {
        let mut degrees = Vec::with_capacity(elements.len());
        for (i, f) in elements.iter().enumerate() {
            if f.table() != table {
                return Err(KoszulError::InvalidInput(format!("element {i} lives in a different ring")));
            }
            match f.homogeneous_degree() {
                Some(d) if d > 0 => degrees.push(d),
                Some(_) => return Err(KoszulError::InvalidInput(format!("element {i} is constant"))),
                None if f.is_zero() => return Err(KoszulError::InvalidInput(format!("element {i} is zero"))),
                None => return Err(KoszulError::InvalidInput(format!("element {i} is not homogeneous"))),
            }
        }
        Ok(Self { table: table.clone(), ctx: ctx.clone(), elements, degrees })
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }
    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }
    pub fn elements(&self) -> &[Polynomial<F>] {
        &self.elements
    }
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            table: self.table.clone(),
            ctx: self.ctx.clone(),
            elements: order.iter().map(|&i| self.elements[i].clone()).collect(),
            degrees: order.iter().map(|&i| self.degrees[i]).collect(),
        }
    }

    /// Σ d_i − Σ w_j: top degree of the quotient when the sequence is regular and maximal.
    pub fn socle_degree(&self) -> i64 {
        self.degrees.iter().map(|&d| d as i64).sum::<i64>() - self.table.weights().iter().map(|&w| w as i64).sum::<i64>()
    }

    /// Matrix of (g_1..g_k) ↦ Σ g_i f_i into degree `t`, columns m·f_i.
    pub fn macaulay_matrix(&self, t: u32) -> Matrix<F> {
        let rows = self.table.monomials_of_degree(t);
        let index: HashMap<&Monomial, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut cols: Vec<Polynomial<F>> = Vec::new();
        let one = F::one(&self.ctx);
        for (f, &d) in self.elements.iter().zip(&self.degrees) {
            if d > t {
                continue;
            }
            for m in self.table.monomials_of_degree(t - d) {
                cols.push(f.mul_term(&m, &one));
            }
        }
        let mut mat = Matrix::zeros(&self.ctx, rows.len(), cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (m, v) in c.terms() {
                mat.set(index[m], j, v.clone());
            }
        }
        mat
    }

    /// (monomial count, Macaulay rank) in degree `t`.
    pub fn quotient_counts(&self, t: u32) -> (usize, usize) {
        let n = self.table.monomials_of_degree(t).len();
        if n == 0 {
            return (0, 0);
        }
        (n, self.macaulay_matrix(t).rank())
    }
}

/// Koszul complex K(f_1..f_k) over the ambient polynomial ring.
#[derive(Debug, Clone)]
pub struct KoszulComplex<F: Field> {
    seq: GradedSequence<F>,
    /// Strictly increasing index tuples, grouped by size.
    wedges: Vec<Vec<Vec<usize>>>,
}

impl<F: Field> KoszulComplex<F> {
    pub fn new(seq: GradedSequence<F>) -> Self {
        let k = seq.len();
        let wedges = (0..=k).map(|i| (0..k).combinations(i).collect()).collect();
        Self { seq, wedges }
    }

    pub fn sequence(&self) -> &GradedSequence<F> {
        &self.seq
    }

    pub fn wedge_degree(&self, s: &[usize]) -> u32 {
        s.iter().map(|&j| self.seq.degrees[j]).sum()
    }

    /// Basis of K_i in internal degree t: (wedge index, monomial coefficient).
    pub fn basis(&self, i: usize, t: u32) -> Vec<(usize, Monomial)> {
        let mut out = Vec::new();
        for (w, s) in self.wedges[i].iter().enumerate() {
            let d = self.wedge_degree(s);
            if d <= t {
                out.extend(self.seq.table.monomials_of_degree(t - d).into_iter().map(|m| (w, m)));
            }
        }
        out
    }

    pub fn boundary_matrix(&self, i: usize, t: u32) -> Result<Matrix<F>, KoszulError> {
        let k = self.seq.len();
        if i == 0 || i > k {
            return Err(KoszulError::InvalidIndex { index: i, len: k });
        }
        let src = self.basis(i, t);
        let dst = self.basis(i - 1, t);
        let wedge_pos: HashMap<&Vec<usize>, usize> = self.wedges[i - 1].iter().enumerate().map(|(w, s)| (s, w)).collect();
        let index: HashMap<(usize, &Monomial), usize> = dst.iter().enumerate().map(|(r, (w, m))| ((*w, m), r)).collect();
        let ctx = &self.seq.ctx;
        let mut mat = Matrix::<F>::zeros(ctx, dst.len(), src.len());
        for (col, (w, m)) in src.iter().enumerate() {
            let s = &self.wedges[i][*w];
            for (pos, &j) in s.iter().enumerate() {
                let mut face = s.clone();
                face.remove(pos);
                let fw = wedge_pos[&face];
                // Sign (−1)^(pos) for 0-based position.
                let sign = if pos % 2 == 0 { F::one(ctx) } else { F::one(ctx).neg() };
                for (fm, c) in self.seq.elements[j].terms() {
                    let r = index[&(fw, &fm.mul(m))];
                    let v = mat.get(r, col).add(&c.mul(&sign));
                    mat.set(r, col, v);
                }
            }
        }
        Ok(mat)
    }

    fn rank_of(&self, i: usize, t: u32) -> usize {
        if i == 0 || i > self.seq.len() {
            return 0;
        }
        self.boundary_matrix(i, t).map(|m| m.rank()).unwrap_or(0)
    }

    pub fn homology_dim(&self, i: usize, t: u32) -> Result<usize, KoszulError> {
        let k = self.seq.len();
        if i > k {
            return Err(KoszulError::InvalidIndex { index: i, len: k });
        }
        let dim = self.basis(i, t).len();
        Ok(dim - self.rank_of(i, t) - self.rank_of(i + 1, t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Regular,
    NotRegular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRank {
    pub degree: u32,
    pub monomials: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityCertificate {
    pub elements: Vec<String>,
    pub degrees: Vec<u32>,
    pub weights: Vec<u32>,
    pub s: i64,
    pub method: String,
    pub checked_degrees: Vec<u32>,
    pub ranks: Vec<DegreeRank>,
    pub verdict: Verdict,
}

impl RegularityCertificate {
    pub fn is_regular(&self) -> bool {
        self.verdict == Verdict::Regular
    }

    /// Highest degree checked; the quotient vanishes from `s + 1` on.
    pub fn vanishing_degree(&self) -> Option<u32> {
        self.checked_degrees.last().copied()
    }
}

/// Certifies a sequence of n forms in n variables as regular by checking
/// that the quotient vanishes in degrees s+1 ..= s+max weight.
pub fn is_regular_maximal<F: Field>(seq: &GradedSequence<F>) -> Result<RegularityCertificate, KoszulError> {
    let n = seq.table.len();
    if seq.len() != n {
        return Err(KoszulError::UnsupportedLength { elements: seq.len(), variables: n });
    }
    let s = seq.socle_degree();
    let max_w = seq.table.weights().iter().copied().max().unwrap_or(1) as i64;
    let checked: Vec<u32> = ((s + 1).max(0)..=(s + max_w).max(0)).map(|t| t as u32).collect();
    let ranks: Vec<DegreeRank> = checked
        .par_iter()
        .map(|&t| {
            let (monomials, rank) = seq.quotient_counts(t);
            DegreeRank { degree: t, monomials, rank }
        })
        .collect();
    let ok = ranks.iter().all(|r| r.rank == r.monomials);
    Ok(RegularityCertificate {
        elements: seq.elements.iter().map(|f| f.to_string()).collect(),
        degrees: seq.degrees.clone(),
        weights: seq.table.weights().to_vec(),
        s,
        method: "artinian-macaulay".into(),
        checked_degrees: checked,
        ranks,
        verdict: if ok { Verdict::Regular } else { Verdict::NotRegular },
    })
}

/// Degreewise injectivity of each f_j on R/(f_1..f_{j−1}) up to `up_to`.
/// Evidence only: says nothing about higher degrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedRegularityEvidence {
    pub up_to: u32,
    pub certifying: bool,
    /// First (element index, degree) where injectivity fails.
    pub first_failure: Option<(usize, u32)>,
}

pub fn bounded_regularity_check<F: Field>(seq: &GradedSequence<F>, up_to: u32) -> BoundedRegularityEvidence {
    let mut prev = quotient_hilbert(&seq.permuted(&[]), up_to);
    for j in 0..seq.len() {
        let prefix: Vec<usize> = (0..=j).collect();
        let cur = quotient_hilbert(&seq.permuted(&prefix), up_to);
        let d = seq.degrees[j];
        for t in 0..=up_to {
            let shifted = if t >= d { prev.coeff(t - d) } else { 0 };
            if cur.coeff(t) + shifted != prev.coeff(t) {
                return BoundedRegularityEvidence { up_to, certifying: false, first_failure: Some((j, t)) };
            }
        }
        prev = cur;
    }
    BoundedRegularityEvidence { up_to, certifying: false, first_failure: None }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationOutcome {
    pub order: Vec<usize>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationReport {
    pub outcomes: Vec<PermutationOutcome>,
}

/// Re-certifies every ordering of a regular maximal sequence.
pub fn permuted_regularity<F: Field>(seq: &GradedSequence<F>) -> Result<PermutationReport, KoszulError> {
    let base = is_regular_maximal(seq)?;
    if !base.is_regular() {
        return Err(KoszulError::NotRegular("the input order does not certify".into()));
    }
    let orders: Vec<Vec<usize>> = (0..seq.len()).permutations(seq.len()).collect();
    let outcomes: Vec<PermutationOutcome> = orders
        .into_par_iter()
        .map(|order| {
            let verdict = is_regular_maximal(&seq.permuted(&order)).map(|c| c.verdict).unwrap_or(Verdict::NotRegular);
            PermutationOutcome { order, verdict }
        })
        .collect();
    if let Some(bad) = outcomes.iter().find(|o| o.verdict != Verdict::Regular) {
        return Err(KoszulError::PermutationNotRegular { order: bad.order.clone() });
    }
    Ok(PermutationReport { outcomes })
}

/// Hilbert function of R/(f_1..f_k) in degrees 0..=up_to.
pub fn quotient_hilbert<F: Field>(seq: &GradedSequence<F>, up_to: u32) -> HilbertSeries {
    let coeffs: Vec<u64> = (0..=up_to)
        .into_par_iter()
        .map(|t| {
            let (n, r) = seq.quotient_counts(t);
            (n - r) as u64
        })
        .collect();
    HilbertSeries::new(coeffs)
}

/// Poincaré polynomial of the quotient tensored with an exterior algebra on
/// `exterior_count` degree-one generators.
///
/// Maximal sequences must certify as regular; the empty sequence is
/// regular by convention and yields the truncation at `up_to`.
pub fn em_poincare<F: Field>(seq: &GradedSequence<F>, exterior_count: u32, up_to: u32) -> Result<HilbertSeries, KoszulError> {
    if !seq.is_empty() {
        let cert = match is_regular_maximal(seq) {
            Ok(c) => c,
            Err(KoszulError::UnsupportedLength { elements, variables }) => {
                return Err(KoszulError::CollapseHypothesisUnmet(format!(
                    "{elements} elements in {variables} variables cannot be certified regular"
                )))
            }
            Err(e) => return Err(e),
        };
        if !cert.is_regular() {
            return Err(KoszulError::CollapseHypothesisUnmet("sequence is not regular".into()));
        }
    }
    let quotient = quotient_hilbert(seq, up_to);
    Ok(quotient.times_exterior(exterior_count).truncated(up_to))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyWitness {
    pub homological_degree: usize,
    pub internal_degree: u32,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorReport {
    pub up_to: u32,
    pub exterior_count: u32,
    pub nonzero: Vec<HomologyWitness>,
    pub concentrated: bool,
    /// Verdict of [`is_regular_maximal`] when the sequence is maximal.
    pub certificate_agrees: Option<bool>,
}

/// Checks H_i(K(f)) = 0 for i ≥ 1 in internal degrees ≤ `up_to`.
pub fn tor_concentration_check<F: Field>(seq: &GradedSequence<F>, exterior_count: u32, up_to: u32) -> TorReport {
    let k = seq.len();
    let complex = KoszulComplex::new(seq.clone());
    let per_degree: Vec<Vec<HomologyWitness>> = (0..=up_to)
        .into_par_iter()
        .map(|t| {
            let ranks: Vec<usize> = (0..=k + 1).map(|i| complex.rank_of(i, t)).collect();
            (1..=k)
                .filter_map(|i| {
                    let dim = complex.basis(i, t).len() - ranks[i] - ranks[i + 1];
                    (dim > 0).then_some(HomologyWitness { homological_degree: i, internal_degree: t, dim })
                })
                .collect()
        })
        .collect();
    let nonzero: Vec<HomologyWitness> = per_degree.into_iter().flatten().collect();
    let concentrated = nonzero.is_empty();
    let certificate_agrees = is_regular_maximal(seq).ok().map(|c| c.is_regular() == concentrated);
    TorReport { up_to, exterior_count, nonzero, concentrated, certificate_agrees }
}
