use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{Embed, Field, NfElem};
use crate::linalg::Matrix;
use crate::poly::{substitute, Polynomial, SpecializationMap};

use super::GeometryError;

/// Terms of F∘M − λ·G listed in a discrepancy report.
const REPORTED_TERMS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermMismatch {
    pub exponent: Vec<u32>,
    pub found: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    /// λ read off the first monomial of G (absent when F∘M misses it).
    pub trial_lambda: Option<String>,
    pub mismatched_terms: usize,
    pub terms: Vec<TermMismatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericProportionality {
    pub embedding: usize,
    pub lambda: [f64; 2],
    /// ‖F∘M − λG‖ / ‖F∘M‖ for the least-squares λ.
    pub relative_deviation: f64,
    pub tolerance: f64,
    pub proportional: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceOutcome {
    pub lambda: Option<NfElem>,
    pub discrepancy: Option<Discrepancy>,
    pub numeric: Option<NumericProportionality>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceJson {
    pub verdict: String,
    pub lambda: Option<String>,
    pub discrepancy: Option<Discrepancy>,
    pub numeric: Option<NumericProportionality>,
}

impl EquivalenceOutcome {
    pub fn is_equivalent(&self) -> bool {
        self.lambda.is_some()
    }

    pub fn to_json(&self) -> EquivalenceJson {
        EquivalenceJson {
            verdict: if self.is_equivalent() { "equivalent" } else { "discrepancy" }.into(),
            lambda: self.lambda.as_ref().map(|l| l.to_string()),
            discrepancy: self.discrepancy.clone(),
            numeric: self.numeric.clone(),
        }
    }
}

fn compose(f: &Polynomial<NfElem>, m: &[Vec<NfElem>]) -> Result<Polynomial<NfElem>, GeometryError> {
    let t = f.table();
    let ctx = f.ctx();
    let mut map = SpecializationMap::new(t, t);
    for (i, row) in m.iter().enumerate() {
        let img = Polynomial::from_terms(
            t,
            ctx,
            row.iter().enumerate().map(|(j, c)| {
                let mut e = vec![0; row.len()];
                e[j] = 1;
                (e, c.clone())
            }),
        );
        map.set_index(i, img)?;
    }
    Ok(substitute(f, &map, false)?)
}

/// Exact test F∘M = λ·G with a numeric proportionality fallback on failure.
pub fn verify_projective_equivalence(
    f: &Polynomial<NfElem>,
    g: &Polynomial<NfElem>,
    m: &[Vec<NfElem>],
    embedding: usize,
    tol: f64,
) -> Result<EquivalenceOutcome, GeometryError> {
    let n = f.table().len();
    if g.table() != f.table() || m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(GeometryError::InvalidInput("forms and matrix must share one set of variables".into()));
    }
    if g.is_zero() {
        return Err(GeometryError::InvalidInput("target form is zero".into()));
    }
    let mat = Matrix::from_rows(f.ctx(), m.to_vec()).map_err(|e| GeometryError::InvalidInput(e.to_string()))?;
    if mat.rank() < n {
        return Err(GeometryError::InvalidInput("singular change of coordinates".into()));
    }
    let h = compose(f, m)?;
    let (lead, gc) = g.canonical_terms()[0];
    let hc = h.coeff(lead);
    let trial = (!hc.is_zero()).then(|| hc.div(gc)).transpose()?;
    if let Some(l) = &trial {
        if h == g.scale(l) {
            return Ok(EquivalenceOutcome { lambda: trial, discrepancy: None, numeric: None });
        }
    }
    let scaled = g.scale(trial.as_ref().unwrap_or(&NfElem::zero(f.ctx())));
    let diff = h.sub(&scaled);
    let mismatched: Vec<_> = diff.canonical_terms();
    let terms = mismatched
        .iter()
        .take(REPORTED_TERMS)
        .map(|(mono, _)| TermMismatch {
            exponent: mono.0.clone(),
            found: h.coeff(mono).to_string(),
            expected: scaled.coeff(mono).to_string(),
        })
        .collect();
    let discrepancy = Discrepancy {
        trial_lambda: trial.as_ref().map(|l| l.to_string()),
        mismatched_terms: mismatched.len(),
        terms,
    };

    let mut monos: Vec<_> = h.terms().map(|(mo, _)| mo.clone()).collect();
    monos.extend(g.terms().map(|(mo, _)| mo.clone()));
    monos.sort();
    monos.dedup();
    let emb = |c: NfElem| c.embed(embedding).map(|z| z.value());
    let hv: Vec<Complex64> = monos.iter().map(|mo| emb(h.coeff(mo))).collect::<Result<_, _>>()?;
    let gv: Vec<Complex64> = monos.iter().map(|mo| emb(g.coeff(mo))).collect::<Result<_, _>>()?;
    let gg: f64 = gv.iter().map(|c| c.norm_sqr()).sum();
    let lambda: Complex64 = gv.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum::<Complex64>() / gg;
    let hn = hv.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let dev = hv.iter().zip(&gv).map(|(a, b)| (a - lambda * b).norm_sqr()).sum::<f64>().sqrt() / hn.max(f64::MIN_POSITIVE);
    let numeric = NumericProportionality {
        embedding,
        lambda: [lambda.re, lambda.im],
        relative_deviation: dev,
        tolerance: tol,
        proportional: dev < tol,
    };
    Ok(EquivalenceOutcome { lambda: None, discrepancy: Some(discrepancy), numeric: Some(numeric) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::NumberField;
    use crate::geometry::{klein_cyclotomic_form, klein_equivalence_matrix, klein_standard_form, nearest_root_index};

    #[test]
    fn identity_and_scaling() {
        let k = NumberField::cyclotomic(7).unwrap();
        let g = klein_standard_form::<NfElem>(&k);
        let id: Vec<Vec<NfElem>> =
            (0..3).map(|i| (0..3).map(|j| NfElem::from_i64(&k, (i == j) as i64)).collect()).collect();
        let out = verify_projective_equivalence(&g, &g, &id, 0, 1e-8).unwrap();
        assert_eq!(out.lambda, Some(NfElem::one(&k)));
        let two: Vec<Vec<NfElem>> =
            id.iter().map(|r| r.iter().map(|c| c.mul(&NfElem::from_i64(&k, 2))).collect()).collect();
        let out = verify_projective_equivalence(&g, &g, &two, 0, 1e-8).unwrap();
        assert_eq!(out.lambda, Some(NfElem::from_i64(&k, 16)));
        let sing: Vec<Vec<NfElem>> = vec![id[0].clone(), id[0].clone(), id[2].clone()];
        assert!(matches!(verify_projective_equivalence(&g, &g, &sing, 0, 1e-8), Err(GeometryError::InvalidInput(_))));
    }

    #[test]
    fn klein_matrix_report_is_deterministic() {
        let k = NumberField::cyclotomic(7).unwrap();
        let emb = nearest_root_index(&k, Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 7.0)).unwrap();
        let f = klein_cyclotomic_form(&k);
        let g = klein_standard_form::<NfElem>(&k);
        let m = klein_equivalence_matrix(&k);
        let a = verify_projective_equivalence(&f, &g, &m, emb, 1e-8).unwrap();
        let b = verify_projective_equivalence(&f, &g, &m, emb, 1e-8).unwrap();
        assert_eq!(a, b);
        assert!(a.lambda.is_some() || (a.discrepancy.is_some() && a.numeric.is_some()));
    }
}
