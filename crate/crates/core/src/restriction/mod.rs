//! Restriction of the BPU_n generators to elementary abelian subgroups
//! through BU_n and the maximal torus.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, Field, Fp, NfElem, NumberField, PrimeField, Rational};
use crate::bpu::{standard_generators, BpuError, NablaContext};
use crate::poly::{elementary_symmetric, resultant, substitute, PolyError, PolyJson, Polynomial, SpecializationMap, VariableTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RestrictionError {
    #[error("invalid subgroup datum: {0}")]
    InvalidDatum(String),
    #[error("specialization mismatch at `{variable}`: stored {stored}, derived {derived}")]
    Mismatch { variable: String, stored: String, derived: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Bpu(#[from] BpuError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A diagonal elementary abelian subgroup of PU_n, its cohomology ring and
/// the stated restriction of the torus classes τ_1..τ_n.
#[derive(Debug, Clone)]
pub struct SubgroupDatum {
    pub name: String,
    pub n: usize,
    pub p: u32,
    /// Order of every nontrivial generator.
    pub q: u32,
    pub field: Arc<NumberField>,
    /// n × n matrices over ℚ(ζ_q).
    pub generators: Vec<Vec<Vec<NfElem>>>,
    pub torus: Arc<VariableTable>,
    pub target: Arc<VariableTable>,
    pub specialization: SpecializationMap<Fp>,
    /// Degree-one exterior generators of H*(BΓ; 𝔽_p) not in the polynomial part.
    pub exterior_count: u32,
}

fn diagonal(field: &Arc<NumberField>, entries: &[NfElem]) -> Vec<Vec<NfElem>> {
    let n = entries.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { entries[i].clone() } else { NfElem::zero(field) }).collect())
        .collect()
}

/// ℚ(ζ_q); for q = 2 the degree-one field with generator −1.
fn root_of_unity_field(q: u32) -> Result<Arc<NumberField>, ArithError> {
    if q == 2 {
        NumberField::from_ints(&[1, 1])
    } else {
        NumberField::cyclotomic(q)
    }
}

impl SubgroupDatum {
    /// K ≅ (ℤ/3)³ in PU_4 acting diagonally on the Fermat cubic surface, p = 3.
    pub fn fermat_k() -> Self {
        let field = NumberField::cyclotomic(3).expect("3 is prime");
        let one = NfElem::one(&field);
        let w = field.generator();
        let generators = (0..3)
            .map(|g| {
                let e: Vec<NfElem> = (0..4).map(|j| if j == g { w.clone() } else { one.clone() }).collect();
                diagonal(&field, &e)
            })
            .collect();
        let torus = VariableTable::indexed_flat("tau", 4, 2);
        let target = VariableTable::indexed_flat("xi", 3, 2);
        let fp = PrimeField::new(3).expect("3 is prime");
        let mut spec = SpecializationMap::new(&torus, &target);
        for i in 0..3 {
            spec.set_index(i, Polynomial::var(&target, &fp, i)).expect("same table");
        }
        spec.set_index(3, Polynomial::zero(&target, &fp)).expect("same table");
        Self {
            name: "K".into(),
            n: 4,
            p: 3,
            q: 3,
            field,
            generators,
            torus,
            target,
            specialization: spec,
            exterior_count: 3,
        }
    }

    /// H ≅ (ℤ/2)² in PU_3 acting by sign changes on the Klein quartic, p = 2.
    pub fn klein_h() -> Self {
        let field = root_of_unity_field(2).expect("linear minimal polynomial");
        let one = NfElem::one(&field);
        let m1 = field.generator();
        let generators = vec![
            diagonal(&field, &[m1.clone(), one.clone(), one.clone()]),
            diagonal(&field, &[one.clone(), m1, one]),
        ];
        let torus = VariableTable::indexed_flat("tau", 3, 2);
        let target = VariableTable::uniform(&["u", "v"]);
        let fp = PrimeField::new(2).expect("2 is prime");
        let mut spec = SpecializationMap::new(&torus, &target);
        spec.set_index(0, Polynomial::from_int_terms(&target, &fp, &[(&[2, 0], 1)])).expect("same table");
        spec.set_index(1, Polynomial::from_int_terms(&target, &fp, &[(&[0, 2], 1)])).expect("same table");
        spec.set_index(2, Polynomial::zero(&target, &fp)).expect("same table");
        Self {
            name: "H".into(),
            n: 3,
            p: 2,
            q: 2,
            field,
            generators,
            torus,
            target,
            specialization: spec,
            exterior_count: 0,
        }
    }

    /// The trivial subgroup of PU_n with coefficients 𝔽_p.
    pub fn trivial(n: usize, p: u32) -> Result<Self, RestrictionError> {
        let fp = PrimeField::new(p)?;
        let field = root_of_unity_field(p)?;
        let torus = VariableTable::indexed_flat("tau", n, 2);
        let target = VariableTable::new::<&str>(&[], &[])?;
        let mut spec = SpecializationMap::new(&torus, &target);
        for i in 0..n {
            spec.set_index(i, Polynomial::zero(&target, &fp))?;
        }
        Ok(Self {
            name: "trivial".into(),
            n,
            p,
            q: p,
            field,
            generators: Vec::new(),
            torus,
            target,
            specialization: spec,
            exterior_count: 0,
        })
    }

    pub fn prime_field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("datum primes are validated")
    }

    /// Diagonality, commutation and exact order q of every generator.
    pub fn check_generators(&self) -> Result<(), RestrictionError> {
        for (g, m) in self.generators.iter().enumerate() {
            if m.len() != self.n || m.iter().any(|r| r.len() != self.n) {
                return Err(RestrictionError::InvalidDatum(format!("generator {g} is not {0}×{0}", self.n)));
            }
            for (i, row) in m.iter().enumerate() {
                if row.iter().enumerate().any(|(j, x)| i != j && !x.is_zero()) {
                    return Err(RestrictionError::InvalidDatum(format!("generator {g} is not diagonal")));
                }
            }
            let diag: Vec<&NfElem> = (0..self.n).map(|i| &m[i][i]).collect();
            if diag.iter().all(|d| d.is_one()) {
                return Err(RestrictionError::InvalidDatum(format!("generator {g} is the identity")));
            }
            if diag.iter().any(|d| !d.pow(self.q as u64).is_one()) {
                return Err(RestrictionError::InvalidDatum(format!("generator {g} does not have order {}", self.q)));
            }
        }
        for a in &self.generators {
            for b in &self.generators {
                let ab: Vec<NfElem> = (0..self.n).map(|i| a[i][i].mul(&b[i][i])).collect();
                let ba: Vec<NfElem> = (0..self.n).map(|i| b[i][i].mul(&a[i][i])).collect();
                if ab != ba {
                    return Err(RestrictionError::InvalidDatum("generators do not commute".into()));
                }
            }
        }
        Ok(())
    }

    /// Exponent e with entry = ζ_q^e.
    fn discrete_log(&self, entry: &NfElem) -> Option<u32> {
        let z = self.field.generator();
        let mut acc = NfElem::one(&self.field);
        for e in 0..self.q {
            if &acc == entry {
                return Some(e);
            }
            acc = acc.mul(&z);
        }
        None
    }

    /// τ-images recomputed from the diagonal characters.
    pub fn derive_specialization(&self) -> Result<SpecializationMap<Fp>, RestrictionError> {
        self.check_generators()?;
        let fp = self.prime_field();
        let mut map = SpecializationMap::new(&self.torus, &self.target);
        if self.target.len() != self.generators.len() {
            return Err(RestrictionError::InvalidDatum(format!(
                "{} generators but {} target variables",
                self.generators.len(),
                self.target.len()
            )));
        }
        for j in 0..self.n {
            let mut linear = Polynomial::zero(&self.target, &fp);
            for (g, m) in self.generators.iter().enumerate() {
                let e = self.discrete_log(&m[j][j]).ok_or_else(|| {
                    RestrictionError::InvalidDatum(format!("entry ({j},{j}) of generator {g} is not a power of the root of unity"))
                })?;
                linear = linear.add(&Polynomial::var(&self.target, &fp, g).scale(&fp.elem(e as i64)));
            }
            let image = if self.q == 2 { linear.pow(2) } else { linear };
            map.set_index(j, image)?;
        }
        Ok(map)
    }

    pub fn to_json(&self) -> SubgroupDatumJson {
        SubgroupDatumJson {
            name: self.name.clone(),
            n: self.n,
            p: self.p,
            q: self.q,
            field: NfElem::tag(&self.field),
            generators: self
                .generators
                .iter()
                .map(|m| m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect())
                .collect(),
            torus: self.torus.names().to_vec(),
            images: (0..self.n).map(|i| self.specialization.image(i).map(|p| p.to_json())).collect(),
            exterior_count: self.exterior_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupDatumJson {
    pub name: String,
    pub n: usize,
    pub p: u32,
    pub q: u32,
    pub field: String,
    pub generators: Vec<Vec<Vec<String>>>,
    pub torus: Vec<String>,
    pub images: Vec<Option<PolyJson>>,
    pub exterior_count: u32,
}

/// Confirms that the stored τ-images are the ones read off the generators.
pub fn verify_specialization_from_generators(datum: &SubgroupDatum) -> Result<bool, RestrictionError> {
    let derived = datum.derive_specialization()?;
    for i in 0..datum.n {
        let stored = datum.specialization.image(i);
        let fresh = derived.image(i);
        if stored != fresh {
            return Err(RestrictionError::Mismatch {
                variable: datum.torus.names()[i].clone(),
                stored: stored.map_or("unset".into(), |p| p.to_string()),
                derived: fresh.map_or("unset".into(), |p| p.to_string()),
            });
        }
    }
    Ok(true)
}

/// Images of the algebra generators of H*(BPU_n) under c ↦ σ(τ), then
/// reduction mod p, then the given τ-specialization.
pub fn phi_star_with_map(n: usize, map: &SpecializationMap<Fp>, fp: &PrimeField) -> Result<Vec<Polynomial<Fp>>, RestrictionError> {
    if n.is_multiple_of(fp.modulus() as usize) {
        return Err(RestrictionError::InvalidDatum(format!("p = {} divides n = {n}", fp.modulus())));
    }
    map.check_grading()?;
    let gens = standard_generators(n)?;
    let cq = NablaContext::<Rational>::new(n, &())?;
    let torus = map.source().clone();
    let mut chern_to_torus = SpecializationMap::<Rational>::new(cq.table(), &torus);
    for k in 1..=n {
        chern_to_torus.set_index(k - 1, elementary_symmetric(k, &torus, &())?)?;
    }
    let all = gens.instantiate(&cq);
    let mut out = Vec::new();
    for (entry, g) in gens.entries.iter().zip(all) {
        if entry.name.contains('^') {
            continue;
        }
        let in_torus = substitute(&g, &chern_to_torus, true)?;
        let reduced = in_torus.map_coeffs(fp, |c| Fp::from_rational(fp, c))?;
        out.push(substitute(&reduced, map, true)?);
    }
    Ok(out)
}

pub fn phi_star_generators(datum: &SubgroupDatum) -> Result<Vec<Polynomial<Fp>>, RestrictionError> {
    phi_star_with_map(datum.n, &datum.specialization, &datum.prime_field())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimalityReport {
    pub resultant: String,
    pub resultant_nonzero: bool,
    /// The first input is monic in the eliminated variable, so it has no
    /// factor free of that variable.
    pub first_monic: bool,
    pub coprime: bool,
}

/// Coprimality of two bivariate forms via the resultant in `var`.
pub fn coprimality_check<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>, var: usize) -> Result<CoprimalityReport, RestrictionError> {
    let r = resultant(f, g, var)?;
    let lead = f.coefficients_in(var).pop().unwrap_or_else(|| Polynomial::zero(f.table(), f.ctx()));
    let first_monic = lead.is_constant() && !lead.is_zero();
    Ok(CoprimalityReport {
        resultant: r.to_string(),
        resultant_nonzero: !r.is_zero(),
        first_monic,
        coprime: !r.is_zero() && first_monic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_images_match_display() {
        let d = SubgroupDatum::fermat_k();
        let imgs = phi_star_generators(&d).unwrap();
        let f3 = d.prime_field();
        let s: Vec<_> = (1..=3).map(|i| elementary_symmetric(i, &d.target, &f3).unwrap()).collect();
        assert_eq!(imgs[0], s[1]);
        assert_eq!(imgs[1], s[0].pow(3).sub(&s[0].mul(&s[1])).sub(&s[2]));
        assert_eq!(imgs[2], s[0].mul(&s[2]).sub(&s[0].pow(2).mul(&s[1])));
        for (img, deg) in imgs.iter().zip([4, 6, 8]) {
            assert!(img.is_homogeneous_of(deg));
        }
    }

    #[test]
    fn h_images_factor_as_displayed() {
        let d = SubgroupDatum::klein_h();
        let imgs = phi_star_generators(&d).unwrap();
        let f2 = d.prime_field();
        let p = |t: &[(&[u32], i64)]| Polynomial::from_int_terms(&d.target, &f2, t);
        let quad = p(&[(&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)]);
        let uv = p(&[(&[1, 1], 1)]);
        let upv = p(&[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(imgs[0], quad.pow(2));
        assert_eq!(imgs[0], p(&[(&[4, 0], 1), (&[0, 4], 1), (&[2, 2], 1)]));
        assert_eq!(imgs[1], uv.pow(2).mul(&upv.pow(2)));
        assert_eq!(imgs[1], p(&[(&[4, 2], 1), (&[2, 4], 1)]));
        let c = coprimality_check(&imgs[0], &imgs[1], 0).unwrap();
        assert!(c.coprime, "{c:?}");
    }

    #[test]
    fn identity_map_gives_symmetric_images() {
        let f2 = PrimeField::new(2).unwrap();
        let tau = VariableTable::indexed_flat("tau", 3, 2);
        let imgs = phi_star_with_map(3, &SpecializationMap::identity(&tau, &f2), &f2).unwrap();
        let s: Vec<_> = (1..=3).map(|i| elementary_symmetric(i, &tau, &f2).unwrap()).collect();
        assert_eq!(imgs[0], s[0].pow(2).add(&s[1]));
        assert_eq!(imgs[1], s[0].mul(&s[1]).add(&s[2]));
    }

    #[test]
    fn specializations_rederive() {
        assert!(verify_specialization_from_generators(&SubgroupDatum::fermat_k()).unwrap());
        assert!(verify_specialization_from_generators(&SubgroupDatum::klein_h()).unwrap());
        let t = SubgroupDatum::trivial(3, 2).unwrap();
        assert!(verify_specialization_from_generators(&t).unwrap());
        let mut bad = SubgroupDatum::fermat_k();
        let f3 = bad.prime_field();
        let xi2 = Polynomial::var(&bad.target, &f3, 1);
        bad.specialization.set_index(0, xi2).unwrap();
        assert!(matches!(verify_specialization_from_generators(&bad), Err(RestrictionError::Mismatch { .. })));
    }

    #[test]
    fn grading_violation_is_reported() {
        let d = SubgroupDatum::fermat_k();
        let f3 = d.prime_field();
        let mut m = d.specialization.clone();
        m.set_index(0, Polynomial::var(&d.target, &f3, 0).pow(2)).unwrap();
        assert!(matches!(phi_star_with_map(4, &m, &f3), Err(RestrictionError::Poly(PolyError::GradingViolation(_)))));
    }

    #[test]
    fn datum_json_has_grids() {
        let j = serde_json::to_value(SubgroupDatum::klein_h().to_json()).unwrap();
        assert_eq!(j["generators"][0][0][0], "-1");
        assert_eq!(j["generators"][0][1][1], "1");
        assert_eq!(j["field"], "Q[t]/(1,1)");
    }
}
