use std::sync::Arc;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::arith::{ArithError, Embed, Field, NfElem, NumberField};
use crate::poly::{substitute, Polynomial, SpecializationMap, VariableTable};

use super::GeometryError;

/// A polynomial with coefficients embedded into ℂ.
#[derive(Debug, Clone)]
pub struct ComplexForm {
    nvars: usize,
    max_exp: Vec<u32>,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl ComplexForm {
    pub fn from_poly<F: Field + Embed>(p: &Polynomial<F>, embedding: usize) -> Result<Self, ArithError> {
        let nvars = p.table().len();
        let mut max_exp = vec![0; nvars];
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            for (mx, &e) in max_exp.iter_mut().zip(&m.0) {
                *mx = (*mx).max(e);
            }
            terms.push((m.0.clone(), c.embed(embedding)?.value()));
        }
        Ok(Self { nvars, max_exp, terms })
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        let powers: Vec<Vec<Complex64>> = (0..self.nvars)
            .map(|i| {
                let mut v = Vec::with_capacity(self.max_exp[i] as usize + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=self.max_exp[i] {
                    v.push(acc);
                    acc *= x[i];
                }
                v
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| e.iter().enumerate().fold(*c, |acc, (i, &k)| acc * powers[i][k as usize]))
            .sum()
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}

/// Index of the complex root of the field's minimal polynomial nearest `target`.
pub fn nearest_root_index(field: &NumberField, target: Complex64) -> Result<usize, ArithError> {
    let roots = field.complex_roots()?;
    Ok(roots
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 .0 - target).norm().total_cmp(&(b.1 .0 - target).norm()))
        .map(|(i, _)| i)
        .expect("minimal polynomial has roots"))
}

/// ℚ(√−7) embedded with √−7 ↦ i√7.
#[derive(Debug, Clone)]
pub struct KleinField {
    pub field: Arc<NumberField>,
    pub embedding: usize,
}

impl KleinField {
    pub fn new() -> Result<Self, ArithError> {
        let field = NumberField::sqrt_minus_7();
        let embedding = nearest_root_index(&field, Complex64::new(0.0, 7f64.sqrt()))?;
        Ok(Self { field, embedding })
    }

    /// (−1 + √−7)/2.
    pub fn alpha(&self) -> NfElem {
        self.field.elem(vec![
            crate::arith::Rational::new((-1).into(), 2.into()),
            crate::arith::Rational::new(1.into(), 2.into()),
        ])
    }
}

fn xyz() -> Arc<VariableTable> {
    VariableTable::uniform(&["x", "y", "z"])
}

fn symmetric_quartic<F: Field>(ctx: &F::Ctx, mixed: F) -> Polynomial<F> {
    let t = xyz();
    let mut p = Polynomial::from_int_terms(&t, ctx, &[(&[4, 0, 0], 1), (&[0, 4, 0], 1), (&[0, 0, 4], 1)]);
    for e in [[2, 2, 0], [0, 2, 2], [2, 0, 2]] {
        p.add_term(crate::poly::Monomial(e.to_vec()), mixed.clone());
    }
    p
}

/// x⁴ + y⁴ + z⁴ + 3α(x²y² + y²z² + z²x²) over ℚ(√−7).
pub fn klein_quartic() -> Result<(Polynomial<NfElem>, KleinField), GeometryError> {
    let k = KleinField::new()?;
    let three_alpha = k.alpha().mul(&NfElem::from_i64(&k.field, 3));
    Ok((symmetric_quartic(&k.field, three_alpha), k))
}

/// The same quartic over ℚ(ζ₇) with α = ζ + ζ² + ζ⁴.
pub fn klein_cyclotomic_form(field: &Arc<NumberField>) -> Polynomial<NfElem> {
    let z = field.generator();
    let alpha = z.add(&z.pow(2)).add(&z.pow(4));
    symmetric_quartic(field, alpha.mul(&NfElem::from_i64(field, 3)))
}

/// x³y + y³z + z³x.
pub fn klein_standard_form<F: Field>(ctx: &F::Ctx) -> Polynomial<F> {
    Polynomial::from_int_terms(&xyz(), ctx, &[(&[3, 1, 0], 1), (&[0, 3, 1], 1), (&[1, 0, 3], 1)])
}

/// The displayed change of coordinates over ℚ(ζ₇).
pub fn klein_equivalence_matrix(field: &Arc<NumberField>) -> Vec<Vec<NfElem>> {
    let z = field.generator();
    let alpha = z.add(&z.pow(2)).add(&z.pow(4));
    let one = NfElem::one(field);
    let a = one.add(&z.mul(&alpha));
    let b = z.pow(2).add(&z.pow(6));
    vec![vec![one.clone(), a.clone(), b.clone()], vec![a.clone(), b.clone(), one.clone()], vec![b, one, a]]
}

pub fn fermat_quartic<F: Field>(ctx: &F::Ctx) -> Polynomial<F> {
    Polynomial::from_int_terms(&xyz(), ctx, &[(&[4, 0, 0], 1), (&[0, 4, 0], 1), (&[0, 0, 4], 1)])
}

/// The four sign changes diag(±1, ±1, 1), identity first.
pub fn klein_h_elements() -> Vec<Matrix3<Complex64>> {
    [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)]
        .iter()
        .map(|&(a, b)| Matrix3::from_diagonal(&nalgebra::Vector3::new(a.into(), b.into(), Complex64::new(1.0, 0.0))))
        .collect()
}

/// Unimodular integer change of coordinates P = M·P′ with its exact inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CoordinateChange {
    pub matrix: [[i64; 3]; 3],
    pub inverse: [[i64; 3]; 3],
}

fn mat_mul(a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

impl CoordinateChange {
    /// L·U with unit triangular factors.
    pub(crate) fn from_lu(l: [i64; 3], u: [i64; 3]) -> Self {
        let lm = [[1, 0, 0], [l[0], 1, 0], [l[1], l[2], 1]];
        let um = [[1, u[0], u[1]], [0, 1, u[2]], [0, 0, 1]];
        let linv = [[1, 0, 0], [-l[0], 1, 0], [l[0] * l[2] - l[1], -l[2], 1]];
        let uinv = [[1, -u[0], u[0] * u[2] - u[1]], [0, 1, -u[2]], [0, 0, 1]];
        Self { matrix: mat_mul(&lm, &um), inverse: mat_mul(&uinv, &linv) }
    }

    pub fn complex(&self) -> Matrix3<Complex64> {
        Matrix3::from_fn(|i, j| Complex64::new(self.matrix[i][j] as f64, 0.0))
    }

    pub fn complex_inverse(&self) -> Matrix3<Complex64> {
        Matrix3::from_fn(|i, j| Complex64::new(self.inverse[i][j] as f64, 0.0))
    }

    /// F∘M.
    pub fn apply<F: Field>(&self, f: &Polynomial<F>) -> Result<Polynomial<F>, GeometryError> {
        let t = f.table();
        let ctx = f.ctx();
        let mut map = SpecializationMap::new(t, t);
        for i in 0..3 {
            let img = Polynomial::from_terms(
                t,
                ctx,
                (0..3).map(|j| {
                    let mut e = vec![0; 3];
                    e[j] = 1;
                    (e, F::from_i64(ctx, self.matrix[i][j]))
                }),
            );
            map.set_index(i, img)?;
        }
        Ok(substitute(f, &map, false)?)
    }
}

/// Deterministic list of coordinate changes tried in order.
pub fn coordinate_changes() -> Vec<CoordinateChange> {
    [
        ([2, 1, 3], [1, 2, 1]),
        ([1, 3, 2], [2, 1, 3]),
        ([3, 1, 2], [1, 1, 2]),
        ([1, 2, 5], [3, 1, 1]),
        ([2, 3, 1], [1, 4, 2]),
        ([5, 2, 3], [2, 3, 7]),
    ]
    .into_iter()
    .map(|(l, u)| CoordinateChange::from_lu(l, u))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    #[test]
    fn coordinate_inverses() {
        for c in coordinate_changes() {
            assert_eq!(mat_mul(&c.matrix, &c.inverse), [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        }
    }

    #[test]
    fn klein_is_h_invariant_and_embeds() {
        let (f, k) = klein_quartic().unwrap();
        let cf = ComplexForm::from_poly(&f, k.embedding).unwrap();
        let p = [Complex64::new(0.3, 0.1), Complex64::new(-1.2, 0.4), Complex64::new(1.0, 0.0)];
        let q = [-p[0], p[1], p[2]];
        assert!((cf.eval(&p) - cf.eval(&q)).norm() < 1e-12);
        let alpha = k.alpha().embed(k.embedding).unwrap().value();
        assert!((alpha - Complex64::new(-0.5, 7f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn apply_change() {
        let f = fermat_quartic::<Rational>(&());
        let c = coordinate_changes()[0];
        let g = c.apply(&f).unwrap();
        let cf = ComplexForm::from_poly(&f, 0).unwrap();
        let cg = ComplexForm::from_poly(&g, 0).unwrap();
        let p = [Complex64::new(0.2, 0.0), Complex64::new(0.7, -0.1), Complex64::new(1.0, 0.3)];
        let mp: Vec<Complex64> = (0..3).map(|i| (0..3).map(|j| p[j] * c.matrix[i][j] as f64).sum()).collect();
        assert!((cg.eval(&p) - cf.eval(&mp)).norm() < 1e-9);
    }
}
