use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use crate::arith::Field;

use super::{Monomial, PolyError, Polynomial, VariableTable};

/// Images of the variables of `source` as polynomials over `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecializationMap<F: Field> {
    source: Arc<VariableTable>,
    target: Arc<VariableTable>,
    images: Vec<Option<Polynomial<F>>>,
}

impl<F: Field> SpecializationMap<F> {
    pub fn new(source: &Arc<VariableTable>, target: &Arc<VariableTable>) -> Self {
        Self { source: source.clone(), target: target.clone(), images: vec![None; source.len()] }
    }

    pub fn identity(table: &Arc<VariableTable>, ctx: &F::Ctx) -> Self {
        let mut m = Self::new(table, table);
        for i in 0..table.len() {
            m.images[i] = Some(Polynomial::var(table, ctx, i));
        }
        m
    }

    pub fn set(&mut self, name: &str, image: Polynomial<F>) -> Result<&mut Self, PolyError> {
        let i = self.source.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.into()))?;
        self.set_index(i, image)
    }

    pub fn set_index(&mut self, i: usize, image: Polynomial<F>) -> Result<&mut Self, PolyError> {
        if **image.table() != *self.target {
            return Err(PolyError::InvalidInput("image lives over a different variable table".into()));
        }
        self.images[i] = Some(image);
        Ok(self)
    }

    pub fn source(&self) -> &Arc<VariableTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VariableTable> {
        &self.target
    }

    pub fn image(&self, i: usize) -> Option<&Polynomial<F>> {
        self.images[i].as_ref()
    }

    /// Checks that every image is zero or homogeneous of the source weight.
    pub fn check_grading(&self) -> Result<(), PolyError> {
        for (i, img) in self.images.iter().enumerate() {
            if let Some(p) = img {
                let w = self.source.weights()[i];
                if !p.is_homogeneous_of(w) {
                    return Err(PolyError::GradingViolation(format!(
                        "image of `{}` is not homogeneous of degree {w}",
                        self.source.names()[i]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Applies the ring homomorphism described by `map` to `f`.
pub fn substitute<F: Field>(
    f: &Polynomial<F>,
    map: &SpecializationMap<F>,
    preserve_grading: bool,
) -> Result<Polynomial<F>, PolyError> {
    if **f.table() != *map.source {
        return Err(PolyError::InvalidInput("polynomial is not over the map's source table".into()));
    }
    if let Some(i) = map.images.iter().position(Option::is_none) {
        return Err(PolyError::IncompleteMap(map.source.names()[i].clone()));
    }
    if preserve_grading {
        map.check_grading()?;
    }
    let ctx = f.ctx();
    let mut powers: HashMap<(usize, u32), Polynomial<F>> = HashMap::new();
    let mut out = Polynomial::zero(&map.target, ctx);
    for (m, c) in f.terms() {
        let mut t = Polynomial::constant(&map.target, c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = powers.entry((i, e)).or_insert_with(|| map.images[i].as_ref().unwrap().pow(e)).clone();
            t = t.mul(&p);
            if t.is_zero() {
                break;
            }
        }
        out = out.add(&t);
    }
    Ok(out)
}

/// The k-th elementary symmetric polynomial in all variables of `table`.
pub fn elementary_symmetric<F: Field>(
    k: usize,
    table: &Arc<VariableTable>,
    ctx: &F::Ctx,
) -> Result<Polynomial<F>, PolyError> {
    let n = table.len();
    if k > n {
        return Err(PolyError::InvalidIndex(format!("sigma_{k} in {n} variables")));
    }
    let one = F::one(ctx);
    Ok(Polynomial::from_terms(
        table,
        ctx,
        (0..n).combinations(k).map(|idx| {
            let mut e = vec![0; n];
            for i in idx {
                e[i] = 1;
            }
            (e, one.clone())
        }),
    ))
}

fn det3<F: Field>(m: &[[Polynomial<F>; 3]; 3]) -> Polynomial<F> {
    let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
    let t0 = &m[0][0] * &minor(1, 2, 2, 1);
    let t1 = &m[0][1] * &minor(0, 2, 2, 0);
    let t2 = &m[0][2] * &minor(0, 1, 1, 0);
    &(&t0 - &t1) + &t2
}

/// Determinant of the matrix of second partial derivatives of a ternary form.
pub fn hessian_det<F: Field>(f: &Polynomial<F>) -> Result<Polynomial<F>, PolyError> {
    if f.table().len() != 3 {
        return Err(PolyError::InvalidInput("hessian_det expects a ternary form".into()));
    }
    let d = f
        .homogeneous_degree()
        .ok_or_else(|| PolyError::GradingViolation("hessian_det expects a homogeneous form".into()))?;
    if d < 3 {
        return Err(PolyError::Precondition(format!("hessian_det needs degree >= 3, got {d}")));
    }
    let first: Vec<Polynomial<F>> = (0..3).map(|i| f.derivative(i)).collect();
    let h: [[Polynomial<F>; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| first[i].derivative(j)));
    Ok(det3(&h))
}

/// Charts for lines in the plane: the coordinate solved for and the two free ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Chart {
    /// z = a·x + b·y, binary form in (x, y).
    ZOfXY,
    /// y = a·x + b·z, binary form in (x, z).
    YOfXZ,
    /// x = a·y + b·z, binary form in (y, z).
    XOfYZ,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::ZOfXY, Chart::YOfXZ, Chart::XOfYZ];

    /// (solved coordinate, first free, second free).
    pub fn indices(self) -> (usize, usize, usize) {
        match self {
            Chart::ZOfXY => (2, 0, 1),
            Chart::YOfXZ => (1, 0, 2),
            Chart::XOfYZ => (0, 1, 2),
        }
    }
}

/// Coefficients q₀..q_d of a binary form Σ q_i s₁^(d−i) s₂^i, each a polynomial
/// in the chart parameters (a, b).
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryFormSlice<F: Field> {
    pub degree: usize,
    pub coeffs: Vec<Polynomial<F>>,
}

/// The parameter table `(a, b)` used by [`restrict_to_line`].
pub fn line_parameter_table() -> Arc<VariableTable> {
    VariableTable::uniform(&["a", "b"])
}

/// Restricts a ternary form to the pencil of lines of the given chart.
pub fn restrict_to_line<F: Field>(f: &Polynomial<F>, chart: Chart) -> Result<BinaryFormSlice<F>, PolyError> {
    if f.table().len() != 3 {
        return Err(PolyError::InvalidInput("restrict_to_line expects a ternary form".into()));
    }
    let d = match f.homogeneous_degree() {
        Some(d) => d as usize,
        None if f.is_zero() => 0,
        None => return Err(PolyError::GradingViolation("restrict_to_line expects a homogeneous form".into())),
    };
    let ctx = f.ctx();
    let work = VariableTable::uniform(&["s1", "s2", "a", "b"]);
    let v = |i| Polynomial::<F>::var(&work, ctx, i);
    let (k, i, j) = chart.indices();
    let mut images: [Option<Polynomial<F>>; 3] = [None, None, None];
    images[i] = Some(v(0));
    images[j] = Some(v(1));
    images[k] = Some(&(&v(2) * &v(0)) + &(&v(3) * &v(1)));
    let mut map = SpecializationMap::new(f.table(), &work);
    for (idx, img) in images.into_iter().enumerate() {
        map.set_index(idx, img.unwrap())?;
    }
    let g = substitute(f, &map, false)?;
    let ab = line_parameter_table();
    let mut coeffs = vec![Polynomial::zero(&ab, ctx); d + 1];
    for (m, c) in g.terms() {
        let i2 = m.0[1] as usize;
        coeffs[i2].add_term(Monomial(vec![m.0[2], m.0[3]]), c.clone());
    }
    Ok(BinaryFormSlice { degree: d, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp, PrimeField, Rational};

    #[test]
    fn sigma_examples() {
        let t = VariableTable::indexed_flat("xi", 3, 2);
        let s2 = elementary_symmetric::<Rational>(2, &t, &()).unwrap();
        assert_eq!(s2.to_string(), "xi1*xi2 + xi1*xi3 + xi2*xi3");
        assert_eq!(elementary_symmetric::<Rational>(0, &t, &()).unwrap(), Polynomial::one(&t, &()));
        assert_eq!(elementary_symmetric::<Rational>(3, &t, &()).unwrap().num_terms(), 1);
        assert!(matches!(elementary_symmetric::<Rational>(4, &t, &()), Err(PolyError::InvalidIndex(_))));
    }

    #[test]
    fn substitute_c2_to_sigma2() {
        let c = VariableTable::indexed("c", 4, 2);
        let tau = VariableTable::indexed_flat("tau", 4, 2);
        let mut map = SpecializationMap::<Rational>::new(&c, &tau);
        for k in 1..=4 {
            map.set_index(k - 1, elementary_symmetric(k, &tau, &()).unwrap()).unwrap();
        }
        let c2 = Polynomial::var(&c, &(), 1);
        let img = substitute(&c2, &map, true).unwrap();
        assert_eq!(img, elementary_symmetric(2, &tau, &()).unwrap());
        assert_eq!(img.num_terms(), 6);
    }

    #[test]
    fn substitute_errors() {
        let c = VariableTable::indexed("c", 2, 2);
        let x = VariableTable::uniform(&["x"]);
        let mut map = SpecializationMap::<Rational>::new(&c, &x);
        map.set("c1", Polynomial::var(&x, &(), 0)).unwrap();
        let f = Polynomial::var(&c, &(), 0);
        assert!(matches!(substitute(&f, &map, false), Err(PolyError::IncompleteMap(n)) if n == "c2"));
        map.set("c2", Polynomial::var(&x, &(), 0).pow(4)).unwrap();
        assert!(matches!(substitute(&f, &map, true), Err(PolyError::GradingViolation(_))));
        assert!(substitute(&f, &map, false).is_ok());
    }

    #[test]
    fn tau4_to_zero_kills_sigma4() {
        let tau = VariableTable::indexed_flat("tau", 4, 2);
        let xi = VariableTable::indexed_flat("xi", 3, 2);
        let f3 = PrimeField::new(3).unwrap();
        let mut map = SpecializationMap::<Fp>::new(&tau, &xi);
        for i in 0..3 {
            map.set_index(i, Polynomial::var(&xi, &f3, i)).unwrap();
        }
        map.set_index(3, Polynomial::zero(&xi, &f3)).unwrap();
        let s4 = elementary_symmetric(4, &tau, &f3).unwrap();
        assert!(substitute(&s4, &map, true).unwrap().is_zero());
    }

    #[test]
    fn hessian_examples() {
        let t = VariableTable::uniform(&["x", "y", "z"]);
        let f = Polynomial::<Rational>::from_int_terms(&t, &(), &[(&[3, 0, 0], 1), (&[0, 3, 0], 1), (&[0, 0, 3], 1)]);
        let h = hessian_det(&f).unwrap();
        assert_eq!(h, Polynomial::from_int_terms(&t, &(), &[(&[1, 1, 1], 216)]));
        let conic = Polynomial::<Rational>::from_int_terms(&t, &(), &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        assert!(matches!(hessian_det(&conic), Err(PolyError::Precondition(_))));
        let mixed = Polynomial::<Rational>::from_int_terms(&t, &(), &[(&[3, 0, 0], 1), (&[0, 1, 0], 1)]);
        assert!(matches!(hessian_det(&mixed), Err(PolyError::GradingViolation(_))));
    }

    #[test]
    fn fermat_quartic_restriction() {
        let t = VariableTable::uniform(&["x", "y", "z"]);
        let f = Polynomial::<Rational>::from_int_terms(&t, &(), &[(&[4, 0, 0], 1), (&[0, 4, 0], 1), (&[0, 0, 4], 1)]);
        let s = restrict_to_line(&f, Chart::ZOfXY).unwrap();
        let ab = line_parameter_table();
        let p = |terms: &[(&[u32], i64)]| Polynomial::<Rational>::from_int_terms(&ab, &(), terms);
        assert_eq!(s.degree, 4);
        assert_eq!(s.coeffs[0], p(&[(&[0, 0], 1), (&[4, 0], 1)]));
        assert_eq!(s.coeffs[1], p(&[(&[3, 1], 4)]));
        assert_eq!(s.coeffs[2], p(&[(&[2, 2], 6)]));
        assert_eq!(s.coeffs[3], p(&[(&[1, 3], 4)]));
        assert_eq!(s.coeffs[4], p(&[(&[0, 0], 1), (&[0, 4], 1)]));
        let z4 = Polynomial::<Rational>::from_int_terms(&t, &(), &[(&[0, 0, 4], 1)]);
        assert_eq!(restrict_to_line(&z4, Chart::ZOfXY).unwrap().coeffs[0], p(&[(&[4, 0], 1)]));
        let no_z = Polynomial::<Rational>::from_int_terms(&t, &(), &[(&[4, 0, 0], 1), (&[1, 3, 0], 2)]);
        let s = restrict_to_line(&no_z, Chart::ZOfXY).unwrap();
        assert!(s.coeffs.iter().all(|q| q.is_constant()));
    }
}
