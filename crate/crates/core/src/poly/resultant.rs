use rayon::prelude::*;

use crate::arith::Field;

use super::{PolyError, Polynomial, UniPoly};

/// Commutative ring with exact division, as needed by fraction-free elimination.
pub trait ExactRing: Clone + PartialEq + Send + Sync {
    fn ring_zero(&self) -> Self;
    fn ring_one(&self) -> Self;
    fn ring_is_zero(&self) -> bool;
    fn ring_add(&self, o: &Self) -> Self;
    fn ring_sub(&self, o: &Self) -> Self;
    fn ring_mul(&self, o: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    /// `self / d`, where the caller guarantees divisibility.
    fn ring_div_exact(&self, d: &Self) -> Self;
}

impl<F: Field> ExactRing for F {
    fn ring_zero(&self) -> Self {
        F::zero(&self.ctx())
    }
    fn ring_one(&self) -> Self {
        F::one(&self.ctx())
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_div_exact(&self, d: &Self) -> Self {
        self.div(d).expect("exact division by zero")
    }
}

impl<F: Field> ExactRing for Polynomial<F> {
    fn ring_zero(&self) -> Self {
        Polynomial::zero(self.table(), self.ctx())
    }
    fn ring_one(&self) -> Self {
        Polynomial::one(self.table(), self.ctx())
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_div_exact(&self, d: &Self) -> Self {
        self.div_exact(d).expect("Bareiss step is not an exact division")
    }
}

/// Determinant by fraction-free Bareiss elimination with row pivoting.
pub fn bareiss_det<R: ExactRing>(mut m: Vec<Vec<R>>) -> Option<R> {
    let n = m.len();
    let proto = m.first()?.first()?.clone();
    if n == 0 {
        return Some(proto.ring_one());
    }
    let mut sign_flip = false;
    let mut prev = proto.ring_one();
    for k in 0..n {
        if m[k][k].ring_is_zero() {
            let swap = (k + 1..n).find(|&i| !m[i][k].ring_is_zero());
            match swap {
                Some(i) => {
                    m.swap(i, k);
                    sign_flip = !sign_flip;
                }
                None => return Some(proto.ring_zero()),
            }
        }
        let pivot = m[k][k].clone();
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        tail.par_iter_mut().for_each(|row| {
            let factor = row[k].clone();
            for j in k + 1..n {
                let v = pivot.ring_mul(&row[j]).ring_sub(&factor.ring_mul(&pivot_row[j]));
                row[j] = v.ring_div_exact(&prev);
            }
            row[k] = proto.ring_zero();
        });
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    Some(if sign_flip { det.ring_neg() } else { det })
}

/// Coefficient list in `var` padded to the declared degree.
fn declared_coeffs<F: Field>(f: &Polynomial<F>, var: usize, deg: usize) -> Result<Vec<Polynomial<F>>, PolyError> {
    let mut c = f.coefficients_in(var);
    if c.len() > deg + 1 {
        return Err(PolyError::InvalidInput(format!(
            "declared degree {deg} is below the actual degree {}",
            c.len() - 1
        )));
    }
    c.resize(deg + 1, Polynomial::zero(f.table(), f.ctx()));
    Ok(c)
}

/// The (m+n−2j) × (m+n−j) matrix whose rows are x^(n−j−1)f, …, f, x^(m−j−1)g, …, g,
/// columns indexed by descending powers x^(m+n−j−1) … x^0.
pub(super) fn shifted_rows<R: Clone>(fc: &[R], gc: &[R], j: usize, zero: &R) -> Vec<Vec<R>> {
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    let width = m + n - j;
    let mut rows = Vec::with_capacity(m + n - 2 * j);
    for (c, copies) in [(fc, n - j), (gc, m - j)] {
        for s in (0..copies).rev() {
            // Row for x^s · c: coefficient of x^p sits at column width−1−p.
            let mut row = vec![zero.clone(); width];
            for (k, v) in c.iter().enumerate() {
                row[width - 1 - (k + s)] = v.clone();
            }
            rows.push(row);
        }
    }
    rows
}

fn check_degrees(m: usize, n: usize) -> Result<(), PolyError> {
    if m == 0 && n == 0 {
        return Err(PolyError::InvalidInput("resultant of two constants".into()));
    }
    Ok(())
}

/// Resultant with respect to `var` for the declared degrees (Sylvester
/// determinant, f-rows first), computed by Bareiss over the coefficient ring.
pub fn resultant_with_degrees<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    var: usize,
    deg_f: usize,
    deg_g: usize,
) -> Result<Polynomial<F>, PolyError> {
    principal_subresultant_with_degrees(f, g, var, deg_f, deg_g, 0)
}

/// Resultant with respect to `var` using the actual degrees.
pub fn resultant<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>, var: usize) -> Result<Polynomial<F>, PolyError> {
    resultant_with_degrees(f, g, var, f.degree_in(var) as usize, g.degree_in(var) as usize)
}

/// The j-th principal subresultant coefficient with respect to `var`.
pub fn principal_subresultant<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    var: usize,
    j: usize,
) -> Result<Polynomial<F>, PolyError> {
    principal_subresultant_with_degrees(f, g, var, f.degree_in(var) as usize, g.degree_in(var) as usize, j)
}

pub fn principal_subresultant_with_degrees<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    var: usize,
    deg_f: usize,
    deg_g: usize,
    j: usize,
) -> Result<Polynomial<F>, PolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::InvalidInput("resultant of a zero polynomial".into()));
    }
    check_degrees(deg_f, deg_g)?;
    if j > 0 && j >= deg_f.min(deg_g) {
        return Err(PolyError::InvalidIndex(format!("subresultant index {j} >= min({deg_f}, {deg_g})")));
    }
    let fc = declared_coeffs(f, var, deg_f)?;
    let gc = declared_coeffs(g, var, deg_g)?;
    let zero = Polynomial::zero(f.table(), f.ctx());
    let size = deg_f + deg_g - 2 * j;
    let rows: Vec<Vec<Polynomial<F>>> =
        shifted_rows(&fc, &gc, j, &zero).into_iter().map(|r| r[..size].to_vec()).collect();
    Ok(bareiss_det(rows).unwrap_or_else(|| Polynomial::one(f.table(), f.ctx())))
}

/// Principal subresultant coefficient of dense univariate polynomials over a field.
pub fn principal_subresultant_uni<F: Field>(f: &UniPoly<F>, g: &UniPoly<F>, j: usize) -> Result<F, PolyError> {
    let m = f.degree().ok_or_else(|| PolyError::InvalidInput("zero polynomial".into()))?;
    let n = g.degree().ok_or_else(|| PolyError::InvalidInput("zero polynomial".into()))?;
    check_degrees(m, n)?;
    if j > 0 && j >= m.min(n) {
        return Err(PolyError::InvalidIndex(format!("subresultant index {j} >= min({m}, {n})")));
    }
    let zero = F::zero(f.ctx());
    let size = m + n - 2 * j;
    let rows: Vec<Vec<F>> =
        shifted_rows(f.coeffs(), g.coeffs(), j, &zero).into_iter().map(|r| r[..size].to_vec()).collect();
    Ok(bareiss_det(rows).unwrap_or_else(|| F::one(f.ctx())))
}

/// Monic gcd of two polynomials that involve at most one common variable.
pub fn univariate_gcd<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Result<Polynomial<F>, PolyError> {
    let mut vars = f.support_vars();
    vars.extend(g.support_vars());
    vars.sort_unstable();
    vars.dedup();
    if vars.len() > 1 {
        return Err(PolyError::InvalidInput("univariate_gcd expects univariate inputs".into()));
    }
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::InvalidInput("gcd(0, 0)".into()));
    }
    let var = vars.first().copied().unwrap_or(0);
    let a = UniPoly::new(f.ctx(), f.univariate_coeffs(var)?);
    let b = UniPoly::new(f.ctx(), g.univariate_coeffs(var)?);
    let d = a.gcd(&b);
    Ok(uni_to_poly(&d, f.table(), var))
}

pub fn uni_to_poly<F: Field>(u: &UniPoly<F>, table: &std::sync::Arc<super::VariableTable>, var: usize) -> Polynomial<F> {
    Polynomial::from_terms(
        table,
        u.ctx(),
        u.coeffs().iter().enumerate().map(|(k, c)| {
            let mut e = vec![0; table.len()];
            e[var] = k as u32;
            (e, c.clone())
        }),
    )
}

/// Res_elim(f, g) for bivariate f, g in (elim, keep) as a dense polynomial in
/// `keep`, by evaluation at integer points and Newton interpolation.
///
/// `degree_bound` must bound the degree of the result in `keep`.
pub fn resultant_by_interpolation<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    elim: usize,
    keep: usize,
    degree_bound: usize,
) -> Result<UniPoly<F>, PolyError> {
    let deg_f = f.degree_in(elim) as usize;
    let deg_g = g.degree_in(elim) as usize;
    check_degrees(deg_f, deg_g)?;
    if f.support_vars().iter().chain(g.support_vars().iter()).any(|&v| v != elim && v != keep) {
        return Err(PolyError::InvalidInput("resultant_by_interpolation expects bivariate inputs".into()));
    }
    let ctx = f.ctx().clone();
    let fc = f.coefficients_in(elim);
    let gc = g.coefficients_in(elim);
    let to_uni = |p: &Polynomial<F>| UniPoly::new(&ctx, p.univariate_coeffs(keep).unwrap());
    let fcu: Vec<UniPoly<F>> = fc.iter().map(to_uni).collect();
    let gcu: Vec<UniPoly<F>> = gc.iter().map(to_uni).collect();
    let points: Vec<i64> = (0..=degree_bound as i64).map(|k| if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 }).collect();
    let values: Vec<F> = points
        .par_iter()
        .map(|&t| {
            let tv = F::from_i64(&ctx, t);
            let fe: Vec<F> = fcu.iter().map(|c| c.eval(&tv)).collect();
            let ge: Vec<F> = gcu.iter().map(|c| c.eval(&tv)).collect();
            let zero = F::zero(&ctx);
            bareiss_det(shifted_rows(&fe, &ge, 0, &zero)).unwrap_or_else(|| F::one(&ctx))
        })
        .collect();
    let xs: Vec<F> = points.iter().map(|&t| F::from_i64(&ctx, t)).collect();
    Ok(newton_interpolate(&ctx, &xs, &values))
}

/// Interpolating polynomial through (xs[i], ys[i]).
pub fn newton_interpolate<F: Field>(ctx: &F::Ctx, xs: &[F], ys: &[F]) -> UniPoly<F> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = dd[i].sub(&dd[i - 1]);
            let den = xs[i].sub(&xs[i - level]);
            dd[i] = num.div(&den).expect("interpolation nodes must be distinct");
        }
    }
    let mut p = UniPoly::constant(ctx, dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = UniPoly::new(ctx, vec![xs[i].neg(), F::one(ctx)]);
        p = p.mul(&lin).add(&UniPoly::constant(ctx, dd[i].clone()));
    }
    p
}
