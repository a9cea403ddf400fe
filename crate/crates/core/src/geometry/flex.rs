use nalgebra::{Matrix2, Vector2, Vector3};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::arith::{Embed, Field};
use crate::numeric::{aberth, scaled_abs};
use crate::poly::{hessian_det, resultant_by_interpolation, Monomial, Polynomial, UniPoly};

use super::forms::{coordinate_changes, ComplexForm, CoordinateChange};
use super::projective::{dedup, normalize, Projective, SolutionSet};
use super::GeometryError;

fn embedded_scaled<F: Field + Embed>(u: &UniPoly<F>, embedding: usize) -> Result<Vec<Complex64>, GeometryError> {
    let k = u.coeffs().iter().filter(|c| !c.is_zero()).map(|c| c.log2_size()).max().unwrap_or(0);
    Ok(u.coeffs().iter().map(|c| c.scale_pow2(-k).embed(embedding).map(|z| z.value())).collect::<Result<_, _>>()?)
}

/// Complex roots of an exact univariate polynomial. The polynomial is first
/// shifted exactly to a dyadic approximation of the root centroid and then
/// rescaled by a power of two so that its extreme coefficients balance.
pub(super) fn numeric_roots<F: Field + Embed>(u: &UniPoly<F>, embedding: usize) -> Result<Vec<Complex64>, GeometryError> {
    let n = match u.degree() {
        Some(n) if n > 0 => n,
        _ => return Ok(Vec::new()),
    };
    let ctx = u.ctx();
    let approx = embedded_scaled(u, embedding)?;
    let centroid = -approx[n - 1] / (approx[n] * n as f64);
    let sixty_fourths = (centroid.re * 64.0).round();
    let (v, shift) = if sixty_fourths.is_finite() && sixty_fourths != 0.0 && sixty_fourths.abs() < 1e15 {
        let c = F::from_rational(ctx, &BigRational::new(BigInt::from(sixty_fourths as i64), BigInt::from(64)))?;
        (u.taylor_shift(&c), sixty_fourths / 64.0)
    } else {
        (u.clone(), 0.0)
    };
    let lo = v.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(n);
    let e = if lo < n {
        ((v.coeff(lo).log2_size() - v.coeff(n).log2_size()) as f64 / (n - lo) as f64).round() as i64
    } else {
        0
    };
    let w = UniPoly::new(ctx, v.coeffs().iter().enumerate().map(|(i, c)| c.scale_pow2(e * i as i64)).collect());
    let unit = 2f64.powi(e as i32);
    Ok(aberth(&embedded_scaled(&w, embedding)?)?.into_iter().map(|t| Complex64::new(shift, 0.0) + t * unit).collect())
}

/// Coefficients in `var` (ascending), each embedded as a form in all variables.
pub(super) fn embedded_coefficients<F: Field + Embed>(
    p: &Polynomial<F>,
    var: usize,
    embedding: usize,
) -> Result<Vec<ComplexForm>, GeometryError> {
    p.coefficients_in(var).iter().map(|c| Ok(ComplexForm::from_poly(c, embedding)?)).collect()
}

pub(super) fn check_ternary_quartic<F: Field>(f: &Polynomial<F>) -> Result<(), GeometryError> {
    if f.table().len() != 3 {
        return Err(GeometryError::InvalidInput("expected a form in three variables".into()));
    }
    match f.homogeneous_degree() {
        Some(4) => Ok(()),
        Some(d) => Err(GeometryError::Precondition(format!("expected a quartic, got degree {d}"))),
        None => Err(GeometryError::Precondition("expected a nonzero homogeneous quartic".into())),
    }
}

pub(super) fn norm3(p: &[Complex64; 3]) -> f64 {
    p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// |F(p)| / (max coefficient · |p|^deg) with p as given.
pub(super) fn relative_value(f: &ComplexForm, deg: i32, p: &[Complex64; 3]) -> f64 {
    f.eval(p).norm() / (f.scale() * norm3(p).powi(deg))
}

/// Newton refinement of F = H = 0 in the affine chart where the largest
/// coordinate of the starting point is fixed to 1.
pub(super) struct Refiner {
    f: ComplexForm,
    h: ComplexForm,
    df: [ComplexForm; 3],
    dh: [ComplexForm; 3],
    f_deg: i32,
    h_deg: i32,
}

impl Refiner {
    fn new<F: Field + Embed>(f: &Polynomial<F>, h: &Polynomial<F>, embedding: usize) -> Result<Self, GeometryError> {
        let form = |p: &Polynomial<F>| ComplexForm::from_poly(p, embedding);
        Ok(Self {
            f: form(f)?,
            h: form(h)?,
            df: [form(&f.derivative(0))?, form(&f.derivative(1))?, form(&f.derivative(2))?],
            dh: [form(&h.derivative(0))?, form(&h.derivative(1))?, form(&h.derivative(2))?],
            f_deg: f.total_degree().unwrap_or(0) as i32,
            h_deg: h.total_degree().unwrap_or(0) as i32,
        })
    }

    fn residual(&self, p: &[Complex64; 3]) -> f64 {
        relative_value(&self.f, self.f_deg, p).max(relative_value(&self.h, self.h_deg, p))
    }

    fn refine(&self, start: [Complex64; 3]) -> ([Complex64; 3], f64) {
        let mut p = normalize(start);
        let fixed = (0..3).find(|&i| p[i] == Complex64::new(1.0, 0.0)).unwrap_or(0);
        let (i, j) = match fixed {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let mut best = (p, self.residual(&p));
        for _ in 0..20 {
            let rhs = Vector2::new(self.f.eval(&p), self.h.eval(&p));
            let jac = Matrix2::new(self.df[i].eval(&p), self.df[j].eval(&p), self.dh[i].eval(&p), self.dh[j].eval(&p));
            let Some(step) = jac.lu().solve(&rhs) else { break };
            p[i] -= step[0];
            p[j] -= step[1];
            let r = self.residual(&p);
            if r < best.1 {
                best = (p, r);
            } else if r > 2.0 * best.1 {
                break;
            }
        }
        best
    }
}

fn solve_in_coordinates<F: Field + Embed>(
    f: &Polynomial<F>,
    change: &CoordinateChange,
    embedding: usize,
    tol: f64,
) -> Result<Vec<Projective>, GeometryError> {
    let g = change.apply(f)?;
    let h = hessian_det(&g)?;
    if g.coeff(&Monomial(vec![4, 0, 0])).is_zero() {
        return Err(GeometryError::DegenerateCoordinates("x⁴ coefficient vanishes".into()));
    }
    let one = F::one(g.ctx());
    let g1 = g.eval_var(2, &one);
    let h1 = h.eval_var(2, &one);
    let r = resultant_by_interpolation(&g1, &h1, 0, 1, 24)?;
    if r.degree() != Some(24) {
        return Err(GeometryError::DegenerateCoordinates(format!(
            "eliminant has degree {:?} instead of 24",
            r.degree()
        )));
    }
    let gcoef = embedded_coefficients(&g1, 0, embedding)?;
    let hcoef = embedded_coefficients(&h1, 0, embedding)?;
    let refiner = Refiner::new(f, &hessian_det(f)?, embedding)?;
    let m = change.complex();
    let mut found = Vec::new();
    for (mult, factor) in r.squarefree_decomposition() {
        for y0 in numeric_roots(&factor, embedding)? {
            let zero = Complex64::new(0.0, 0.0);
            let at = [zero, y0, Complex64::new(1.0, 0.0)];
            let xs = aberth(&gcoef.iter().map(|c| c.eval(&at)).collect::<Vec<_>>())?;
            let hx: Vec<Complex64> = hcoef.iter().map(|c| c.eval(&at)).collect();
            let mut scored: Vec<(f64, Complex64)> = xs.iter().map(|&x| (scaled_abs(&hx, x), x)).collect();
            scored.sort_by(|a, b| a.0.total_cmp(&b.0));
            if scored.len() > 1 && scored[1].0 < 1e3 * scored[0].0.max(1e-13) {
                return Err(GeometryError::DegenerateCoordinates(format!(
                    "two lifts over y = {y0:.6} with Hessian values {:e}, {:e}",
                    scored[0].0, scored[1].0
                )));
            }
            let v = m * Vector3::new(scored[0].1, y0, Complex64::new(1.0, 0.0));
            let mut coords = [v[0], v[1], v[2]];
            let mut residual = refiner.residual(&coords);
            if mult == 1 {
                (coords, residual) = refiner.refine(coords);
            }
            let p = Projective::new(coords, residual, mult);
            if residual >= tol {
                return Err(GeometryError::NumericFailure(format!(
                    "flex near {:?} has residual {residual:e} (multiplicity {mult})",
                    p.coords
                )));
            }
            found.push(p);
        }
    }
    Ok(found)
}

/// Inflection points of a plane quartic, from the eliminant of F and its
/// Hessian; multiplicities sum to 24.
pub fn flex_points<F: Field + Embed>(f: &Polynomial<F>, embedding: usize, tol: f64) -> Result<SolutionSet, GeometryError> {
    check_ternary_quartic(f)?;
    let radius = 1e3 * tol;
    let mut reasons = Vec::new();
    for change in coordinate_changes() {
        match solve_in_coordinates(f, &change, embedding, tol) {
            Ok(found) => {
                let items = dedup(found, radius);
                let total: usize = items.iter().map(|p| p.multiplicity).sum();
                if total != 24 {
                    return Err(GeometryError::NumericFailure(format!("multiplicities sum to {total}")));
                }
                return Ok(SolutionSet { kind: "flex".into(), dedup_radius: radius, items });
            }
            Err(GeometryError::DegenerateCoordinates(why)) => reasons.push(why),
            Err(e) => return Err(e),
        }
    }
    Err(GeometryError::DegenerateCoordinates(reasons.join("; ")))
}
