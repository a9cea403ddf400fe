use nalgebra::{Matrix3, Matrix4, RowVector3, Vector3, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{Embed, Field};
use crate::numeric::{aberth, scaled_abs};
use crate::poly::{
    principal_subresultant_with_degrees, restrict_to_line, resultant_by_interpolation, resultant_multimodular, uni_to_poly, Chart, Monomial, Polynomial,
    UniPoly, VariableTable,
};

use super::flex::{check_ternary_quartic, numeric_roots};
use super::forms::{coordinate_changes, ComplexForm, CoordinateChange};
use super::projective::{dedup, Projective, SolutionSet};
use super::GeometryError;

/// A tangent line at a flex, found as a spurious solution of the bitangent
/// system: the restriction has a triple root at the contact point.
#[derive(Debug, Clone, PartialEq)]
pub struct FlexTangent {
    pub line: Projective,
    pub point: Projective,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlexMatch {
    /// Largest distance from a contact point to its nearest flex.
    pub max_distance: f64,
    /// Whether distinct tangents have distinct nearest flexes.
    pub injective: bool,
}

/// What one chart contributed before merging.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartView {
    pub chart: String,
    /// Degree of the squarefree eliminant in the slope parameter.
    pub eliminant_degree: usize,
    pub bitangents: usize,
    pub flex_tangents: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BitangentOutcome {
    pub bitangents: SolutionSet,
    pub flex_tangents: Vec<FlexTangent>,
    pub change: CoordinateChange,
    pub charts: Vec<ChartView>,
    /// Charts skipped as degenerate, with the reason.
    pub skipped: Vec<String>,
}

impl BitangentOutcome {
    pub fn match_flexes(&self, flexes: &SolutionSet) -> FlexMatch {
        let mut max_distance = 0.0f64;
        let mut nearest = Vec::with_capacity(self.flex_tangents.len());
        for t in &self.flex_tangents {
            let (k, d) = flexes
                .items
                .iter()
                .enumerate()
                .map(|(k, p)| (k, p.distance(&t.point)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap_or((usize::MAX, f64::INFINITY));
            max_distance = max_distance.max(d);
            nearest.push(k);
        }
        nearest.sort_unstable();
        let injective = nearest.windows(2).all(|w| w[0] != w[1]);
        FlexMatch { max_distance, injective }
    }
}

/// Factorization shapes q = q₀·∏(X − root) tested by Newton's method.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// (X² − sX + p)², parameters (s, p).
    Square,
    /// (X − r)³(X − w), parameters (r, w).
    Flex,
}

impl Shape {
    /// Normalized coefficients m₁..m₄ and their derivatives in the two parameters.
    fn model(self, u: Complex64, v: Complex64) -> ([Complex64; 4], [Complex64; 4], [Complex64; 4]) {
        let two = Complex64::new(2.0, 0.0);
        let three = Complex64::new(3.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self {
            Shape::Square => {
                let (s, p) = (u, v);
                (
                    [-two * s, s * s + two * p, -two * s * p, p * p],
                    [-two, two * s, -two * p, zero],
                    [zero, two, -two * s, two * p],
                )
            }
            Shape::Flex => {
                let (r, w) = (u, v);
                (
                    [-(three * r + w), three * r * r + three * r * w, -(r * r * r + three * r * r * w), r * r * r * w],
                    [-three, three * (two * r + w), -(three * r * r + three * two * r * w), three * r * r * w],
                    [-Complex64::new(1.0, 0.0), three * r, -three * r * r, r * r * r],
                )
            }
        }
    }
}

/// The restricted quartic q₀..q₄ as numeric forms in (a, b).
struct Slice {
    q: Vec<ComplexForm>,
    qa: Vec<ComplexForm>,
    qb: Vec<ComplexForm>,
}

impl Slice {
    fn values(&self, a: Complex64, b: Complex64) -> [Complex64; 5] {
        std::array::from_fn(|i| self.q[i].eval(&[a, b]))
    }

    fn residual(&self, shape: Shape, x: &Vector4<Complex64>) -> f64 {
        let q = self.values(x[0], x[1]);
        let (m, _, _) = shape.model(x[2], x[3]);
        let scale = q.iter().map(|c| c.norm()).fold(0.0, f64::max);
        (0..4).map(|i| (q[i + 1] - m[i] * q[0]).norm()).fold(0.0, f64::max) / scale
    }

    fn newton(&self, shape: Shape, start: Vector4<Complex64>) -> (Vector4<Complex64>, f64) {
        let mut x = start;
        let mut best = (x, self.residual(shape, &x));
        for _ in 0..30 {
            let p = [x[0], x[1]];
            let q = self.values(x[0], x[1]);
            let qa: Vec<Complex64> = self.qa.iter().map(|f| f.eval(&p)).collect();
            let qb: Vec<Complex64> = self.qb.iter().map(|f| f.eval(&p)).collect();
            let (m, mu, mv) = shape.model(x[2], x[3]);
            let rhs = Vector4::from_fn(|i, _| q[i + 1] - m[i] * q[0]);
            let jac = Matrix4::from_fn(|i, j| match j {
                0 => qa[i + 1] - m[i] * qa[0],
                1 => qb[i + 1] - m[i] * qb[0],
                2 => -mu[i] * q[0],
                _ => -mv[i] * q[0],
            });
            let Some(step) = jac.lu().solve(&rhs) else { break };
            let mut t = 1.0;
            let mut accepted = None;
            while t > 1e-3 {
                let trial = x - step * Complex64::new(t, 0.0);
                let r = self.residual(shape, &trial);
                    if r < best.1 {
                    accepted = Some((trial, r));
                    break;
                }
                t *= 0.5;
            }
            let Some((next, r)) = accepted else { break };
            x = next;
            best = (x, r);
        }
        best
    }
}

/// Quadratic subresultant A·X² + B·X + C of q and q′ from numeric coefficients.
fn quadratic_subresultant(q: &[Complex64; 5]) -> (Complex64, Complex64, Complex64) {
    let c = |k: f64| Complex64::new(k, 0.0);
    let rows = [
        [q[0], q[1], q[2], q[3], q[4]],
        [c(4.0) * q[0], c(3.0) * q[1], c(2.0) * q[2], q[3], c(0.0)],
        [c(0.0), c(4.0) * q[0], c(3.0) * q[1], c(2.0) * q[2], q[3]],
    ];
    let det = |last: usize| Matrix3::from_fn(|i, j| rows[i][if j < 2 { j } else { last }]).determinant();
    (det(2), det(3), det(4))
}

/// Squared chordal distance between the two roots of A·X² + B·X + C, taken as
/// points of the plane through `place`. Zero exactly when the discriminant is.
fn contact_separation(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    place: impl Fn(Complex64, Complex64) -> Vector3<Complex64>,
) -> f64 {
    let sq = (b * b - 4.0 * a * c).sqrt();
    let root = |sign: f64| {
        let (u, v) = ((-b + sign * sq, 2.0 * a), (2.0 * c, -b - sign * sq));
        let pick = if u.0.norm().max(u.1.norm()) >= v.0.norm().max(v.1.norm()) { u } else { v };
        place(pick.0, pick.1)
    };
    let (p, q) = (root(1.0), root(-1.0));
    let (pp, qq) = (p.norm_squared(), q.norm_squared());
    if pp == 0.0 || qq == 0.0 {
        return 0.0;
    }
    (1.0 - p.dotc(&q).norm_sqr() / (pp * qq)).max(0.0)
}

/// Largest a-degree among the coefficients in `elim`.
fn max_degree_in(p: &Polynomial<impl Field>, elim: usize, keep: usize) -> usize {
    p.coefficients_in(elim).iter().map(|c| c.degree_in(keep) as usize).max().unwrap_or(0)
}

/// Divides out the gcd of the coefficients in `elim`, a polynomial in `keep`.
fn primitive_part<F: Field>(p: Polynomial<F>, elim: usize, keep: usize) -> Result<Polynomial<F>, GeometryError> {
    let ctx = p.ctx().clone();
    let mut content = UniPoly::zero(&ctx);
    for c in p.coefficients_in(elim) {
        content = content.gcd(&UniPoly::new(&ctx, c.univariate_coeffs(keep)?));
        if content.degree() == Some(0) {
            return Ok(p);
        }
    }
    let c = uni_to_poly(&content, p.table(), keep);
    p.div_exact(&c).ok_or_else(|| GeometryError::NumericFailure("content does not divide".into()))
}

struct ChartSolution {
    bitangents: Vec<Projective>,
    flex_tangents: Vec<FlexTangent>,
    eliminant_degree: usize,
}

fn solve_in_chart<F: Field + Embed>(
    f: &Polynomial<F>,
    change: &CoordinateChange,
    chart: Chart,
    embedding: usize,
    tol: f64,
) -> Result<ChartSolution, GeometryError> {
    let g = change.apply(f)?;
    let slice = restrict_to_line(&g, chart)?;
    let ctx = g.ctx();
    let (k, i, j) = chart.indices();
    if slice.coeffs[0].is_zero() {
        return Err(GeometryError::DegenerateCoordinates("leading coefficient of the restriction vanishes".into()));
    }

    // q(X) = Σ q_i X^(4−i) over the table (X, a, b).
    let xab = VariableTable::uniform(&["X", "a", "b"]);
    let lift = |p: &Polynomial<F>| p.relabel(&xab, &[1, 2]);
    let mut q = Polynomial::zero(&xab, ctx);
    for (idx, c) in slice.coeffs.iter().enumerate() {
        q = q.add(&lift(c).mul_term(&Monomial(vec![4 - idx as u32, 0, 0]), &F::one(ctx)));
    }
    let dq = q.derivative(0);
    let q0 = lift(&slice.coeffs[0]);
    let exact = |p: Polynomial<F>| {
        p.div_exact(&q0).ok_or_else(|| GeometryError::NumericFailure("subresultant not divisible by q₀".into()))
    };
    let d = primitive_part(exact(principal_subresultant_with_degrees(&q, &dq, 0, 4, 3, 0)?)?, 2, 1)?;
    let e = primitive_part(exact(principal_subresultant_with_degrees(&q, &dq, 0, 4, 3, 1)?)?, 2, 1)?;
    if d.degree_in(2) == 0 || e.degree_in(2) == 0 {
        return Err(GeometryError::DegenerateCoordinates("eliminants do not involve b".into()));
    }

    let row_bound =
        e.degree_in(2) as usize * max_degree_in(&d, 2, 1) + d.degree_in(2) as usize * max_degree_in(&e, 2, 1);
    let bezout = (d.total_degree().unwrap_or(0) * e.total_degree().unwrap_or(0)) as usize;
    let bound = row_bound.min(bezout);
    let mut r = match resultant_multimodular(&d, &e, 2, 1, bound)? {
        Some(r) => r,
        None => resultant_by_interpolation(&d, &e, 2, 1, bound)?,
    };
    if r.is_zero() {
        return Err(GeometryError::DegenerateCoordinates("eliminant vanishes identically".into()));
    }
    let q0_uni = UniPoly::new(ctx, slice.coeffs[0].univariate_coeffs(0)?);
    if q0_uni.degree().unwrap_or(0) > 0 {
        loop {
            let (quo, rem) = r.divrem(&q0_uni);
            if !rem.is_zero() {
                break;
            }
            r = quo;
        }
    }
    let base = match r.exact_sqrt() {
        Some((_, s)) => s,
        None => r,
    };
    let radical = if base.squarefree_mod_p() {
        base
    } else {
        base.squarefree_decomposition().into_iter().fold(UniPoly::constant(ctx, F::one(ctx)), |acc, (_, s)| acc.mul(&s))
    };
    let eliminant_degree = radical.degree().unwrap_or(0);

    let form = |p: &Polynomial<F>| ComplexForm::from_poly(p, embedding);
    let sl = Slice {
        q: slice.coeffs.iter().map(form).collect::<Result<_, _>>()?,
        qa: slice.coeffs.iter().map(|c| form(&c.derivative(0))).collect::<Result<_, _>>()?,
        qb: slice.coeffs.iter().map(|c| form(&c.derivative(1))).collect::<Result<_, _>>()?,
    };
    let d_b = d.coefficients_in(2).iter().map(&form).collect::<Result<Vec<_>, _>>()?;
    let e_b = e.coefficients_in(2).iter().map(form).collect::<Result<Vec<_>, _>>()?;
    let minv = change.complex_inverse();
    let m = change.complex();
    let to_line = |a: Complex64, b: Complex64| {
        let mut u = [Complex64::new(0.0, 0.0); 3];
        u[i] = a;
        u[j] = b;
        u[k] = Complex64::new(-1.0, 0.0);
        let v = RowVector3::from_row_slice(&u) * minv;
        [v[0], v[1], v[2]]
    };

    let mut bitangents = Vec::new();
    let mut flex_tangents = Vec::new();
    for a0 in numeric_roots(&radical, embedding)? {
        let at = [Complex64::new(0.0, 0.0), a0, Complex64::new(0.0, 0.0)];
        let eb: Vec<Complex64> = e_b.iter().map(|c| c.eval(&at)).collect();
        let db: Vec<Complex64> = d_b.iter().map(|c| c.eval(&at)).collect();
        let mut lifts: Vec<(f64, Complex64)> = aberth(&eb)?.into_iter().map(|b| (scaled_abs(&db, b), b)).collect();
        lifts.sort_by(|x, y| x.0.total_cmp(&y.0));
        let near = |x: &Vector4<Complex64>| (x[0] - a0).norm() <= 1e-6 * (1.0 + a0.norm());
        let mut found = None;
        for &(_, b0) in &lifts {
            let qv = sl.values(a0, b0);
            let (qa, qb, qc) = quadratic_subresultant(&qv);
            let r0 = -qb / (2.0 * qa);
            let square = sl.newton(Shape::Square, Vector4::new(a0, b0, -qb / qa, qc / qa));
            let flex = sl.newton(Shape::Flex, Vector4::new(a0, b0, r0, -qv[1] / qv[0] - 3.0 * r0));
            let best = if square.1 <= flex.1 { (Shape::Square, square) } else { (Shape::Flex, flex) };
            if best.1 .1 < tol && near(&best.1 .0) {
                found = Some(best);
                break;
            }
        }
        let Some((shape, (refined, residual))) = found else {
            return Err(GeometryError::DegenerateCoordinates(format!("root a = {a0:.6} does not lift")));
        };
        let (qa, qb, qc) = quadratic_subresultant(&sl.values(refined[0], refined[1]));
        let place = |s1: Complex64, s2: Complex64| {
            let mut pt = [Complex64::new(0.0, 0.0); 3];
            pt[i] = s1;
            pt[j] = s2;
            pt[k] = refined[0] * s1 + refined[1] * s2;
            m * Vector3::from(pt)
        };
        let rel_disc = contact_separation(qa, qb, qc, place);
        let ambiguous = || GeometryError::AmbiguousClassification {
            candidate: format!("a = {:.6}, b = {:.6}", refined[0], refined[1]),
            rel_disc,
        };
        match shape {
            Shape::Square if rel_disc > 1e3 * tol => {
                bitangents.push(Projective::new(to_line(refined[0], refined[1]), residual, 1));
            }
            Shape::Flex if rel_disc < tol => {
                let (a, b, r) = (refined[0], refined[1], refined[2]);
                let mut pt = [Complex64::new(0.0, 0.0); 3];
                pt[i] = r;
                pt[j] = Complex64::new(1.0, 0.0);
                pt[k] = a * r + b;
                let v = m * Vector3::from(pt);
                flex_tangents.push(FlexTangent {
                    line: Projective::new(to_line(a, b), residual, 1),
                    point: Projective::new([v[0], v[1], v[2]], residual, 1),
                });
            }
            _ => return Err(ambiguous()),
        }
    }
    Ok(ChartSolution { bitangents, flex_tangents, eliminant_degree })
}

fn dedup_tangents(items: Vec<FlexTangent>, radius: f64) -> Vec<FlexTangent> {
    let mut out: Vec<FlexTangent> = Vec::new();
    for t in items {
        if !out.iter().any(|o| o.line.distance(&t.line) < radius) {
            out.push(t);
        }
    }
    let lines = dedup(out.iter().map(|t| t.line.clone()).collect(), radius);
    lines
        .into_iter()
        .map(|l| out.iter().find(|t| t.line.distance(&l) < radius).expect("present").clone())
        .collect()
}

/// Bitangents of a plane quartic, solved in every chart of the first usable
/// coordinate change and merged. Flex tangents are kept aside for cross-checks.
pub fn bitangent_lines<F: Field + Embed>(
    f: &Polynomial<F>,
    embedding: usize,
    tol: f64,
) -> Result<BitangentOutcome, GeometryError> {
    check_ternary_quartic(f)?;
    let radius = 1e3 * tol;
    let mut reasons = Vec::new();
    for change in coordinate_changes() {
        let mut charts = Vec::new();
        let mut skipped = Vec::new();
        let mut lines = Vec::new();
        let mut tangents = Vec::new();
        for chart in Chart::ALL {
            match solve_in_chart(f, &change, chart, embedding, tol) {
                Ok(sol) => {
                    charts.push(ChartView {
                        chart: format!("{chart:?}"),
                        eliminant_degree: sol.eliminant_degree,
                        bitangents: sol.bitangents.len(),
                        flex_tangents: sol.flex_tangents.len(),
                    });
                    lines.extend(sol.bitangents);
                    tangents.extend(sol.flex_tangents);
                }
                Err(GeometryError::DegenerateCoordinates(why)) => skipped.push(format!("{chart:?}: {why}")),
                Err(e) => return Err(e),
            }
        }
        if charts.is_empty() {
            reasons.extend(skipped);
            continue;
        }
        let mut items = dedup(lines, radius);
        for it in &mut items {
            it.multiplicity = 1;
        }
        return Ok(BitangentOutcome {
            bitangents: SolutionSet { kind: "bitangent".into(), dedup_radius: radius, items },
            flex_tangents: dedup_tangents(tangents, radius),
            change,
            charts,
            skipped,
        });
    }
    Err(GeometryError::DegenerateCoordinates(reasons.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{flex_points, klein_quartic};

    #[test]
    fn subresultant_of_square() {
        // (X² − 3X + 2)² = X⁴ − 6X³ + 13X² − 12X + 4
        let c = |k: f64| Complex64::new(k, 0.0);
        let (a, b, cc) = quadratic_subresultant(&[c(1.0), c(-6.0), c(13.0), c(-12.0), c(4.0)]);
        assert!((b / a - c(-3.0)).norm() < 1e-12);
        assert!((cc / a - c(2.0)).norm() < 1e-12);
        let flat = |s1: Complex64, s2: Complex64| Vector3::new(s1, s2, c(0.0));
        assert!((contact_separation(a, b, cc, flat) - 0.1).abs() < 1e-12);
        // (X − 1)³(X + 2) = X⁴ − X³ − 3X² + 5X − 2
        let (a, b, cc) = quadratic_subresultant(&[c(1.0), c(-1.0), c(-3.0), c(5.0), c(-2.0)]);
        assert!(contact_separation(a, b, cc, flat) < 1e-12);
        assert!((b / a - c(-2.0)).norm() < 1e-12);
    }

    #[test]
    fn klein_bitangents() {
        let (f, k) = klein_quartic().unwrap();
        let out = bitangent_lines(&f, k.embedding, 1e-6).unwrap();
        assert_eq!(out.bitangents.len(), 28);
        assert!(out.bitangents.max_residual() < 1e-6);
        assert_eq!(out.flex_tangents.len(), 24);
        let flexes = flex_points(&f, k.embedding, 1e-8).unwrap();
        let m = out.match_flexes(&flexes);
        assert!(m.injective && m.max_distance < 1e-6, "{m:?}");
    }
}
