use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::arith::{Field, NfElem, NumberField};
use crate::linalg::Matrix;
use crate::poly::{substitute, Polynomial, SpecializationMap, VariableTable};

use super::GeometryError;

/// A line in ℙ³ as the common zero set of two linear forms, stored in
/// reduced row echelon form so that equal lines compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Line3D {
    rows: [[NfElem; 4]; 2],
}

const COORDS: [&str; 4] = ["x", "y", "z", "w"];

impl fmt::Debug for Line3D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Line3D({self})")
    }
}

impl fmt::Display for Line3D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = |r: &[NfElem; 4]| {
            let parts: Vec<String> = r
                .iter()
                .zip(COORDS)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, v)| if c.is_one() { v.to_string() } else { format!("({c})*{v}") })
                .collect();
            parts.join(" + ")
        };
        write!(f, "{} = {} = 0", form(&self.rows[0]), form(&self.rows[1]))
    }
}

impl Line3D {
    pub fn new(field: &Arc<NumberField>, forms: [[NfElem; 4]; 2]) -> Result<Self, GeometryError> {
        let m = Matrix::from_rows(field, forms.iter().map(|r| r.to_vec()).collect())
            .map_err(|e| GeometryError::InvalidLine(e.to_string()))?;
        let ech = m.rref();
        if ech.pivots.len() != 2 {
            return Err(GeometryError::InvalidLine(format!("coefficient matrix has rank {}", ech.pivots.len())));
        }
        let rows = std::array::from_fn(|r| std::array::from_fn(|c| ech.reduced.get(r, c).clone()));
        Ok(Self { rows })
    }

    pub fn forms(&self) -> &[[NfElem; 4]; 2] {
        &self.rows
    }

    fn field(&self) -> &Arc<NumberField> {
        self.rows[0][0].field()
    }

    /// Two points spanning the line.
    pub fn points(&self) -> [[NfElem; 4]; 2] {
        let m = Matrix::from_rows(self.field(), self.rows.iter().map(|r| r.to_vec()).collect()).expect("2×4");
        let k = m.kernel_basis();
        std::array::from_fn(|i| std::array::from_fn(|c| k[i][c].clone()))
    }

    /// Image under P ↦ g·P, i.e. forms ℓ ↦ ℓ·g⁻¹.
    pub fn transform(&self, g_inv: &Matrix<NfElem>) -> Result<Self, GeometryError> {
        let f = self.field().clone();
        let forms = std::array::from_fn(|r| {
            std::array::from_fn(|c| (0..4).fold(NfElem::zero(&f), |acc, k| acc.add(&self.rows[r][k].mul(g_inv.get(k, c)))))
        });
        Self::new(&f, forms)
    }
}

fn xyzw() -> Arc<VariableTable> {
    VariableTable::uniform(&COORDS)
}

/// x³ + y³ + z³ + w³ over the given field.
pub fn fermat_cubic(field: &Arc<NumberField>) -> Polynomial<NfElem> {
    Polynomial::from_int_terms(
        &xyzw(),
        field,
        &[(&[3, 0, 0, 0], 1), (&[0, 3, 0, 0], 1), (&[0, 0, 3, 0], 1), (&[0, 0, 0, 3], 1)],
    )
}

/// Exact test that F vanishes identically on the line.
pub fn line_on_surface(line: &Line3D, f: &Polynomial<NfElem>) -> Result<bool, GeometryError> {
    if f.table().len() != 4 {
        return Err(GeometryError::InvalidInput("expected a form in four variables".into()));
    }
    let field = line.field();
    let st = VariableTable::uniform(&["s", "t"]);
    let [p, q] = line.points();
    let mut map = SpecializationMap::new(f.table(), &st);
    for i in 0..4 {
        let img = Polynomial::from_terms(&st, field, [(vec![1, 0], p[i].clone()), (vec![0, 1], q[i].clone())]);
        map.set_index(i, img)?;
    }
    Ok(substitute(f, &map, false)?.is_zero())
}

fn form(field: &Arc<NumberField>, entries: [(usize, NfElem); 2]) -> [NfElem; 4] {
    let mut r: [NfElem; 4] = std::array::from_fn(|_| NfElem::zero(field));
    for (i, v) in entries {
        r[i] = v;
    }
    r
}

/// The 27 lines on x³+y³+z³+w³ over ℚ(ζ₃): for each pairing of the
/// coordinates, {a − ηb = c − η′d = 0} with η, η′ cube roots of −1.
pub fn fermat_lines(field: &Arc<NumberField>) -> Result<Vec<Line3D>, GeometryError> {
    let w = field.generator();
    let one = NfElem::one(field);
    let roots_of_minus_one = [one.neg(), w.neg(), w.mul(&w).neg()];
    let mut out = Vec::with_capacity(27);
    for (a, b, c, d) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        for eta in &roots_of_minus_one {
            for eta2 in &roots_of_minus_one {
                out.push(Line3D::new(
                    field,
                    [form(field, [(a, one.clone()), (b, eta.neg())]), form(field, [(c, one.clone()), (d, eta2.neg())])],
                )?);
            }
        }
    }
    Ok(out)
}

/// {x + y = 0, z + w = 0}.
pub fn witness_line(field: &Arc<NumberField>) -> Line3D {
    let one = NfElem::one(field);
    Line3D::new(field, [form(field, [(0, one.clone()), (1, one.clone())]), form(field, [(2, one.clone()), (3, one)])])
        .expect("independent forms")
}

/// diag(ζ₃^a, ζ₃^b, ζ₃^c, 1) for a, b, c ∈ {0,1,2}, identity first.
pub fn fermat_k_elements(field: &Arc<NumberField>) -> Vec<Matrix<NfElem>> {
    let w = field.generator();
    let mut out = Vec::with_capacity(27);
    for a in 0..3u64 {
        for b in 0..3u64 {
            for c in 0..3u64 {
                let mut m = Matrix::identity(field, 4);
                for (i, e) in [a, b, c].into_iter().enumerate() {
                    m.set(i, i, w.pow(e));
                }
                out.push(m);
            }
        }
    }
    out
}

/// Index permutation induced by g on an exact list of lines.
pub fn lines_induced_permutation(g: &Matrix<NfElem>, lines: &[Line3D]) -> Result<Vec<usize>, GeometryError> {
    let g_inv = g.inverse().ok_or_else(|| GeometryError::InvalidInput("singular matrix".into()))?;
    let index: HashMap<&Line3D, usize> = lines.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut perm = Vec::with_capacity(lines.len());
    let mut hit: Vec<Option<usize>> = vec![None; lines.len()];
    for (i, l) in lines.iter().enumerate() {
        let img = l.transform(&g_inv)?;
        let &j = index.get(&img).ok_or(GeometryError::NotInvariant { object: i, distance: f64::INFINITY })?;
        if let Some(first) = hit[j] {
            return Err(GeometryError::CollisionAtTolerance { target: j, first, second: i });
        }
        hit[j] = Some(i);
        perm.push(j);
    }
    Ok(perm)
}
