use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::projective::Projective;
use super::GeometryError;

pub type ProjectiveMatrix = Matrix3<Complex64>;

/// Whether the objects are points (P ↦ gP) or lines (u ↦ u·g⁻¹).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectKind {
    Point,
    Line,
}

/// A finite group of projective transformations acting on a list of objects.
#[derive(Debug, Clone)]
pub struct GroupAction {
    pub elements: Vec<ProjectiveMatrix>,
    pub objects: Vec<Projective>,
    pub kind: ObjectKind,
    pub tol: f64,
}

pub fn is_projective_identity(g: &ProjectiveMatrix, tol: f64) -> bool {
    let s = g[(0, 0)];
    if s.norm() == 0.0 {
        return false;
    }
    let scaled = g / s;
    (scaled - ProjectiveMatrix::identity()).norm() <= tol
}

fn act(g: &ProjectiveMatrix, o: &Projective, kind: ObjectKind) -> Result<Projective, GeometryError> {
    Ok(match kind {
        ObjectKind::Point => o.map_point(g),
        ObjectKind::Line => {
            let inv = g.try_inverse().ok_or_else(|| GeometryError::InvalidInput("singular matrix".into()))?;
            o.map_line(&inv)
        }
    })
}

/// perm[i] = index of the object nearest to g·object_i.
pub fn induced_permutation(
    g: &ProjectiveMatrix,
    objects: &[Projective],
    kind: ObjectKind,
    tol: f64,
) -> Result<Vec<usize>, GeometryError> {
    let mut hit: Vec<Option<usize>> = vec![None; objects.len()];
    let mut perm = Vec::with_capacity(objects.len());
    for (i, o) in objects.iter().enumerate() {
        let img = act(g, o, kind)?;
        let (j, d) = objects
            .iter()
            .enumerate()
            .map(|(j, t)| (j, img.distance(t)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(GeometryError::NotInvariant { object: i, distance: f64::INFINITY })?;
        if d > tol {
            return Err(GeometryError::NotInvariant { object: i, distance: d });
        }
        if let Some(first) = hit[j] {
            return Err(GeometryError::CollisionAtTolerance { target: j, first, second: i });
        }
        hit[j] = Some(i);
        perm.push(j);
    }
    Ok(perm)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementReport {
    pub index: usize,
    pub identity: bool,
    pub moved: usize,
    /// Smallest distance between a moved object and its image.
    pub min_displacement: f64,
    pub max_displacement: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionReport {
    pub elements: Vec<ElementReport>,
    pub threshold: f64,
    pub pass: bool,
}

/// Every non-identity element must move some object by more than 10³·tol.
pub fn common_fixed_check(action: &GroupAction) -> Result<ActionReport, GeometryError> {
    let threshold = 1e3 * action.tol;
    let mut elements = Vec::with_capacity(action.elements.len());
    for (index, g) in action.elements.iter().enumerate() {
        let perm = induced_permutation(g, &action.objects, action.kind, action.tol)?;
        let identity = is_projective_identity(g, 1e-12);
        let moved: Vec<f64> = perm
            .iter()
            .enumerate()
            .filter(|(i, j)| i != *j)
            .map(|(i, &j)| action.objects[i].distance(&action.objects[j]))
            .collect();
        let min_displacement = moved.iter().copied().fold(f64::INFINITY, f64::min);
        let max_displacement = moved.iter().copied().fold(0.0, f64::max);
        let pass = identity || moved.iter().any(|&d| d > threshold);
        elements.push(ElementReport { index, identity, moved: moved.len(), min_displacement, max_displacement, pass });
    }
    let pass = elements.iter().all(|e| e.pass);
    Ok(ActionReport { elements, threshold, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pts() -> Vec<Projective> {
        vec![
            Projective::new([c(1.0), c(2.0), c(3.0)], 0.0, 1),
            Projective::new([c(-1.0), c(2.0), c(3.0)], 0.0, 1),
            Projective::new([c(1.0), c(-2.0), c(3.0)], 0.0, 1),
            Projective::new([c(-1.0), c(-2.0), c(3.0)], 0.0, 1),
        ]
    }

    #[test]
    fn sign_changes_permute_orbit() {
        let hs = crate::geometry::klein_h_elements();
        let id = induced_permutation(&hs[0], &pts(), ObjectKind::Point, 1e-9).unwrap();
        assert_eq!(id, vec![0, 1, 2, 3]);
        for g in &hs {
            for h in &hs {
                let pg = induced_permutation(g, &pts(), ObjectKind::Point, 1e-9).unwrap();
                let ph = induced_permutation(h, &pts(), ObjectKind::Point, 1e-9).unwrap();
                let pgh = induced_permutation(&(g * h), &pts(), ObjectKind::Point, 1e-9).unwrap();
                assert!((0..4).all(|i| pgh[i] == pg[ph[i]]));
            }
        }
        let r = common_fixed_check(&GroupAction { elements: hs, objects: pts(), kind: ObjectKind::Point, tol: 1e-9 }).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn failures_and_vacuous_pass() {
        let g = ProjectiveMatrix::from_diagonal(&nalgebra::Vector3::new(c(2.0), c(1.0), c(1.0)));
        assert!(matches!(
            induced_permutation(&g, &pts(), ObjectKind::Point, 1e-9),
            Err(GeometryError::NotInvariant { .. })
        ));
        let trivial = GroupAction { elements: vec![], objects: pts(), kind: ObjectKind::Line, tol: 1e-9 };
        assert!(common_fixed_check(&trivial).unwrap().pass);
        let dup = vec![pts()[0].clone(), pts()[0].clone()];
        assert!(matches!(
            induced_permutation(&ProjectiveMatrix::identity(), &dup, ObjectKind::Point, 1e-9),
            Err(GeometryError::CollisionAtTolerance { .. })
        ));
    }
}
