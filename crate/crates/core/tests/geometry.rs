use enumtc_core::arith::NumberField;
use enumtc_core::geometry::{
    dedup, fermat_cubic, fermat_k_elements, fermat_lines, flex_points, induced_permutation, klein_h_elements,
    klein_quartic, line_on_surface, lines_induced_permutation, ComplexForm, ObjectKind, Projective, ProjectiveMatrix, SolutionSet,
};
use enumtc_core::poly::hessian_det;
use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

const TOL: f64 = 1e-8;

fn flexes() -> &'static SolutionSet {
    static CELL: OnceLock<SolutionSet> = OnceLock::new();
    CELL.get_or_init(|| {
        let (f, k) = klein_quartic().unwrap();
        flex_points(&f, k.embedding, TOL).unwrap()
    })
}

#[test]
fn klein_flexes_lie_on_curve_and_hessian() {
    let (f, k) = klein_quartic().unwrap();
    let s = flexes();
    assert_eq!(s.len(), 24);
    assert_eq!(s.total_multiplicity(), 24);
    assert!(s.max_residual() < TOL);
    assert!(s.min_separation() > 1e-3);
    let cf = ComplexForm::from_poly(&f, k.embedding).unwrap();
    let ch = ComplexForm::from_poly(&hessian_det(&f).unwrap(), k.embedding).unwrap();
    for p in &s.items {
        assert!(cf.eval(&p.coords).norm() / cf.scale() < TOL);
        assert!(ch.eval(&p.coords).norm() / ch.scale() < TOL);
    }
}

#[test]
fn h_permutes_flexes_compatibly() {
    let items = &flexes().items;
    let hs = klein_h_elements();
    let perm = |g: &ProjectiveMatrix| induced_permutation(g, items, ObjectKind::Point, 1e-6).unwrap();
    for g in &hs {
        let pg = perm(g);
        for h in &hs {
            let gh = g * h;
            let (ph, pgh) = (perm(h), perm(&gh));
            assert!((0..items.len()).all(|i| pgh[i] == pg[ph[i]]));
        }
    }
}

#[test]
fn fermat_lines_compose() {
    let k = NumberField::cyclotomic(3).unwrap();
    let lines = fermat_lines(&k).unwrap();
    let surface = fermat_cubic(&k);
    assert!(lines.iter().all(|l| line_on_surface(l, &surface).unwrap()));
    let els = fermat_k_elements(&k);
    assert_eq!(els.len(), 27);
    for (a, b) in [(1, 2), (4, 13), (26, 9), (5, 5)] {
        let pa = lines_induced_permutation(&els[a], &lines).unwrap();
        let pb = lines_induced_permutation(&els[b], &lines).unwrap();
        let pab = lines_induced_permutation(&els[a].mul(&els[b]).unwrap(), &lines).unwrap();
        assert!((0..27).all(|i| pab[i] == pa[pb[i]]), "elements {a}, {b}");
    }
}

fn point() -> impl Strategy<Value = Projective> {
    prop::array::uniform6(-3.0f64..3.0).prop_map(|v| {
        let c = [Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]), Complex64::new(v[4], v[5])];
        Projective::new(c, 0.0, 1)
    })
}

proptest! {
    #[test]
    fn dedup_is_idempotent(pts in prop::collection::vec(point(), 0..20), radius in 1e-3f64..0.5) {
        prop_assume!(pts.iter().all(|p| p.coords.iter().any(|c| c.norm() > 1e-3)));
        let once = dedup(pts, radius);
        let twice = dedup(once.clone(), radius);
        prop_assert_eq!(once, twice);
    }
}
