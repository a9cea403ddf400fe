mod common;

use common::{build, form};
use enumtc_core::arith::{Field, Fp, PrimeField};
use enumtc_core::koszul::{
    em_poincare, is_regular_maximal, quotient_hilbert, tor_concentration_check, GradedSequence, HilbertSeries,
    KoszulComplex,
};
use enumtc_core::poly::VariableTable;
use enumtc_core::restriction::{phi_star_generators, SubgroupDatum};
use proptest::prelude::*;

fn sequence(p: u32, forms: &[common::Terms]) -> Option<GradedSequence<Fp>> {
    let k = PrimeField::new(p).unwrap();
    let t = VariableTable::uniform(&["x", "y", "z"][..forms.len()]);
    let els: Vec<_> = forms.iter().map(|f| build::<Fp>(&t, &k, f)).collect();
    if els.iter().any(|e| e.is_zero()) {
        return None;
    }
    GradedSequence::new(&t, &k, els).ok()
}

fn forms() -> impl Strategy<Value = (u32, Vec<common::Terms>)> {
    (prop::sample::select(vec![2u32, 3, 7]), 2usize..=3).prop_flat_map(|(p, k)| {
        (Just(p), prop::collection::vec((1u32..=3).prop_flat_map(move |d| form(k, d, 4, 3)), k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundary_squares_to_zero((p, fs) in forms(), t in 0u32..8) {
        let Some(seq) = sequence(p, &fs) else { return Ok(()) };
        let k = seq.len();
        let cx = KoszulComplex::new(seq);
        for i in 1..k {
            let d = cx.boundary_matrix(i, t).unwrap().mul(&cx.boundary_matrix(i + 1, t).unwrap()).unwrap();
            prop_assert!((0..d.rows()).all(|r| d.row(r).iter().all(Fp::is_zero)));
        }
    }

    #[test]
    fn certificate_agrees_with_tor((p, fs) in forms()) {
        let Some(seq) = sequence(p, &fs) else { return Ok(()) };
        let cert = is_regular_maximal(&seq).unwrap();
        let up_to = seq.degrees().iter().sum::<u32>() + 2;
        let tor = tor_concentration_check(&seq, 0, up_to);
        prop_assert_eq!(tor.certificate_agrees, Some(true));
        prop_assert_eq!(tor.concentrated, cert.is_regular());
    }

    #[test]
    fn regular_quotients_are_complete_intersections((p, fs) in forms()) {
        let Some(seq) = sequence(p, &fs) else { return Ok(()) };
        let cert = is_regular_maximal(&seq).unwrap();
        prop_assume!(cert.is_regular());
        let top = seq.socle_degree() as u32;
        let h = quotient_hilbert(&seq, top + 3);
        let expected = HilbertSeries::complete_intersection(seq.degrees(), seq.table().weights(), top + 3);
        for (t, e) in expected.iter().enumerate() {
            prop_assert_eq!(h.coeff(t as u32) as i64, *e, "degree {}", t);
        }
        prop_assert!((top + 1..=top + 3).all(|t| h.coeff(t) == 0));
    }
}

fn restricted(datum: SubgroupDatum) -> GradedSequence<Fp> {
    let imgs = phi_star_generators(&datum).unwrap();
    GradedSequence::new(&datum.target, &datum.prime_field(), imgs).unwrap()
}

#[test]
fn quotient_series_of_both_subgroups() {
    let h = restricted(SubgroupDatum::klein_h());
    let series = em_poincare(&h, 0, 12).unwrap();
    assert_eq!(series.trimmed(), &[1, 2, 3, 4, 4, 4, 3, 2, 1]);
    assert_eq!(series.total(), 24);

    let k = restricted(SubgroupDatum::fermat_k());
    let series = em_poincare(&k, 3, 20).unwrap();
    assert_eq!(series.top_degree(), Some(15));
    assert_eq!(series.total(), 192);
    assert!(series.is_palindromic());
    assert_eq!(series.alternating_sum(), 0);
}

#[test]
fn non_regular_pair_has_homology() {
    let k = PrimeField::new(3).unwrap();
    let t = VariableTable::uniform(&["x", "y"]);
    let xy = build::<Fp>(&t, &k, &vec![(vec![1, 1], 1)]);
    let x2 = build::<Fp>(&t, &k, &vec![(vec![2, 0], 1)]);
    let seq = GradedSequence::new(&t, &k, vec![xy, x2]).unwrap();
    assert!(!is_regular_maximal(&seq).unwrap().is_regular());
    let tor = tor_concentration_check(&seq, 0, 6);
    assert!(!tor.concentrated);
    assert_eq!(tor.nonzero[0].homological_degree, 1);
}
