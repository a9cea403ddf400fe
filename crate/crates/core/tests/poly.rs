mod common;

use std::sync::Arc;

use common::{build, form, terms, Terms};
use enumtc_core::arith::{Field, Fp, PrimeField, Rational};
use enumtc_core::linalg::Matrix;
use enumtc_core::poly::{
    elementary_symmetric, hessian_det, principal_subresultant_uni, resultant, substitute, univariate_gcd, Polynomial,
    SpecializationMap, UniPoly, VariableTable,
};
use proptest::prelude::*;

fn f7() -> PrimeField {
    PrimeField::new(7).unwrap()
}

fn xyz() -> Arc<VariableTable> {
    VariableTable::uniform(&["x", "y", "z"])
}

fn map_from(source: &Arc<VariableTable>, target: &Arc<VariableTable>, ctx: &PrimeField, imgs: &[Terms]) -> SpecializationMap<Fp> {
    let mut m = SpecializationMap::new(source, target);
    for (i, t) in imgs.iter().enumerate() {
        m.set_index(i, build(target, ctx, t)).unwrap();
    }
    m
}

fn uni(ctx: &PrimeField, c: &[i64]) -> UniPoly<Fp> {
    UniPoly::from_i64(ctx, c)
}

fn nonzero_uni(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..7, 1..=max_deg + 1).prop_map(|mut v| {
        if let Some(last) = v.last_mut() {
            if *last == 0 {
                *last = 1;
            }
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn substitute_is_a_ring_map(
        f in terms(3, 3, 5, 6),
        g in terms(3, 3, 5, 6),
        imgs in prop::collection::vec(terms(2, 2, 3, 6), 3),
    ) {
        let (src, dst, k) = (xyz(), VariableTable::uniform(&["u", "v"]), f7());
        let m = map_from(&src, &dst, &k, &imgs);
        let (f, g) = (build::<Fp>(&src, &k, &f), build::<Fp>(&src, &k, &g));
        let s = |p: &Polynomial<Fp>| substitute(p, &m, false).unwrap();
        prop_assert_eq!(s(&f.mul(&g)), s(&f).mul(&s(&g)));
        prop_assert_eq!(s(&f.add(&g)), s(&f).add(&s(&g)));
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(
        h in nonzero_uni(2),
        a in nonzero_uni(3),
        b in nonzero_uni(3),
    ) {
        let (k, t) = (f7(), VariableTable::uniform(&["x"]));
        let (h, a, b) = (uni(&k, &h), uni(&k, &a), uni(&k, &b));
        let (f, g) = (h.mul(&a), h.mul(&b));
        prop_assume!(f.degree().unwrap_or(0) >= 1 && g.degree().unwrap_or(0) >= 1);
        let to_poly = |u: &UniPoly<Fp>| enumtc_core::poly::uni_to_poly(u, &t, 0);
        let (fp, gp) = (to_poly(&f), to_poly(&g));
        let res = resultant(&fp, &gp, 0).unwrap();
        let gcd = univariate_gcd(&fp, &gp).unwrap();
        prop_assert!(res.is_constant());
        prop_assert_eq!(res.is_zero(), !gcd.is_constant());
    }

    #[test]
    fn subresultants_detect_gcd_degree(h in nonzero_uni(3), a in nonzero_uni(3), b in nonzero_uni(3)) {
        let k = f7();
        let (h, a, b) = (uni(&k, &h), uni(&k, &a), uni(&k, &b));
        let (f, g) = (h.mul(&a), h.mul(&b));
        let (df, dg) = (f.degree().unwrap(), g.degree().unwrap());
        prop_assume!(df >= 1 && dg >= 1);
        let d = f.gcd(&g).degree().unwrap();
        for j in 0..d {
            prop_assert!(principal_subresultant_uni(&f, &g, j).unwrap().is_zero(), "j = {}", j);
        }
        if d < df.min(dg) {
            prop_assert!(!principal_subresultant_uni(&f, &g, d).unwrap().is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hessian_is_covariant(f in form(3, 3, 6, 4), m in prop::collection::vec(-2i64..=2, 9)) {
        let (t, ctx) = (xyz(), ());
        let f = build::<Rational>(&t, &ctx, &f);
        prop_assume!(!f.is_zero());
        let mat = Matrix::<Rational>::from_rows(&ctx, m.chunks(3).map(|r| r.iter().map(|&x| Rational::from_i64(&ctx, x)).collect()).collect()).unwrap();
        let det = {
            let r = |i: usize, j: usize| mat.get(i, j).clone();
            r(0, 0).mul(&r(1, 1).mul(&r(2, 2)).sub(&r(1, 2).mul(&r(2, 1))))
                .sub(&r(0, 1).mul(&r(1, 0).mul(&r(2, 2)).sub(&r(1, 2).mul(&r(2, 0)))))
                .add(&r(0, 2).mul(&r(1, 0).mul(&r(2, 1)).sub(&r(1, 1).mul(&r(2, 0)))))
        };
        prop_assume!(!det.is_zero());
        let mut sub = SpecializationMap::new(&t, &t);
        for i in 0..3 {
            let img = (0..3).fold(Polynomial::zero(&t, &ctx), |acc, j| {
                acc.add(&Polynomial::var(&t, &ctx, j).scale(mat.get(i, j)))
            });
            sub.set_index(i, img).unwrap();
        }
        let lhs = hessian_det(&substitute(&f, &sub, false).unwrap()).unwrap();
        let rhs = substitute(&hessian_det(&f).unwrap(), &sub, false).unwrap().scale(&det.mul(&det));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn vieta_expansion() {
    let ctx = ();
    let xi = VariableTable::uniform(&["a", "b", "c", "d"]);
    let big = VariableTable::uniform(&["a", "b", "c", "d", "T"]);
    let tv = Polynomial::<Rational>::var(&big, &ctx, 4);
    let prod = (0..4).fold(Polynomial::one(&big, &ctx), |acc, i| acc.mul(&tv.sub(&Polynomial::var(&big, &ctx, i))));
    let coeffs = prod.coefficients_in(4);
    for k in 0..=4 {
        let sigma = elementary_symmetric::<Rational>(k, &xi, &ctx).unwrap().relabel(&big, &[0, 1, 2, 3]);
        let expected = if k % 2 == 0 { sigma } else { sigma.neg() };
        assert_eq!(coeffs[4 - k], expected, "k = {k}");
    }
}
