mod common;

use common::{build, terms};
use enumtc_core::arith::{Fp, PrimeField, Rational};
use enumtc_core::bpu::{integer_membership, standard_generators, verify_generators, NablaContext};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn nabla_is_a_derivation(
        n in 2usize..=4,
        p in prop::sample::select(vec![2u32, 3, 5, 7]),
        f in terms(4, 3, 5, 9),
        g in terms(4, 3, 5, 9),
    ) {
        let k = PrimeField::new(p).unwrap();
        let ctx = NablaContext::<Fp>::new(n, &k).unwrap();
        let cut = |t: &common::Terms| -> common::Terms { t.iter().map(|(e, c)| (e[..n].to_vec(), *c)).collect() };
        let (f, g) = (build::<Fp>(ctx.table(), &k, &cut(&f)), build::<Fp>(ctx.table(), &k, &cut(&g)));
        let d = |x| ctx.nabla(x).unwrap();
        let fg = f.mul(&g);
        prop_assert_eq!(d(&fg), d(&f).mul(&g).add(&f.mul(&d(&g))));
    }

    #[test]
    fn nabla_over_q_is_a_derivation(f in terms(3, 3, 4, 9), g in terms(3, 3, 4, 9)) {
        let ctx = NablaContext::<Rational>::new(3, &()).unwrap();
        let (f, g) = (build::<Rational>(ctx.table(), &(), &f), build::<Rational>(ctx.table(), &(), &g));
        let d = |x| ctx.nabla(x).unwrap();
        let fg = f.mul(&g);
        prop_assert_eq!(d(&fg), d(&f).mul(&g).add(&f.mul(&d(&g))));
    }
}

#[test]
fn integral_kernel_matches_bsu_when_p_is_coprime_to_n() {
    for (n, p) in [(3, 2), (3, 5), (3, 7), (4, 3), (4, 5), (4, 7)] {
        let ctx = NablaContext::<Fp>::new(n, &PrimeField::new(p).unwrap()).unwrap();
        for degree in (2..=12).step_by(2) {
            assert_eq!(ctx.integral_kernel(degree).len(), ctx.bsu_dimension(degree), "n={n} p={p} degree {degree}");
            assert!(ctx.kernel_of_nabla(degree).basis.len() >= ctx.bsu_dimension(degree));
        }
    }
}

#[test]
fn rational_kernel_matches_bsu() {
    for n in [2, 3, 4] {
        let ctx = NablaContext::<Rational>::new(n, &()).unwrap();
        for degree in (2..=12).step_by(2) {
            assert_eq!(ctx.kernel_of_nabla(degree).basis.len(), ctx.bsu_dimension(degree), "n={n} degree {degree}");
        }
    }
}

#[test]
fn generator_tables_pass() {
    for (n, p) in [(3, 2), (3, 5), (3, 7), (4, 3), (4, 5), (4, 7)] {
        let ctx = NablaContext::<Fp>::new(n, &PrimeField::new(p).unwrap()).unwrap();
        let gens = standard_generators(n).unwrap();
        let report = verify_generators(&ctx, &gens, 12).unwrap();
        assert!(report.passed(), "n={n} p={p}: {:?}", report.rows);
        assert!(integer_membership(&gens).unwrap().iter().all(|(_, ok)| *ok));
    }
}
