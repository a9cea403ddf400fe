use enumtc_core::restriction::{coprimality_check, phi_star_generators, verify_specialization_from_generators, SubgroupDatum};

#[test]
fn images_are_homogeneous_of_generator_degree() {
    for (datum, degrees) in [(SubgroupDatum::fermat_k(), vec![4, 6, 8]), (SubgroupDatum::klein_h(), vec![4, 6])] {
        let imgs = phi_star_generators(&datum).unwrap();
        assert_eq!(imgs.len(), degrees.len());
        for (f, d) in imgs.iter().zip(degrees) {
            assert!(f.is_homogeneous_of(d), "{} in degree {d}", f);
        }
        assert!(verify_specialization_from_generators(&datum).unwrap());
    }
}

#[test]
fn klein_pair_is_coprime() {
    let imgs = phi_star_generators(&SubgroupDatum::klein_h()).unwrap();
    for var in 0..2 {
        assert!(coprimality_check(&imgs[0], &imgs[1], var).unwrap().coprime);
    }
}

#[test]
fn trivial_subgroup_restricts_to_zero() {
    let datum = SubgroupDatum::trivial(3, 2).unwrap();
    let imgs = phi_star_generators(&datum).unwrap();
    assert!(imgs.iter().all(|f| f.is_zero()));
}
