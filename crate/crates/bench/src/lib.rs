//! Fixtures shared by the kernel benchmarks.

use enumtc_core::arith::Fp;
use enumtc_core::koszul::GradedSequence;
use enumtc_core::restriction::{phi_star_generators, SubgroupDatum};

/// The restricted generator sequence of a subgroup, with its exterior count.
pub fn restricted_sequence(datum: &SubgroupDatum) -> (GradedSequence<Fp>, u32) {
    let imgs = phi_star_generators(datum).expect("restriction of a built-in subgroup");
    let seq = GradedSequence::new(&datum.target, &datum.prime_field(), imgs).expect("homogeneous images");
    (seq, datum.exterior_count)
}
