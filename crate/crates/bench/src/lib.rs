//! Fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tracecone_core::functors::apply_f;
use tracecone_core::generate::{block_object, random_s_morphism, GenOptions};
use tracecone_core::{EObject, Rational, SMorphism, SObject, Support, XElement};

pub fn options(blocks: usize) -> GenOptions {
    GenOptions { blocks, cone_dim: 2, phantom: 0 }
}

pub fn s_object(blocks: usize, seed: u64) -> SObject {
    block_object(seed, options(blocks)).expect("valid options").object
}

pub fn e_object(blocks: usize, seed: u64) -> EObject {
    apply_f(&s_object(blocks, seed)).expect("block objects are valid")
}

/// Random pairs of elements of the extended trace cone.
pub fn element_pairs(e: &EObject, count: usize, seed: u64) -> Vec<(XElement, XElement)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (e.x.random_element(&mut rng), e.x.random_element(&mut rng))).collect()
}

/// An endomorphism of a generated object, with the object.
pub fn s_endomorphism(blocks: usize, seed: u64) -> (SObject, SMorphism) {
    let b = block_object(seed, options(blocks)).expect("valid options");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_s_morphism(&mut rng, &b, &b, false);
    (b.object, m)
}

/// Restrictions of one trace on the full support to every singleton.
pub fn singleton_parts(e: &EObject, seed: u64) -> Vec<(Support, Vec<Rational>)> {
    let d = &e.x.family;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = d.full();
    let w: Vec<Rational> = (0..d.dim(full)).map(|_| tracecone_core::elliott::small_rational(&mut rng)).collect();
    (0..d.rank)
        .map(|i| {
            let s = Support::from_indices([i]);
            (s, d.restrict(&w, full, s).expect("full support contains every block"))
        })
        .collect()
}
