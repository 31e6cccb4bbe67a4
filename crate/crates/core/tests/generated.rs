use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tracecone_core::document::{emit, parse, Kind};
use tracecone_core::elliott::{compose_e_morphisms, validate_e_morphism, validate_e_object_with};
use tracecone_core::functors::{apply_f, apply_g, transport_s_to_e};
use tracecone_core::generate::{block_object, gen_random, generate, random_s_morphism, GenOptions};
use tracecone_core::stevens::{compose_s_morphisms, validate_s_morphism, validate_s_object};
use tracecone_core::{Document, EMorphism, SMorphism};

fn opts(seed: u64) -> GenOptions {
    GenOptions { blocks: (seed % 4) as usize, cone_dim: 1 + (seed % 2) as usize, phantom: (seed % 3) as usize }
}

fn context(g: &tracecone_core::generate::Generated) -> (&Document, &Document) {
    let (a, b) = g.context.as_ref().expect("morphisms come with context");
    (a, b)
}

#[test]
fn generated_documents_validate() {
    for seed in 0..500u64 {
        let o = opts(seed);
        match gen_random(Kind::SObject, seed, o).unwrap() {
            Document::SObject(s) => assert!(validate_s_object(&s).is_ok(), "seed {seed}"),
            other => panic!("wrong kind {:?}", other.kind()),
        }
        match gen_random(Kind::EObject, seed, o).unwrap() {
            Document::EObject(e) => {
                assert_eq!(e.x.phantom_dim, o.phantom);
                let r = validate_e_object_with(&e, 5, |x, a, b| x.meet(a, b));
                assert!(r.is_ok(), "seed {seed}: {r}");
            }
            other => panic!("wrong kind {:?}", other.kind()),
        }
        let g = generate(Kind::SMorphism, seed, o).unwrap();
        let (Document::SMorphism(m), (Document::SObject(a), Document::SObject(b))) = (&g.document, context(&g)) else {
            panic!("wrong kinds for seed {seed}");
        };
        assert!(validate_s_morphism(m, a, b).is_ok(), "seed {seed}");
        let g = generate(Kind::EMorphism, seed, o).unwrap();
        let (Document::EMorphism(m), (Document::EObject(a), Document::EObject(b))) = (&g.document, context(&g)) else {
            panic!("wrong kinds for seed {seed}");
        };
        let r = validate_e_morphism(m, a, b);
        assert!(r.is_ok(), "seed {seed}: {r}");
    }
}

#[test]
fn generation_rejects_oversized_requests() {
    assert!(block_object(1, GenOptions { blocks: 7, cone_dim: 1, phantom: 0 }).is_err());
    assert!(block_object(1, GenOptions { blocks: 2, cone_dim: 0, phantom: 0 }).is_err());
}

#[test]
fn stevens_composition_and_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for k in 0..100u64 {
        let objs: Vec<_> = (0..3).map(|i| block_object(k * 3 + i, opts(k * 3 + i)).unwrap()).collect();
        let m1 = random_s_morphism(&mut rng, &objs[0], &objs[1], false);
        let m2 = random_s_morphism(&mut rng, &objs[1], &objs[2], false);
        let (a, b, c) = (&objs[0].object, &objs[1].object, &objs[2].object);
        assert!(validate_s_morphism(&m1, a, b).is_ok());
        assert!(validate_s_morphism(&m2, b, c).is_ok());
        let m = compose_s_morphisms(&m2, &m1).unwrap().normalized(&c.k1);
        let r = validate_s_morphism(&m, a, c);
        assert!(r.is_ok(), "pair {k}: {r}");

        let n1 = m1.clone().normalized(&b.k1);
        assert_eq!(compose_s_morphisms(&SMorphism::identity(b), &m1).unwrap().normalized(&b.k1), n1);
        assert_eq!(compose_s_morphisms(&m1, &SMorphism::identity(a)).unwrap().normalized(&b.k1), n1);
    }
}

#[test]
fn transport_preserves_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for k in 0..60u64 {
        let objs: Vec<_> = (0..3).map(|i| block_object(1000 + k * 3 + i, opts(k * 3 + i)).unwrap()).collect();
        let (a, b, c) = (&objs[0].object, &objs[1].object, &objs[2].object);
        let m1 = random_s_morphism(&mut rng, &objs[0], &objs[1], false);
        let m2 = random_s_morphism(&mut rng, &objs[1], &objs[2], false);
        let whole = compose_s_morphisms(&m2, &m1).unwrap().normalized(&c.k1);
        let t = transport_s_to_e(&whole, a, c).unwrap();
        let t1 = transport_s_to_e(&m1, a, b).unwrap();
        let t2 = transport_s_to_e(&m2, b, c).unwrap();
        let parts = compose_e_morphisms(&t2, &t1).unwrap().normalized(&c.k1);
        assert_eq!(t, parts, "pair {k}");
        let fa = apply_f(a).unwrap();
        assert_eq!(transport_s_to_e(&SMorphism::identity(a), a, a).unwrap(), EMorphism::identity(&fa));
        assert_eq!(apply_g(&fa).unwrap(), *a);
    }
}

fn any_kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::SObject), Just(Kind::EObject), Just(Kind::SMorphism), Just(Kind::EMorphism)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn documents_survive_emit_and_parse(kind in any_kind(), seed in 0..10_000u64) {
        let doc = gen_random(kind, seed, opts(seed)).unwrap();
        let text = emit(&doc);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(emit(&back), text);
    }
}
