use std::collections::{BTreeSet, VecDeque};

use itertools::Itertools;
use proptest::prelude::*;

use tracecone_core::ordered_groups::{
    compose_homs, enumerate_ideals, in_group_p, support, validate_scaled_hom, IntMatrix,
};
use tracecone_core::{PositiveHom, Scale, ScaledOrderedGroup, Support};

/// The part of the subgroup generated by `{v : 0 <= v <= p}` inside the box
/// `|x_i| <= bound`, by breadth-first search.
fn generated_by_box(p: &[i64], bound: i64) -> BTreeSet<Vec<i64>> {
    let n = p.len();
    let gens: Vec<Vec<i64>> = p
        .iter()
        .map(|&x| 0..=x)
        .multi_cartesian_product()
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let start = vec![0i64; n];
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for g in &gens {
            for sign in [1, -1] {
                let w: Vec<i64> = v.iter().zip(g).map(|(a, b)| a + sign * b).collect();
                if w.iter().all(|x| x.abs() <= bound) && seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
    }
    seen
}

#[test]
fn in_group_p_matches_generated_subgroup() {
    for n in 1..=3usize {
        for p in (0..n).map(|_| 0..=2i64).multi_cartesian_product() {
            let reachable = generated_by_box(&p, 5);
            for e in (0..n).map(|_| -5..=5i64).multi_cartesian_product() {
                assert_eq!(in_group_p(&e, &p).unwrap(), reachable.contains(&e), "e={e:?} p={p:?}");
            }
        }
    }
}

#[test]
fn in_group_p_examples() {
    assert!(in_group_p(&[1, -2, 0], &[1, 1, 0]).unwrap());
    assert!(!in_group_p(&[0, 0, 1], &[1, 1, 0]).unwrap());
    assert!(in_group_p(&[0, 0, 0], &[0, 0, 0]).unwrap());
    assert!(in_group_p(&[1, 0], &[1, 1, 0]).is_err());
}

/// Families of 0/1 vectors that contain 0, are downward closed, and are
/// closed under sums that stay 0/1.
fn hereditary_subsemigroups(n: usize) -> BTreeSet<Support> {
    let cube: Vec<u32> = (0..1u32 << n).collect();
    let mut out = BTreeSet::new();
    for family in 0u64..1 << cube.len() {
        let has = |v: u32| family >> v & 1 == 1;
        if !has(0) {
            continue;
        }
        let downward = cube.iter().all(|&v| !has(v) || cube.iter().all(|&w| w & !v != 0 || has(w)));
        let additive = cube.iter().all(|&a| cube.iter().all(|&b| a & b != 0 || !has(a) || !has(b) || has(a | b)));
        if downward && additive {
            let top = cube.iter().copied().filter(|&v| has(v)).fold(0, |a, b| a | b);
            out.insert(Support(top));
        }
    }
    out
}

#[test]
fn enumerate_ideals_by_definition() {
    for n in 0..=4 {
        let got = enumerate_ideals(&ScaledOrderedGroup::unscaled(n)).unwrap();
        let want = hereditary_subsemigroups(n);
        assert_eq!(got.len(), want.len());
        assert_eq!(got.iter().copied().collect::<BTreeSet<_>>(), want);
    }
    let two = enumerate_ideals(&ScaledOrderedGroup::unscaled(2)).unwrap();
    assert_eq!(two, vec![Support(0), Support(1), Support(2), Support(3)]);
    assert!(enumerate_ideals(&ScaledOrderedGroup::unscaled(17)).is_err());
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(0..3i64, cols), rows)
        .prop_map(move |r| IntMatrix::from_rows(&r, cols).unwrap())
}

fn scaled_group(rank: usize) -> impl Strategy<Value = ScaledOrderedGroup> {
    prop_oneof![
        Just(ScaledOrderedGroup::unscaled(rank)),
        prop::collection::vec(0..4i64, rank).prop_map(move |u| ScaledOrderedGroup::new(rank, Scale::Unit(u)).unwrap()),
    ]
}

/// A hom into `Unit(v)` brute-forced on the scale interval of the source.
fn maps_scale_into_scale(m: &IntMatrix, g: &ScaledOrderedGroup, h: &ScaledOrderedGroup) -> bool {
    let Scale::Unit(u) = &g.scale else {
        // All into a bounded scale: a single unit vector must already fit
        return matches!(h.scale, Scale::All) || (0..m.cols).all(|i| (0..m.rows).all(|j| m.get(j, i) == 0));
    };
    u.iter()
        .map(|&x| 0..=x)
        .multi_cartesian_product()
        .all(|x| h.in_scale(&m.apply(&x).unwrap()))
}

proptest! {
    #[test]
    fn support_of_sum_is_union(p in prop::collection::vec(0..4i64, 4), q in prop::collection::vec(0..4i64, 4)) {
        let sum: Vec<i64> = p.iter().zip(&q).map(|(a, b)| a + b).collect();
        prop_assert_eq!(support(&sum, 4).unwrap(), support(&p, 4).unwrap().union(support(&q, 4).unwrap()));
    }

    #[test]
    fn scale_check_matches_brute_force(
        (m, g, h) in (1..4usize, 1..4usize).prop_flat_map(|(a, b)| (int_matrix(b, a), scaled_group(a), scaled_group(b)))
    ) {
        let r = validate_scaled_hom(&PositiveHom::new(m.clone()), &g, &h);
        prop_assert_eq!(r.is_ok(), maps_scale_into_scale(&m, &g, &h), "{}", r);
    }

    #[test]
    fn scale_preservation_composes(
        (m1, m2, a, b, c) in (1..4usize, 1..4usize, 1..4usize).prop_flat_map(|(x, y, z)| {
            (int_matrix(y, x), int_matrix(z, y), scaled_group(x), scaled_group(y), scaled_group(z))
        })
    ) {
        let (p1, p2) = (PositiveHom::new(m1), PositiveHom::new(m2));
        if validate_scaled_hom(&p1, &a, &b).is_ok() && validate_scaled_hom(&p2, &b, &c).is_ok() {
            let r = validate_scaled_hom(&compose_homs(&p2, &p1).unwrap(), &a, &c);
            prop_assert!(r.is_ok(), "{}", r);
        }
    }
}
