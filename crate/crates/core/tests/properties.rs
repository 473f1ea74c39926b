use std::collections::BTreeSet;

use proptest::prelude::*;

use omega_core::classifier::{canonical_preorders, classify_preorder, random_patches};
use omega_core::descriptors::{two_sided_sigma1, MonoidDescriptor};
use omega_core::maps::{compose, MoietyAllocator, PartialMap, SelfMap, Window};
use omega_core::verifier::{
    diagonal_witness, oracle_sample_descriptors, replay_counterexample, verify_sandwich, word_image_bound,
    DiagonalData, Outcome, DEFAULT_CEILING,
};
use omega_core::witnesses::{self, MapMutation, Side};

const W: u64 = 8;

fn table() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..W, W as usize)
}

fn table_map(t: Vec<u64>) -> SelfMap {
    SelfMap::from_table(t, |x| x)
}

proptest! {
    #[test]
    fn composition_is_associative(f in table(), g in table(), h in table()) {
        let (f, g, h) = (table_map(f), table_map(g), table_map(h));
        let left = compose(&compose(&f, &g), &h);
        let right = compose(&f, &compose(&g, &h));
        prop_assert_eq!(left.window(Window(W)), right.window(Window(W)));
        for x in 0..W {
            prop_assert_eq!(left.apply(x), h.apply(g.apply(f.apply(x))));
        }
    }

    #[test]
    fn dyadic_owner_inverts_element(i in 0u64..20, k in 0u64..1000) {
        let b = MoietyAllocator::Dyadic.element(i, k);
        prop_assert_eq!(b, (1u64 << i) * (2 * k + 1) - 1);
        prop_assert_eq!(MoietyAllocator::Dyadic.owner(b), (i, k));
    }

    #[test]
    fn membership_is_closed_under_restriction(
        which in 0usize..22,
        pairs in prop::collection::btree_map(0u64..6, 0u64..7, 0..6),
    ) {
        let samples = oracle_sample_descriptors();
        let m = &samples[which % samples.len()];
        let p = PartialMap::from_pairs(pairs.clone());
        if m.prefix_membership(&p).is_yes() {
            for drop in pairs.keys() {
                let q = PartialMap::from_pairs(pairs.iter().filter(|(k, _)| *k != drop).map(|(&k, &v)| (k, v)));
                prop_assert!(m.prefix_membership(&q).is_yes(), "{:?} accepts {:?} but not {:?}", m, p, q);
            }
        }
    }

    #[test]
    fn partial_map_json_round_trip(pairs in prop::collection::btree_map(0u64..100, 0u64..100, 0..10)) {
        let p = PartialMap::from_pairs(pairs);
        let back: PartialMap = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(p, back);
    }

    #[test]
    fn diagonal_prefix_is_decreasing_and_escapes(
        tables in prop::collection::vec(prop::collection::vec(0u64..40, 40), 1..3),
        depth in 1u64..4,
    ) {
        let t: Vec<SelfMap> = tables.into_iter().map(table_map).collect();
        let lambda = t.len() as u64 + 1;
        let r = diagonal_witness(&t, lambda, depth, DEFAULT_CEILING).unwrap();
        prop_assert_eq!(r.outcome, Outcome::Pass);
        let d: DiagonalData = serde_json::from_value(r.witness).unwrap();
        prop_assert!(d.prefix.iter().all(|(a, v)| v <= a));
        for c in &d.checkpoints {
            prop_assert!(!c.excluded.contains(&c.value));
            prop_assert_eq!(d.prefix.get(c.point), Some(c.value));
        }
    }

    #[test]
    fn word_bound_never_grows_when_extended(
        kinds in prop::collection::vec(0u8..4, 1..5),
        raw in prop::collection::vec(table(), 5),
    ) {
        let word: Vec<(MonoidDescriptor, PartialMap)> = kinds
            .iter()
            .zip(raw)
            .map(|(&k, t)| factor(k, t))
            .collect();
        let mut last: Option<u64> = None;
        for len in 1..=word.len() {
            let r = word_image_bound(&word[..len], W).unwrap();
            prop_assert_eq!(r.outcome, Outcome::Pass);
            let bound = r.witness["bound"].as_u64();
            if let Some(prev) = last {
                prop_assert!(bound.is_some_and(|b| b <= prev));
            }
            if bound.is_some() {
                last = bound;
            }
        }
    }

    #[test]
    fn mutated_failures_replay(by in 1u64..4, value in 0u64..6, tag in 0usize..4) {
        let tags = ["perm-map", "order-into-partition", "pointed-blocks", "square-blocks"];
        let w = witnesses::by_tag(tags[tag], 0).unwrap();
        for m in [
            MapMutation::ShiftValues { side: Side::Right, by },
            MapMutation::OverrideOdd { side: Side::Right, value },
        ] {
            let bad = w.mutated(m);
            let r = verify_sandwich(&bad, 3, 3, DEFAULT_CEILING).unwrap();
            if r.outcome == Outcome::Fail {
                let t = r.counterexample.unwrap();
                prop_assert!(!replay_counterexample(&bad, &t, 3, 3, DEFAULT_CEILING).unwrap());
            }
        }
    }
}

/// A window-`W` factor accepted by one of four monoids.
fn factor(kind: u8, t: Vec<u64>) -> (MonoidDescriptor, PartialMap) {
    let pairs = |f: &dyn Fn(u64, u64) -> u64| PartialMap::from_pairs((0..W).map(|x| (x, f(x, t[x as usize]))));
    match kind {
        0 => (MonoidDescriptor::FullE, pairs(&|_, v| v)),
        1 => (MonoidDescriptor::FiniteImage { n: 2 }, pairs(&|_, v| v % 3)),
        2 => (MonoidDescriptor::FiniteImage { n: 4 }, pairs(&|_, v| v % 5)),
        _ => (
            MonoidDescriptor::TwoSidedExample,
            pairs(&|x, v| if two_sided_sigma1(x) { v % 2 } else { 2 + v % 2 }),
        ),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn patches_preserve_type(seed in any::<u64>(), which in 0usize..5) {
        let base = canonical_preorders()[which].clone();
        let ty = classify_preorder(&base).unwrap().tag;
        for p in random_patches(&base, 5, seed) {
            prop_assert_eq!(classify_preorder(&p).unwrap().tag, ty);
        }
    }
}

#[test]
fn orbit_sets_match_membership() {
    // forward orbits computed structurally agree with single-point membership
    for m in oracle_sample_descriptors() {
        for a in 0..6 {
            let via_orbit = m.forward_orbit(a, 12).unwrap().members;
            let via_membership: BTreeSet<u64> = (0..12)
                .filter(|&v| m.prefix_membership(&PartialMap::from_pairs([(a, v)])).is_yes())
                .collect();
            assert_eq!(via_orbit, via_membership, "{m:?} at {a}");
        }
    }
}
