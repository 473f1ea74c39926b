use std::collections::BTreeSet;

use omega_core::descriptors::{MonoidDescriptor, PreorderDescriptor};
use omega_core::maps::PartialMap;
use omega_core::verifier::{verify_sandwich, Outcome, DEFAULT_CEILING};
use omega_core::witnesses::{self, conjugate_pointed, factor_type3b, WitnessManifest, TAGS};

/// Window and codomain pairs exercised for each tag.
fn windows(tag: &str) -> Vec<(u64, u64)> {
    match tag {
        "tree" => vec![(2, 2), (3, 3), (4, 2)],
        _ => vec![(2, 2), (3, 3), (4, 4)],
    }
}

#[test]
fn every_tag_passes_on_small_windows() {
    for tag in TAGS {
        let w = witnesses::by_tag(tag, 0).unwrap();
        for (n, c) in windows(tag) {
            let r = verify_sandwich(&w, n, c, DEFAULT_CEILING).unwrap_or_else(|e| panic!("{tag} at {n}: {e}"));
            assert_eq!(r.outcome, Outcome::Pass, "{tag} at window {n}: {:?}", r.counterexample);
            assert_eq!(r.stats.realized, r.stats.targets);
        }
    }
}

#[test]
fn passing_is_closed_under_smaller_windows() {
    for tag in TAGS {
        let w = witnesses::by_tag(tag, 0).unwrap();
        for n in 1..4 {
            let big = verify_sandwich(&w, n + 1, n, DEFAULT_CEILING).unwrap();
            let small = verify_sandwich(&w, n, n, DEFAULT_CEILING).unwrap();
            if big.outcome == Outcome::Pass {
                assert_eq!(small.outcome, Outcome::Pass, "{tag}: pass at {} but not at {n}", n + 1);
            }
        }
    }
}

#[test]
fn manifests_round_trip_and_verify_identically() {
    for tag in TAGS {
        let w = witnesses::by_tag(tag, 0).unwrap();
        let (n, c) = (3, 3);
        let manifest = w.manifest(n, c).unwrap();
        let text = serde_json::to_string(&manifest).unwrap();
        let back: WitnessManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back, manifest, "{tag}");
        assert_eq!(manifest.window_evals.left.len() as u64, n);
        assert_eq!(manifest.window_evals.right.len() as u64, manifest.search.codomain);
        let rebuilt = back.into_witness();
        let a = verify_sandwich(&w, n, c, DEFAULT_CEILING).unwrap();
        let b = verify_sandwich(&rebuilt, n, c, DEFAULT_CEILING).unwrap();
        assert_eq!((a.outcome, a.stats.targets), (b.outcome, b.stats.targets), "{tag}");
        assert!(verify_sandwich(&rebuilt, n + 1, c, DEFAULT_CEILING).is_err());
    }
}

#[test]
fn pointed_blocks_for_other_gammas() {
    for gamma in [1, 3] {
        let w = witnesses::rho_gamma_sandwich(gamma);
        let r = verify_sandwich(&w, 4, 4, DEFAULT_CEILING).unwrap();
        assert_eq!(r.outcome, Outcome::Pass, "gamma {gamma}");
    }
}

#[test]
fn partition_embedding_of_pointed_monoids() {
    for gamma in [0, 2] {
        let m = MonoidDescriptor::preorder(PreorderDescriptor::pointed(gamma));
        let w = witnesses::partition_embed(m).unwrap();
        assert_eq!(
            verify_sandwich(&w, 4, 4, DEFAULT_CEILING).unwrap().outcome,
            Outcome::Pass
        );
    }
}

#[test]
fn type3b_factorization_reassembles() {
    // h sends everything into Γ = {0, 1}, fixing Γ
    let gamma: BTreeSet<u64> = [0, 1].into_iter().collect();
    let h = PartialMap::from_pairs([(0, 0), (1, 1), (2, 0), (3, 1), (4, 1), (5, 0)]);
    let f = factor_type3b(&h, &gamma).unwrap();
    for (x, v) in h.iter() {
        assert_eq!(f.apply(x), Some(v), "at {x}");
    }
    let (t, note) = conjugate_pointed(0, 5);
    assert_eq!((t.apply(0), t.apply(5), t.apply(2)), (5, 0, 2));
    assert!(note.is_none());
}

#[test]
fn pointed_factors_are_pointed_members() {
    let gamma: BTreeSet<u64> = [0, 1].into_iter().collect();
    let h = PartialMap::from_pairs([(0, 1), (1, 1), (2, 0), (3, 1), (4, 4), (5, 0)]);
    let f = factor_type3b(&h, &gamma).unwrap();
    for x in h.domain() {
        assert_eq!(f.apply(x), h.get(x));
    }
    for g in &f.pointed {
        let m = MonoidDescriptor::preorder(PreorderDescriptor::pointed(g.alpha));
        assert!(m.prefix_membership(&g.map).is_yes(), "factor for {} rejected", g.alpha);
    }
}

#[test]
fn conjugation_matches_pointed_prefix_sets() {
    let domain: BTreeSet<u64> = (0..4).collect();
    for (alpha, beta) in [(0, 2), (1, 3), (2, 2)] {
        let (t, _) = conjugate_pointed(alpha, beta);
        let of = |g: u64| {
            MonoidDescriptor::preorder(PreorderDescriptor::pointed(g))
                .enumerate_prefix_maps(&domain, 4)
                .unwrap()
                .into_iter()
                .map(|p| p.iter().collect::<BTreeSet<_>>())
                .collect::<BTreeSet<_>>()
        };
        // p ↦ t⁻¹·p·t, with t an involution
        let conjugated: BTreeSet<BTreeSet<(u64, u64)>> = of(beta)
            .into_iter()
            .map(|p| p.into_iter().map(|(x, v)| (t.apply(x), t.apply(v))).collect())
            .collect();
        assert_eq!(conjugated, of(alpha), "alpha {alpha}, beta {beta}");
    }
}
