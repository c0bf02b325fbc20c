mod common;

use graphdb_core::canonical::{automorphisms, canonical_form, canonical_key};
use graphdb_core::codecs::{graph6_decode, graph6_encode};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn key_ignores_labels(seed in any::<u64>(), n in 1usize..=12, p in 0.05f64..0.95) {
        let mut rng = common::rng(seed);
        let g = common::random_graph(&mut rng, n, p);
        let perm = common::random_permutation(&mut rng, n);
        prop_assert_eq!(canonical_key(&g), canonical_key(&common::permute(&g, &perm)));
    }

    #[test]
    fn canonical_graph_is_a_relabeling(seed in any::<u64>(), n in 1usize..=9) {
        let mut rng = common::rng(seed);
        let g = common::random_graph(&mut rng, n, 0.4);
        let form = canonical_form(&g);
        let relabeled = common::permute(&g, form.labeling.as_slice());
        prop_assert_eq!(graph6_encode(&relabeled).unwrap(), form.graph6.clone());
        prop_assert_eq!(canonical_key(&graph6_decode(&form.graph6).unwrap()), form.graph6);
    }
}

#[test]
fn automorphism_counts() {
    let p = automorphisms(&common::petersen());
    assert_eq!(p.group_size, 120u32.into());
    assert_eq!(p.orbit_count(), 1);
    let c = automorphisms(&common::chvatal());
    assert_eq!(c.group_size, 8u32.into());
}

#[test]
fn classes_match_counting() {
    let levels = common::all_graphs(6);
    for n in 1..=6 {
        assert_eq!(levels[n].len() as u64, common::polya_graph_count(n));
    }
}
