mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use planar_seq_core::embedding::{enumerate_embeddings, enumerate_oriented, oracle_enumerate, RotationSystem};
use planar_seq_core::gadgets::{equaliser, negator, or_gadget};
use planar_seq_core::graph::LabeledGraph;
use planar_seq_core::sequence::{analyze, ScaleCaps};
use proptest::prelude::*;

fn euler(e: &RotationSystem) -> i64 {
    let g = e.graph();
    let f = e.trace_faces().unwrap().len();
    g.vertex_count() as i64 - g.edge_count() as i64 + f as i64
}

#[test]
fn corpus_shape() {
    let c = common::corpus();
    assert!(c.len() >= 30, "{}", c.len());
    for (name, g) in &c {
        assert!(g.edge_count() <= 14, "{name}");
        assert!(g.is_two_connected(), "{name}");
    }
}

#[test]
fn enumeration_matches_oracle() {
    for (name, g) in common::corpus() {
        let fast = enumerate_embeddings(&g).unwrap();
        let slow = oracle_enumerate(&g, 14).unwrap();
        assert_eq!(fast.len(), slow.len(), "{name}");
        let a: BTreeSet<_> = fast.iter().map(|c| c.representative.class_key()).collect();
        let b: BTreeSet<_> = slow.iter().map(|c| c.representative.class_key()).collect();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn known_class_counts() {
    let counts: Vec<(String, usize)> = common::corpus()
        .into_iter()
        .map(|(n, g)| (n, enumerate_embeddings(&g).unwrap().len()))
        .collect();
    let get = |n: &str| counts.iter().find(|(m, _)| m == n).unwrap().1;
    // 3-connected graphs embed uniquely; theta graphs with k paths have
    // (k-1)!/2 classes, at least one.
    for n in ["W3", "W5", "W7", "cube", "octahedron", "prism3", "bipyramid"] {
        assert_eq!(get(n), 1, "{n} {counts:?}");
    }
    assert_eq!(get("theta[2, 2, 2, 2]"), 3);
    assert_eq!(get("K2,5"), 12);
    // two flippable K4 halves and a real edge around one separation pair
    assert_eq!(get("K4+K4"), 4);
}

#[test]
fn euler_on_corpus_and_contractions() {
    for (name, g) in common::corpus() {
        for e in enumerate_oriented(&g, None).unwrap() {
            assert_eq!(e.genus().unwrap(), 0);
            assert_eq!(euler(&e), 2, "{name}");
            for l in g.edge_labels().iter() {
                let c = e.contract_in_embedding(l).unwrap();
                assert_eq!(c.genus().unwrap(), 0, "{name} / {l}");
                if c.graph().vertex_count() >= 2 {
                    assert_eq!(euler(&c), 2, "{name} / {l}");
                }
            }
        }
    }
}

#[test]
fn euler_on_gadget_states() {
    let caps = ScaleCaps::default();
    for s in [
        equaliser(2, 1, 2).unwrap().sequence,
        negator(3, 1, 3).unwrap().sequence,
        or_gadget(3, 1).unwrap().sequence,
    ] {
        let a = analyze(&s, &caps).unwrap();
        for i in 0..s.len() {
            for k in a.alive(i) {
                let e = a.state(i, k);
                assert_eq!(e.genus().unwrap(), 0);
                assert_eq!(euler(e), 2);
            }
        }
    }
}

#[test]
fn rotation_json_round_trip() {
    for (_, g) in common::corpus().into_iter().take(12) {
        for c in enumerate_embeddings(&g).unwrap() {
            let text = serde_json::to_string(&c.representative).unwrap();
            let back: RotationSystem = serde_json::from_str(&text).unwrap();
            assert_eq!(back, c.representative);
        }
    }
}

fn corpus_graph() -> impl Strategy<Value = Arc<LabeledGraph>> {
    let c = common::corpus();
    (0..c.len()).prop_map(move |i| c[i].1.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reflection_is_an_involution(g in corpus_graph(), pick in any::<prop::sample::Index>()) {
        let all = enumerate_oriented(&g, None).unwrap();
        let e = &all[pick.index(all.len())];
        let r = e.reflect();
        prop_assert_eq!(r.genus().unwrap(), 0);
        prop_assert_eq!(&r.reflect(), e);
        prop_assert_eq!(r.class_key(), e.class_key());
        prop_assert!(all.contains(&r));
    }

    #[test]
    fn repeated_contraction_stays_spherical(
        g in corpus_graph(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..6),
    ) {
        let mut e = enumerate_oriented(&g, None).unwrap().remove(0);
        for p in picks {
            let labels: Vec<String> = e.graph().edge_labels().iter().cloned().collect();
            if e.graph().vertex_count() < 3 {
                break;
            }
            e = e.contract_in_embedding(&labels[p.index(labels.len())]).unwrap();
            prop_assert_eq!(e.genus().unwrap(), 0);
            prop_assert_eq!(euler(&e), 2);
        }
    }

    #[test]
    fn deletion_keeps_genus(g in corpus_graph(), pick in any::<prop::sample::Index>()) {
        let e = enumerate_oriented(&g, None).unwrap().remove(0);
        let labels: Vec<String> = g.edge_labels().iter().cloned().collect();
        let drop = &labels[pick.index(labels.len())];
        let keep = labels.iter().filter(|l| *l != drop).cloned().collect();
        let d = e.induced_embedding(&keep).unwrap();
        prop_assert_eq!(d.genus().unwrap(), 0);
    }
}
