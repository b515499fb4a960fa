use std::collections::{BTreeMap, BTreeSet};

use planar_seq_core::embedding::{enumerate_embeddings, RotationSystem};
use planar_seq_core::export::export_svg;
use planar_seq_core::verify::village_profiles;
use planar_seq_core::village::{inhabitant, rim_vertex, VillageHandle};
use proptest::prelude::*;

/// The inhabitant is inside its house exactly when it shares a face with the
/// middle foundation vertex, which faces the hub only through its spoke.
fn face_oracle(v: &VillageHandle, e: &RotationSystem) -> BTreeMap<usize, bool> {
    let faces = e.face_walks().unwrap();
    v.houses
        .iter()
        .map(|&i| {
            let w = inhabitant(i);
            let mid = rim_vertex(v.m, 4 * i - 2);
            let shared = faces
                .iter()
                .any(|f| f.iter().any(|(x, _)| *x == w) && f.iter().any(|(x, _)| *x == mid));
            (i, shared)
        })
        .collect()
}

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

#[test]
fn three_houses_give_every_profile() {
    let p = village_profiles(3, &set(&[1, 2, 3])).unwrap();
    assert_eq!(p.len(), 8);
    let all: BTreeSet<String> = (0..8).map(|b: u32| format!("{:03b}", b)).collect();
    assert_eq!(p, all);
}

#[test]
fn truth_values_agree_with_faces() {
    let v = VillageHandle::build(3, &set(&[1, 2, 3])).unwrap();
    assert_eq!(v.graph.vertex_count(), 31);
    assert_eq!(v.graph.edge_count(), 51);
    for c in enumerate_embeddings(&v.graph).unwrap() {
        let e = &c.representative;
        let t = v.truth_values(e).unwrap();
        assert_eq!(t, face_oracle(&v, e));
        assert_eq!(v.truth_values(&e.reflect()).unwrap(), t);
    }
}

#[test]
fn svg_marks_the_homeless_inhabitant() {
    let v = VillageHandle::build(3, &set(&[1, 2, 3])).unwrap();
    let e = enumerate_embeddings(&v.graph)
        .unwrap()
        .into_iter()
        .map(|c| c.representative)
        .find(|e| v.truth_values(e).unwrap().values().copied().collect::<Vec<_>>() == [true, true, false])
        .unwrap();
    let svg = export_svg(&e, Some(&v)).unwrap();
    let class_of = |w: &str| {
        let tag = format!("<title>{w}</title>");
        let line = svg.lines().find(|l| l.contains(&tag)).unwrap();
        line.split('"').nth(1).unwrap().to_string()
    };
    assert_eq!(class_of(&inhabitant(1)), "inside");
    assert_eq!(class_of(&inhabitant(2)), "inside");
    assert_eq!(class_of(&inhabitant(3)), "outside");
    assert_eq!(svg.matches("class=\"house\"").count(), 18);
    assert_eq!(svg.matches("class=\"planet\"").count(), 24);
}

fn village() -> impl Strategy<Value = (usize, BTreeSet<usize>)> {
    (1usize..=4).prop_flat_map(|m| (Just(m), prop::collection::btree_set(1..=m, 0..=m.min(4))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn one_class_per_profile((m, houses) in village()) {
        let v = VillageHandle::build(m, &houses).unwrap();
        let classes = enumerate_embeddings(&v.graph).unwrap();
        prop_assert_eq!(classes.len(), 1 << houses.len());
        let mut seen = BTreeSet::new();
        for c in &classes {
            let t = v.truth_values(&c.representative).unwrap();
            prop_assert_eq!(&t, &face_oracle(&v, &c.representative));
            prop_assert!(seen.insert(t));
        }
    }

    #[test]
    fn role_table_round_trips((m, houses) in village()) {
        let v = VillageHandle::build(m, &houses).unwrap();
        let t = v.role_table();
        let text = serde_json::to_string(&t).unwrap();
        let back: BTreeMap<String, serde_json::Value> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, t);
    }
}
