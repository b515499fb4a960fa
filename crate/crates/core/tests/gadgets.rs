use std::collections::BTreeSet;

use planar_seq_core::gadgets::{arches, equaliser, indefinite_or, negator, or_gadget, Gadget};
use planar_seq_core::sequence::{analyze, is_housing_sequence, AllocationSet, ScaleCaps};
use planar_seq_core::village::path_edge;
use proptest::prelude::*;

fn caps() -> ScaleCaps {
    ScaleCaps::default()
}

fn alloc(g: &Gadget) -> AllocationSet {
    analyze(&g.sequence, &caps())
        .unwrap()
        .allocation(&g.village())
        .unwrap()
}

fn pair() -> impl Strategy<Value = (usize, usize, usize)> {
    (2usize..=5).prop_flat_map(|m| (Just(m), 1..m)).prop_flat_map(|(m, i)| (Just(m), Just(i), i + 1..=m))
}

#[test]
fn or_allocation_and_count() {
    for m in [3, 6] {
        for t in 1..=m / 3 {
            let g = or_gadget(m, t).unwrap();
            let a = analyze(&g.sequence, &caps()).unwrap();
            assert!(a.embeddable());
            let want = AllocationSet::filtered(g.village().houses.clone(), |f| f.values().any(|&b| b));
            assert_eq!(a.allocation(&g.village()).unwrap(), want, "m={m} t={t}");
            let r = is_housing_sequence(&g.sequence, m, &g.village().houses, &caps()).unwrap();
            assert!(r.certified, "{:?}", r.checks);
        }
    }
}

#[test]
fn or_arches_stay_local() {
    let g = or_gadget(6, 2).unwrap();
    let want: BTreeSet<_> = [(4, 5), (5, 6)].into_iter().collect();
    assert_eq!(arches(&g.sequence, &g.village()).unwrap(), want);
}

#[test]
fn indefinite_prefix_is_embeddable() {
    let g = indefinite_or(3, 1).unwrap();
    let p = g.prefix();
    assert_eq!(p.len(), 13);
    assert!(analyze(&p, &caps()).unwrap().embeddable());
}

#[test]
fn sizes_grow_linearly() {
    let sizes: Vec<usize> = (2..=6).map(|m| equaliser(m, 1, 2).unwrap().sequence.size()).collect();
    let steps: BTreeSet<usize> = sizes.windows(2).map(|w| w[1] - w[0]).collect();
    assert_eq!(steps.len(), 1, "{sizes:?}");
    let or: Vec<usize> = [3, 6, 9].iter().map(|&m| or_gadget(m, 1).unwrap().sequence.size()).collect();
    assert_eq!(or[2] - or[1], or[1] - or[0], "{or:?}");
}

#[test]
fn gadget_json_round_trip() {
    for g in [equaliser(3, 1, 3).unwrap(), negator(2, 1, 2).unwrap(), or_gadget(3, 1).unwrap()] {
        let text = serde_json::to_string(&g).unwrap();
        let back: Gadget = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn equaliser_everywhere((m, i, j) in pair()) {
        let g = equaliser(m, i, j).unwrap();
        let a = analyze(&g.sequence, &caps()).unwrap();
        prop_assert_eq!(a.count_up_to_reflection(), 2);
        let want = AllocationSet::filtered(g.village().houses.clone(), |f| f[&i] == f[&j]);
        prop_assert_eq!(a.allocation(&g.village()).unwrap(), want);
        prop_assert_eq!(arches(&g.sequence, &g.village()).unwrap(), [(i, j)].into_iter().collect());
        let r = is_housing_sequence(&g.sequence, m, &g.village().houses, &caps()).unwrap();
        prop_assert!(r.certified);
    }

    #[test]
    fn negator_everywhere((m, i, j) in pair()) {
        let g = negator(m, i, j).unwrap();
        let want = AllocationSet::filtered(g.village().houses.clone(), |f| f[&i] != f[&j]);
        prop_assert_eq!(alloc(&g), want);
        let prefix = format!("neq{}-{}.", i, j);
        let house = [path_edge(i, 6), path_edge(j, 1)];
        let ok = g.roles.values().all(|l| l.starts_with(&prefix) || house.contains(l));
        prop_assert!(ok, "{:?}", g.roles);
    }
}

#[test]
fn reports_round_trip() {
    use planar_seq_core::verify::{verify_lemma, VerificationReport, VerifyParams};
    for name in ["eq-special", "or-special", "indefinite-or", "joint-allocation"] {
        let r = verify_lemma(name, &VerifyParams::default()).unwrap();
        let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r, "{name}");
    }
}
