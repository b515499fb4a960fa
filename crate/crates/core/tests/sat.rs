use std::collections::{BTreeMap, BTreeSet};

use planar_seq_core::gadgets::{equaliser, negator, or_gadget};
use planar_seq_core::graph::EdgeSet;
use planar_seq_core::iso::a_fixing_subgraph_isomorphisms;
use planar_seq_core::sat::*;
use planar_seq_core::sequence::{analyze, validate_sequence, AllocationSet, HybridSequence, Mode, ScaleCaps};
use proptest::prelude::*;

fn pairs(xs: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    xs.iter().copied().collect()
}

fn range(n: usize) -> BTreeSet<usize> {
    (1..=n).collect()
}

fn allocation(s: &HybridSequence) -> AllocationSet {
    let a = analyze(s, &ScaleCaps::default()).unwrap();
    a.allocation(&s.village().unwrap()).unwrap()
}

#[test]
fn dimacs_examples() {
    let f = parse_dimacs("p cnf 2 1\n1 -2 0\n").unwrap();
    assert_eq!(f.clauses.len(), 1);
    assert_eq!(f.literals(), vec![1, -2]);
    assert_eq!(f.size(), 2);
    assert!(parse_dimacs("p cnf 1 1\n0\n").unwrap().trivially_unsat());
    assert!(matches!(parse_dimacs("p cnf x 1\n1 0\n"), Err(SatError::Parse { .. })));
}

#[test]
fn single_pair_is_the_equaliser() {
    let s = eq_housing_noncrossing(2, 2, &pairs(&[(1, 2)])).unwrap();
    assert_eq!(s.graphs, equaliser(2, 1, 2).unwrap().sequence.graphs);
    let s = neq_housing_noncrossing(2, 2, &pairs(&[(1, 2)])).unwrap();
    assert_eq!(s.graphs, negator(2, 1, 2).unwrap().sequence.graphs);
}

#[test]
fn two_nested_pairs() {
    let p = pairs(&[(1, 2), (3, 4)]);
    let eq = eq_housing_noncrossing(4, 4, &p).unwrap();
    assert_eq!(eq.len(), 9);
    let want = AllocationSet::filtered(range(4), |f| f[&1] == f[&2] && f[&3] == f[&4]);
    assert_eq!(want.len(), 4);
    assert_eq!(allocation(&eq), want);

    let neq = neq_housing_noncrossing(4, 4, &p).unwrap();
    let want = AllocationSet::filtered(range(4), |f| f[&1] != f[&2] && f[&3] != f[&4]);
    assert_eq!(allocation(&neq), want);

    let nested = eq_housing_noncrossing(4, 4, &pairs(&[(1, 4), (2, 3)])).unwrap();
    let want = AllocationSet::filtered(range(4), |f| f[&1] == f[&4] && f[&2] == f[&3]);
    assert_eq!(allocation(&nested), want);
}

#[test]
fn crossing_pairs_rejected() {
    let p = pairs(&[(1, 3), (2, 4)]);
    assert!(matches!(eq_housing_noncrossing(4, 4, &p), Err(SatError::Crossing(..))));
    assert!(matches!(neq_housing_noncrossing(4, 4, &p), Err(SatError::Crossing(..))));
}

#[test]
fn scaled_eq_at_m2() {
    let free = eq_housing(2, 8, &BTreeSet::new()).unwrap();
    assert_eq!(free.len(), 27);
    assert!(validate_sequence(&free).valid);
    assert_eq!(allocation(&free), AllocationSet::full(range(2)));

    let tied = eq_housing(2, 8, &pairs(&[(1, 2)])).unwrap();
    assert_eq!(allocation(&tied), AllocationSet::from_strings(range(2), ["00", "11"]));
    let apart = neq_housing(2, 8, &pairs(&[(1, 2)])).unwrap();
    assert_eq!(allocation(&apart), AllocationSet::from_strings(range(2), ["01", "10"]));
}

#[test]
fn r_sets_layers_for_fig_example() {
    let m = 4;
    let p = pairs(&[(2, 3), (2, 4)]);
    let n = m * m * m;
    for r in [r1_pairs(m), r2_pairs(m), r3_pairs(m, &p)] {
        // disjoint and non-crossing: a valid single union layer
        let mut plan = Plan::new(n);
        plan.push(Block::Union {
            kind: GadgetKind::Equaliser,
            items: r.iter().map(|&(a, b)| vec![a, b]).collect(),
            index_set: range(n),
        });
        let used: Vec<usize> = r.iter().flat_map(|&(a, b)| [a, b]).collect();
        assert_eq!(used.len(), used.iter().collect::<BTreeSet<_>>().len());
        for x in &r {
            for y in &r {
                assert!(!planar_seq_core::combinators::pairs_cross(*x, *y, n));
            }
        }
    }
    assert_eq!(r3_pairs(m, &p).len(), 4);
}

#[test]
fn aligned_or() {
    let s = or_housing_aligned(3, 3, &[(1, 2, 3)]).unwrap();
    assert_eq!(s.graphs, or_gadget(3, 1).unwrap().sequence.graphs);
    let want = AllocationSet::filtered(range(3), |f| f.values().any(|&b| b));
    assert_eq!(allocation(&s), want);
}

#[test]
fn or_pairing_index() {
    assert_eq!(or_slot(3, (1, 1, 1)).0, 4);
    let slots: BTreeSet<[usize; 3]> = (1..=3)
        .flat_map(|i| (1..=3).flat_map(move |j| (1..=3).map(move |k| or_slot(3, (i, j, k)).1)))
        .collect();
    assert_eq!(slots.len(), 27);
    assert!(slots.iter().all(|s| s[2] % 3 == 0 && s[0] > 3 && s[2] <= 3 + 81));
}

#[test]
fn full_or_at_m1_is_structurally_sound() {
    let s = or_housing(1, 216, &[(1, 1, 1)]).unwrap();
    assert_eq!(s.len(), 43);
    assert!(s.graphs.iter().all(|g| g.is_two_connected()));
    assert!(validate_sequence(&s).valid);
}

#[test]
fn full_plan_lengths_small() {
    for text in ["p cnf 1 1\n1 0\n", "p cnf 2 1\n1 -2 0\n", "p cnf 2 2\n1 0\n-1 2 0\n"] {
        let out = sat_prep(&parse_dimacs(text).unwrap()).unwrap();
        let lens: Vec<_> = out.report.components.iter().map(|c| c.length).collect();
        assert_eq!(lens, vec![27, 27, 43], "{text}");
        assert_eq!(out.report.length, 95);
    }
}

#[test]
fn sat_prep_single_clause_length() {
    let f = parse_dimacs("p cnf 3 1\n1 2 3 0\n").unwrap();
    let out = sat_prep(&f).unwrap();
    assert_eq!(out.report.length, 95);
    assert!(out.report.eq_pairs.is_empty());
    assert!(out.report.neq_pairs.is_empty());
    assert_eq!(out.report.triples.len(), 1);
}

#[test]
fn mini_examples() {
    let caps = ScaleCaps::default();
    let contra = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
    assert!(!contra.negated_pairs().is_empty());
    let o = mini_solve(&contra, &caps).unwrap();
    assert!(!o.embeddable && !o.brute_force);
    assert!(o.allocation.unwrap().is_empty());

    let clause = parse_dimacs("p cnf 3 1\n1 2 3 0\n").unwrap();
    let o = mini_solve(&clause, &caps).unwrap();
    assert!(o.embeddable && o.brute_force);
    assert_eq!(o.allocation.unwrap().len(), 7);
}

#[test]
fn mini_allocation_matches_formula() {
    let f = parse_dimacs("p cnf 2 2\n1 -2 0\n2 0\n").unwrap();
    let r = mini_prep(&f).unwrap().unwrap();
    let alloc = allocation(&r.sequence);
    assert!(!alloc.is_empty());
    let houses = range(r.formula.size());
    let want = AllocationSet::filtered(houses, |g| r.formula.satisfied_by_positions(g));
    assert_eq!(alloc, want);
}

#[test]
fn weak_conversion_identity_without_strict_edges() {
    let eq = equaliser(2, 1, 2).unwrap().sequence;
    let weak = HybridSequence {
        mode: Mode::Weak,
        strict_edges: EdgeSet::new(),
        graphs: eq.graphs.clone(),
        housing: None,
    };
    let w = hybrid_to_weak(&weak);
    assert_eq!(w.sequence.graphs, eq.graphs);
    assert!(w.ordinals.is_empty());
}

#[test]
fn weak_conversion_of_or_gadget() {
    let or = or_gadget(3, 1).unwrap().sequence;
    let w = hybrid_to_weak(&or);
    assert_eq!(w.ordinals.len(), or.strict_edges.len());
    assert!(w.sequence.strict_edges.is_empty());
    let r = validate_sequence(&w.sequence);
    assert!(r.valid, "{:?}", r.issues);
    assert!(w.sequence.graphs.iter().all(|g| g.is_two_connected()));
    let gs: Vec<_> = w.gadgets().into_values().collect();
    for (i, g) in gs.iter().enumerate() {
        for (j, h) in gs.iter().enumerate() {
            let into = a_fixing_subgraph_isomorphisms(g, h, &EdgeSet::new())
                .unwrap()
                .next()
                .is_some();
            assert_eq!(into, i == j);
        }
    }
}

fn lit() -> impl Strategy<Value = i64> {
    (1i64..=3, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v })
}

fn cnf() -> impl Strategy<Value = CnfFormula> {
    prop::collection::vec(prop::collection::vec(lit(), 1..=3), 0..=4)
        .prop_map(|cls| CnfFormula::new(3, cls).unwrap())
}

proptest! {
    #[test]
    fn literal_bookkeeping(f in cnf()) {
        let lits = f.literals();
        for (i, j) in f.equal_pairs() {
            prop_assert!(i < j && lits[i - 1] == lits[j - 1]);
        }
        let mut per_var: BTreeMap<u64, usize> = BTreeMap::new();
        for (i, j) in f.negated_pairs() {
            prop_assert_eq!(lits[i - 1], -lits[j - 1]);
            *per_var.entry(lits[i - 1].unsigned_abs()).or_default() += 1;
        }
        for v in 1..=3i64 {
            let both = lits.contains(&v) && lits.contains(&-v);
            prop_assert_eq!(per_var.get(&(v as u64)).copied().unwrap_or(0), usize::from(both));
        }
        prop_assert_eq!(f.clause_triples().len(), f.clauses.len());
    }

    #[test]
    fn dimacs_round_trip(f in cnf()) {
        let mut text = format!("p cnf 3 {}\n", f.clauses.len());
        for c in &f.clauses {
            for l in c {
                text.push_str(&format!("{l} "));
            }
            text.push_str("0\n");
        }
        prop_assert_eq!(parse_dimacs(&text).unwrap(), f);
    }
}
