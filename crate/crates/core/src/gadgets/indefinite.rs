//! The indefinite or gadget.
//!
//! Three labeled paths `a_k b_k` run from `v2` of `H_2` to `v7` of `H_2`,
//! each placed inside `H_2` exactly when `T(H_k) = 1`. Since no edge is
//! weak, a path keeps its identity once its tie is gone, so the paths are
//! placed one bridge at a time. The minor step then contracts one path
//! (any one) and deletes the others, merging `v2` into `v7`; the rotation
//! at the merged vertex records on which side the contracted path ran. The
//! final edge `r` admits only the inside version.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{delete, snap, Gadget, GadgetError};
use crate::graph::{GraphBuilder, LabeledGraph};
use crate::sequence::{HybridSequence, Mode};
use crate::village::{house_vertex, inhabitant, path_edge, village_builder};

/// The sequence with the graphs around the choice step.
#[derive(Debug, Clone)]
pub struct IndefiniteOr {
    pub gadget: Gadget,
    /// Index of the last graph before the contraction.
    pub choice: usize,
    /// The graph before the contraction.
    pub a: Arc<LabeledGraph>,
    /// The graph after it.
    pub b: Arc<LabeledGraph>,
}

impl IndefiniteOr {
    /// Graphs up to and including `a`.
    pub fn prefix(&self) -> HybridSequence {
        let mut s = self.gadget.sequence.clone();
        s.graphs.truncate(self.choice + 1);
        s
    }
}

pub fn indefinite_or(m: usize, t: usize) -> Result<IndefiniteOr, GadgetError> {
    if m == 0 || m % 3 != 0 {
        return Err(GadgetError::NotDivisibleByThree(m));
    }
    if t == 0 || t > m / 3 {
        return Err(GadgetError::TripleOutOfRange(t, m / 3));
    }
    Ok(build_with(m, t, FORCE))
}

/// Endpoints of `r`: `v4` of `H_2` and `v4` of `H_1`.
const FORCE: (usize, usize) = (2, 1);

pub fn build_with(m: usize, t: usize, force: (usize, usize)) -> IndefiniteOr {
    let (h1, h2, h3) = (3 * t - 2, 3 * t - 1, 3 * t);
    let p = format!("ior{t}");
    let l = |s: &str| format!("{p}.{s}");
    let houses: BTreeSet<usize> = [h1, h2, h3].into_iter().collect();
    let add_path = |b: &mut GraphBuilder, k: usize| {
        let y = l(&format!("y{k}"));
        b.add_edge(l(&format!("a{k}")), house_vertex(h2, 2), &y);
        b.add_edge(l(&format!("b{k}")), &y, house_vertex(h2, 7));
    };
    let restore = |b: &mut GraphBuilder, i: usize, k: usize| {
        b.add_edge(path_edge(i, k), house_vertex(i, k), house_vertex(i, k + 1));
    };
    let mut b = village_builder(m, &houses);
    let mut graphs = vec![snap(&b)];
    b.add_edge(l("p"), house_vertex(h1, 6), house_vertex(h2, 2));
    graphs.push(snap(&b));
    delete(&mut b, &[&path_edge(h1, 6), &path_edge(h2, 1)]);
    graphs.push(snap(&b));
    add_path(&mut b, 1);
    add_path(&mut b, 2);
    b.add_edge(l("g1"), l("y1"), inhabitant(h1));
    b.add_edge(l("g2"), l("y2"), inhabitant(h2));
    graphs.push(snap(&b));
    delete(&mut b, &[&l("g1"), &l("g2")]);
    graphs.push(snap(&b));
    restore(&mut b, h1, 6);
    restore(&mut b, h2, 1);
    graphs.push(snap(&b));
    delete(&mut b, &[&l("p")]);
    graphs.push(snap(&b));
    b.add_edge(l("q"), house_vertex(h3, 6), house_vertex(h2, 2));
    graphs.push(snap(&b));
    delete(&mut b, &[&path_edge(h3, 6), &path_edge(h2, 1)]);
    graphs.push(snap(&b));
    add_path(&mut b, 3);
    b.add_edge(l("g3"), l("y3"), inhabitant(h3));
    graphs.push(snap(&b));
    delete(&mut b, &[&l("g3")]);
    graphs.push(snap(&b));
    restore(&mut b, h3, 6);
    restore(&mut b, h2, 1);
    graphs.push(snap(&b));
    delete(&mut b, &[&l("q")]);
    let a = snap(&b);
    graphs.push(a.clone());
    let choice = graphs.len() - 1;
    // Contract one path: v2 of H_2 becomes v7 of H_2.
    let paths: Vec<String> = (1..=3)
        .flat_map(|k| [l(&format!("a{k}")), l(&format!("b{k}"))])
        .collect();
    delete(
        &mut b,
        &paths.iter().map(String::as_str).collect::<Vec<_>>(),
    );
    let (from, to) = (house_vertex(h2, 2), house_vertex(h2, 7));
    for ends in b.edges.values_mut() {
        for v in [&mut ends.0, &mut ends.1] {
            if *v == from {
                *v = to.clone();
            }
        }
    }
    b.vertices.remove(&from);
    let small = snap(&b);
    graphs.push(small.clone());
    let (i, j) = force;
    b.add_edge(
        l("r"),
        house_vertex(3 * t - 3 + i, 4),
        house_vertex(3 * t - 3 + j, 4),
    );
    graphs.push(snap(&b));

    let mut seq = HybridSequence::strict(graphs).with_housing(m, houses);
    seq.mode = Mode::Indefinite;
    let mut roles = std::collections::BTreeMap::new();
    for k in 1..=3 {
        for s in ["a", "b", "y", "g"] {
            roles.insert(format!("{s}{k}"), l(&format!("{s}{k}")));
        }
    }
    for s in ["p", "q", "r"] {
        roles.insert(s.to_string(), l(s));
    }
    roles.insert("H1".into(), h1.to_string());
    roles.insert("H2".into(), h2.to_string());
    roles.insert("H3".into(), h3.to_string());
    IndefiniteOr {
        gadget: Gadget {
            sequence: seq,
            roles,
        },
        choice,
        a,
        b: small,
    }
}
