//! Conversion of hybrid sequences to weak ones.
//!
//! Every strict edge `e` is replaced by a gadget `Q_e`: a `k x k` grid with
//! one diagonal per cell, which makes it rigid, plus one chord between two
//! vertices of the arc running along the top row and down the right
//! column. Corner `(0,0)` is identified with one end of `e` and corner
//! `(k-1,k-1)` with the other. Chords are taken up to the reflection of
//! the grid that fixes both corners, so distinct ordinals give
//! non-isomorphic gadgets.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeSet, GraphBuilder, LabeledGraph};
use crate::sequence::{HybridSequence, Mode};

/// Vertex of the arc at position `p`: top row left to right, then the
/// right column downwards.
fn arc(k: usize, p: usize) -> (usize, usize) {
    if p < k {
        (0, p)
    } else {
        (p - (k - 1), k - 1)
    }
}

fn grid_adjacent(a: (usize, usize), b: (usize, usize)) -> bool {
    let (dr, dc) = (a.0 as isize - b.0 as isize, a.1 as isize - b.1 as isize);
    matches!(
        (dr, dc),
        (0, 1) | (0, -1) | (1, 0) | (-1, 0) | (1, 1) | (-1, -1)
    )
}

/// Chords available on a `k x k` grid, one per isomorphism class.
fn chords(k: usize) -> Vec<(usize, usize)> {
    let last = 2 * k - 2;
    let mut out = Vec::new();
    for a in 1..last {
        for b in a + 2..last {
            if grid_adjacent(arc(k, a), arc(k, b)) {
                continue;
            }
            if (a, b) <= (last - b, last - a) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Side length for a sequence with `edges` labels and `needed` gadgets.
fn side(edges: usize, needed: usize) -> usize {
    let mut k = 5.max((edges as f64).sqrt().ceil() as usize + 3);
    while chords(k).len() < needed {
        k += 1;
    }
    k
}

/// Adds `Q` with chord number `ordinal` to `b`, corners at `u` and `v`.
fn add_grid(b: &mut GraphBuilder, prefix: &str, k: usize, ordinal: usize, u: &str, v: &str) {
    let name = |r: usize, c: usize| match (r, c) {
        (0, 0) => u.to_string(),
        _ if r == k - 1 && c == k - 1 => v.to_string(),
        _ => format!("{prefix}#{r}.{c}"),
    };
    for r in 0..k {
        for c in 0..k {
            if c + 1 < k {
                b.add_edge(format!("{prefix}#h{r}.{c}"), name(r, c), name(r, c + 1));
            }
            if r + 1 < k {
                b.add_edge(format!("{prefix}#v{r}.{c}"), name(r, c), name(r + 1, c));
            }
            if r + 1 < k && c + 1 < k {
                b.add_edge(format!("{prefix}#d{r}.{c}"), name(r, c), name(r + 1, c + 1));
            }
        }
    }
    let (x, y) = chords(k)[ordinal];
    let (p, q) = (arc(k, x), arc(k, y));
    b.add_edge(format!("{prefix}#x"), name(p.0, p.1), name(q.0, q.1));
}

/// A standalone gadget with corners `u` and `v`.
pub fn grid_gadget(k: usize, ordinal: usize) -> LabeledGraph {
    let mut b = GraphBuilder::new();
    add_grid(&mut b, "q", k, ordinal, "u", "v");
    b.build().expect("grid gadgets are simple")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeakConversion {
    pub sequence: HybridSequence,
    /// Grid side length.
    pub k: usize,
    /// Chord number of the gadget replacing each strict label.
    pub ordinals: BTreeMap<String, usize>,
}

impl WeakConversion {
    /// The emitted gadgets, each as a standalone graph.
    pub fn gadgets(&self) -> BTreeMap<String, LabeledGraph> {
        self.ordinals
            .iter()
            .map(|(l, &n)| (l.clone(), grid_gadget(self.k, n)))
            .collect()
    }
}

/// Replaces every strict edge by its grid gadget; the result has no strict
/// edges.
pub fn hybrid_to_weak(s: &HybridSequence) -> WeakConversion {
    let strict: Vec<&String> = s.strict_edges.iter().collect();
    let k = side(s.all_labels().len(), strict.len());
    let ordinals: BTreeMap<String, usize> = strict
        .iter()
        .enumerate()
        .map(|(n, l)| ((*l).clone(), n))
        .collect();
    let graphs = s
        .graphs
        .iter()
        .map(|g| {
            let mut b = GraphBuilder::new();
            for v in g.vertices() {
                b.add_vertex(v);
            }
            for e in g.edges() {
                let (u, v) = (g.vertex_label(e.u), g.vertex_label(e.v));
                match ordinals.get(&e.label) {
                    Some(&n) => {
                        let (u, v) = if u <= v { (u, v) } else { (v, u) };
                        add_grid(&mut b, &e.label, k, n, u, v);
                    }
                    None => {
                        b.add_edge(&e.label, u, v);
                    }
                }
            }
            Arc::new(b.build().expect("replacing edges keeps the graph simple"))
        })
        .collect();
    let sequence = HybridSequence {
        mode: Mode::Weak,
        strict_edges: EdgeSet::new(),
        graphs,
        housing: None,
    };
    WeakConversion {
        sequence,
        k,
        ordinals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::a_fixing_subgraph_isomorphisms;

    #[test]
    fn chord_capacity() {
        for e in [1, 10, 50, 200, 1000] {
            let k = side(e, e);
            assert!(chords(k).len() >= e);
        }
        assert_eq!(side(4, 4), 5);
    }

    #[test]
    fn gadgets_are_two_connected_and_distinct() {
        let k = 5;
        let n = chords(k).len();
        let gs: Vec<_> = (0..n).map(|i| grid_gadget(k, i)).collect();
        for (i, g) in gs.iter().enumerate() {
            assert!(g.is_two_connected());
            for (j, h) in gs.iter().enumerate() {
                let found = a_fixing_subgraph_isomorphisms(g, h, &EdgeSet::new())
                    .unwrap()
                    .next()
                    .is_some();
                assert_eq!(found, i == j, "{i} into {j}");
            }
        }
    }
}
