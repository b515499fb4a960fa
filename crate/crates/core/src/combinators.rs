//! Concatenation, unions, crossing arches, breaks and restriction of
//! housing sequences.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadgets::{arches, GadgetError};
use crate::graph::{EdgeSet, GraphBuilder, GraphError, LabeledGraph};
use crate::sequence::{HousingInfo, HybridSequence, Mode, SequenceError};
use crate::village::{foundation_positions, rim_edge, rim_vertex, spoke, VillageHandle, HUB};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombineError {
    #[error("last graph of the first sequence differs from the first graph of the second")]
    JunctionMismatch,
    #[error("sequences have different villages")]
    VillageMismatch,
    #[error("sequences have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("weak edges shared by both sequences: {0:?}")]
    WeakOverlap(Vec<String>),
    #[error("label `{0}` is strict in one sequence and weak in the other")]
    StrictnessConflict(String),
    #[error("index sets overlap in {0:?}")]
    IndexOverlap(Vec<usize>),
    #[error("equators differ: {0} and {1}")]
    EquatorMismatch(usize, usize),
    #[error("{0:?} is not one side of a break")]
    NotABreak(BTreeSet<usize>),
    #[error("cannot combine indefinite sequences")]
    Indefinite,
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn merged_strictness(s1: &HybridSequence, s2: &HybridSequence) -> Result<EdgeSet, CombineError> {
    let (w1, w2) = (s1.weak_labels(), s2.weak_labels());
    for l in w1.iter().chain(w2.iter()) {
        if s1.strict_edges.contains(l) || s2.strict_edges.contains(l) {
            return Err(CombineError::StrictnessConflict(l.clone()));
        }
    }
    Ok(s1.strict_edges.union(&s2.strict_edges))
}

fn mode_for(strict: &EdgeSet, graphs: &[Arc<LabeledGraph>]) -> Mode {
    let all: EdgeSet = graphs
        .iter()
        .flat_map(|g| g.edges().iter().map(|e| e.label.clone()))
        .collect();
    if all.0.is_subset(&strict.0) {
        Mode::Strict
    } else if strict.is_empty() {
        Mode::Weak
    } else {
        Mode::Hybrid
    }
}

/// `s1` followed by `s2`, sharing the junction graph once.
pub fn concatenate(
    s1: &HybridSequence,
    s2: &HybridSequence,
) -> Result<HybridSequence, CombineError> {
    if s1.mode == Mode::Indefinite || s2.mode == Mode::Indefinite {
        return Err(CombineError::Indefinite);
    }
    if s1.housing != s2.housing {
        return Err(CombineError::VillageMismatch);
    }
    let (Some(last), Some(first)) = (s1.graphs.last(), s2.graphs.first()) else {
        return Err(SequenceError::Empty.into());
    };
    if last != first {
        return Err(CombineError::JunctionMismatch);
    }
    let strict_edges = merged_strictness(s1, s2)?;
    let graphs: Vec<_> = s1.graphs.iter().chain(&s2.graphs[1..]).cloned().collect();
    Ok(HybridSequence {
        mode: mode_for(&strict_edges, &graphs),
        strict_edges,
        graphs,
        housing: s1.housing.clone(),
    })
}

/// Pads `s` to length `n` by repeating its last graph.
pub fn pad_to(s: &HybridSequence, n: usize) -> HybridSequence {
    let mut out = s.clone();
    if let Some(last) = s.graphs.last() {
        while out.graphs.len() < n {
            out.graphs.push(last.clone());
        }
    }
    out
}

/// Graph-by-graph union. The shorter sequence is padded with its last
/// graph first.
pub fn union_sequences(
    s1: &HybridSequence,
    s2: &HybridSequence,
) -> Result<HybridSequence, CombineError> {
    if s1.mode == Mode::Indefinite || s2.mode == Mode::Indefinite {
        return Err(CombineError::Indefinite);
    }
    let shared: Vec<String> = s1
        .weak_labels()
        .intersection(&s2.weak_labels())
        .0
        .into_iter()
        .collect();
    if !shared.is_empty() {
        return Err(CombineError::WeakOverlap(shared));
    }
    let strict_edges = merged_strictness(s1, s2)?;
    let housing = match (&s1.housing, &s2.housing) {
        (Some(a), Some(b)) => {
            if a.m != b.m {
                return Err(CombineError::EquatorMismatch(a.m, b.m));
            }
            Some(HousingInfo {
                m: a.m,
                index_set: a.index_set.union(&b.index_set).copied().collect(),
            })
        }
        (None, None) => None,
        _ => return Err(CombineError::VillageMismatch),
    };
    let n = s1.len().max(s2.len());
    let (a, b) = (pad_to(s1, n), pad_to(s2, n));
    let graphs = a
        .graphs
        .iter()
        .zip(&b.graphs)
        .map(|(g, h)| Ok(Arc::new(g.union(h)?)))
        .collect::<Result<Vec<_>, GraphError>>()?;
    Ok(HybridSequence {
        mode: mode_for(&strict_edges, &graphs),
        strict_edges,
        graphs,
        housing,
    })
}

/// Whether `a` lies strictly inside the cyclic open arc from `x` to `y`.
fn strictly_between(x: usize, y: usize, a: usize, n: usize) -> bool {
    let d = |p: usize| (p + n - x % n) % n;
    let (da, dy) = (d(a), d(y));
    da > 0 && da < dy
}

/// True iff the two pairs alternate around `Z_m`. Pairs sharing an index
/// never cross.
pub fn pairs_cross(p1: (usize, usize), p2: (usize, usize), m: usize) -> bool {
    let all: BTreeSet<usize> = [p1.0 % m, p1.1 % m, p2.0 % m, p2.1 % m]
        .into_iter()
        .collect();
    if all.len() < 4 {
        return false;
    }
    strictly_between(p1.0, p1.1, p2.0, m) != strictly_between(p1.0, p1.1, p2.1, m)
}

/// Rim positions of the foundations of `j`.
fn foundation_set(j: &BTreeSet<usize>) -> BTreeSet<usize> {
    j.iter().flat_map(|&i| foundation_positions(i)).collect()
}

/// Whether the rim pair `(a, b)` (positions in `1..=4m`) separates the
/// houses `j`: both open arcs between them hold a foundation vertex of `j`.
pub fn separates(pair: (usize, usize), j: &BTreeSet<usize>, village: &VillageHandle) -> bool {
    let n = 4 * village.m;
    let (a, b) = pair;
    if a % n == b % n {
        return false;
    }
    let f = foundation_set(j);
    let one = f.iter().any(|&c| strictly_between(a, b, c, n));
    let two = f.iter().any(|&c| strictly_between(b, a, c, n));
    one && two
}

/// Whether some pair of foundation vertices of `i` separates `j`.
pub fn sets_separate(i: &BTreeSet<usize>, j: &BTreeSet<usize>, village: &VillageHandle) -> bool {
    let f: Vec<usize> = foundation_set(i).into_iter().collect();
    f.iter()
        .enumerate()
        .any(|(k, &a)| f[k + 1..].iter().any(|&b| separates((a, b), j, village)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Unifiability {
    /// No arch of one sequence crosses an arch of the other.
    True {
        arches1: BTreeSet<(usize, usize)>,
        arches2: BTreeSet<(usize, usize)>,
    },
    /// Some arches cross; the sufficient condition does not apply.
    Unknown {
        crossing: ((usize, usize), (usize, usize)),
    },
}

pub fn are_unifiable(
    s1: &HybridSequence,
    s2: &HybridSequence,
) -> Result<Unifiability, CombineError> {
    if s1.len() != s2.len() {
        return Err(CombineError::LengthMismatch(s1.len(), s2.len()));
    }
    let v1 = s1.village()?;
    let v2 = s2.village()?;
    if v1.m != v2.m {
        return Err(CombineError::EquatorMismatch(v1.m, v2.m));
    }
    let overlap: Vec<usize> = v1.houses.intersection(&v2.houses).copied().collect();
    if !overlap.is_empty() {
        return Err(CombineError::IndexOverlap(overlap));
    }
    let shared: Vec<String> = s1
        .weak_labels()
        .intersection(&s2.weak_labels())
        .0
        .into_iter()
        .collect();
    if !shared.is_empty() {
        return Err(CombineError::WeakOverlap(shared));
    }
    let arches1 = arches(s1, &v1)?;
    let arches2 = arches(s2, &v2)?;
    for &a in &arches1 {
        for &b in &arches2 {
            if pairs_cross(a, b, v1.m) {
                return Ok(Unifiability::Unknown { crossing: (a, b) });
            }
        }
    }
    Ok(Unifiability::True { arches1, arches2 })
}

/// Whether `(part, rest)` is a break of `s`.
pub fn is_break(
    arch_set: &BTreeSet<(usize, usize)>,
    part: &BTreeSet<usize>,
    rest: &BTreeSet<usize>,
    village: &VillageHandle,
) -> bool {
    !part.is_empty()
        && !rest.is_empty()
        && !arch_set.iter().any(|&(a, b)| {
            (part.contains(&a) && rest.contains(&b)) || (part.contains(&b) && rest.contains(&a))
        })
        && !sets_separate(part, rest, village)
        && !sets_separate(rest, part, village)
}

/// Some break of the index set, if one exists. Non-separating parts are
/// cyclic intervals of the index set, so trying every interval is complete.
pub fn find_break(
    s: &HybridSequence,
    village: &VillageHandle,
) -> Result<Option<(BTreeSet<usize>, BTreeSet<usize>)>, CombineError> {
    let arch_set = arches(s, village)?;
    let idx: Vec<usize> = village.houses.iter().copied().collect();
    let n = idx.len();
    for start in 0..n {
        for len in 1..n {
            let part: BTreeSet<usize> = (0..len).map(|k| idx[(start + k) % n]).collect();
            let rest: BTreeSet<usize> = village.houses.difference(&part).copied().collect();
            if is_break(&arch_set, &part, &rest, village) {
                return Ok(Some(if part.first() <= rest.first() {
                    (part, rest)
                } else {
                    (rest, part)
                }));
            }
        }
    }
    Ok(None)
}

fn planet_labels(m: usize) -> (BTreeSet<String>, EdgeSet) {
    let mut vs: BTreeSet<String> = (1..=4 * m).map(|k| rim_vertex(m, k)).collect();
    vs.insert(HUB.to_string());
    let es = (1..=4 * m)
        .flat_map(|k| [rim_edge(m, k), spoke(k)])
        .collect();
    (vs, es)
}

/// Keeps the planet and everything joined to a foundation of `part` by a
/// path internally avoiding the planet.
pub fn restrict_graph(g: &LabeledGraph, m: usize, part: &BTreeSet<usize>) -> LabeledGraph {
    let (planet_v, planet_e) = planet_labels(m);
    let keep_rim: BTreeSet<String> = foundation_set(part)
        .into_iter()
        .map(|k| rim_vertex(m, k))
        .collect();
    let on_planet = |v: usize| planet_v.contains(g.vertex_label(v));
    let mut keep = vec![false; g.vertex_count()];
    let mut stack: Vec<usize> = Vec::new();
    for v in 0..g.vertex_count() {
        if keep_rim.contains(g.vertex_label(v)) {
            for &(w, _) in g.neighbors(v) {
                if !on_planet(w) && !keep[w] {
                    keep[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    while let Some(x) = stack.pop() {
        for &(w, _) in g.neighbors(x) {
            if !on_planet(w) && !keep[w] {
                keep[w] = true;
                stack.push(w);
            }
        }
    }
    let mut b = GraphBuilder::new();
    for v in 0..g.vertex_count() {
        if keep[v] || on_planet(v) {
            b.add_vertex(g.vertex_label(v));
        }
    }
    for e in g.edges() {
        let (u, v) = (g.vertex_label(e.u), g.vertex_label(e.v));
        let ok = if planet_e.contains(&e.label) {
            true
        } else {
            let side = |x: usize, l: &str| keep[x] || keep_rim.contains(l);
            side(e.u, u) && side(e.v, v)
        };
        if ok {
            b.add_edge(e.label.clone(), u, v);
        }
    }
    b.build().expect("subgraph of a simple graph is simple")
}

/// The sequence restricted to one side of a break.
pub fn restrict_to_indices(
    s: &HybridSequence,
    part: &BTreeSet<usize>,
) -> Result<HybridSequence, CombineError> {
    let village = s.village()?;
    if part != &village.houses {
        let rest: BTreeSet<usize> = village.houses.difference(part).copied().collect();
        let arch_set = arches(s, &village)?;
        if !part.is_subset(&village.houses) || !is_break(&arch_set, part, &rest, &village) {
            return Err(CombineError::NotABreak(part.clone()));
        }
    }
    let graphs: Vec<Arc<LabeledGraph>> = s
        .graphs
        .iter()
        .map(|g| Arc::new(restrict_graph(g, village.m, part)))
        .collect();
    let labels: BTreeSet<String> = graphs
        .iter()
        .flat_map(|g| g.edges().iter().map(|e| e.label.clone()))
        .collect();
    let strict_edges = EdgeSet(s.strict_edges.0.intersection(&labels).cloned().collect());
    Ok(HybridSequence {
        mode: mode_for(&strict_edges, &graphs),
        strict_edges,
        graphs,
        housing: Some(HousingInfo {
            m: village.m,
            index_set: part.clone(),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_basics() {
        assert!(pairs_cross((1, 3), (2, 4), 4));
        assert!(!pairs_cross((1, 2), (3, 4), 4));
        assert!(pairs_cross((1, 3), (2, 4), 8));
        assert!(!pairs_cross((1, 3), (3, 4), 8));
        assert!(pairs_cross((3, 1), (4, 2), 4));
    }

    #[test]
    fn separation() {
        let v = VillageHandle::build(4, &[1, 2, 3, 4].into_iter().collect()).unwrap();
        let j: BTreeSet<usize> = [2].into_iter().collect();
        // House 2 owns s5..s8.
        assert!(!separates((1, 3), &j, &v));
        assert!(!separates((4, 9), &j, &v));
        assert!(separates((6, 1), &j, &v));
        let i: BTreeSet<usize> = [1].into_iter().collect();
        assert!(!sets_separate(&i, &j, &v));
        let odd: BTreeSet<usize> = [1, 3].into_iter().collect();
        let even: BTreeSet<usize> = [2, 4].into_iter().collect();
        assert!(sets_separate(&odd, &even, &v));
    }
}
