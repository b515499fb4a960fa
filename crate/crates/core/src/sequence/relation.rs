//! Per-graph embedding states and the relations between neighbors.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{step_direction, Direction, HybridSequence, Mode, SequenceError};
use crate::embedding::{enumerate_oriented, rotation_key, EmbeddingError, RotationSystem};
use crate::graph::LabeledGraph;
use crate::iso::{a_fixing_subgraph_isomorphisms, Witness};

/// Witnesses examined per step before giving up.
const MAX_WITNESSES: usize = 100_000;
/// Removed edges per indefinite step whose splits are searched.
const MAX_SPLIT_EDGES: usize = 22;

/// All oriented spherical embeddings of one graph, indexed by key.
#[derive(Debug, Clone)]
pub struct StateTable {
    pub graph: Arc<LabeledGraph>,
    pub states: Vec<RotationSystem>,
    index: HashMap<Vec<u32>, usize>,
}

impl StateTable {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn lookup(&self, key: &[u32]) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Index of the reflection of state `k`.
    pub fn mirror(&self, k: usize) -> usize {
        self.lookup(&self.states[k].reflect().key())
            .expect("state tables are closed under reflection")
    }
}

pub fn state_table(
    g: &Arc<LabeledGraph>,
    limit: Option<usize>,
) -> Result<StateTable, EmbeddingError> {
    let states = enumerate_oriented(g, limit)?;
    let index = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.key(), i))
        .collect();
    Ok(StateTable {
        graph: g.clone(),
        states,
        index,
    })
}

/// Pairs `(state of G_i, state of G_{i+1})` that may follow each other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRelation {
    pub index: usize,
    pub direction: Direction,
    pub pairs: Vec<(usize, usize)>,
}

/// Rotations of `big` restricted to the image of `w`, written in the edge
/// and vertex indices of the pattern.
fn pull_back(big: &RotationSystem, w: &Witness, inv_edge: &[usize]) -> Vec<Vec<usize>> {
    w.vmap
        .iter()
        .map(|&y| {
            big.rotation(y)
                .iter()
                .filter_map(|&f| (inv_edge[f] != usize::MAX).then_some(inv_edge[f]))
                .collect()
        })
        .collect()
}

/// Hybrid step relation. `small` must be a hybrid subgraph of `big` for the
/// strict labels it carries; every witness is tried.
fn hybrid_pairs(
    small: &StateTable,
    big: &StateTable,
    s: &HybridSequence,
    small_idx: usize,
) -> Result<Vec<(usize, usize)>, SequenceError> {
    let a = s.strict_in(small_idx);
    let witnesses: Vec<Witness> = a_fixing_subgraph_isomorphisms(&small.graph, &big.graph, &a)?
        .take(MAX_WITNESSES + 1)
        .collect();
    if witnesses.len() > MAX_WITNESSES {
        return Err(SequenceError::NotCertifiedAtScale(format!(
            "step at graph {small_idx} has more than {MAX_WITNESSES} witnesses"
        )));
    }
    let mut pairs = Vec::new();
    for w in &witnesses {
        let mut inv = vec![usize::MAX; big.graph.edge_count()];
        for (e, &f) in w.emap.iter().enumerate() {
            inv[f] = e;
        }
        for (b, st) in big.states.iter().enumerate() {
            let rot = pull_back(st, w, &inv);
            if let Some(k) = small.lookup(&rotation_key(&rot)) {
                pairs.push((k, b));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    Ok(pairs)
}

/// One way of obtaining a graph as a minor: contract `contract`, delete
/// `delete` (edge indices of the larger graph), then identify vertices via
/// `vertex_map` (big representative vertex -> small vertex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorSplit {
    pub contract: Vec<usize>,
    pub delete: Vec<usize>,
    pub vertex_map: Vec<Option<usize>>,
}

/// Every split of the edges of `big` missing from `small` into a contracted
/// forest and a deleted rest such that `big / C \ D` equals `small` with
/// all edge labels kept.
pub fn minor_splits(
    big: &LabeledGraph,
    small: &LabeledGraph,
    limit: Option<usize>,
) -> Result<Vec<MinorSplit>, SequenceError> {
    if small.edges().iter().any(|e| !big.has_edge(&e.label)) {
        return Ok(Vec::new());
    }
    let removed: Vec<usize> = (0..big.edge_count())
        .filter(|&e| !small.has_edge(big.edge_label(e)))
        .collect();
    if removed.len() > MAX_SPLIT_EDGES {
        return Err(SequenceError::TooManySplits(0, removed.len()));
    }
    let limit = limit.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let n = big.vertex_count();
    for mask in 0u64..(1u64 << removed.len()) {
        if out.len() >= limit {
            break;
        }
        let mut rep: Vec<usize> = (0..n).collect();
        let mut contract = Vec::new();
        let mut delete = Vec::new();
        let mut forest = true;
        for (bit, &e) in removed.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                let (u, v) = big.endpoints(e);
                let (ru, rv) = (find(&mut rep, u), find(&mut rep, v));
                if ru == rv {
                    forest = false;
                    break;
                }
                rep[rv] = ru;
                contract.push(e);
            } else {
                delete.push(e);
            }
        }
        if !forest {
            continue;
        }
        if let Some(vertex_map) = match_vertices(big, small, &mut rep) {
            out.push(MinorSplit {
                contract,
                delete,
                vertex_map,
            });
        }
    }
    Ok(out)
}

fn find(rep: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while rep[r] != r {
        r = rep[r];
    }
    let mut y = x;
    while rep[y] != r {
        let next = rep[y];
        rep[y] = r;
        y = next;
    }
    r
}

/// Identifies branch sets with vertices of `small` by their sets of
/// surviving incident edge labels. Fails on loops, parallel edges, or a
/// cover that is not a bijection.
fn match_vertices(
    big: &LabeledGraph,
    small: &LabeledGraph,
    rep: &mut [usize],
) -> Option<Vec<Option<usize>>> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); big.vertex_count()];
    for (se, e) in small.edges().iter().enumerate() {
        let f = big.edge_index(&e.label)?;
        let (u, v) = big.endpoints(f);
        let (ru, rv) = (find(rep, u), find(rep, v));
        if ru == rv {
            return None;
        }
        incident[ru].push(se);
        incident[rv].push(se);
    }
    let by_set: HashMap<Vec<usize>, usize> = (0..small.vertex_count())
        .map(|t| {
            let mut v: Vec<usize> = small.neighbors(t).iter().map(|&(_, e)| e).collect();
            v.sort_unstable();
            (v, t)
        })
        .collect();
    let mut map = vec![None; big.vertex_count()];
    let mut hit = vec![false; small.vertex_count()];
    for (r, mut inc) in incident.into_iter().enumerate() {
        if inc.is_empty() {
            continue;
        }
        inc.sort_unstable();
        let &t = by_set.get(&inc)?;
        if std::mem::replace(&mut hit[t], true) {
            return None;
        }
        map[r] = Some(t);
    }
    hit.iter().all(|&h| h).then_some(map)
}

fn indefinite_pairs(
    small: &StateTable,
    big: &StateTable,
    small_is_left: bool,
) -> Result<Vec<(usize, usize)>, SequenceError> {
    let splits = minor_splits(&big.graph, &small.graph, None)?;
    let mut pairs = Vec::new();
    for sp in &splits {
        for (b, st) in big.states.iter().enumerate() {
            let Some(minor) = st.strict_minor(&sp.contract, &sp.delete) else {
                continue;
            };
            let mut rot = vec![Vec::new(); small.graph.vertex_count()];
            for (r, list) in minor.into_iter().enumerate() {
                let (Some(list), Some(t)) = (list, sp.vertex_map[r]) else {
                    continue;
                };
                rot[t] = list
                    .into_iter()
                    .map(|f| small.graph.edge_index(big.graph.edge_label(f)).unwrap())
                    .collect();
            }
            if let Some(k) = small.lookup(&rotation_key(&rot)) {
                pairs.push(if small_is_left { (k, b) } else { (b, k) });
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    Ok(pairs)
}

/// Relation between the state tables of graphs `i` and `i + 1`.
pub fn step_relation(
    s: &HybridSequence,
    i: usize,
    left: &StateTable,
    right: &StateTable,
) -> Result<StepRelation, SequenceError> {
    if s.mode == Mode::Indefinite {
        return indefinite_step_relation(s, i, left, right);
    }
    let (dir, _) = step_direction(s, i).ok_or(SequenceError::InvalidStep(i))?;
    let pairs = match dir {
        Direction::Grows => hybrid_pairs(left, right, s, i)?,
        Direction::Shrinks => hybrid_pairs(right, left, s, i + 1)?
            .into_iter()
            .map(|(k, b)| (b, k))
            .collect(),
    };
    let mut pairs = pairs;
    pairs.sort_unstable();
    Ok(StepRelation {
        index: i,
        direction: dir,
        pairs,
    })
}

/// Union over all deletion/contraction splits of the induced relation.
pub fn indefinite_step_relation(
    _s: &HybridSequence,
    i: usize,
    left: &StateTable,
    right: &StateTable,
) -> Result<StepRelation, SequenceError> {
    let tag = |e: SequenceError| match e {
        SequenceError::TooManySplits(_, k) => SequenceError::TooManySplits(i, k),
        e => e,
    };
    let shrink = minor_splits(&left.graph, &right.graph, Some(1)).map_err(tag)?;
    let (dir, mut pairs) = if !shrink.is_empty() {
        (
            Direction::Shrinks,
            indefinite_pairs(right, left, false).map_err(tag)?,
        )
    } else if !minor_splits(&right.graph, &left.graph, Some(1))
        .map_err(tag)?
        .is_empty()
    {
        (
            Direction::Grows,
            indefinite_pairs(left, right, true).map_err(tag)?,
        )
    } else {
        return Err(SequenceError::NoMinorSplit(i));
    };
    pairs.sort_unstable();
    Ok(StepRelation {
        index: i,
        direction: dir,
        pairs,
    })
}
