//! A-fixing subgraph isomorphisms.
//!
//! A map from `h` into `g` is an injective vertex map under which every edge
//! of `h` lands on an edge of `g`. Edges in the strict set `a` must land on
//! the edge of `g` carrying the same label; all other edges may be relabeled.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeSet, GraphError, LabeledGraph};

/// Index-level witness: `vmap[x]` is the image of vertex `x` of the pattern,
/// `emap[e]` the image of edge `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub vmap: Vec<usize>,
    pub emap: Vec<usize>,
}

impl Witness {
    pub fn to_label_map(&self, h: &LabeledGraph, g: &LabeledGraph) -> LabelMap {
        LabelMap {
            vertex_map: self
                .vmap
                .iter()
                .enumerate()
                .map(|(x, &y)| (h.vertex_label(x).to_string(), g.vertex_label(y).to_string()))
                .collect(),
            edge_map: self
                .emap
                .iter()
                .enumerate()
                .map(|(e, &f)| (h.edge_label(e).to_string(), g.edge_label(f).to_string()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
}

impl LabelMap {
    /// Re-checks that the map is an injective homomorphism of `h` into `g`
    /// fixing every label in `a`.
    pub fn is_valid(&self, h: &LabeledGraph, g: &LabeledGraph, a: &EdgeSet) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        if self.vertex_map.len() != h.vertex_count()
            || !self
                .vertex_map
                .values()
                .all(|v| g.has_vertex(v) && seen.insert(v))
        {
            return false;
        }
        h.edges().iter().all(|e| {
            let Some(img) = self.edge_map.get(&e.label) else {
                return false;
            };
            let Some((p, q)) = g.edge_endpoints_by_label(img) else {
                return false;
            };
            let x = &self.vertex_map[h.vertex_label(e.u)];
            let y = &self.vertex_map[h.vertex_label(e.v)];
            let incident = (x == p && y == q) || (x == q && y == p);
            incident && (!a.contains(&e.label) || *img == e.label)
        })
    }
}

/// Backtracking matcher yielding every A-fixing subgraph isomorphism.
pub struct SubgraphMatcher<'a> {
    h: &'a LabeledGraph,
    g: &'a LabeledGraph,
    /// For each pattern edge, the target edge it is pinned to.
    pinned: Vec<Option<usize>>,
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    back: Vec<Vec<(usize, usize)>>,
    map: Vec<usize>,
    used: Vec<bool>,
    cands: Vec<Vec<usize>>,
    pos: Vec<usize>,
    depth: usize,
    exact: bool,
    started: bool,
    done: bool,
}

const NONE: usize = usize::MAX;

/// Streams every A-fixing subgraph isomorphism from `h` into `g`.
///
/// Fails if `a` names an edge that is not in `h`, or an edge of `h` that is
/// absent from `g`.
pub fn a_fixing_subgraph_isomorphisms<'a>(
    h: &'a LabeledGraph,
    g: &'a LabeledGraph,
    a: &EdgeSet,
) -> Result<SubgraphMatcher<'a>, GraphError> {
    let mut pinned = vec![None; h.edge_count()];
    for l in a.iter() {
        let e = h
            .edge_index(l)
            .ok_or_else(|| GraphError::StrictNotInPattern(l.clone()))?;
        let f = g
            .edge_index(l)
            .ok_or_else(|| GraphError::StrictMissingInTarget(l.clone()))?;
        pinned[e] = Some(f);
    }
    let n = h.vertex_count();
    // Equal counts force a bijection on vertices and edges, so degrees
    // must agree exactly.
    let exact = n == g.vertex_count() && h.edge_count() == g.edge_count();
    let (order, parent) = search_order(h, &pinned, exact);
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let back = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            h.neighbors(v)
                .iter()
                .filter(|&&(u, _)| position[u] < i)
                .copied()
                .collect()
        })
        .collect();
    let too_big = n > g.vertex_count() || h.edge_count() > g.edge_count();
    Ok(SubgraphMatcher {
        h,
        g,
        pinned,
        order,
        parent,
        back,
        map: vec![NONE; n],
        used: vec![false; g.vertex_count()],
        cands: vec![Vec::new(); n],
        pos: vec![0; n],
        depth: 0,
        exact,
        started: false,
        done: too_big,
    })
}

/// Search order: breadth first, expanding along strict edges before weak
/// ones, so pinned vertices are placed early. Returns the order and, per
/// position, the earlier neighbor it was discovered from.
fn search_order(
    h: &LabeledGraph,
    pinned: &[Option<usize>],
    rare_root: bool,
) -> (Vec<usize>, Vec<Option<usize>>) {
    let n = h.vertex_count();
    let mut freq = BTreeMap::new();
    for v in 0..n {
        *freq.entry(h.degree(v)).or_insert(0usize) += 1;
    }
    let rarity = |v: usize| if rare_root { freq[&h.degree(v)] } else { 0 };
    let has_strict: Vec<bool> = (0..n)
        .map(|v| h.neighbors(v).iter().any(|&(_, e)| pinned[e].is_some()))
        .collect();
    let mut discovered = vec![false; n];
    let mut parent_of = vec![None; n];
    let mut order = Vec::with_capacity(n);
    let mut strict_q = VecDeque::new();
    let mut weak_q = VecDeque::new();
    loop {
        let next = strict_q.pop_front().or_else(|| weak_q.pop_front());
        let v = match next {
            Some(v) => v,
            None => {
                let root = (0..n).filter(|&v| !discovered[v]).max_by_key(|&v| {
                    let r = std::cmp::Reverse(rarity(v));
                    (has_strict[v], r, h.degree(v), std::cmp::Reverse(v))
                });
                match root {
                    Some(r) => {
                        discovered[r] = true;
                        r
                    }
                    None => break,
                }
            }
        };
        order.push(v);
        for &(u, e) in h.neighbors(v) {
            if !discovered[u] {
                discovered[u] = true;
                parent_of[u] = Some(v);
                if pinned[e].is_some() {
                    strict_q.push_back(u);
                } else {
                    weak_q.push_back(u);
                }
            }
        }
    }
    let parent = order.iter().map(|&v| parent_of[v]).collect();
    (order, parent)
}

impl SubgraphMatcher<'_> {
    fn candidates(&self, d: usize) -> Vec<usize> {
        let v = self.order[d];
        let h = self.h;
        let g = self.g;
        // A pinned edge narrows the image to its target's endpoints.
        for &(u, e) in h.neighbors(v) {
            if let Some(f) = self.pinned[e] {
                let (p, q) = g.endpoints(f);
                let mu = self.map[u];
                if mu != NONE {
                    return if mu == p {
                        vec![q]
                    } else if mu == q {
                        vec![p]
                    } else {
                        Vec::new()
                    };
                }
                return self.prefer_label(v, vec![p, q]);
            }
        }
        if let Some(p) = self.parent[d] {
            let mp = self.map[p];
            let list = g.neighbors(mp).iter().map(|&(y, _)| y).collect();
            return self.prefer_label(v, list);
        }
        self.prefer_label(v, (0..g.vertex_count()).collect())
    }

    /// Moves the target vertex carrying the pattern vertex's own label to the
    /// front, so identity-like maps are found first.
    fn prefer_label(&self, v: usize, mut list: Vec<usize>) -> Vec<usize> {
        if let Some(t) = self.g.vertex_index(self.h.vertex_label(v)) {
            if let Some(i) = list.iter().position(|&c| c == t) {
                list[..=i].rotate_right(1);
            }
        }
        list
    }

    fn feasible(&self, d: usize, c: usize) -> bool {
        let v = self.order[d];
        let (dg, dh) = (self.g.degree(c), self.h.degree(v));
        if self.used[c] || dg < dh || (self.exact && dg != dh) {
            return false;
        }
        for &(_, e) in self.h.neighbors(v) {
            if let Some(f) = self.pinned[e] {
                let (p, q) = self.g.endpoints(f);
                if c != p && c != q {
                    return false;
                }
            }
        }
        for &(u, e) in &self.back[d] {
            match self.g.edge_between(self.map[u], c) {
                None => return false,
                Some(f) => {
                    if let Some(t) = self.pinned[e] {
                        if t != f {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn assign(&mut self, d: usize, c: usize) {
        self.map[self.order[d]] = c;
        self.used[c] = true;
    }

    fn unassign(&mut self, d: usize) {
        let v = self.order[d];
        self.used[self.map[v]] = false;
        self.map[v] = NONE;
    }

    fn current(&self) -> Witness {
        let emap = self
            .h
            .edges()
            .iter()
            .map(|e| {
                self.g
                    .edge_between(self.map[e.u], self.map[e.v])
                    .expect("feasibility guarantees the edge")
            })
            .collect();
        Witness {
            vmap: self.map.clone(),
            emap,
        }
    }
}

impl Iterator for SubgraphMatcher<'_> {
    type Item = Witness;

    fn next(&mut self) -> Option<Witness> {
        if self.done {
            return None;
        }
        let n = self.order.len();
        if n == 0 {
            self.done = true;
            return Some(Witness {
                vmap: Vec::new(),
                emap: Vec::new(),
            });
        }
        if !self.started {
            self.started = true;
            self.cands[0] = self.candidates(0);
            self.pos[0] = 0;
            self.depth = 0;
        }
        loop {
            let d = self.depth;
            let mut advanced = false;
            while self.pos[d] < self.cands[d].len() {
                let c = self.cands[d][self.pos[d]];
                self.pos[d] += 1;
                if self.feasible(d, c) {
                    self.assign(d, c);
                    advanced = true;
                    break;
                }
            }
            if advanced {
                if d + 1 == n {
                    let w = self.current();
                    self.unassign(d);
                    return Some(w);
                }
                self.depth = d + 1;
                self.cands[d + 1] = self.candidates(d + 1);
                self.pos[d + 1] = 0;
            } else {
                if d == 0 {
                    self.done = true;
                    return None;
                }
                self.depth = d - 1;
                self.unassign(d - 1);
            }
        }
    }
}

/// True iff `h` is a hybrid subgraph of `g` with respect to `a`. A strict
/// label of `h` that is missing from `g` makes the answer false.
pub fn is_hybrid_subgraph(
    h: &LabeledGraph,
    g: &LabeledGraph,
    a: &EdgeSet,
) -> Result<bool, GraphError> {
    match a_fixing_subgraph_isomorphisms(h, g, a) {
        Ok(mut it) => Ok(it.next().is_some()),
        Err(GraphError::StrictMissingInTarget(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// First witness, if any, with the same missing-label convention as
/// [`is_hybrid_subgraph`].
pub fn first_witness(h: &LabeledGraph, g: &LabeledGraph, a: &EdgeSet) -> Option<Witness> {
    a_fixing_subgraph_isomorphisms(h, g, a).ok()?.next()
}

/// Isomorphism fixing every edge label: both graphs carry the same edge
/// labels and some vertex bijection respects all incidences.
pub fn strictly_isomorphic(h: &LabeledGraph, g: &LabeledGraph) -> bool {
    h.vertex_count() == g.vertex_count()
        && h.edge_count() == g.edge_count()
        && first_witness(h, g, &h.edge_labels()).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4(extra_label: Option<&str>) -> LabeledGraph {
        let first = extra_label.unwrap_or("k01");
        LabeledGraph::new(
            ["0", "1", "2", "3"],
            [
                (first, "0", "1"),
                ("k02", "0", "2"),
                ("k03", "0", "3"),
                ("k12", "1", "2"),
                ("k13", "1", "3"),
                ("k23", "2", "3"),
            ],
        )
        .unwrap()
    }

    fn triangle() -> LabeledGraph {
        LabeledGraph::new(
            ["a", "b", "c"],
            [("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")],
        )
        .unwrap()
    }

    #[test]
    fn triangle_into_k4_unpinned() {
        let h = triangle();
        let g = k4(None);
        let maps: Vec<_> = a_fixing_subgraph_isomorphisms(&h, &g, &EdgeSet::new())
            .unwrap()
            .collect();
        assert_eq!(maps.len(), 24);
    }

    #[test]
    fn triangle_into_k4_with_pin() {
        let h = triangle();
        let g = k4(Some("x"));
        let a: EdgeSet = ["x"].into_iter().collect();
        let maps: Vec<_> = a_fixing_subgraph_isomorphisms(&h, &g, &a)
            .unwrap()
            .collect();
        assert_eq!(maps.len(), 4);
        for w in &maps {
            assert!(w.to_label_map(&h, &g).is_valid(&h, &g, &a));
        }
    }

    #[test]
    fn full_pin_on_self() {
        let g = k4(None);
        let maps: Vec<_> = a_fixing_subgraph_isomorphisms(&g, &g, &g.edge_labels())
            .unwrap()
            .collect();
        assert_eq!(maps.len(), 1);
        assert!(is_hybrid_subgraph(&triangle(), &g, &EdgeSet::new()).unwrap());
        assert!(!is_hybrid_subgraph(&g, &triangle(), &EdgeSet::new()).unwrap());
    }

    #[test]
    fn pin_must_exist_in_pattern() {
        let a: EdgeSet = ["nope"].into_iter().collect();
        assert!(matches!(
            a_fixing_subgraph_isomorphisms(&triangle(), &k4(None), &a),
            Err(GraphError::StrictNotInPattern(_))
        ));
    }
}
