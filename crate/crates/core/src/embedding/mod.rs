//! Rotation systems and the operations on them.
//!
//! A dart is a directed copy of an edge: dart `2e` runs from the smaller
//! endpoint index of `e` to the larger, dart `2e + 1` the other way. Faces
//! are orbits of the map sending a dart arriving at `v` along `e` to the
//! dart leaving `v` along the successor of `e` in the rotation at `v`.

mod enumerate;

pub use enumerate::{
    enumerate_embeddings, enumerate_oriented, oracle_enumerate, EmbeddingClass,
    DEFAULT_ORACLE_MAX_EDGES,
};

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeSet, GraphBuilder, GraphError, LabeledGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("graph is not planar")]
    NonPlanar,
    #[error("invalid rotation system: {0}")]
    Invalid(String),
    #[error("rotation system has genus {0}, expected 0")]
    NotSpherical(usize),
    #[error("edge `{0}` is a loop")]
    Loop(String),
    #[error("edges do not form a single cycle")]
    NotACycle,
    #[error("search exceeds the cap of {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn dart_edge(d: usize) -> usize {
    d / 2
}

pub fn reverse_dart(d: usize) -> usize {
    d ^ 1
}

pub fn dart_tail(g: &LabeledGraph, d: usize) -> usize {
    let (u, v) = g.endpoints(d / 2);
    if d % 2 == 0 {
        u
    } else {
        v
    }
}

pub fn dart_head(g: &LabeledGraph, d: usize) -> usize {
    dart_tail(g, d ^ 1)
}

/// The dart along `e` leaving `v`.
pub fn dart_from(g: &LabeledGraph, e: usize, v: usize) -> usize {
    if g.endpoints(e).0 == v {
        2 * e
    } else {
        2 * e + 1
    }
}

/// Face successor map for rotations `rot` over graph `g`. Darts of edges
/// not present in `rot` map to `usize::MAX`.
pub(crate) fn face_successors(g: &LabeledGraph, rot: &[Vec<usize>]) -> Vec<usize> {
    let mut next = vec![usize::MAX; 2 * g.edge_count()];
    for (h, r) in rot.iter().enumerate() {
        let k = r.len();
        for i in 0..k {
            let arriving = dart_from(g, r[i], h) ^ 1;
            next[arriving] = dart_from(g, r[(i + 1) % k], h);
        }
    }
    next
}

/// Orbits of a successor map, each starting at its smallest dart.
pub(crate) fn orbits(next: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; next.len()];
    let mut faces = Vec::new();
    for start in 0..next.len() {
        if seen[start] || next[start] == usize::MAX {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            face.push(d);
            d = next[d];
        }
        faces.push(face);
    }
    faces
}

/// Rotations with each cyclic list started at its smallest entry,
/// flattened. Two rotation systems on the same graph are equal iff their
/// keys are.
pub(crate) fn rotation_key(rot: &[Vec<usize>]) -> Vec<u32> {
    let mut key = Vec::with_capacity(rot.iter().map(Vec::len).sum());
    for r in rot {
        push_normalized(&mut key, r.iter().copied());
    }
    key
}

pub(crate) fn push_normalized(key: &mut Vec<u32>, cyc: impl Iterator<Item = usize> + Clone) {
    let items: Vec<usize> = cyc.collect();
    if items.is_empty() {
        return;
    }
    let start = (0..items.len()).min_by_key(|&i| items[i]).unwrap();
    for i in 0..items.len() {
        key.push(items[(start + i) % items.len()] as u32);
    }
}

pub(crate) fn reversed(rot: &[Vec<usize>]) -> Vec<Vec<usize>> {
    rot.iter()
        .map(|r| r.iter().rev().copied().collect())
        .collect()
}

/// A face as a closed walk of darts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSet {
    pub faces: Vec<Face>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

/// A combinatorial embedding: a cyclic order of the incident edges at every
/// vertex of the underlying graph.
#[derive(Clone)]
pub struct RotationSystem {
    graph: Arc<LabeledGraph>,
    rot: Vec<Vec<usize>>,
}

impl fmt::Debug for RotationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.to_label_map()).finish()
    }
}

impl PartialEq for RotationSystem {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph)
            && self.key() == other.key()
    }
}

impl Eq for RotationSystem {}

impl RotationSystem {
    /// Validates that every vertex lists exactly its incident edges.
    pub fn new(graph: Arc<LabeledGraph>, rot: Vec<Vec<usize>>) -> Result<Self, EmbeddingError> {
        if rot.len() != graph.vertex_count() {
            return Err(EmbeddingError::Invalid(
                "one rotation per vertex required".into(),
            ));
        }
        for (v, r) in rot.iter().enumerate() {
            let mut listed: Vec<usize> = r.clone();
            listed.sort_unstable();
            let mut incident: Vec<usize> = graph.neighbors(v).iter().map(|&(_, e)| e).collect();
            incident.sort_unstable();
            if listed != incident {
                return Err(EmbeddingError::Invalid(format!(
                    "rotation at `{}` does not list its incident edges",
                    graph.vertex_label(v)
                )));
            }
        }
        Ok(Self { graph, rot })
    }

    pub(crate) fn from_parts_unchecked(graph: Arc<LabeledGraph>, rot: Vec<Vec<usize>>) -> Self {
        Self { graph, rot }
    }

    /// Builds from a label map `vertex -> cyclic list of edge labels`.
    pub fn from_labels(
        graph: Arc<LabeledGraph>,
        rotations: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self, EmbeddingError> {
        let mut rot = vec![Vec::new(); graph.vertex_count()];
        for (v, list) in rotations {
            let vi = graph
                .vertex_index(v)
                .ok_or_else(|| GraphError::UnknownVertex(v.clone()))?;
            rot[vi] = list
                .iter()
                .map(|l| {
                    graph
                        .edge_index(l)
                        .ok_or_else(|| GraphError::UnknownEdge(l.clone()))
                })
                .collect::<Result<_, _>>()?;
        }
        Self::new(graph, rot)
    }

    /// Reconstructs the graph from the rotations: each edge label must
    /// appear at exactly two vertices.
    pub fn from_rotations(
        rotations: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self, EmbeddingError> {
        let mut ends: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (v, list) in rotations {
            for l in list {
                ends.entry(l).or_default().push(v);
            }
        }
        let mut b = GraphBuilder::new();
        for v in rotations.keys() {
            b.add_vertex(v);
        }
        for (l, vs) in &ends {
            if vs.len() != 2 {
                return Err(EmbeddingError::Invalid(format!(
                    "edge `{l}` appears at {} vertices",
                    vs.len()
                )));
            }
            b.add_edge(*l, vs[0], vs[1]);
        }
        let g = Arc::new(b.build()?);
        Self::from_labels(g, rotations)
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<LabeledGraph> {
        &self.graph
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rot
    }

    /// Rotation at a vertex as edge labels, started at the smallest label.
    pub fn rotation_labels(&self, v: &str) -> Option<Vec<String>> {
        let vi = self.graph.vertex_index(v)?;
        let mut key = Vec::new();
        push_normalized(&mut key, self.rot[vi].iter().copied());
        Some(
            key.into_iter()
                .map(|e| self.graph.edge_label(e as usize).to_string())
                .collect(),
        )
    }

    pub fn to_label_map(&self) -> BTreeMap<String, Vec<String>> {
        self.graph
            .vertices()
            .iter()
            .filter(|v| !self.rot[self.graph.vertex_index(v).unwrap()].is_empty())
            .map(|v| (v.clone(), self.rotation_labels(v).unwrap()))
            .collect()
    }

    pub fn key(&self) -> Vec<u32> {
        rotation_key(&self.rot)
    }

    /// Key shared by an embedding and its reflection.
    pub fn class_key(&self) -> Vec<u32> {
        let a = self.key();
        let b = rotation_key(&reversed(&self.rot));
        a.min(b)
    }

    pub fn reflect(&self) -> RotationSystem {
        Self {
            graph: self.graph.clone(),
            rot: reversed(&self.rot),
        }
    }

    pub fn face_successors(&self) -> Vec<usize> {
        face_successors(&self.graph, &self.rot)
    }

    pub fn trace_faces(&self) -> Result<FaceSet, EmbeddingError> {
        if !self.graph.is_connected() {
            return Err(EmbeddingError::Disconnected);
        }
        let faces = orbits(&self.face_successors())
            .into_iter()
            .map(|darts| Face { darts })
            .collect();
        Ok(FaceSet { faces })
    }

    pub fn genus(&self) -> Result<usize, EmbeddingError> {
        let f = self.trace_faces()?.len() as i64;
        let v = self.graph.vertex_count() as i64;
        let e = self.graph.edge_count() as i64;
        if v == 1 && e == 0 {
            return Ok(0);
        }
        let chi = v - e + f;
        Ok(((2 - chi) / 2) as usize)
    }

    /// Face walks as (vertex label, edge label) pairs: the tail of each dart
    /// and the edge it runs along.
    pub fn face_walks(&self) -> Result<Vec<Vec<(String, String)>>, EmbeddingError> {
        let g = &self.graph;
        Ok(self
            .trace_faces()?
            .faces
            .iter()
            .map(|f| {
                f.darts
                    .iter()
                    .map(|&d| {
                        (
                            g.vertex_label(dart_tail(g, d)).to_string(),
                            g.edge_label(d / 2).to_string(),
                        )
                    })
                    .collect()
            })
            .collect())
    }

    /// Restriction to the edges in `keep`; vertices left without edges are
    /// dropped.
    pub fn induced_embedding(&self, keep: &EdgeSet) -> Result<RotationSystem, EmbeddingError> {
        let mut idx = Vec::with_capacity(keep.len());
        for l in keep.iter() {
            idx.push(
                self.graph
                    .edge_index(l)
                    .ok_or_else(|| GraphError::UnknownEdge(l.clone()))?,
            );
        }
        Ok(self.induced_by_indices(&idx))
    }

    pub fn induced_by_indices(&self, keep: &[usize]) -> RotationSystem {
        let sub = Arc::new(self.graph.edge_subgraph(keep));
        let mut kept = vec![false; self.graph.edge_count()];
        for &e in keep {
            kept[e] = true;
        }
        let rot = sub
            .vertices()
            .iter()
            .map(|v| {
                let vi = self.graph.vertex_index(v).unwrap();
                self.rot[vi]
                    .iter()
                    .filter(|&&e| kept[e])
                    .map(|&e| sub.edge_index(self.graph.edge_label(e)).unwrap())
                    .collect()
            })
            .collect();
        Self::from_parts_unchecked(sub, rot)
    }

    /// Contracts `edge`. The merged vertex keeps the smaller endpoint label;
    /// edges that become parallel are merged, keeping the smaller label.
    pub fn contract_in_embedding(&self, edge: &str) -> Result<RotationSystem, EmbeddingError> {
        let g = &*self.graph;
        let e = g
            .edge_index(edge)
            .ok_or_else(|| GraphError::UnknownEdge(edge.to_string()))?;
        let (u, v) = g.endpoints(e);
        let mut merged = Vec::new();
        merged.extend(rotate_after(&self.rot[u], e));
        merged.extend(rotate_after(&self.rot[v], e));
        // Parallel classes at the merged vertex keep their smallest label.
        let mut keep_for_other: HashMap<usize, usize> = HashMap::new();
        for &f in &merged {
            let (a, b) = g.endpoints(f);
            let other = if a == u || a == v { b } else { a };
            keep_for_other
                .entry(other)
                .and_modify(|k| *k = (*k).min(f))
                .or_insert(f);
        }
        let survivors: BTreeSet<usize> = keep_for_other.values().copied().collect();
        let mut b = GraphBuilder::new();
        for (i, lab) in g.vertices().iter().enumerate() {
            if i != v {
                b.add_vertex(lab);
            }
        }
        let relabel = |x: usize| if x == v { u } else { x };
        for (f, ed) in g.edges().iter().enumerate() {
            if f == e {
                continue;
            }
            let touches = ed.u == u || ed.u == v || ed.v == u || ed.v == v;
            if touches && !survivors.contains(&f) {
                continue;
            }
            b.add_edge(
                ed.label.clone(),
                g.vertex_label(relabel(ed.u)),
                g.vertex_label(relabel(ed.v)),
            );
        }
        let ng = Arc::new(b.build()?);
        let map_edge = |f: usize| ng.edge_index(g.edge_label(f));
        let mut rot = vec![Vec::new(); ng.vertex_count()];
        for (i, lab) in g.vertices().iter().enumerate() {
            if i == v {
                continue;
            }
            let ni = ng.vertex_index(lab).unwrap();
            let src: Vec<usize> = if i == u {
                merged.clone()
            } else {
                self.rot[i].clone()
            };
            rot[ni] = src.into_iter().filter_map(map_edge).collect();
        }
        Ok(Self::from_parts_unchecked(ng, rot))
    }

    /// Deletes `delete`, then contracts the forest `contract`, without
    /// merging anything: a contracted cycle, a surviving loop or a surviving
    /// parallel pair is an error. Returns the resulting rotations indexed by
    /// representative vertex (`None` for merged-away or isolated vertices).
    pub(crate) fn strict_minor(
        &self,
        contract: &[usize],
        delete: &[usize],
    ) -> Option<Vec<Option<Vec<usize>>>> {
        let g = &*self.graph;
        let mut gone = vec![false; g.edge_count()];
        for &e in delete.iter().chain(contract) {
            gone[e] = true;
        }
        let mut rot: Vec<Vec<usize>> = self
            .rot
            .iter()
            .map(|r| {
                r.iter()
                    .copied()
                    .filter(|&e| !gone[e] || contract.contains(&e))
                    .collect()
            })
            .collect();
        let mut rep: Vec<usize> = (0..g.vertex_count()).collect();
        fn find(rep: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while rep[r] != r {
                r = rep[r];
            }
            let mut y = x;
            while rep[y] != r {
                let n = rep[y];
                rep[y] = r;
                y = n;
            }
            r
        }
        for &e in contract {
            let (a, b) = g.endpoints(e);
            let (ra, rb) = (find(&mut rep, a), find(&mut rep, b));
            if ra == rb {
                return None;
            }
            let mut merged: Vec<usize> = rotate_after(&rot[ra], e).collect();
            merged.extend(rotate_after(&rot[rb], e));
            rot[ra] = merged;
            rot[rb].clear();
            rep[rb] = ra;
        }
        let mut seen_pairs = BTreeSet::new();
        for (f, ed) in g.edges().iter().enumerate() {
            if gone[f] {
                continue;
            }
            let (a, b) = (find(&mut rep, ed.u), find(&mut rep, ed.v));
            if a == b || !seen_pairs.insert((a.min(b), a.max(b))) {
                return None;
            }
        }
        Some(
            (0..g.vertex_count())
                .map(|x| {
                    if find(&mut rep, x) == x && !rot[x].is_empty() {
                        Some(std::mem::take(&mut rot[x]))
                    } else {
                        None
                    }
                })
                .collect(),
        )
    }

    /// True iff an isomorphism of the underlying graphs that fixes every
    /// label in `a` carries this embedding onto `other` (or onto its
    /// reflection when `allow_reflection`).
    pub fn equivalent_up_to_fixing(
        &self,
        other: &RotationSystem,
        a: &EdgeSet,
        allow_reflection: bool,
    ) -> bool {
        let (g1, g2) = (&*self.graph, &*other.graph);
        if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
            return false;
        }
        let mut pins: Vec<Option<usize>> = vec![None; g1.edge_count()];
        for l in a.iter() {
            if let Some(e) = g1.edge_index(l) {
                match g2.edge_index(l) {
                    Some(f) => pins[e] = Some(f),
                    None => return false,
                }
            }
        }
        if g1.edge_count() == 0 {
            return g1.vertex_count() == g2.vertex_count();
        }
        let (start, targets): (usize, Vec<usize>) = match pins.iter().position(Option::is_some) {
            Some(e) => {
                let f = pins[e].unwrap();
                (2 * e, vec![2 * f, 2 * f + 1])
            }
            None => (0, (0..2 * g2.edge_count()).collect()),
        };
        let reflected = allow_reflection.then(|| reversed(&other.rot));
        let variants = std::iter::once(&other.rot).chain(reflected.as_ref());
        for rot2 in variants {
            for &t in &targets {
                if try_dart_map(g1, &self.rot, g2, rot2, &pins, start, t) {
                    return true;
                }
            }
        }
        false
    }

    /// Splits the elements off `cycle` into the two regions it bounds.
    pub fn cycle_sides(&self, cycle: &EdgeSet) -> Result<CycleSides, EmbeddingError> {
        let g = &*self.graph;
        let mut on_cycle = vec![false; g.edge_count()];
        let mut cyc_idx = Vec::new();
        for l in cycle.iter() {
            let e = g
                .edge_index(l)
                .ok_or_else(|| GraphError::UnknownEdge(l.clone()))?;
            on_cycle[e] = true;
            cyc_idx.push(e);
        }
        if !is_single_cycle(g, &cyc_idx) {
            return Err(EmbeddingError::NotACycle);
        }
        let faces = orbits(&self.face_successors());
        let mut face_of = vec![usize::MAX; 2 * g.edge_count()];
        for (i, f) in faces.iter().enumerate() {
            for &d in f {
                face_of[d] = i;
            }
        }
        let mut parent: Vec<usize> = (0..faces.len()).collect();
        fn root(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for e in 0..g.edge_count() {
            if !on_cycle[e] {
                let (a, b) = (
                    root(&mut parent, face_of[2 * e]),
                    root(&mut parent, face_of[2 * e + 1]),
                );
                parent[a] = b;
            }
        }
        let c0 = cyc_idx[0];
        let side_a = root(&mut parent, face_of[2 * c0]);
        let side_b = root(&mut parent, face_of[2 * c0 + 1]);
        if side_a == side_b {
            return Err(EmbeddingError::NotSpherical(self.genus().unwrap_or(1)));
        }
        let mut cycle_vertex = vec![false; g.vertex_count()];
        for &e in &cyc_idx {
            let (u, v) = g.endpoints(e);
            cycle_vertex[u] = true;
            cycle_vertex[v] = true;
        }
        let mut out = CycleSides::default();
        for v in 0..g.vertex_count() {
            if cycle_vertex[v] || g.degree(v) == 0 {
                continue;
            }
            let d = dart_from(g, g.neighbors(v)[0].1, v);
            let r = root(&mut parent, face_of[d]);
            let side = if r == side_a {
                &mut out.sides[0]
            } else {
                &mut out.sides[1]
            };
            side.vertices.insert(g.vertex_label(v).to_string());
        }
        for e in 0..g.edge_count() {
            if on_cycle[e] {
                continue;
            }
            let r = root(&mut parent, face_of[2 * e]);
            let side = if r == side_a {
                &mut out.sides[0]
            } else {
                &mut out.sides[1]
            };
            side.edges.insert(g.edge_label(e).to_string());
        }
        Ok(out)
    }
}

/// The elements of `rot` after `e`, cyclically, excluding `e`.
fn rotate_after(rot: &[usize], e: usize) -> impl Iterator<Item = usize> + '_ {
    let k = rot.len();
    let p = rot.iter().position(|&x| x == e).unwrap_or(0);
    (1..k).map(move |i| rot[(p + i) % k])
}

fn is_single_cycle(g: &LabeledGraph, edges: &[usize]) -> bool {
    if edges.len() < 3 {
        return false;
    }
    let mut deg: HashMap<usize, Vec<usize>> = HashMap::new();
    for &e in edges {
        let (u, v) = g.endpoints(e);
        deg.entry(u).or_default().push(e);
        deg.entry(v).or_default().push(e);
    }
    if deg.values().any(|l| l.len() != 2) {
        return false;
    }
    // Walk around from the first edge and count.
    let (start, _) = g.endpoints(edges[0]);
    let mut cur = start;
    let mut prev_edge = usize::MAX;
    let mut steps = 0;
    loop {
        let l = &deg[&cur];
        let e = if l[0] != prev_edge { l[0] } else { l[1] };
        cur = g.edge(e).other(cur);
        prev_edge = e;
        steps += 1;
        if cur == start {
            break;
        }
    }
    steps == edges.len()
}

fn try_dart_map(
    g1: &LabeledGraph,
    rot1: &[Vec<usize>],
    g2: &LabeledGraph,
    rot2: &[Vec<usize>],
    pins: &[Option<usize>],
    start: usize,
    target: usize,
) -> bool {
    const NONE: usize = usize::MAX;
    let mut vmap = vec![NONE; g1.vertex_count()];
    let mut vused = vec![false; g2.vertex_count()];
    let mut emap = vec![NONE; g1.edge_count()];
    let mut queue = VecDeque::new();
    queue.push_back((start, target));
    let mut mapped = 0;
    while let Some((d1, d2)) = queue.pop_front() {
        let (x, y) = (dart_tail(g1, d1), dart_tail(g2, d2));
        if vmap[x] != NONE {
            if vmap[x] != y {
                return false;
            }
            continue;
        }
        if vused[y] || rot1[x].len() != rot2[y].len() {
            return false;
        }
        vmap[x] = y;
        vused[y] = true;
        mapped += 1;
        let k = rot1[x].len();
        let p1 = rot1[x].iter().position(|&e| e == d1 / 2).unwrap();
        let p2 = rot2[y].iter().position(|&e| e == d2 / 2).unwrap();
        for i in 0..k {
            let f1 = rot1[x][(p1 + i) % k];
            let f2 = rot2[y][(p2 + i) % k];
            if emap[f1] != NONE && emap[f1] != f2 {
                return false;
            }
            if let Some(t) = pins[f1] {
                if t != f2 {
                    return false;
                }
            }
            emap[f1] = f2;
            let out1 = dart_from(g1, f1, x);
            let out2 = dart_from(g2, f2, y);
            queue.push_back((out1 ^ 1, out2 ^ 1));
        }
    }
    mapped == g1.vertex_count()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub vertices: BTreeSet<String>,
    pub edges: BTreeSet<String>,
}

/// The two regions bounded by a cycle. `sides[0]` lies to the left of the
/// cycle's smallest-labeled edge traversed in its dart `2e` direction.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSides {
    pub sides: [Side; 2],
}

impl CycleSides {
    pub fn side_of_vertex(&self, v: &str) -> Option<usize> {
        (0..2).find(|&i| self.sides[i].vertices.contains(v))
    }

    pub fn side_of_edge(&self, e: &str) -> Option<usize> {
        (0..2).find(|&i| self.sides[i].edges.contains(e))
    }
}

#[derive(Serialize, Deserialize)]
struct EmbeddingJson {
    rotations: BTreeMap<String, Vec<String>>,
}

impl Serialize for RotationSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EmbeddingJson {
            rotations: self.to_label_map(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RotationSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = EmbeddingJson::deserialize(d)?;
        RotationSystem::from_rotations(&raw.rotations).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn k4() -> Arc<LabeledGraph> {
        Arc::new(
            LabeledGraph::new(
                ["0", "1", "2", "3"],
                [
                    ("a", "0", "1"),
                    ("b", "0", "2"),
                    ("c", "0", "3"),
                    ("d", "1", "2"),
                    ("e", "1", "3"),
                    ("f", "2", "3"),
                ],
            )
            .unwrap(),
        )
    }

    fn planar_k4() -> RotationSystem {
        // Vertex 0 in the middle of triangle 1-2-3.
        let rot: BTreeMap<String, Vec<String>> = [
            ("0", vec!["a", "b", "c"]),
            ("1", vec!["a", "e", "d"]),
            ("2", vec!["b", "d", "f"]),
            ("3", vec!["c", "f", "e"]),
        ]
        .into_iter()
        .map(|(v, l)| (v.to_string(), l.into_iter().map(String::from).collect()))
        .collect();
        RotationSystem::from_labels(k4(), &rot).unwrap()
    }

    #[test]
    fn k4_faces_and_genus() {
        let e = planar_k4();
        assert_eq!(e.trace_faces().unwrap().len(), 4);
        assert_eq!(e.genus().unwrap(), 0);
        let mut rot = e.rotations().to_vec();
        rot[0].reverse();
        let bad = RotationSystem::new(k4(), rot).unwrap();
        assert_eq!(bad.trace_faces().unwrap().len(), 2);
        assert_eq!(bad.genus().unwrap(), 1);
    }

    #[test]
    fn reflection_is_equivalent_only_when_allowed() {
        let e = planar_k4();
        let r = e.reflect();
        assert!(e.equivalent_up_to_fixing(&e, &e.graph().edge_labels(), false));
        assert!(e.equivalent_up_to_fixing(&r, &EdgeSet::new(), true));
        assert!(!e.equivalent_up_to_fixing(&r, &e.graph().edge_labels(), false));
        // K4 has orientation-reversing automorphisms, so without pins the
        // reflection is realized.
        assert!(e.equivalent_up_to_fixing(&r, &EdgeSet::new(), false));
    }

    #[test]
    fn induced_triangle() {
        let e = planar_k4();
        let t = e
            .induced_embedding(&["d", "e", "f"].into_iter().collect())
            .unwrap();
        assert_eq!(t.graph().vertex_count(), 3);
        assert_eq!(t.trace_faces().unwrap().len(), 2);
        let all = e.induced_embedding(&e.graph().edge_labels()).unwrap();
        assert_eq!(all, e);
    }

    #[test]
    fn contraction_merges_parallels() {
        let e = planar_k4();
        let c = e.contract_in_embedding("a").unwrap();
        // 0 and 1 merge; b/d and c/e become parallel pairs.
        assert_eq!(c.graph().vertex_count(), 3);
        assert_eq!(c.graph().edge_count(), 3);
        assert_eq!(c.genus().unwrap(), 0);
    }

    #[test]
    fn cycle_sides_of_triangle() {
        let e = planar_k4();
        let sides = e
            .cycle_sides(&["d", "e", "f"].into_iter().collect())
            .unwrap();
        let filled: Vec<_> = sides
            .sides
            .iter()
            .filter(|s| !s.vertices.is_empty())
            .collect();
        assert_eq!(filled.len(), 1);
        assert!(filled[0].vertices.contains("0"));
        assert!(matches!(
            e.cycle_sides(&["a", "b"].into_iter().collect()),
            Err(EmbeddingError::NotACycle)
        ));
    }

    #[test]
    fn json_round_trip() {
        let e = planar_k4();
        let text = serde_json::to_string(&e).unwrap();
        let back: RotationSystem = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_label_map(), e.to_label_map());
    }
}
