//! Labeled simple graphs.
//!
//! Vertices and edges carry string labels. Internally both are stored in
//! label-sorted order and addressed by dense indices, so iteration order is
//! deterministic and index `0` is always the smallest label.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge label `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{0}` is a loop")]
    Loop(String),
    #[error("edges `{0}` and `{1}` are parallel")]
    Parallel(String, String),
    #[error("edge `{edge}` uses undeclared endpoint `{vertex}`")]
    UndeclaredEndpoint { edge: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("vertex `{0}` is not isolated")]
    NotIsolated(String),
    #[error("strict edge `{0}` is not an edge of the pattern graph")]
    StrictNotInPattern(String),
    #[error("strict edge `{0}` is missing from the target graph")]
    StrictMissingInTarget(String),
}

/// A set of edge labels, iterated in sorted order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(pub BTreeSet<String>);

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.contains(label)
    }

    pub fn insert(&mut self, label: impl Into<String>) -> bool {
        self.0.insert(label.into())
    }

    pub fn iter(&self) -> impl Iterator<Item = &String> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.intersection(&other.0).cloned().collect())
    }

    /// Labels of `self` that are edges of `g`.
    pub fn restricted_to(&self, g: &LabeledGraph) -> EdgeSet {
        EdgeSet(
            self.0
                .iter()
                .filter(|l| g.edge_index(l).is_some())
                .cloned()
                .collect(),
        )
    }
}

impl<S: Into<String>> FromIterator<S> for EdgeSet {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        EdgeSet(iter.into_iter().map(Into::into).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub label: String,
    /// Endpoint indices with `u < v`.
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone)]
pub struct LabeledGraph {
    vertices: Vec<String>,
    vertex_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, usize>,
    /// Per vertex: (neighbor, edge index), sorted by neighbor.
    adj: Vec<Vec<(usize, usize)>>,
    pair_index: HashMap<(usize, usize), usize>,
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LabeledGraph({} vertices, {} edges)",
            self.vertices.len(),
            self.edges.len()
        )
    }
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for LabeledGraph {}

impl LabeledGraph {
    /// Builds a graph, rejecting duplicates, loops, parallel edges and
    /// undeclared endpoints.
    pub fn new<V, E, L, A, B>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (L, A, B)>,
        L: Into<String>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut vset = BTreeSet::new();
        for v in vertices {
            let v = v.into();
            if !vset.insert(v.clone()) {
                return Err(GraphError::DuplicateVertex(v));
            }
        }
        let mut emap: BTreeMap<String, (String, String)> = BTreeMap::new();
        for (l, a, b) in edges {
            let (l, a, b) = (l.into(), a.into(), b.into());
            if emap.contains_key(&l) {
                return Err(GraphError::DuplicateEdge(l));
            }
            emap.insert(l, (a, b));
        }
        Self::from_sorted(vset, emap)
    }

    fn from_sorted(
        vset: BTreeSet<String>,
        emap: BTreeMap<String, (String, String)>,
    ) -> Result<Self, GraphError> {
        let vertices: Vec<String> = vset.into_iter().collect();
        let vertex_index: HashMap<String, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut edges = Vec::with_capacity(emap.len());
        let mut pair_index: HashMap<(usize, usize), usize> = HashMap::with_capacity(emap.len());
        for (label, (a, b)) in emap {
            let ia = *vertex_index
                .get(&a)
                .ok_or_else(|| GraphError::UndeclaredEndpoint {
                    edge: label.clone(),
                    vertex: a.clone(),
                })?;
            let ib = *vertex_index
                .get(&b)
                .ok_or_else(|| GraphError::UndeclaredEndpoint {
                    edge: label.clone(),
                    vertex: b.clone(),
                })?;
            if ia == ib {
                return Err(GraphError::Loop(label));
            }
            let (u, v) = if ia < ib { (ia, ib) } else { (ib, ia) };
            if let Some(&prev) = pair_index.get(&(u, v)) {
                let first: &Edge = &edges[prev];
                return Err(GraphError::Parallel(first.label.clone(), label));
            }
            pair_index.insert((u, v), edges.len());
            edges.push(Edge { label, u, v });
        }
        let edge_index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.label.clone(), i))
            .collect();
        let mut adj = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Self {
            vertices,
            vertex_index,
            edges,
            edge_index,
            adj,
            pair_index,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_label(&self, e: usize) -> &str {
        &self.edges[e].label
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertex_index.get(label).copied()
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edge_index.get(label).copied()
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.edges[e].u, self.edges[e].v)
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.pair_index.get(&key).copied()
    }

    pub fn has_vertex(&self, label: &str) -> bool {
        self.vertex_index.contains_key(label)
    }

    pub fn has_edge(&self, label: &str) -> bool {
        self.edge_index.contains_key(label)
    }

    /// Endpoint labels of the edge with the given label.
    pub fn edge_endpoints_by_label(&self, label: &str) -> Option<(&str, &str)> {
        let e = self.edge_index(label)?;
        let (u, v) = self.endpoints(e);
        Some((&self.vertices[u], &self.vertices[v]))
    }

    pub fn edge_labels(&self) -> EdgeSet {
        self.edges.iter().map(|e| e.label.clone()).collect()
    }

    /// Total of vertices and edges.
    pub fn size(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn to_builder(&self) -> GraphBuilder {
        GraphBuilder {
            vertices: self.vertices.iter().cloned().collect(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (
                        e.label.clone(),
                        (self.vertices[e.u].clone(), self.vertices[e.v].clone()),
                    )
                })
                .collect(),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.vertices.len()
    }

    /// Cut vertices, by an iterative Hopcroft–Tarjan low-point search.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut time = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            let mut root_children = 0;
            // (vertex, parent edge, next adjacency position)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(&mut (x, pe, ref mut pos)) = stack.last_mut() {
                if *pos < self.adj[x].len() {
                    let (y, e) = self.adj[x][*pos];
                    *pos += 1;
                    if e == pe {
                        continue;
                    }
                    if disc[y] == usize::MAX {
                        disc[y] = time;
                        low[y] = time;
                        time += 1;
                        if x == root {
                            root_children += 1;
                        }
                        stack.push((y, e, 0));
                    } else {
                        low[x] = low[x].min(disc[y]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[x]);
                        if p != root && low[x] >= disc[p] {
                            is_cut[p] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }

    /// At least three vertices, connected, and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        self.vertices.len() >= 3 && self.is_connected() && self.cut_vertices().is_empty()
    }

    /// Deletes the given edges, then the given vertices, which must be
    /// isolated at that point.
    pub fn delete_parts(
        &self,
        edges: &EdgeSet,
        isolated_vertices: &BTreeSet<String>,
    ) -> Result<LabeledGraph, GraphError> {
        let mut b = self.to_builder();
        for e in edges.iter() {
            b.remove_edge(e)?;
        }
        for v in isolated_vertices {
            b.remove_isolated_vertex(v)?;
        }
        b.build()
    }

    /// Subgraph on the given edge indices and their endpoints.
    pub fn edge_subgraph(&self, keep: &[usize]) -> LabeledGraph {
        let mut b = GraphBuilder::new();
        for &e in keep {
            let (u, v) = self.endpoints(e);
            b.add_vertex(&self.vertices[u]);
            b.add_vertex(&self.vertices[v]);
            b.edges.insert(
                self.edges[e].label.clone(),
                (self.vertices[u].clone(), self.vertices[v].clone()),
            );
        }
        b.build().expect("subgraph of a simple graph is simple")
    }

    /// True if every vertex and edge label of `self` occurs in `other` with
    /// the same endpoints.
    pub fn is_literal_subgraph_of(&self, other: &LabeledGraph) -> bool {
        self.vertices.iter().all(|v| other.has_vertex(v))
            && self.edges.iter().all(|e| {
                other
                    .edge_endpoints_by_label(&e.label)
                    .is_some_and(|(a, b)| a == self.vertices[e.u] && b == self.vertices[e.v])
            })
    }

    /// Union of two graphs sharing labels; a shared edge label must have the
    /// same endpoints in both.
    pub fn union(&self, other: &LabeledGraph) -> Result<LabeledGraph, GraphError> {
        let mut b = self.to_builder();
        for v in &other.vertices {
            b.add_vertex(v);
        }
        for e in &other.edges {
            let (a, c) = (&other.vertices[e.u], &other.vertices[e.v]);
            match b.edges.get(&e.label) {
                Some((x, y)) if (x == a && y == c) || (x == c && y == a) => {}
                Some(_) => return Err(GraphError::DuplicateEdge(e.label.clone())),
                None => {
                    b.edges.insert(e.label.clone(), (a.clone(), c.clone()));
                }
            }
        }
        b.build()
    }
}

/// Mutable staging area for graph construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphBuilder {
    pub vertices: BTreeSet<String>,
    pub edges: BTreeMap<String, (String, String)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: impl AsRef<str>) -> &mut Self {
        if !self.vertices.contains(v.as_ref()) {
            self.vertices.insert(v.as_ref().to_string());
        }
        self
    }

    /// Adds an edge, declaring missing endpoints.
    pub fn add_edge(
        &mut self,
        label: impl Into<String>,
        a: impl AsRef<str>,
        b: impl AsRef<str>,
    ) -> &mut Self {
        self.add_vertex(a.as_ref());
        self.add_vertex(b.as_ref());
        self.edges.insert(
            label.into(),
            (a.as_ref().to_string(), b.as_ref().to_string()),
        );
        self
    }

    pub fn remove_edge(&mut self, label: &str) -> Result<&mut Self, GraphError> {
        self.edges
            .remove(label)
            .ok_or_else(|| GraphError::UnknownEdge(label.to_string()))?;
        Ok(self)
    }

    pub fn remove_isolated_vertex(&mut self, v: &str) -> Result<&mut Self, GraphError> {
        if !self.vertices.contains(v) {
            return Err(GraphError::UnknownVertex(v.to_string()));
        }
        if self.edges.values().any(|(a, b)| a == v || b == v) {
            return Err(GraphError::NotIsolated(v.to_string()));
        }
        self.vertices.remove(v);
        Ok(self)
    }

    pub fn has_edge(&self, label: &str) -> bool {
        self.edges.contains_key(label)
    }

    pub fn build(&self) -> Result<LabeledGraph, GraphError> {
        LabeledGraph::from_sorted(self.vertices.clone(), self.edges.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    u: String,
    v: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
}

impl Serialize for LabeledGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.label.clone(),
                    u: self.vertices[e.u].clone(),
                    v: self.vertices[e.v].clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        LabeledGraph::new(
            raw.vertices,
            raw.edges.into_iter().map(|e| (e.id, e.u, e.v)),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> LabeledGraph {
        LabeledGraph::new(
            ["a", "b", "c"],
            [("e1", "a", "b"), ("e2", "b", "c"), ("e3", "c", "a")],
        )
        .unwrap()
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(
            LabeledGraph::new(["a", "b"], [("e1", "a", "b"), ("e2", "a", "b")]),
            Err(GraphError::Parallel(_, _))
        ));
        assert!(matches!(
            LabeledGraph::new(["a", "a"], Vec::<(&str, &str, &str)>::new()),
            Err(GraphError::DuplicateVertex(_))
        ));
        assert!(matches!(
            LabeledGraph::new(["a"], [("e", "a", "a")]),
            Err(GraphError::Loop(_))
        ));
        assert!(matches!(
            LabeledGraph::new(["a"], [("e", "a", "b")]),
            Err(GraphError::UndeclaredEndpoint { .. })
        ));
        assert!(matches!(
            LabeledGraph::new(["a", "b", "c"], [("e", "a", "b"), ("e", "b", "c")]),
            Err(GraphError::DuplicateEdge(_))
        ));
    }

    #[test]
    fn triangle_basics() {
        let g = triangle();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.is_two_connected());
        let single = LabeledGraph::new(["a"], Vec::<(&str, &str, &str)>::new()).unwrap();
        assert_eq!(single.vertex_count(), 1);
        assert!(!single.is_two_connected());
    }

    #[test]
    fn path_has_cut_vertex() {
        let p = LabeledGraph::new(["a", "b", "c"], [("x", "a", "b"), ("y", "b", "c")]).unwrap();
        assert!(!p.is_two_connected());
        assert_eq!(p.cut_vertices(), vec![1]);
    }

    #[test]
    fn delete_parts_checks_isolation() {
        let g = triangle();
        let h = g
            .delete_parts(&["e1"].into_iter().collect(), &BTreeSet::new())
            .unwrap();
        assert_eq!(h.edge_count(), 2);
        assert!(!h.has_edge("e1"));
        assert_eq!(
            g.delete_parts(&EdgeSet::new(), &BTreeSet::new()).unwrap(),
            g
        );
        let err = g.delete_parts(&EdgeSet::new(), &["a".to_string()].into_iter().collect());
        assert!(matches!(err, Err(GraphError::NotIsolated(_))));
        let err = g.delete_parts(&["zz"].into_iter().collect(), &BTreeSet::new());
        assert!(matches!(err, Err(GraphError::UnknownEdge(_))));
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let g = triangle();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.starts_with(r#"{"vertices":["a","b","c"],"edges":[{"id":"e1""#));
        let back: LabeledGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}
