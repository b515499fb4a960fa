//! Complete enumeration of the spherical embeddings of a 2-connected graph.
//!
//! The search starts from an embedded cycle and repeatedly embeds a path of
//! a bridge (a component of the unembedded part together with its
//! attachments, or a single unembedded edge) into a face that contains all
//! of its attachments. The bridge with the fewest such faces goes first.
//! Every embedding of the graph is reached along exactly one branch.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use super::{
    dart_head, face_successors, orbits, reversed, rotation_key, EmbeddingError, RotationSystem,
};
use crate::graph::LabeledGraph;

pub const DEFAULT_ORACLE_MAX_EDGES: usize = 14;

/// Cap on rotation-system products examined by the oracle.
const ORACLE_PRODUCT_CAP: u128 = 50_000_000;

/// One spherical embedding up to reflection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingClass {
    pub representative: RotationSystem,
    pub reflection_allowed: bool,
}

#[derive(Clone)]
struct Partial {
    vin: Vec<bool>,
    ein: Vec<bool>,
    rot: Vec<Vec<usize>>,
}

struct Bridge {
    attachments: Vec<usize>,
    /// Unembedded vertices of the bridge; empty for a single-edge bridge.
    interior: Vec<usize>,
    /// The single edge, when there is no interior.
    edge: Option<usize>,
}

struct Search<'a> {
    g: &'a LabeledGraph,
    limit: usize,
    out: Vec<Vec<Vec<usize>>>,
}

/// All rotation systems of genus 0, both orientations included, sorted by
/// key. Fails if more than `limit` would be produced.
pub fn enumerate_oriented(
    g: &Arc<LabeledGraph>,
    limit: Option<usize>,
) -> Result<Vec<RotationSystem>, EmbeddingError> {
    let rots = run(g, false, limit.unwrap_or(usize::MAX))?;
    let mut keyed: Vec<(Vec<u32>, Vec<Vec<usize>>)> =
        rots.into_iter().map(|r| (rotation_key(&r), r)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    Ok(keyed
        .into_iter()
        .map(|(_, r)| RotationSystem::from_parts_unchecked(g.clone(), r))
        .collect())
}

/// One representative per embedding up to reflection. The representative
/// is the orientation with the smaller key; classes are sorted by it.
pub fn enumerate_embeddings(g: &Arc<LabeledGraph>) -> Result<Vec<EmbeddingClass>, EmbeddingError> {
    let rots = run(g, true, usize::MAX)?;
    Ok(into_classes(g, rots))
}

fn into_classes(g: &Arc<LabeledGraph>, rots: Vec<Vec<Vec<usize>>>) -> Vec<EmbeddingClass> {
    let mut classes: BTreeMap<Vec<u32>, Vec<Vec<usize>>> = BTreeMap::new();
    for r in rots {
        let rr = reversed(&r);
        let (k1, k2) = (rotation_key(&r), rotation_key(&rr));
        let (k, rep) = if k1 <= k2 { (k1, r) } else { (k2, rr) };
        classes.entry(k).or_insert(rep);
    }
    classes
        .into_values()
        .map(|r| EmbeddingClass {
            representative: RotationSystem::from_parts_unchecked(g.clone(), r),
            reflection_allowed: true,
        })
        .collect()
}

fn run(
    g: &Arc<LabeledGraph>,
    one_side: bool,
    limit: usize,
) -> Result<Vec<Vec<Vec<usize>>>, EmbeddingError> {
    if !g.is_two_connected() {
        return Err(EmbeddingError::NotTwoConnected);
    }
    let cycle = find_cycle(g);
    let n = g.vertex_count();
    let mut p = Partial {
        vin: vec![false; n],
        ein: vec![false; g.edge_count()],
        rot: vec![Vec::new(); n],
    };
    let k = cycle.len();
    for i in 0..k {
        let (v, e_out) = cycle[i];
        let e_in = cycle[(i + k - 1) % k].1;
        p.vin[v] = true;
        p.ein[e_out] = true;
        p.rot[v] = vec![e_in, e_out];
    }
    let mut s = Search {
        g,
        limit,
        out: Vec::new(),
    };
    s.extend(p, one_side)?;
    if s.out.is_empty() {
        return Err(EmbeddingError::NonPlanar);
    }
    Ok(s.out)
}

/// A cycle through vertex 0 as (vertex, edge to the next vertex) pairs.
fn find_cycle(g: &LabeledGraph) -> Vec<(usize, usize)> {
    // Vertex 0 has two neighbors a, b; a shortest a-b path avoiding 0 closes
    // a cycle (the graph is 2-connected).
    let (a, ea) = g.neighbors(0)[0];
    let (b, eb) = g.neighbors(0)[1];
    let n = g.vertex_count();
    let mut prev = vec![usize::MAX; n];
    let mut prev_edge = vec![usize::MAX; n];
    let mut q = VecDeque::new();
    prev[a] = a;
    q.push_back(a);
    while let Some(x) = q.pop_front() {
        if x == b {
            break;
        }
        for &(y, e) in g.neighbors(x) {
            if y != 0 && prev[y] == usize::MAX {
                prev[y] = x;
                prev_edge[y] = e;
                q.push_back(y);
            }
        }
    }
    // Path a .. b, then b -> 0 -> a.
    let mut path = vec![b];
    let mut x = b;
    while x != a {
        x = prev[x];
        path.push(x);
    }
    path.reverse();
    let mut cycle = vec![(0, ea)];
    for w in path.windows(2) {
        cycle.push((w[0], prev_edge[w[1]]));
    }
    cycle.push((b, eb));
    cycle
}

impl Search<'_> {
    fn extend(&mut self, p: Partial, one_side: bool) -> Result<(), EmbeddingError> {
        let g = self.g;
        let bridges = bridges(g, &p);
        if bridges.is_empty() {
            if self.out.len() >= self.limit {
                return Err(EmbeddingError::TooLarge(self.limit));
            }
            self.out.push(p.rot);
            return Ok(());
        }
        let faces = orbits(&face_successors(g, &p.rot));
        let words = g.vertex_count().div_ceil(64);
        let mut membership = vec![0u64; faces.len() * words];
        for (i, f) in faces.iter().enumerate() {
            for &d in f {
                let v = dart_head(g, d);
                membership[i * words + v / 64] |= 1 << (v % 64);
            }
        }
        let admissible = |b: &Bridge| -> Vec<usize> {
            (0..faces.len())
                .filter(|&i| {
                    b.attachments
                        .iter()
                        .all(|&v| membership[i * words + v / 64] & (1 << (v % 64)) != 0)
                })
                .collect()
        };
        let mut best: Option<(usize, Vec<usize>)> = None;
        for (i, b) in bridges.iter().enumerate() {
            let adm = admissible(b);
            if adm.is_empty() {
                return Ok(());
            }
            if best.as_ref().is_none_or(|(_, a)| adm.len() < a.len()) {
                best = Some((i, adm));
            }
        }
        let (bi, mut adm) = best.unwrap();
        if one_side {
            adm.truncate(1);
        }
        let path = bridge_path(g, &p, &bridges[bi]);
        for fi in adm {
            let mut q = p.clone();
            embed_path(g, &mut q, &path, &faces[fi]);
            self.extend(q, false)?;
        }
        Ok(())
    }
}

fn bridges(g: &LabeledGraph, p: &Partial) -> Vec<Bridge> {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if p.vin[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut interior = vec![s];
        let mut attachments = Vec::new();
        comp[s] = id;
        let mut i = 0;
        while i < interior.len() {
            let x = interior[i];
            i += 1;
            for &(y, _) in g.neighbors(x) {
                if p.vin[y] {
                    attachments.push(y);
                } else if comp[y] == usize::MAX {
                    comp[y] = id;
                    interior.push(y);
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        out.push(Bridge {
            attachments,
            interior,
            edge: None,
        });
    }
    for (e, ed) in g.edges().iter().enumerate() {
        if !p.ein[e] && p.vin[ed.u] && p.vin[ed.v] {
            out.push(Bridge {
                attachments: vec![ed.u, ed.v],
                interior: Vec::new(),
                edge: Some(e),
            });
        }
    }
    out
}

/// A path through the bridge between two distinct attachments, as vertices
/// and the edges between consecutive ones.
fn bridge_path(g: &LabeledGraph, p: &Partial, b: &Bridge) -> (Vec<usize>, Vec<usize>) {
    if let Some(e) = b.edge {
        let (u, v) = g.endpoints(e);
        return (vec![u, v], vec![e]);
    }
    let start = b.attachments[0];
    let inside = |x: usize| !p.vin[x];
    let n = g.vertex_count();
    let mut prev: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); n];
    let mut q = VecDeque::new();
    for &(y, e) in g.neighbors(start) {
        if inside(y) && b.interior.contains(&y) && prev[y].0 == usize::MAX {
            prev[y] = (start, e);
            q.push_back(y);
        }
    }
    while let Some(x) = q.pop_front() {
        for &(y, e) in g.neighbors(x) {
            if p.vin[y] && y != start {
                let mut verts = vec![y, x];
                let mut edges = vec![e];
                let mut cur = x;
                while cur != start {
                    let (pv, pe) = prev[cur];
                    edges.push(pe);
                    verts.push(pv);
                    cur = pv;
                }
                verts.reverse();
                edges.reverse();
                return (verts, edges);
            }
            if inside(y) && prev[y].0 == usize::MAX {
                prev[y] = (x, e);
                q.push_back(y);
            }
        }
    }
    unreachable!("2-connected graphs give every bridge two attachments")
}

fn embed_path(g: &LabeledGraph, p: &mut Partial, path: &(Vec<usize>, Vec<usize>), face: &[usize]) {
    let (verts, edges) = path;
    let a = verts[0];
    let b = *verts.last().unwrap();
    let arriving = |v: usize| -> usize {
        let d = *face.iter().find(|&&d| dart_head(g, d) == v).unwrap();
        d / 2
    };
    let (ein_a, ein_b) = (arriving(a), arriving(b));
    insert_after(&mut p.rot[a], ein_a, edges[0]);
    insert_after(&mut p.rot[b], ein_b, *edges.last().unwrap());
    for i in 1..verts.len() - 1 {
        let v = verts[i];
        p.vin[v] = true;
        p.rot[v] = vec![edges[i - 1], edges[i]];
    }
    for &e in edges {
        p.ein[e] = true;
    }
}

fn insert_after(rot: &mut Vec<usize>, after: usize, e: usize) {
    let i = rot.iter().position(|&x| x == after).unwrap();
    rot.insert(i + 1, e);
}

/// Brute-force ground truth: every product of cyclic orders, keeping the
/// genus-0 ones, bucketed into reflection classes.
pub fn oracle_enumerate(
    g: &Arc<LabeledGraph>,
    max_edges: usize,
) -> Result<Vec<EmbeddingClass>, EmbeddingError> {
    if g.edge_count() > max_edges {
        return Err(EmbeddingError::TooLarge(max_edges));
    }
    if !g.is_connected() {
        return Err(EmbeddingError::Disconnected);
    }
    let per_vertex: Vec<Vec<Vec<usize>>> = (0..g.vertex_count())
        .map(|v| cyclic_orders(g.neighbors(v).iter().map(|&(_, e)| e).collect()))
        .collect();
    let product: u128 = per_vertex.iter().map(|o| o.len() as u128).product();
    if product > ORACLE_PRODUCT_CAP {
        return Err(EmbeddingError::TooLarge(ORACLE_PRODUCT_CAP as usize));
    }
    let target_faces = 2 + g.edge_count() as i64 - g.vertex_count() as i64;
    let mut choice = vec![0usize; per_vertex.len()];
    let mut found = Vec::new();
    loop {
        let rot: Vec<Vec<usize>> = choice
            .iter()
            .enumerate()
            .map(|(v, &c)| per_vertex[v][c].clone())
            .collect();
        let faces = orbits(&face_successors(g, &rot)).len() as i64;
        if faces == target_faces {
            found.push(rot);
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(into_classes(g, found));
            }
            choice[i] += 1;
            if choice[i] < per_vertex[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// All cyclic orders of `items`, each listed with `items[0]` first.
fn cyclic_orders(items: Vec<usize>) -> Vec<Vec<usize>> {
    if items.len() <= 2 {
        return vec![items];
    }
    let first = items[0];
    let mut out = Vec::new();
    let mut rest: Vec<usize> = items[1..].to_vec();
    permute(&mut rest, 0, &mut |perm| {
        let mut o = vec![first];
        o.extend_from_slice(perm);
        out.push(o);
    });
    out
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(&str, &str, &str)]) -> Arc<LabeledGraph> {
        let mut vs: Vec<&str> = edges.iter().flat_map(|e| [e.1, e.2]).collect();
        vs.sort_unstable();
        vs.dedup();
        Arc::new(LabeledGraph::new(vs, edges.iter().copied()).unwrap())
    }

    #[test]
    fn cycle_and_k4_have_one_class() {
        let c4 = graph(&[
            ("a", "0", "1"),
            ("b", "1", "2"),
            ("c", "2", "3"),
            ("d", "3", "0"),
        ]);
        assert_eq!(enumerate_embeddings(&c4).unwrap().len(), 1);
        assert_eq!(enumerate_oriented(&c4, None).unwrap().len(), 1);
        let k4 = graph(&[
            ("a", "0", "1"),
            ("b", "0", "2"),
            ("c", "0", "3"),
            ("d", "1", "2"),
            ("e", "1", "3"),
            ("f", "2", "3"),
        ]);
        assert_eq!(enumerate_embeddings(&k4).unwrap().len(), 1);
        assert_eq!(enumerate_oriented(&k4, None).unwrap().len(), 2);
        assert_eq!(oracle_enumerate(&k4, 14).unwrap().len(), 1);
    }

    #[test]
    fn k5_is_rejected() {
        let mut es = Vec::new();
        let names = ["0", "1", "2", "3", "4"];
        let labels: Vec<String> = (0..10).map(|i| format!("e{i}")).collect();
        let mut k = 0;
        for i in 0..5 {
            for j in i + 1..5 {
                es.push((labels[k].as_str(), names[i], names[j]));
                k += 1;
            }
        }
        let g = graph(&es);
        assert_eq!(enumerate_embeddings(&g), Err(EmbeddingError::NonPlanar));
        assert!(oracle_enumerate(&g, 14).unwrap().is_empty());
    }

    #[test]
    fn not_two_connected_is_rejected() {
        let p = graph(&[("a", "0", "1"), ("b", "1", "2")]);
        assert_eq!(
            enumerate_embeddings(&p),
            Err(EmbeddingError::NotTwoConnected)
        );
    }
}
