//! The equaliser, negator and or gadgets, and arches.
//!
//! Each gadget is a housing sequence over V(m, I) whose new elements carry
//! labels prefixed by the gadget instance (`eq1-2.g`, `or1.e3`, ...), so
//! that several gadgets on one planet never share an edge label.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod indefinite;
pub use indefinite::{build_with, indefinite_or, IndefiniteOr};

use crate::graph::{EdgeSet, GraphBuilder, LabeledGraph};
use crate::sequence::{HybridSequence, Mode};
use crate::village::{
    claw_edge, house_vertex, inhabitant, path_edge, rim_vertex, village_builder, VillageError,
    VillageHandle, HUB,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("house indices must be distinct, got {0} twice")]
    IndexCollision(usize),
    #[error("equator {0} is not divisible by 3")]
    NotDivisibleByThree(usize),
    #[error("triple index {0} is outside [1, {1}]")]
    TripleOutOfRange(usize, usize),
    #[error("equator must be at least {0}")]
    EquatorTooSmall(usize),
    #[error("graph {0} does not contain the planet")]
    NoPlanet(usize),
    #[error(transparent)]
    Village(#[from] VillageError),
}

/// A gadget sequence with its village and the names of its special
/// elements (role name -> label).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub sequence: HybridSequence,
    pub roles: BTreeMap<String, String>,
}

impl Gadget {
    pub fn village(&self) -> VillageHandle {
        self.sequence
            .village()
            .expect("gadgets carry their village")
    }

    pub fn role(&self, name: &str) -> &str {
        self.roles
            .get(name)
            .unwrap_or_else(|| panic!("gadget has no role `{name}`"))
    }

    /// Village roles merged with the gadget's own.
    pub fn role_table(&self) -> BTreeMap<String, serde_json::Value> {
        let mut t = self.village().role_table();
        for (k, v) in &self.roles {
            t.insert(k.clone(), serde_json::json!(v));
        }
        t
    }
}

pub(crate) fn snap(b: &GraphBuilder) -> Arc<LabeledGraph> {
    Arc::new(b.build().expect("gadget graphs are simple"))
}

/// Removes the edges, then every vertex left without edges.
pub(crate) fn delete(b: &mut GraphBuilder, labels: &[&str]) {
    for l in labels {
        b.remove_edge(l).expect("gadget deletes an existing edge");
    }
    let used: BTreeSet<String> = b
        .edges
        .values()
        .flat_map(|(x, y)| [x.clone(), y.clone()])
        .collect();
    b.vertices.retain(|v| used.contains(v));
}

fn check_pair(m: usize, i: usize, j: usize) -> Result<(), GadgetError> {
    if m < 2 {
        return Err(GadgetError::EquatorTooSmall(2));
    }
    for k in [i, j] {
        if k == 0 || k > m {
            return Err(VillageError::IndexOutOfRange(k, m).into());
        }
    }
    if i == j {
        return Err(GadgetError::IndexCollision(i));
    }
    Ok(())
}

fn pair_roles(p: &str, i: usize, j: usize) -> BTreeMap<String, String> {
    let mut r = BTreeMap::new();
    r.insert("bridge".into(), format!("{p}.bridge"));
    r.insert("g".into(), format!("{p}.g"));
    r.insert("Hi.v6v7".into(), path_edge(i, 6));
    r.insert("Hj.v1v2".into(), path_edge(j, 1));
    r
}

/// Shared first half: G_1 = G_2 = V(m, {i, j}), G_3 adds the bridge from
/// `v6` of `H_i` to `v2` of `H_j`, G_4 removes `v6v7` of `H_i` and `v1v2`
/// of `H_j`.
fn pair_prefix(m: usize, i: usize, j: usize, p: &str) -> (Vec<Arc<LabeledGraph>>, GraphBuilder) {
    let houses: BTreeSet<usize> = [i, j].into_iter().collect();
    let mut b = village_builder(m, &houses);
    let g1 = snap(&b);
    b.add_edge(
        format!("{p}.bridge"),
        house_vertex(i, 6),
        house_vertex(j, 2),
    );
    let g3 = snap(&b);
    delete(&mut b, &[&path_edge(i, 6), &path_edge(j, 1)]);
    let g4 = snap(&b);
    (vec![g1.clone(), g1, g3, g4], b)
}

fn mirror_tail(mut graphs: Vec<Arc<LabeledGraph>>) -> Vec<Arc<LabeledGraph>> {
    // G_6..G_9 are copies of G_4, G_3, G_2, G_1.
    for k in (0..4).rev() {
        graphs.push(graphs[k].clone());
    }
    graphs
}

/// Nine-graph strict sequence with allocation set EQ({i, j}).
pub fn equaliser(m: usize, i: usize, j: usize) -> Result<Gadget, GadgetError> {
    check_pair(m, i, j)?;
    let p = format!("eq{i}-{j}");
    let (mut graphs, mut b) = pair_prefix(m, i, j, &p);
    b.add_edge(format!("{p}.g"), inhabitant(i), inhabitant(j));
    graphs.push(snap(&b));
    let graphs = mirror_tail(graphs);
    let houses = [i, j].into_iter().collect();
    Ok(Gadget {
        sequence: HybridSequence::strict(graphs).with_housing(m, houses),
        roles: pair_roles(&p, i, j),
    })
}

/// Nine-graph strict sequence with allocation set NEQ({i, j}). G_5 adds the
/// exhabitant `w'` of `H_i` with edges `a`, `b` to `v4`, `v6` of `H_i` and
/// `g` to the inhabitant of `H_j`.
pub fn negator(m: usize, i: usize, j: usize) -> Result<Gadget, GadgetError> {
    check_pair(m, i, j)?;
    let p = format!("neq{i}-{j}");
    let (mut graphs, mut b) = pair_prefix(m, i, j, &p);
    let wx = format!("{p}.wx");
    b.add_edge(format!("{p}.a"), &wx, house_vertex(i, 4));
    b.add_edge(format!("{p}.b"), &wx, house_vertex(i, 6));
    b.add_edge(format!("{p}.g"), &wx, inhabitant(j));
    graphs.push(snap(&b));
    let graphs = mirror_tail(graphs);
    let mut roles = pair_roles(&p, i, j);
    roles.insert("a".into(), format!("{p}.a"));
    roles.insert("b".into(), format!("{p}.b"));
    roles.insert("w'".into(), wx);
    let houses = [i, j].into_iter().collect();
    Ok(Gadget {
        sequence: HybridSequence::strict(graphs).with_housing(m, houses),
        roles,
    })
}

/// Which version of the or gadget to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrVariant {
    /// Weak paths run from `v2` to `v7` of `H_2`, the claw stays whole, and
    /// a choice among weak paths is only ever made when their number stays
    /// the same or drops. Allocation set OR.
    #[default]
    Corrected,
    /// The steps exactly as written: paths from `v4` to `v7` of `H_2`, `Q_0`
    /// added in G_7, second bridge from `v6` of `H_2` to `v2` of `H_3`.
    /// Allocation set `{f : f(3) = 1}`.
    Literal,
}

/// Fifteen-graph hybrid sequence on houses `3t-2, 3t-1, 3t` with allocation
/// set OR; its weak edges are the `e_k`, `f_k`.
pub fn or_gadget(m: usize, t: usize) -> Result<Gadget, GadgetError> {
    or_gadget_with(m, t, OrVariant::default())
}

pub fn or_gadget_with(m: usize, t: usize, variant: OrVariant) -> Result<Gadget, GadgetError> {
    if m == 0 || m % 3 != 0 {
        return Err(GadgetError::NotDivisibleByThree(m));
    }
    if t == 0 || t > m / 3 {
        return Err(GadgetError::TripleOutOfRange(t, m / 3));
    }
    let o = OrBuild::new(m, t);
    let (graphs, extra) = match variant {
        OrVariant::Corrected => o.corrected(),
        OrVariant::Literal => o.literal(),
    };
    let l = |s: &str| o.label(s);
    let weak: EdgeSet = (0..4)
        .flat_map(|k| [l(&format!("e{k}")), l(&format!("f{k}"))])
        .collect();
    let mut seq = HybridSequence::hybrid(graphs, &weak).with_housing(m, o.houses());
    seq.mode = Mode::Hybrid;
    let mut roles = BTreeMap::new();
    for k in 0..4 {
        for s in ["e", "f", "x"] {
            roles.insert(format!("{s}{k}"), l(&format!("{s}{k}")));
        }
    }
    for s in ["g1", "g2", "g3", "q", "bridge12", "bridge23"]
        .iter()
        .chain(extra)
    {
        roles.insert(s.to_string(), l(s));
    }
    roles.insert("H1".into(), o.h1.to_string());
    roles.insert("H2".into(), o.h2.to_string());
    roles.insert("H3".into(), o.h3.to_string());
    Ok(Gadget {
        sequence: seq,
        roles,
    })
}

struct OrBuild {
    m: usize,
    h1: usize,
    h2: usize,
    h3: usize,
    prefix: String,
}

impl OrBuild {
    fn new(m: usize, t: usize) -> Self {
        Self {
            m,
            h1: 3 * t - 2,
            h2: 3 * t - 1,
            h3: 3 * t,
            prefix: format!("or{t}"),
        }
    }

    fn label(&self, s: &str) -> String {
        format!("{}.{s}", self.prefix)
    }

    fn houses(&self) -> BTreeSet<usize> {
        [self.h1, self.h2, self.h3].into_iter().collect()
    }

    /// Weak path `Q_k` from `v_from` of `H_2` through `x_k` to `v7`.
    fn add_q(&self, b: &mut GraphBuilder, k: usize, from: usize) {
        let x = self.label(&format!("x{k}"));
        b.add_edge(
            self.label(&format!("e{k}")),
            house_vertex(self.h2, from),
            &x,
        );
        b.add_edge(self.label(&format!("f{k}")), &x, house_vertex(self.h2, 7));
    }

    fn q_labels(&self, ks: &[usize]) -> Vec<String> {
        ks.iter()
            .flat_map(|k| [self.label(&format!("e{k}")), self.label(&format!("f{k}"))])
            .collect()
    }

    fn restore(&self, b: &mut GraphBuilder, i: usize, k: usize) {
        b.add_edge(path_edge(i, k), house_vertex(i, k), house_vertex(i, k + 1));
    }

    /// `Q_1`, `Q_2` take the sides of `w_1`, `w_2` (G_5). In G_7 the strict
    /// edge `r` pins one of them, either one, which alone survives as `Q_0`
    /// in G_8. With `Q_0` pinned, `Q_3` takes the side of `w_3` (G_11). Once
    /// both are anonymous again, `q` forces one of them into `H_2` (G_13).
    fn corrected(&self) -> (Vec<Arc<LabeledGraph>>, &'static [&'static str]) {
        let (h1, h2, h3) = (self.h1, self.h2, self.h3);
        let l = |s: &str| self.label(s);
        let del = |b: &mut GraphBuilder, v: &[String]| {
            delete(b, &v.iter().map(String::as_str).collect::<Vec<_>>())
        };
        let mut b = village_builder(self.m, &self.houses());
        let mut graphs = Vec::with_capacity(15);
        let g1 = snap(&b);
        graphs.push(g1.clone());
        graphs.push(g1);
        b.add_edge(l("bridge12"), house_vertex(h1, 6), house_vertex(h2, 2));
        graphs.push(snap(&b));
        delete(&mut b, &[&path_edge(h1, 6), &path_edge(h2, 1)]);
        graphs.push(snap(&b));
        self.add_q(&mut b, 1, 2);
        self.add_q(&mut b, 2, 2);
        b.add_edge(l("g1"), l("x1"), inhabitant(h1));
        b.add_edge(l("g2"), l("x2"), inhabitant(h2));
        graphs.push(snap(&b));
        delete(&mut b, &[&l("g1"), &l("g2")]);
        graphs.push(snap(&b));
        self.restore(&mut b, h1, 6);
        self.restore(&mut b, h2, 1);
        b.add_edge(l("r"), l("x1"), house_vertex(h2, 6));
        graphs.push(snap(&b));
        // G_8
        let mut gone = self.q_labels(&[1, 2]);
        gone.extend([l("r"), l("bridge12")]);
        del(&mut b, &gone);
        self.add_q(&mut b, 0, 2);
        b.add_edge(l("r"), l("x0"), house_vertex(h2, 6));
        graphs.push(snap(&b));
        b.add_edge(l("bridge23"), house_vertex(h3, 6), house_vertex(h2, 2));
        graphs.push(snap(&b));
        delete(&mut b, &[&path_edge(h3, 6), &path_edge(h2, 1)]);
        graphs.push(snap(&b));
        self.add_q(&mut b, 3, 2);
        b.add_edge(l("g3"), l("x3"), inhabitant(h3));
        graphs.push(snap(&b));
        delete(&mut b, &[&l("g3"), &l("r")]);
        graphs.push(snap(&b));
        // G_13
        self.restore(&mut b, h3, 6);
        self.restore(&mut b, h2, 1);
        b.add_edge(l("q"), l("x0"), rim_vertex(self.m, 4 * h2 - 2));
        graphs.push(snap(&b));
        let mut gone = self.q_labels(&[0, 3]);
        gone.extend([l("q"), l("bridge23")]);
        del(&mut b, &gone);
        let last = snap(&b);
        graphs.push(last.clone());
        graphs.push(last);
        (graphs, &["r"])
    }

    fn literal(&self) -> (Vec<Arc<LabeledGraph>>, &'static [&'static str]) {
        let (h1, h2, h3) = (self.h1, self.h2, self.h3);
        let l = |s: &str| self.label(s);
        let mut b = village_builder(self.m, &self.houses());
        let mut graphs = Vec::with_capacity(15);
        let g1 = snap(&b);
        graphs.push(g1.clone());
        graphs.push(g1);
        b.add_edge(l("bridge12"), house_vertex(h1, 6), house_vertex(h2, 2));
        graphs.push(snap(&b));
        delete(
            &mut b,
            &[&path_edge(h1, 6), &path_edge(h2, 1), &claw_edge(h2, 2)],
        );
        graphs.push(snap(&b));
        self.add_q(&mut b, 1, 4);
        self.add_q(&mut b, 2, 4);
        b.add_edge(l("g1"), l("x1"), inhabitant(h1));
        b.add_edge(l("g2"), l("x2"), inhabitant(h2));
        graphs.push(snap(&b));
        delete(&mut b, &[&l("g1"), &l("g2")]);
        graphs.push(snap(&b));
        self.restore(&mut b, h1, 6);
        self.restore(&mut b, h2, 1);
        self.add_q(&mut b, 0, 4);
        b.add_edge(l("q"), l("x0"), rim_vertex(self.m, 4 * h2));
        graphs.push(snap(&b));
        let mut gone = self.q_labels(&[0, 1, 2]);
        gone.extend([l("q"), l("bridge12")]);
        delete(&mut b, &gone.iter().map(String::as_str).collect::<Vec<_>>());
        self.add_q(&mut b, 3, 4);
        graphs.push(snap(&b));
        b.add_edge(l("bridge23"), house_vertex(h2, 6), house_vertex(h3, 2));
        graphs.push(snap(&b));
        delete(&mut b, &[&path_edge(h2, 6), &path_edge(h3, 1)]);
        graphs.push(snap(&b));
        b.add_edge(l("g3"), l("x3"), inhabitant(h3));
        graphs.push(snap(&b));
        delete(&mut b, &[&l("e3"), &l("f3"), &l("g3")]);
        graphs.push(snap(&b));
        b.add_edge(claw_edge(h2, 2), inhabitant(h2), house_vertex(h2, 2));
        self.restore(&mut b, h2, 6);
        self.restore(&mut b, h3, 1);
        graphs.push(snap(&b));
        delete(&mut b, &[&l("bridge23")]);
        let last = snap(&b);
        graphs.push(last.clone());
        graphs.push(last);
        (graphs, &[])
    }
}

/// Unordered pairs `(i, j)`, `i < j`, of foundation indices joined by a
/// path in some graph of `s` whose interior avoids the planet.
pub fn arches(
    s: &HybridSequence,
    village: &VillageHandle,
) -> Result<BTreeSet<(usize, usize)>, GadgetError> {
    let mut out = BTreeSet::new();
    for (gi, g) in s.graphs.iter().enumerate() {
        out.extend(graph_arches(g, village).ok_or(GadgetError::NoPlanet(gi))?);
    }
    Ok(out)
}

/// Foundation index of each rim vertex, `None` off the rim.
fn foundation_of(g: &LabeledGraph, m: usize) -> Option<Vec<Option<usize>>> {
    let mut f = vec![None; g.vertex_count()];
    for k in 1..=4 * m {
        let v = g.vertex_index(&rim_vertex(m, k))?;
        f[v] = Some((k + 3) / 4);
    }
    Some(f)
}

pub(crate) fn graph_arches(
    g: &LabeledGraph,
    village: &VillageHandle,
) -> Option<BTreeSet<(usize, usize)>> {
    let m = village.m;
    let found = foundation_of(g, m)?;
    let hub = g.vertex_index(HUB)?;
    let on_planet = |v: usize| v == hub || found[v].is_some();
    let planet = village.planet_edges();
    let mut out = BTreeSet::new();
    let mut add = |a: usize, b: usize| {
        if a != b {
            out.insert((a.min(b), a.max(b)));
        }
    };
    // Chords between rim vertices.
    for e in g.edges() {
        if planet.contains(&e.label) {
            continue;
        }
        if let (Some(a), Some(b)) = (found[e.u], found[e.v]) {
            add(a, b);
        }
    }
    // Off-planet components and the foundations they touch.
    let mut seen = vec![false; g.vertex_count()];
    for start in 0..g.vertex_count() {
        if seen[start] || on_planet(start) {
            continue;
        }
        let mut touched = BTreeSet::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for &(y, _) in g.neighbors(x) {
                if let Some(f) = found[y] {
                    touched.insert(f);
                } else if y != hub && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        let t: Vec<usize> = touched.into_iter().collect();
        for (k, &a) in t.iter().enumerate() {
            for &b in &t[k + 1..] {
                add(a, b);
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::validate_sequence;

    #[test]
    fn shapes() {
        let eq = equaliser(2, 1, 2).unwrap();
        assert_eq!(eq.sequence.len(), 9);
        assert!(validate_sequence(&eq.sequence).valid);
        assert!(eq.sequence.weak_labels().is_empty());
        let neq = negator(2, 1, 2).unwrap();
        assert_eq!(neq.sequence.len(), 9);
        assert!(validate_sequence(&neq.sequence).valid);
        let or = or_gadget(3, 1).unwrap();
        assert_eq!(or.sequence.len(), 15);
        let r = validate_sequence(&or.sequence);
        assert!(r.valid, "{:?}", r.issues);
        let weak: Vec<String> = or.sequence.weak_labels().0.into_iter().collect();
        assert_eq!(
            weak,
            ["or1.e0", "or1.e1", "or1.e2", "or1.e3", "or1.f0", "or1.f1", "or1.f2", "or1.f3"]
        );
        assert!(matches!(
            equaliser(2, 1, 1),
            Err(GadgetError::IndexCollision(1))
        ));
        assert!(matches!(
            or_gadget(4, 1),
            Err(GadgetError::NotDivisibleByThree(4))
        ));
    }

    #[test]
    fn arch_sets() {
        let eq = equaliser(2, 1, 2).unwrap();
        let expect: BTreeSet<_> = [(1, 2)].into_iter().collect();
        assert_eq!(arches(&eq.sequence, &eq.village()).unwrap(), expect);
        let or = or_gadget(3, 1).unwrap();
        let expect: BTreeSet<_> = [(1, 2), (2, 3)].into_iter().collect();
        assert_eq!(arches(&or.sequence, &or.village()).unwrap(), expect);
        let v = VillageHandle::build(3, &[1, 2, 3].into_iter().collect()).unwrap();
        let bare = HybridSequence::strict(vec![v.graph.clone()]);
        assert!(arches(&bare, &v).unwrap().is_empty());
    }
}
