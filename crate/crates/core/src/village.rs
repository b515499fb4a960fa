//! Villages: a wheel (the planet) with houses glued onto its rim.
//!
//! Labels are fixed by convention so that gadgets, unions and restrictions
//! agree on shared elements:
//!
//! * hub `c`, rim vertices `s1..s{4m}`, rim edges `rim{k}` (from `s{k}` to
//!   `s{k+1}`), spokes `spoke{k}`;
//! * house `i` has path vertices `v1 = s{4i-3}`, `h{i}.v2` .. `h{i}.v6`,
//!   `v7 = s{4i-1}`, path edges `h{i}.p{k}` from `v_k` to `v_{k+1}`, the
//!   inhabitant `h{i}.w` and claw edges `h{i}.c2`, `h{i}.c4`, `h{i}.c6`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{EmbeddingError, RotationSystem};
use crate::graph::{EdgeSet, GraphBuilder, LabeledGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VillageError {
    #[error("equator must be at least 1")]
    EmptyEquator,
    #[error("house index {0} is outside [1, {1}]")]
    IndexOutOfRange(usize, usize),
    #[error("bounding cycle of house {0} is not present")]
    MissingBoundingCycle(usize),
    #[error("graph is not the village V({0}, {1:?})")]
    NotVillage(usize, BTreeSet<usize>),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

pub const HUB: &str = "c";

pub fn rim_vertex(m: usize, k: usize) -> String {
    let n = 4 * m;
    format!("s{}", (k + n - 1) % n + 1)
}

pub fn rim_edge(m: usize, k: usize) -> String {
    let n = 4 * m;
    format!("rim{}", (k + n - 1) % n + 1)
}

pub fn spoke(k: usize) -> String {
    format!("spoke{k}")
}

/// Vertex `v_k` (1..=7) of house `i`.
pub fn house_vertex(i: usize, k: usize) -> String {
    match k {
        1 => format!("s{}", 4 * i - 3),
        7 => format!("s{}", 4 * i - 1),
        _ => format!("h{i}.v{k}"),
    }
}

pub fn inhabitant(i: usize) -> String {
    format!("h{i}.w")
}

/// Path edge from `v_k` to `v_{k+1}` of house `i`.
pub fn path_edge(i: usize, k: usize) -> String {
    format!("h{i}.p{k}")
}

/// Claw edge from the inhabitant to `v_k` (k in {2, 4, 6}).
pub fn claw_edge(i: usize, k: usize) -> String {
    format!("h{i}.c{k}")
}

/// Rim positions `4i-3 ..= 4i` owned by house `i`.
pub fn foundation_positions(i: usize) -> [usize; 4] {
    [4 * i - 3, 4 * i - 2, 4 * i - 1, 4 * i]
}

/// Staging builder for V(m, I), for gadget constructions.
pub fn village_builder(m: usize, houses: &BTreeSet<usize>) -> GraphBuilder {
    let mut b = GraphBuilder::new();
    b.add_vertex(HUB);
    for k in 1..=4 * m {
        b.add_edge(rim_edge(m, k), rim_vertex(m, k), rim_vertex(m, k + 1));
        b.add_edge(spoke(k), HUB, rim_vertex(m, k));
    }
    for &i in houses {
        for k in 1..=6 {
            b.add_edge(path_edge(i, k), house_vertex(i, k), house_vertex(i, k + 1));
        }
        for k in [2, 4, 6] {
            b.add_edge(claw_edge(i, k), inhabitant(i), house_vertex(i, k));
        }
    }
    b
}

/// A village graph with its named roles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VillageHandle {
    pub graph: Arc<LabeledGraph>,
    pub m: usize,
    pub houses: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HouseRoles {
    pub path: Vec<String>,
    pub inhabitant: String,
    pub path_edges: Vec<String>,
    pub claw_edges: Vec<String>,
    pub foundation: Vec<String>,
}

impl VillageHandle {
    pub fn build(m: usize, houses: &BTreeSet<usize>) -> Result<Self, VillageError> {
        if m == 0 {
            return Err(VillageError::EmptyEquator);
        }
        if let Some(&i) = houses.iter().find(|&&i| i == 0 || i > m) {
            return Err(VillageError::IndexOutOfRange(i, m));
        }
        let graph = Arc::new(
            village_builder(m, houses)
                .build()
                .expect("village construction is simple"),
        );
        Ok(Self {
            graph,
            m,
            houses: houses.clone(),
        })
    }

    pub fn hub(&self) -> &'static str {
        HUB
    }

    pub fn rim(&self) -> Vec<String> {
        (1..=4 * self.m).map(|k| rim_vertex(self.m, k)).collect()
    }

    pub fn foundation(&self, i: usize) -> Vec<String> {
        foundation_positions(i)
            .iter()
            .map(|&k| rim_vertex(self.m, k))
            .collect()
    }

    pub fn house_roles(&self, i: usize) -> HouseRoles {
        HouseRoles {
            path: (1..=7).map(|k| house_vertex(i, k)).collect(),
            inhabitant: inhabitant(i),
            path_edges: (1..=6).map(|k| path_edge(i, k)).collect(),
            claw_edges: [2, 4, 6].iter().map(|&k| claw_edge(i, k)).collect(),
            foundation: self.foundation(i),
        }
    }

    pub fn planet_vertices(&self) -> BTreeSet<String> {
        let mut s: BTreeSet<String> = self.rim().into_iter().collect();
        s.insert(HUB.to_string());
        s
    }

    pub fn planet_edges(&self) -> EdgeSet {
        (1..=4 * self.m)
            .flat_map(|k| [rim_edge(self.m, k), spoke(k)])
            .collect()
    }

    /// House path plus the rim segment from `v7` back to `v1`.
    pub fn bounding_cycle(&self, i: usize) -> EdgeSet {
        let mut c: EdgeSet = (1..=6).map(|k| path_edge(i, k)).collect();
        c.insert(rim_edge(self.m, 4 * i - 3));
        c.insert(rim_edge(self.m, 4 * i - 2));
        c
    }

    /// `T(H_i)` for every house: 1 iff the inhabitant lies on the side of
    /// the bounding cycle away from the hub. `e` may embed a supergraph.
    pub fn truth_values(&self, e: &RotationSystem) -> Result<BTreeMap<usize, bool>, VillageError> {
        let mut out = BTreeMap::new();
        for &i in &self.houses {
            let cyc = self.bounding_cycle(i);
            if cyc.iter().any(|l| !e.graph().has_edge(l)) {
                return Err(VillageError::MissingBoundingCycle(i));
            }
            let sides = e.cycle_sides(&cyc)?;
            let hub = sides.side_of_vertex(HUB);
            let w = sides.side_of_vertex(&inhabitant(i));
            out.insert(i, hub != w);
        }
        Ok(out)
    }

    pub fn role_table(&self) -> BTreeMap<String, serde_json::Value> {
        let mut t = BTreeMap::new();
        t.insert("hub".into(), serde_json::json!(HUB));
        t.insert("rim".into(), serde_json::json!(self.rim()));
        for &i in &self.houses {
            t.insert(
                format!("H{i}"),
                serde_json::to_value(self.house_roles(i)).unwrap(),
            );
        }
        t
    }
}
