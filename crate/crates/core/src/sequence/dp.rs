//! Forward/backward reachability over the per-graph embedding states.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::housing::AllocationSet;
use super::relation::{state_table, step_relation, StateTable, StepRelation};
use super::{HybridSequence, SequenceError};
use crate::embedding::{EmbeddingError, RotationSystem};
use crate::village::VillageHandle;

pub const SCALE_CAP_ENV: &str = "PLANAR_SEQ_SCALE_CAP";

/// Limits beyond which exhaustive analysis is refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleCaps {
    pub max_graph_vertices: usize,
    pub max_states_per_graph: usize,
}

impl Default for ScaleCaps {
    fn default() -> Self {
        Self {
            max_graph_vertices: 5_000,
            max_states_per_graph: 200_000,
        }
    }
}

impl ScaleCaps {
    /// Defaults, overridden by `PLANAR_SEQ_SCALE_CAP`: either one number
    /// for both caps or `vertices=N,states=M`.
    pub fn from_env() -> Self {
        let mut caps = Self::default();
        if let Ok(text) = std::env::var(SCALE_CAP_ENV) {
            caps.apply(&text);
        }
        caps
    }

    fn apply(&mut self, text: &str) {
        let text = text.trim();
        if let Ok(n) = text.parse::<usize>() {
            self.max_graph_vertices = n;
            self.max_states_per_graph = n;
            return;
        }
        for part in text.split(',') {
            let Some((k, v)) = part.split_once('=') else {
                continue;
            };
            let Ok(v) = v.trim().parse::<usize>() else {
                continue;
            };
            match k.trim() {
                "vertices" => self.max_graph_vertices = v,
                "states" => self.max_states_per_graph = v,
                _ => {}
            }
        }
    }

    pub fn check_vertices(&self, what: &str, n: usize) -> Result<(), SequenceError> {
        if n > self.max_graph_vertices {
            return Err(SequenceError::NotCertifiedAtScale(format!(
                "{what} has {n} vertices, cap is {}",
                self.max_graph_vertices
            )));
        }
        Ok(())
    }
}

/// One oriented state index per graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimultaneousEmbedding {
    pub states: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub tables: Vec<Arc<StateTable>>,
    pub relations: Vec<StepRelation>,
    succ: Vec<Vec<Vec<usize>>>,
    alive: Vec<Vec<bool>>,
}

pub fn analyze(s: &HybridSequence, caps: &ScaleCaps) -> Result<Analysis, SequenceError> {
    if s.graphs.is_empty() {
        return Err(SequenceError::Empty);
    }
    for (i, g) in s.graphs.iter().enumerate() {
        caps.check_vertices(&format!("graph {i}"), g.vertex_count())?;
    }
    // Identical graphs share one table.
    let mut slot = Vec::with_capacity(s.graphs.len());
    let mut distinct: Vec<usize> = Vec::new();
    for (i, g) in s.graphs.iter().enumerate() {
        match distinct
            .iter()
            .position(|&j| Arc::ptr_eq(&s.graphs[j], g) || *s.graphs[j] == **g)
        {
            Some(p) => slot.push(p),
            None => {
                slot.push(distinct.len());
                distinct.push(i);
            }
        }
    }
    let built: Vec<Arc<StateTable>> = distinct
        .par_iter()
        .map(|&i| {
            state_table(&s.graphs[i], Some(caps.max_states_per_graph))
                .map(Arc::new)
                .map_err(|e| match e {
                    EmbeddingError::TooLarge(cap) => SequenceError::NotCertifiedAtScale(format!(
                        "graph {i} has more than {cap} embeddings"
                    )),
                    e => SequenceError::Embedding(i, e),
                })
        })
        .collect::<Result<_, _>>()?;
    let tables: Vec<Arc<StateTable>> = slot.iter().map(|&p| built[p].clone()).collect();
    let relations: Vec<StepRelation> = (0..s.graphs.len() - 1)
        .into_par_iter()
        .map(|i| step_relation(s, i, &tables[i], &tables[i + 1]))
        .collect::<Result<_, _>>()?;
    Ok(Analysis::from_relations(tables, relations))
}

impl Analysis {
    fn from_relations(tables: Vec<Arc<StateTable>>, relations: Vec<StepRelation>) -> Self {
        let n = tables.len();
        let succ: Vec<Vec<Vec<usize>>> = relations
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut adj = vec![Vec::new(); tables[i].len()];
                for &(a, b) in &r.pairs {
                    adj[a].push(b);
                }
                adj
            })
            .collect();
        let mut fwd: Vec<Vec<bool>> = tables.iter().map(|t| vec![false; t.len()]).collect();
        fwd[0].iter_mut().for_each(|x| *x = true);
        for i in 0..n - 1 {
            for (a, nexts) in succ[i].iter().enumerate() {
                if fwd[i][a] {
                    for &b in nexts {
                        fwd[i + 1][b] = true;
                    }
                }
            }
        }
        let mut bwd: Vec<Vec<bool>> = tables.iter().map(|t| vec![false; t.len()]).collect();
        bwd[n - 1].iter_mut().for_each(|x| *x = true);
        for i in (0..n - 1).rev() {
            for (a, nexts) in succ[i].iter().enumerate() {
                if nexts.iter().any(|&b| bwd[i + 1][b]) {
                    bwd[i][a] = true;
                }
            }
        }
        let alive = fwd
            .iter()
            .zip(&bwd)
            .map(|(f, b)| f.iter().zip(b).map(|(x, y)| *x && *y).collect())
            .collect();
        Self {
            tables,
            relations,
            succ,
            alive,
        }
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn embeddable(&self) -> bool {
        self.alive[0].iter().any(|&x| x)
    }

    /// States of graph `i` lying on some simultaneous embedding.
    pub fn alive(&self, i: usize) -> Vec<usize> {
        (0..self.alive[i].len())
            .filter(|&k| self.alive[i][k])
            .collect()
    }

    pub fn state(&self, i: usize, k: usize) -> &RotationSystem {
        &self.tables[i].states[k]
    }

    fn count_with(&self, allowed: impl Fn(usize, usize) -> bool) -> u128 {
        let mut cnt: Vec<u128> = (0..self.tables[0].len())
            .map(|a| u128::from(allowed(0, a)))
            .collect();
        for i in 0..self.len() - 1 {
            let mut next = vec![0u128; self.tables[i + 1].len()];
            for (a, nexts) in self.succ[i].iter().enumerate() {
                if cnt[a] == 0 {
                    continue;
                }
                for &b in nexts {
                    if allowed(i + 1, b) {
                        next[b] = next[b].saturating_add(cnt[a]);
                    }
                }
            }
            cnt = next;
        }
        cnt.into_iter().fold(0u128, |acc, x| acc.saturating_add(x))
    }

    /// Simultaneous embeddings with orientation (saturating).
    pub fn count_oriented(&self) -> u128 {
        self.count_with(|_, _| true)
    }

    /// Simultaneous embeddings up to global reflection.
    pub fn count_up_to_reflection(&self) -> u128 {
        let symmetric = self.count_with(|i, k| self.tables[i].mirror(k) == k);
        let total = self.count_oriented();
        if total == u128::MAX {
            return total;
        }
        (total + symmetric) / 2
    }

    /// Up to `limit` chains, one per reflection pair (the lexicographically
    /// smaller orientation), in lexicographic order.
    pub fn simultaneous_embeddings(&self, limit: usize) -> Vec<SimultaneousEmbedding> {
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(self.len());
        for a in self.alive(0) {
            self.extend_chain(&mut path, a, limit, &mut out);
            if out.len() >= limit {
                break;
            }
        }
        out
    }

    fn extend_chain(
        &self,
        path: &mut Vec<usize>,
        k: usize,
        limit: usize,
        out: &mut Vec<SimultaneousEmbedding>,
    ) {
        if out.len() >= limit {
            return;
        }
        let i = path.len();
        path.push(k);
        if i + 1 == self.len() {
            let mirror: Vec<usize> = path
                .iter()
                .enumerate()
                .map(|(j, &x)| self.tables[j].mirror(x))
                .collect();
            if *path <= mirror {
                out.push(SimultaneousEmbedding {
                    states: path.clone(),
                });
            }
        } else {
            for &b in &self.succ[i][k] {
                if self.alive[i + 1][b] {
                    self.extend_chain(path, b, limit, out);
                }
            }
        }
        path.pop();
    }

    /// Re-checks that consecutive states of `chain` are related.
    pub fn is_chain(&self, chain: &SimultaneousEmbedding) -> bool {
        chain.states.len() == self.len()
            && chain
                .states
                .windows(2)
                .enumerate()
                .all(|(i, w)| self.succ[i][w[0]].contains(&w[1]))
    }

    /// For each alive state of the first graph, the states of the last
    /// graph on a common simultaneous embedding.
    pub fn first_last_pairs(&self) -> Vec<(usize, BTreeSet<usize>)> {
        self.alive(0)
            .into_iter()
            .map(|a| {
                let mut cur = vec![false; self.tables[0].len()];
                cur[a] = true;
                for i in 0..self.len() - 1 {
                    let mut next = vec![false; self.tables[i + 1].len()];
                    for (x, nexts) in self.succ[i].iter().enumerate() {
                        if cur[x] {
                            for &b in nexts {
                                if self.alive[i + 1][b] {
                                    next[b] = true;
                                }
                            }
                        }
                    }
                    cur = next;
                }
                (a, (0..cur.len()).filter(|&b| cur[b]).collect())
            })
            .collect()
    }

    /// T-profiles of the first graph over all simultaneous embeddings.
    pub fn allocation(&self, village: &VillageHandle) -> Result<AllocationSet, SequenceError> {
        let mut set = AllocationSet::empty(village.houses.clone());
        for a in self.alive(0) {
            let tv = village.truth_values(self.state(0, a))?;
            set.insert(tv.into_values().collect());
        }
        Ok(set)
    }
}
