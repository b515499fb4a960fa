//! Temporal sequences of graphs and their simultaneous embeddings.

mod dp;
mod housing;
mod relation;

pub use dp::{analyze, Analysis, ScaleCaps, SimultaneousEmbedding, SCALE_CAP_ENV};
pub use housing::{
    allocation_set, housing_report, is_housing_sequence, AllocationSet, Check, CheckStatus,
    HousingReport, CHECK_ENDPOINTS, CHECK_HUB_DEGREE, CHECK_PLANET, CHECK_RIGID, CHECK_START,
    CHECK_TWO_CONNECTED,
};
pub use relation::{
    indefinite_step_relation, minor_splits, state_table, step_relation, MinorSplit, StateTable,
    StepRelation,
};

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::EmbeddingError;
use crate::graph::{EdgeSet, GraphError, LabeledGraph};
use crate::iso::{first_witness, LabelMap};
use crate::village::VillageError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("sequence is empty")]
    Empty,
    #[error("step {0}: neither graph is a hybrid subgraph of the other")]
    InvalidStep(usize),
    #[error("step {0}: no deletion/contraction split relates the graphs")]
    NoMinorSplit(usize),
    #[error("step {0}: {1} removed edges is too many splits to search")]
    TooManySplits(usize, usize),
    #[error("graph {0}: {1}")]
    Embedding(usize, EmbeddingError),
    #[error("not certified at this scale: {0}")]
    NotCertifiedAtScale(String),
    #[error("sequence carries no village description")]
    NoHousing,
    #[error(transparent)]
    Village(#[from] VillageError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Hybrid,
    Weak,
    Indefinite,
}

/// The village a housing sequence starts and ends with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HousingInfo {
    pub m: usize,
    pub index_set: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HybridSequence {
    pub mode: Mode,
    pub strict_edges: EdgeSet,
    pub graphs: Vec<Arc<LabeledGraph>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub housing: Option<HousingInfo>,
}

impl HybridSequence {
    /// All edges strict.
    pub fn strict(graphs: Vec<Arc<LabeledGraph>>) -> Self {
        let strict_edges = all_labels(&graphs);
        Self {
            mode: Mode::Strict,
            strict_edges,
            graphs,
            housing: None,
        }
    }

    /// All edges strict except `weak`.
    pub fn hybrid(graphs: Vec<Arc<LabeledGraph>>, weak: &EdgeSet) -> Self {
        let strict_edges = EdgeSet(all_labels(&graphs).0.difference(&weak.0).cloned().collect());
        let mode = if weak.is_empty() {
            Mode::Strict
        } else {
            Mode::Hybrid
        };
        Self {
            mode,
            strict_edges,
            graphs,
            housing: None,
        }
    }

    pub fn with_housing(mut self, m: usize, index_set: BTreeSet<usize>) -> Self {
        self.housing = Some(HousingInfo { m, index_set });
        self
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Total vertices plus edges over all graphs.
    pub fn size(&self) -> usize {
        self.graphs.iter().map(|g| g.size()).sum()
    }

    pub fn all_labels(&self) -> EdgeSet {
        all_labels(&self.graphs)
    }

    pub fn weak_labels(&self) -> EdgeSet {
        EdgeSet(
            self.all_labels()
                .0
                .difference(&self.strict_edges.0)
                .cloned()
                .collect(),
        )
    }

    /// Strict labels present in graph `i`.
    pub fn strict_in(&self, i: usize) -> EdgeSet {
        self.strict_edges.restricted_to(&self.graphs[i])
    }

    pub fn reversed(&self) -> Self {
        let mut s = self.clone();
        s.graphs.reverse();
        s
    }

    pub fn village(&self) -> Result<crate::village::VillageHandle, SequenceError> {
        let h = self.housing.as_ref().ok_or(SequenceError::NoHousing)?;
        Ok(crate::village::VillageHandle::build(h.m, &h.index_set)?)
    }
}

pub(crate) fn all_labels(graphs: &[Arc<LabeledGraph>]) -> EdgeSet {
    graphs
        .iter()
        .flat_map(|g| g.edges().iter().map(|e| e.label.clone()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `G_i` is contained in `G_{i+1}`.
    Grows,
    /// `G_{i+1}` is contained in `G_i`.
    Shrinks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub index: usize,
    pub direction: Option<Direction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LabelMap>,
    /// Contracted and deleted edges, for indefinite steps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<(Vec<String>, Vec<String>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub steps: Vec<StepReport>,
    pub issues: Vec<String>,
}

/// Which of two neighbors is contained in the other, with a witness.
pub(crate) fn step_direction(
    s: &HybridSequence,
    i: usize,
) -> Option<(Direction, crate::iso::Witness)> {
    let (a, b) = (&s.graphs[i], &s.graphs[i + 1]);
    if let Some(w) = first_witness(a, b, &s.strict_in(i)) {
        return Some((Direction::Grows, w));
    }
    first_witness(b, a, &s.strict_in(i + 1)).map(|w| (Direction::Shrinks, w))
}

pub fn validate_sequence(s: &HybridSequence) -> ValidationReport {
    let mut issues = Vec::new();
    if s.graphs.is_empty() {
        issues.push("sequence is empty".to_string());
    }
    let labels = s.all_labels();
    for l in s.strict_edges.iter() {
        if !labels.contains(l) {
            issues.push(format!("strict label `{l}` occurs in no graph"));
        }
    }
    match s.mode {
        Mode::Strict | Mode::Indefinite if !s.weak_labels().is_empty() => {
            issues.push(format!(
                "{:?} mode requires every edge to be strict",
                s.mode
            ));
        }
        Mode::Weak if !s.strict_edges.is_empty() => {
            issues.push("weak mode requires an empty strict set".to_string());
        }
        _ => {}
    }
    let mut steps = Vec::new();
    for i in 0..s.graphs.len().saturating_sub(1) {
        if s.mode == Mode::Indefinite {
            let (a, b) = (&s.graphs[i], &s.graphs[i + 1]);
            let found = first_split(b, a)
                .map(|sp| (Direction::Shrinks, sp))
                .or_else(|| first_split(a, b).map(|sp| (Direction::Grows, sp)));
            match found {
                Some((dir, (c, d))) => steps.push(StepReport {
                    index: i,
                    direction: Some(dir),
                    witness: None,
                    split: Some((c, d)),
                }),
                None => {
                    issues.push(format!("step {i}: no minor relation"));
                    steps.push(StepReport {
                        index: i,
                        direction: None,
                        witness: None,
                        split: None,
                    });
                }
            }
            continue;
        }
        match step_direction(s, i) {
            Some((dir, w)) => {
                let (h, g) = match dir {
                    Direction::Grows => (&s.graphs[i], &s.graphs[i + 1]),
                    Direction::Shrinks => (&s.graphs[i + 1], &s.graphs[i]),
                };
                steps.push(StepReport {
                    index: i,
                    direction: Some(dir),
                    witness: Some(w.to_label_map(h, g)),
                    split: None,
                });
            }
            None => {
                issues.push(format!(
                    "step {i}: neither graph is a hybrid subgraph of the other"
                ));
                steps.push(StepReport {
                    index: i,
                    direction: None,
                    witness: None,
                    split: None,
                });
            }
        }
    }
    ValidationReport {
        valid: issues.is_empty(),
        steps,
        issues,
    }
}

fn first_split(big: &LabeledGraph, small: &LabeledGraph) -> Option<(Vec<String>, Vec<String>)> {
    let splits = minor_splits(big, small, Some(1)).ok()?;
    let sp = splits.into_iter().next()?;
    let names = |v: &[usize]| v.iter().map(|&e| big.edge_label(e).to_string()).collect();
    Some((names(&sp.contract), names(&sp.delete)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LabeledGraph;

    fn g(edges: &[(&str, &str, &str)]) -> Arc<LabeledGraph> {
        let mut vs: Vec<&str> = edges.iter().flat_map(|e| [e.1, e.2]).collect();
        vs.sort_unstable();
        vs.dedup();
        Arc::new(LabeledGraph::new(vs, edges.iter().copied()).unwrap())
    }

    #[test]
    fn unrelated_neighbors_are_invalid() {
        let tri = g(&[("a", "0", "1"), ("b", "1", "2"), ("c", "2", "0")]);
        let other = g(&[("x", "0", "1"), ("y", "1", "2"), ("z", "2", "0")]);
        let s = HybridSequence::strict(vec![tri.clone(), other]);
        let r = validate_sequence(&s);
        assert!(!r.valid);
        assert_eq!(r.steps[0].direction, None);
        let ok = HybridSequence::strict(vec![tri.clone(), tri]);
        assert!(validate_sequence(&ok).valid);
    }

    #[test]
    fn json_round_trip() {
        let tri = g(&[("a", "0", "1"), ("b", "1", "2"), ("c", "2", "0")]);
        let s = HybridSequence::hybrid(vec![tri.clone(), tri], &["a"].into_iter().collect());
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains(r#""mode":"hybrid""#));
        let back: HybridSequence = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
