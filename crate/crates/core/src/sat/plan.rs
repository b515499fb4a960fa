//! Housing sequences described block by block, so that lengths and sizes
//! can be measured at equators far too large to build.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::SatError;
use crate::gadgets::{equaliser, negator, or_gadget, Gadget};
use crate::graph::{EdgeSet, LabeledGraph};
use crate::sequence::HybridSequence;
use crate::village::village_builder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetKind {
    Equaliser,
    Negator,
    Or,
}

impl GadgetKind {
    pub fn length(self) -> usize {
        match self {
            GadgetKind::Equaliser | GadgetKind::Negator => 9,
            GadgetKind::Or => 15,
        }
    }

    fn build(self, s: usize, item: &[usize]) -> Result<Gadget, SatError> {
        Ok(match self {
            GadgetKind::Equaliser => equaliser(s, item[0], item[1])?,
            GadgetKind::Negator => negator(s, item[0], item[1])?,
            GadgetKind::Or => or_gadget(s, item[2] / 3)?,
        })
    }

    /// Per-step size of one gadget beyond the empty village, measured on
    /// the smallest instance.
    fn deltas(self) -> &'static [i128] {
        static CACHE: OnceLock<BTreeMap<GadgetKind, Vec<i128>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| {
            [GadgetKind::Equaliser, GadgetKind::Negator, GadgetKind::Or]
                .into_iter()
                .map(|k| {
                    let (s, item) = match k {
                        GadgetKind::Or => (3, vec![1, 2, 3]),
                        _ => (2, vec![1, 2]),
                    };
                    let g = k.build(s, &item).expect("smallest gadget builds");
                    let base = village_size(s, 0) as i128;
                    let d = g
                        .sequence
                        .graphs
                        .iter()
                        .map(|x| x.size() as i128 - base)
                        .collect();
                    (k, d)
                })
                .collect()
        });
        &cache[&self]
    }
}

/// Vertices plus edges of V(s, I) with `houses` houses.
pub fn village_size(s: usize, houses: usize) -> u128 {
    // hub, 4s rim vertices, 4s rim edges, 4s spokes; 6 vertices and 9
    // edges per house
    1 + 12 * s as u128 + 15 * houses as u128
}

/// A run of graphs inside a housing sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "block", rename_all = "lowercase")]
pub enum Block {
    /// A single village graph.
    Village { index_set: BTreeSet<usize> },
    /// The union of one gadget per item, with plain houses for the indices
    /// no item covers. Starts and ends with the village on `index_set`.
    Union {
        kind: GadgetKind,
        items: Vec<Vec<usize>>,
        index_set: BTreeSet<usize>,
    },
}

impl Block {
    pub fn len(&self) -> usize {
        match self {
            Block::Village { .. } => 1,
            Block::Union { kind, .. } => kind.length(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_set(&self) -> &BTreeSet<usize> {
        match self {
            Block::Village { index_set } | Block::Union { index_set, .. } => index_set,
        }
    }

    fn graph_sizes(&self, s: usize) -> Vec<u128> {
        match self {
            Block::Village { index_set } => vec![village_size(s, index_set.len())],
            Block::Union {
                kind,
                items,
                index_set,
            } => {
                let covered: BTreeSet<usize> = items.iter().flatten().copied().collect();
                let pad = index_set.difference(&covered).count();
                let base = village_size(s, pad) as i128;
                let n = items.len() as i128;
                kind.deltas()
                    .iter()
                    .map(|d| (base + n * d) as u128)
                    .collect()
            }
        }
    }

    fn graphs(&self, s: usize) -> Result<(Vec<Arc<LabeledGraph>>, EdgeSet), SatError> {
        match self {
            Block::Village { index_set } => {
                let g = village_builder(s, index_set).build()?;
                Ok((vec![Arc::new(g)], EdgeSet::new()))
            }
            Block::Union {
                kind,
                items,
                index_set,
            } => {
                let gadgets = items
                    .iter()
                    .map(|it| kind.build(s, it))
                    .collect::<Result<Vec<_>, _>>()?;
                let covered: BTreeSet<usize> = items.iter().flatten().copied().collect();
                if let Some(&i) = covered.difference(index_set).next() {
                    return Err(SatError::OutOfRange(vec![i], index_set.len()));
                }
                let pad: BTreeSet<usize> = index_set.difference(&covered).copied().collect();
                let mut weak = EdgeSet::new();
                for g in &gadgets {
                    weak = weak.union(&g.sequence.weak_labels());
                }
                let graphs = (0..kind.length())
                    .map(|k| {
                        let mut b = village_builder(s, &pad);
                        for g in &gadgets {
                            let h = &g.sequence.graphs[k];
                            for e in h.edges() {
                                b.add_edge(&e.label, h.vertex_label(e.u), h.vertex_label(e.v));
                            }
                        }
                        b.build().map(Arc::new)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((graphs, weak))
            }
        }
    }
}

/// A housing sequence on equator `equator` as a list of blocks. A block
/// whose index set equals that of its predecessor shares its first graph
/// with the predecessor's last one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plan {
    pub equator: usize,
    pub blocks: Vec<Block>,
}

impl Plan {
    pub fn new(equator: usize) -> Self {
        Self {
            equator,
            blocks: Vec::new(),
        }
    }

    pub fn push(&mut self, b: Block) {
        self.blocks.push(b);
    }

    pub fn extend(&mut self, other: Plan) {
        assert_eq!(self.equator, other.equator, "plans on different equators");
        self.blocks.extend(other.blocks);
    }

    fn shares(&self, k: usize) -> bool {
        k > 0 && self.blocks[k - 1].index_set() == self.blocks[k].index_set()
    }

    pub fn len(&self) -> usize {
        (0..self.blocks.len())
            .map(|k| self.blocks[k].len() - usize::from(self.shares(k)))
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Total vertices plus edges over all graphs, as the built sequence
    /// would report it.
    pub fn size(&self) -> u128 {
        (0..self.blocks.len())
            .map(|k| {
                let sizes = self.blocks[k].graph_sizes(self.equator);
                sizes[usize::from(self.shares(k))..].iter().sum::<u128>()
            })
            .sum()
    }

    /// Largest graph, in vertices plus edges.
    pub fn max_graph_size(&self) -> u128 {
        self.blocks
            .iter()
            .flat_map(|b| b.graph_sizes(self.equator))
            .max()
            .unwrap_or(0)
    }

    /// Builds every graph.
    pub fn materialize(&self) -> Result<HybridSequence, SatError> {
        let mut graphs: Vec<Arc<LabeledGraph>> = Vec::new();
        let mut weak = EdgeSet::new();
        for k in 0..self.blocks.len() {
            let (gs, w) = self.blocks[k].graphs(self.equator)?;
            weak = weak.union(&w);
            graphs.extend(gs.into_iter().skip(usize::from(self.shares(k))));
        }
        let index_set = self
            .blocks
            .first()
            .map(|b| b.index_set().clone())
            .unwrap_or_default();
        Ok(HybridSequence::hybrid(graphs, &weak).with_housing(self.equator, index_set))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn village_size_formula() {
        let g = village_builder(5, &set(&[1, 4])).build().unwrap();
        assert_eq!(g.size() as u128, village_size(5, 2));
    }

    #[test]
    fn estimate_matches_built_sequence() {
        let mut p = Plan::new(6);
        p.push(Block::Village {
            index_set: set(&[1, 2]),
        });
        p.push(Block::Union {
            kind: GadgetKind::Equaliser,
            items: vec![vec![1, 4], vec![2, 3]],
            index_set: set(&[1, 2, 3, 4, 5]),
        });
        p.push(Block::Union {
            kind: GadgetKind::Or,
            items: vec![vec![4, 5, 6]],
            index_set: set(&[1, 2, 3, 4, 5, 6]),
        });
        p.push(Block::Union {
            kind: GadgetKind::Negator,
            items: vec![vec![1, 6]],
            index_set: set(&[1, 2, 3, 4, 5, 6]),
        });
        let s = p.materialize().unwrap();
        assert_eq!(s.len(), p.len());
        assert_eq!(p.len(), 1 + 9 + 15 + 8);
        assert_eq!(s.size() as u128, p.size());
        let max = s.graphs.iter().map(|g| g.size() as u128).max().unwrap();
        assert_eq!(max, p.max_graph_size());
        assert_eq!(s.weak_labels().len(), 8);
    }
}
