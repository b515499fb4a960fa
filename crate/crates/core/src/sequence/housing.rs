//! Allocation sets and housing-sequence certification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::dp::{analyze, Analysis, ScaleCaps};
use super::{HybridSequence, SequenceError};
use crate::embedding::rotation_key;
use crate::iso::first_witness;
use crate::village::{VillageHandle, HUB};

/// A set of functions from an index set to {0, 1}. Each function is stored
/// as its values in increasing index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocationSet {
    pub index_set: BTreeSet<usize>,
    #[serde(with = "bitstrings")]
    pub functions: BTreeSet<Vec<bool>>,
}

mod bitstrings {
    use std::collections::BTreeSet;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(f: &BTreeSet<Vec<bool>>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = f.iter().map(|x| super::bits(x)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeSet<Vec<bool>>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        Ok(v.iter()
            .map(|s| s.chars().map(|c| c == '1').collect())
            .collect())
    }
}

fn bits(f: &[bool]) -> String {
    f.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl AllocationSet {
    pub fn empty(index_set: BTreeSet<usize>) -> Self {
        Self {
            index_set,
            functions: BTreeSet::new(),
        }
    }

    /// Every function on the index set.
    pub fn full(index_set: BTreeSet<usize>) -> Self {
        let k = index_set.len();
        let functions = (0u64..1 << k)
            .map(|mask| (0..k).map(|b| mask >> (k - 1 - b) & 1 == 1).collect())
            .collect();
        Self {
            index_set,
            functions,
        }
    }

    /// Functions on `index_set` satisfying `pred`, which sees the values by
    /// house index.
    pub fn filtered(
        index_set: BTreeSet<usize>,
        pred: impl Fn(&BTreeMap<usize, bool>) -> bool,
    ) -> Self {
        let mut s = Self::full(index_set);
        let idx: Vec<usize> = s.index_set.iter().copied().collect();
        s.functions.retain(|f| {
            let m: BTreeMap<usize, bool> = idx.iter().copied().zip(f.iter().copied()).collect();
            pred(&m)
        });
        s
    }

    pub fn from_strings<'a>(
        index_set: BTreeSet<usize>,
        fs: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        Self {
            index_set,
            functions: fs
                .into_iter()
                .map(|s| s.chars().map(|c| c == '1').collect())
                .collect(),
        }
    }

    pub fn insert(&mut self, f: Vec<bool>) {
        self.functions.insert(f);
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.functions.iter().map(|f| bits(f)).collect()
    }

    /// Intersection; both sets must share the index set.
    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.index_set, other.index_set, "index sets differ");
        Self {
            index_set: self.index_set.clone(),
            functions: self
                .functions
                .intersection(&other.functions)
                .cloned()
                .collect(),
        }
    }

    /// Restriction of every function to `sub`.
    pub fn project(&self, sub: &BTreeSet<usize>) -> Self {
        let pos: Vec<usize> = self
            .index_set
            .iter()
            .enumerate()
            .filter(|(_, i)| sub.contains(i))
            .map(|(p, _)| p)
            .collect();
        Self {
            index_set: sub.intersection(&self.index_set).copied().collect(),
            functions: self
                .functions
                .iter()
                .map(|f| pos.iter().map(|&p| f[p]).collect())
                .collect(),
        }
    }
}

impl fmt::Display for AllocationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

pub fn allocation_set(
    s: &HybridSequence,
    village: &VillageHandle,
    caps: &ScaleCaps,
) -> Result<AllocationSet, SequenceError> {
    analyze(s, caps)?.allocation(village)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotCertifiedAtScale,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HousingReport {
    pub m: usize,
    pub index_set: BTreeSet<usize>,
    pub checks: Vec<Check>,
    /// Every condition holds.
    pub certified: bool,
    /// Every condition except those about the final graph holds.
    pub semi: bool,
}

impl HousingReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_ENDPOINTS: &str = "endpoint-villages";
pub const CHECK_START: &str = "starts-with-village";
pub const CHECK_TWO_CONNECTED: &str = "two-connected";
pub const CHECK_PLANET: &str = "planet-preserved";
pub const CHECK_HUB_DEGREE: &str = "hub-degree";
pub const CHECK_RIGID: &str = "rigid-endpoints";

/// Certifies the defining conditions of a housing sequence over V(m, I).
/// The rigidity clause quantifies over all simultaneous embeddings and is
/// decided exhaustively, subject to `caps`.
pub fn is_housing_sequence(
    s: &HybridSequence,
    m: usize,
    index_set: &BTreeSet<usize>,
    caps: &ScaleCaps,
) -> Result<HousingReport, SequenceError> {
    caps.check_vertices("village", 4 * m + 1 + 6 * index_set.len())?;
    let village = VillageHandle::build(m, index_set)?;
    let analysis = if s.graphs.is_empty() {
        Err(SequenceError::Empty)
    } else {
        analyze(s, caps)
    };
    Ok(housing_report(s, &village, analysis.as_ref()))
}

pub fn housing_report(
    s: &HybridSequence,
    village: &VillageHandle,
    analysis: Result<&Analysis, &SequenceError>,
) -> HousingReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail,
        })
    };
    let vg = &*village.graph;
    let is_village = |i: usize| crate::iso::strictly_isomorphic(vg, &s.graphs[i]);
    let n = s.graphs.len();
    let start = n > 0 && is_village(0);
    push(CHECK_START, start, "first graph is V(m, I)".into());
    let end = n > 0 && is_village(n - 1);
    push(
        CHECK_ENDPOINTS,
        start && end,
        format!("first: {start}, last: {end}"),
    );
    let bad2: Vec<usize> = (0..n)
        .filter(|&i| !s.graphs[i].is_two_connected())
        .collect();
    push(
        CHECK_TWO_CONNECTED,
        bad2.is_empty(),
        format!("graphs not 2-connected: {bad2:?}"),
    );
    let planet = village.planet_edges();
    let bad_planet: Vec<usize> = (0..n)
        .filter(|&i| {
            planet
                .iter()
                .any(|l| vg.edge_endpoints_by_label(l) != s.graphs[i].edge_endpoints_by_label(l))
        })
        .collect();
    push(
        CHECK_PLANET,
        bad_planet.is_empty(),
        format!("graphs missing planet edges: {bad_planet:?}"),
    );
    let bad_deg: Vec<String> = s
        .graphs
        .iter()
        .enumerate()
        .filter_map(|(i, g)| {
            let hub = g.vertex_index(HUB)?;
            let d = g.degree(hub);
            (0..g.vertex_count())
                .find(|&v| v != hub && g.degree(v) >= d)
                .map(|v| format!("graph {i}: `{}`", g.vertex_label(v)))
                .or_else(|| None)
        })
        .chain(
            s.graphs
                .iter()
                .enumerate()
                .filter(|(_, g)| !g.has_vertex(HUB))
                .map(|(i, _)| format!("graph {i}: no hub")),
        )
        .collect();
    push(
        CHECK_HUB_DEGREE,
        bad_deg.is_empty(),
        format!("violations: {bad_deg:?}"),
    );
    let rigid = match (analysis, start && end) {
        (_, false) => Check {
            name: CHECK_RIGID.into(),
            status: CheckStatus::Fail,
            detail: "endpoints are not villages".into(),
        },
        (Err(SequenceError::NotCertifiedAtScale(msg)), _) => Check {
            name: CHECK_RIGID.into(),
            status: CheckStatus::NotCertifiedAtScale,
            detail: msg.clone(),
        },
        (Err(e), _) => Check {
            name: CHECK_RIGID.into(),
            status: CheckStatus::Fail,
            detail: e.to_string(),
        },
        (Ok(a), _) => {
            let bad = non_rigid(s, a);
            Check {
                name: CHECK_RIGID.into(),
                status: if bad.is_empty() {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
                detail: if bad.is_empty() {
                    format!(
                        "{} simultaneous embeddings up to reflection, all rigid",
                        a.count_up_to_reflection()
                    )
                } else {
                    format!("first/last state pairs that differ: {bad:?}")
                },
            }
        }
    };
    checks.push(rigid);
    let ok = |c: &Check| c.status == CheckStatus::Pass;
    let certified = checks.iter().all(ok);
    let semi = checks
        .iter()
        .filter(|c| c.name != CHECK_ENDPOINTS && c.name != CHECK_RIGID)
        .all(ok);
    HousingReport {
        m: village.m,
        index_set: village.houses.clone(),
        checks,
        certified,
        semi,
    }
}

/// Pairs (first state, last state) on a common chain whose embeddings
/// differ, comparing through a label-preserving isomorphism.
fn non_rigid(s: &HybridSequence, a: &Analysis) -> Vec<(usize, usize)> {
    let (g1, gn) = (&s.graphs[0], &s.graphs[s.graphs.len() - 1]);
    let Some(w) = first_witness(g1, gn, &g1.edge_labels()) else {
        return vec![(usize::MAX, usize::MAX)];
    };
    let mut inv = vec![usize::MAX; gn.edge_count()];
    for (e, &f) in w.emap.iter().enumerate() {
        inv[f] = e;
    }
    let mut bad = Vec::new();
    for (x, lasts) in a.first_last_pairs() {
        let kx = a.state(0, x).key();
        for y in lasts {
            let last = a.state(a.len() - 1, y);
            let rot: Vec<Vec<usize>> = w
                .vmap
                .iter()
                .map(|&v| last.rotation(v).iter().map(|&f| inv[f]).collect())
                .collect();
            if rotation_key(&rot) != kx {
                bad.push((x, y));
            }
        }
    }
    bad
}
