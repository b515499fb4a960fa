//! The 3-SAT reduction: CNF input, the scaled EQ/NEQ/OR housing
//! sequences, their concatenation, and the conversion to weak sequences.

mod housing;
mod plan;
mod prep;
mod weak;

pub use housing::{
    eq_housing, eq_housing_noncrossing, neq_housing, neq_housing_noncrossing, or_housing,
    or_housing_aligned, or_slot, r1_pairs, r2_pairs, r3_pairs, slot_pairs,
};
pub use plan::{Block, GadgetKind, Plan};
pub use prep::{
    mini_prep, mini_solve, sat_prep, BoundCheck, ComponentReport, MiniOutcome, MiniReduction,
    PrepOutput, ReductionReport, PAPER_MATERIALIZE_CAP,
};
pub use weak::{grid_gadget, hybrid_to_weak, WeakConversion};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinators::CombineError;
use crate::gadgets::GadgetError;
use crate::graph::GraphError;
use crate::sequence::SequenceError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("clause {0} has {1} literals, at most 3 are allowed")]
    ClauseTooWide(usize, usize),
    #[error("pairs {0:?} and {1:?} cross")]
    Crossing((usize, usize), (usize, usize)),
    #[error("index {0} is used by two pairs")]
    Overlap(usize),
    #[error("pair or triple {0:?} is out of range 1..={1}")]
    OutOfRange(Vec<usize>, usize),
    #[error("triple {0:?} is not of the form (3t-2, 3t-1, 3t)")]
    NotAligned(Vec<usize>),
    #[error("equator {have} is too small, {need} house slots are needed")]
    EquatorTooSmall { need: usize, have: usize },
    #[error("not certified at this scale: {0}")]
    NotCertifiedAtScale(String),
    #[error("guard failed: {0}")]
    Guard(String),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Combine(#[from] CombineError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A CNF formula with clauses of width at most three. Literals are DIMACS
/// integers: `v` or `-v` for variable `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self, SatError> {
        for (c, cl) in clauses.iter().enumerate() {
            if cl.len() > 3 {
                return Err(SatError::ClauseTooWide(c + 1, cl.len()));
            }
        }
        let num_vars = clauses
            .iter()
            .flatten()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
            .max(num_vars);
        Ok(Self { num_vars, clauses })
    }

    /// The literal family in reading order.
    pub fn literals(&self) -> Vec<i64> {
        self.clauses.iter().flatten().copied().collect()
    }

    /// Number of literal occurrences.
    pub fn size(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    /// An empty clause makes the formula unsatisfiable outright.
    pub fn trivially_unsat(&self) -> bool {
        self.clauses.iter().any(Vec::is_empty)
    }

    /// Pairs `i < j` of literal positions carrying the same literal.
    pub fn equal_pairs(&self) -> BTreeSet<(usize, usize)> {
        equal_pairs(&self.literals())
    }

    /// One pair per variable that occurs in both polarities, the
    /// lexicographically least.
    pub fn negated_pairs(&self) -> BTreeSet<(usize, usize)> {
        negated_pairs(&self.literals())
    }

    /// One triple of literal positions per clause. Short clauses repeat
    /// their last position.
    pub fn clause_triples(&self) -> Vec<(usize, usize, usize)> {
        let mut next = 1;
        let mut out = Vec::new();
        for cl in &self.clauses {
            let pos: Vec<usize> = (next..next + cl.len()).collect();
            next += cl.len();
            if let Some(&last) = pos.last() {
                let at = |k: usize| pos.get(k).copied().unwrap_or(last);
                out.push((at(0), at(1), at(2)));
            }
        }
        out
    }

    /// The same formula with every clause padded to three literals by
    /// repeating its last literal.
    pub fn padded(&self) -> Self {
        let clauses = self
            .clauses
            .iter()
            .map(|cl| {
                let mut cl = cl.clone();
                while let (Some(&l), true) = (cl.last(), cl.len() < 3) {
                    cl.push(l);
                }
                cl
            })
            .collect();
        Self {
            num_vars: self.num_vars,
            clauses,
        }
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|cl| {
            cl.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// A satisfying assignment found by trying all of them.
    pub fn brute_force(&self) -> Option<Vec<bool>> {
        let n = self.num_vars;
        assert!(n < 26, "brute force is for tiny formulas");
        (0u64..1 << n)
            .map(|bits| (0..n).map(|v| bits >> v & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.eval(a))
    }

    /// Whether `f` on literal positions is consistent and satisfies every
    /// clause.
    pub fn satisfied_by_positions(&self, f: &BTreeMap<usize, bool>) -> bool {
        let lits = self.literals();
        let value = |i: usize| f[&(i + 1)] == (lits[i] > 0);
        let mut by_var: BTreeMap<u64, bool> = BTreeMap::new();
        for (i, l) in lits.iter().enumerate() {
            if *by_var.entry(l.unsigned_abs()).or_insert(value(i)) != value(i) {
                return false;
            }
        }
        let mut i = 0;
        self.clauses.iter().all(|cl| {
            let ok = (i..i + cl.len()).any(|k| f[&(k + 1)]);
            i += cl.len();
            ok
        })
    }
}

fn equal_pairs(lits: &[i64]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            if lits[i] == lits[j] {
                out.insert((i + 1, j + 1));
            }
        }
    }
    out
}

fn negated_pairs(lits: &[i64]) -> BTreeSet<(usize, usize)> {
    let mut best: BTreeMap<u64, (usize, usize)> = BTreeMap::new();
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            if lits[i] == -lits[j] {
                best.entry(lits[i].unsigned_abs()).or_insert((i + 1, j + 1));
            }
        }
    }
    best.into_values().collect()
}

/// Reads DIMACS CNF. Clauses wider than three are rejected.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, SatError> {
    let err = |line: usize, msg: &str| SatError::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last_line = 0;
    for (n, line) in text.lines().enumerate() {
        let n = n + 1;
        last_line = n;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() {
                return Err(err(n, "second header"));
            }
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v = v.parse().map_err(|_| err(n, "bad variable count"))?;
                    let c = c.parse().map_err(|_| err(n, "bad clause count"))?;
                    header = Some((v, c));
                }
                _ => {
                    return Err(err(
                        n,
                        "malformed header, expected `p cnf <vars> <clauses>`",
                    ))
                }
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(err(n, "clause before header"));
        };
        for tok in line.split_whitespace() {
            let l: i64 = tok
                .parse()
                .map_err(|_| err(n, &format!("bad literal `{tok}`")))?;
            if l == 0 {
                if current.len() > 3 {
                    return Err(SatError::ClauseTooWide(clauses.len() + 1, current.len()));
                }
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > vars {
                return Err(err(
                    n,
                    &format!("literal {l} exceeds variable count {vars}"),
                ));
            } else {
                current.push(l);
            }
        }
    }
    let Some((vars, count)) = header else {
        return Err(err(last_line.max(1), "missing header"));
    };
    if !current.is_empty() {
        if current.len() > 3 {
            return Err(SatError::ClauseTooWide(clauses.len() + 1, current.len()));
        }
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(err(
            last_line.max(1),
            &format!("header announces {count} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new(vars, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic() {
        let f = parse_dimacs("c hi\np cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2]]);
        assert_eq!(f.literals(), vec![1, -2]);
        assert_eq!(f.size(), 2);
        assert!(!f.trivially_unsat());
    }

    #[test]
    fn parse_empty_clause() {
        let f = parse_dimacs("p cnf 1 2\n1 0\n0\n").unwrap();
        assert!(f.trivially_unsat());
        assert_eq!(f.brute_force(), None);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_dimacs("p dnf 2 1\n1 0\n"),
            Err(SatError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs("1 2 0\n"),
            Err(SatError::Parse { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"),
            Err(SatError::ClauseTooWide(1, 4))
        ));
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
    }

    #[test]
    fn bookkeeping() {
        // (x1 v -x2) & (x2 v x1 v -x1)
        let f = CnfFormula::new(2, vec![vec![1, -2], vec![2, 1, -1]]).unwrap();
        assert_eq!(f.equal_pairs(), [(1, 4)].into_iter().collect());
        assert_eq!(f.negated_pairs(), [(1, 5), (2, 3)].into_iter().collect());
        assert_eq!(f.clause_triples(), vec![(1, 2, 2), (3, 4, 5)]);
        assert_eq!(f.padded().clauses[0], vec![1, -2, -2]);
    }
}
