//! EQ, NEQ and OR housing sequences on arbitrary index pairs and triples.
//!
//! Disjoint non-crossing pairs are handled by a single union of gadgets.
//! Arbitrary pairs go through `m^2` copies of the `m` variables: `R_1` and
//! `R_2` tie each copy to the next one in mirrored order, and `R_3` spends
//! one copy per pair. Arbitrary triples are first copied into aligned
//! slots by an EQ sequence and then handled by or gadgets.

use std::collections::{BTreeMap, BTreeSet};

use super::plan::{Block, GadgetKind, Plan};
use super::SatError;
use crate::sequence::HybridSequence;

fn range(n: usize) -> BTreeSet<usize> {
    (1..=n).collect()
}

fn norm((a, b): (usize, usize)) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Rejects pairs that overlap or cross.
fn check_noncrossing(m: usize, pairs: &BTreeSet<(usize, usize)>) -> Result<(), SatError> {
    let mut used = BTreeSet::new();
    for &(a, b) in pairs {
        if a == b || a == 0 || b == 0 || a.max(b) > m {
            return Err(SatError::OutOfRange(vec![a, b], m));
        }
        for x in [a, b] {
            if !used.insert(x) {
                return Err(SatError::Overlap(x));
            }
        }
    }
    // Chords of a circle cross iff they interleave along any cut of it,
    // so a stack scan finds a crossing when there is one.
    let mut ends = BTreeMap::new();
    for &(a, b) in pairs {
        let p = norm((a, b));
        ends.insert(p.0, p);
        ends.insert(p.1, p);
    }
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for (&x, &p) in &ends {
        if x == p.0 {
            stack.push(p);
        } else {
            let top = stack.pop().expect("opened before closed");
            if top != p {
                return Err(SatError::Crossing(top.min(p), top.max(p)));
            }
        }
    }
    Ok(())
}

fn check_equator(need: usize, s: usize) -> Result<(), SatError> {
    if s < need {
        return Err(SatError::EquatorTooSmall { need, have: s });
    }
    Ok(())
}

pub(crate) fn pair_block(
    kind: GadgetKind,
    m: usize,
    s: usize,
    pairs: &BTreeSet<(usize, usize)>,
) -> Result<Block, SatError> {
    check_equator(m, s)?;
    check_noncrossing(m, pairs)?;
    Ok(Block::Union {
        kind,
        items: pairs.iter().map(|&(a, b)| vec![a, b]).collect(),
        index_set: range(m),
    })
}

/// Union of equalisers, one per pair, over index set `[m]`; length 9.
pub fn eq_housing_noncrossing(
    m: usize,
    s: usize,
    pairs: &BTreeSet<(usize, usize)>,
) -> Result<HybridSequence, SatError> {
    let mut p = Plan::new(s);
    p.push(pair_block(GadgetKind::Equaliser, m, s, pairs)?);
    p.materialize()
}

/// Union of negators, one per pair, over index set `[m]`; length 9.
pub fn neq_housing_noncrossing(
    m: usize,
    s: usize,
    pairs: &BTreeSet<(usize, usize)>,
) -> Result<HybridSequence, SatError> {
    let mut p = Plan::new(s);
    p.push(pair_block(GadgetKind::Negator, m, s, pairs)?);
    p.materialize()
}

/// Copy `2i-2` mirrored onto copy `2i-1`. `m` must be even.
pub fn r1_pairs(m: usize) -> BTreeSet<(usize, usize)> {
    (1..=m * m / 2)
        .flat_map(|i| (1..=m).map(move |j| ((2 * i - 2) * m + j, (2 * i - 2) * m + 2 * m - j + 1)))
        .collect()
}

/// Copy `2i-1` mirrored onto copy `2i`. `m` must be even.
pub fn r2_pairs(m: usize) -> BTreeSet<(usize, usize)> {
    (1..=(m * m).saturating_sub(2) / 2)
        .flat_map(|i| (1..=m).map(move |j| ((2 * i - 1) * m + j, (2 * i - 1) * m + 2 * m - j + 1)))
        .collect()
}

/// One pair per ordered `(x, y)` with `{x+1, y+1}` in `p`, placed in copy
/// `c = xm + y`. Variable `v` sits at offset `v` in even copies and at
/// `m + 1 - v` in odd ones.
pub fn r3_pairs(m: usize, p: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for &(a, b) in p {
        for (x, y) in [(a - 1, b - 1), (b - 1, a - 1)] {
            let c = x * m + y;
            let base = c * m;
            let pair = if c % 2 == 0 {
                (base + x + 1, base + y + 1)
            } else {
                (base + m - x, base + m - y)
            };
            out.insert(norm(pair));
        }
    }
    out
}

fn pairs_plan(
    kind: GadgetKind,
    m: usize,
    s: usize,
    p: &BTreeSet<(usize, usize)>,
) -> Result<Plan, SatError> {
    for &(a, b) in p {
        if a == b || a == 0 || b == 0 || a.max(b) > m {
            return Err(SatError::OutOfRange(vec![a, b], m));
        }
    }
    let p: BTreeSet<_> = p.iter().map(|&x| norm(x)).collect();
    // odd m: one dummy variable in a fresh slot
    let me = m + m % 2;
    let copies = me * me * me;
    check_equator(copies, s)?;
    let mut plan = Plan::new(s);
    plan.push(Block::Village {
        index_set: range(m),
    });
    for r in [r1_pairs(me), r2_pairs(me), r3_pairs(me, &p)] {
        plan.push(pair_block(kind, copies, s, &r)?);
    }
    plan.push(Block::Village {
        index_set: range(m),
    });
    Ok(plan)
}

/// Plan of the EQ sequence for arbitrary pairs over `[m]`; needs
/// `s >= m^3` (`(m+1)^3` for odd `m`).
pub fn eq_plan(m: usize, s: usize, p: &BTreeSet<(usize, usize)>) -> Result<Plan, SatError> {
    pairs_plan(GadgetKind::Equaliser, m, s, p)
}

/// As [`eq_plan`], with negators in all three layers. Copy `c` then holds
/// the value of each variable flipped `c` times, and the flips cancel in
/// every `R_3` pair since both ends share a copy.
pub fn neq_plan(m: usize, s: usize, p: &BTreeSet<(usize, usize)>) -> Result<Plan, SatError> {
    pairs_plan(GadgetKind::Negator, m, s, p)
}

pub fn eq_housing(
    m: usize,
    s: usize,
    p: &BTreeSet<(usize, usize)>,
) -> Result<HybridSequence, SatError> {
    eq_plan(m, s, p)?.materialize()
}

pub fn neq_housing(
    m: usize,
    s: usize,
    p: &BTreeSet<(usize, usize)>,
) -> Result<HybridSequence, SatError> {
    neq_plan(m, s, p)?.materialize()
}

fn check_aligned(m: usize, k: &[(usize, usize, usize)]) -> Result<(), SatError> {
    let mut seen = BTreeSet::new();
    for &(a, b, c) in k {
        if a == 0 || c > m {
            return Err(SatError::OutOfRange(vec![a, b, c], m));
        }
        if c % 3 != 0 || b + 1 != c || a + 2 != c {
            return Err(SatError::NotAligned(vec![a, b, c]));
        }
        if !seen.insert(c) {
            return Err(SatError::Overlap(c));
        }
    }
    Ok(())
}

pub(crate) fn or_block(m: usize, s: usize, k: &[(usize, usize, usize)]) -> Result<Block, SatError> {
    check_equator(m, s)?;
    check_aligned(m, k)?;
    Ok(Block::Union {
        kind: GadgetKind::Or,
        items: k.iter().map(|&(a, b, c)| vec![a, b, c]).collect(),
        index_set: range(m),
    })
}

/// Union of or gadgets for triples `(3t-2, 3t-1, 3t)` over `[m]`; length 15.
pub fn or_housing_aligned(
    m: usize,
    s: usize,
    k: &[(usize, usize, usize)],
) -> Result<HybridSequence, SatError> {
    let mut p = Plan::new(s);
    p.push(or_block(m, s, k)?);
    p.materialize()
}

/// Offset of the first triple slot: the literals rounded up to a multiple
/// of three, so that every slot is an aligned triple.
fn slot_offset(m: usize) -> usize {
    m.div_ceil(3) * 3
}

/// The pairing index `f((i,j,k)) = m^2(i-1) + m(j-1) + (k-1) + m + 1` and
/// the three positions of its slot.
pub fn or_slot(m: usize, (i, j, k): (usize, usize, usize)) -> (usize, [usize; 3]) {
    let f = m * m * (i - 1) + m * (j - 1) + (k - 1) + m + 1;
    let first = slot_offset(m) + 3 * (f - m - 1) + 1;
    (f, [first, first + 1, first + 2])
}

/// Pairs each member of every triple in `[m]^3` with its slot position.
pub fn slot_pairs(m: usize) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for i in 1..=m {
        for j in 1..=m {
            for k in 1..=m {
                let (_, pos) = or_slot(m, (i, j, k));
                for (x, p) in [i, j, k].into_iter().zip(pos) {
                    out.insert((x, p));
                }
            }
        }
    }
    out
}

/// Plan of the OR sequence for arbitrary triples over `[m]`.
pub fn or_plan(m: usize, s: usize, k: &[(usize, usize, usize)]) -> Result<Plan, SatError> {
    for &(a, b, c) in k {
        if [a, b, c].iter().any(|&x| x == 0 || x > m) {
            return Err(SatError::OutOfRange(vec![a, b, c], m));
        }
    }
    let wide = slot_offset(m) + 3 * m * m * m;
    let mut plan = Plan::new(s);
    plan.push(Block::Village {
        index_set: range(m),
    });
    plan.extend(eq_plan(wide, s, &slot_pairs(m))?);
    let aligned: BTreeSet<(usize, usize, usize)> = k
        .iter()
        .map(|&t| {
            let (_, [a, b, c]) = or_slot(m, t);
            (a, b, c)
        })
        .collect();
    let aligned: Vec<_> = aligned.into_iter().collect();
    plan.push(or_block(wide, s, &aligned)?);
    plan.push(Block::Village {
        index_set: range(m),
    });
    Ok(plan)
}

pub fn or_housing(
    m: usize,
    s: usize,
    k: &[(usize, usize, usize)],
) -> Result<HybridSequence, SatError> {
    or_plan(m, s, k)?.materialize()
}

/// Equator slots the OR plan needs.
pub(crate) fn or_need(m: usize) -> usize {
    let wide = slot_offset(m) + 3 * m * m * m;
    let we = wide + wide % 2;
    we * we * we
}

pub(crate) fn pairs_need(m: usize) -> usize {
    let me = m + m % 2;
    me * me * me
}
