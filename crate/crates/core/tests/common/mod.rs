#![allow(dead_code)]

use std::sync::Arc;

use planar_seq_core::graph::LabeledGraph;

fn build(name: String, edges: Vec<(usize, usize)>) -> (String, Arc<LabeledGraph>) {
    let mut vs: Vec<String> = edges
        .iter()
        .flat_map(|&(a, b)| [a.to_string(), b.to_string()])
        .collect();
    vs.sort();
    vs.dedup();
    let es: Vec<(String, String, String)> = edges
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| (format!("e{k}"), a.to_string(), b.to_string()))
        .collect();
    let g = LabeledGraph::new(vs, es).unwrap();
    (name, Arc::new(g))
}

fn cycle(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

/// Hub 0, rim 1..=n.
fn wheel(n: usize) -> Vec<(usize, usize)> {
    let mut e: Vec<_> = (1..=n).map(|i| (0, i)).collect();
    e.extend((1..=n).map(|i| (i, i % n + 1)));
    e
}

fn k2n(n: usize) -> Vec<(usize, usize)> {
    (2..n + 2).flat_map(|i| [(0, i), (1, i)]).collect()
}

/// Two poles joined by paths with the given numbers of inner vertices.
fn theta(lens: &[usize]) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    let mut next = 2;
    for &l in lens {
        let mut prev = 0;
        for _ in 0..l {
            e.push((prev, next));
            prev = next;
            next += 1;
        }
        e.push((prev, 1));
    }
    e
}

fn ladder(n: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..n {
        e.push((i, n + i));
        if i + 1 < n {
            e.push((i, i + 1));
            e.push((n + i, n + i + 1));
        }
    }
    e
}

fn prism(n: usize) -> Vec<(usize, usize)> {
    let mut e = ladder(n);
    e.push((n - 1, 0));
    e.push((2 * n - 1, n));
    e
}

/// 2-connected planar graphs with at most 14 edges.
pub fn corpus() -> Vec<(String, Arc<LabeledGraph>)> {
    let mut out = Vec::new();
    for n in 3..=10 {
        out.push(build(format!("C{n}"), cycle(n)));
    }
    for n in 3..=7 {
        out.push(build(format!("W{n}"), wheel(n)));
    }
    for n in 3..=6 {
        out.push(build(format!("K2,{n}"), k2n(n)));
    }
    for lens in [&[1, 1, 2][..], &[1, 2, 3], &[0, 2, 2], &[2, 2, 2, 2], &[0, 1, 1, 1], &[3, 3, 3]] {
        out.push(build(format!("theta{lens:?}"), theta(lens)));
    }
    for n in 3..=5 {
        out.push(build(format!("ladder{n}"), ladder(n)));
    }
    out.push(build("prism3".into(), prism(3)));
    out.push(build("cube".into(), prism(4)));
    let mut oct = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            if j != i + 3 || i >= 3 {
                if !(i < 3 && j == i + 3) {
                    oct.push((i, j));
                }
            }
        }
    }
    out.push(build("octahedron".into(), oct));
    // Two K4s sharing an edge, and a K4 with every edge of one triangle
    // subdivided.
    out.push(build(
        "K4+K4".into(),
        vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (1, 4), (0, 5), (1, 5), (4, 5)],
    ));
    out.push(build(
        "K4-sub".into(),
        vec![(0, 4), (4, 1), (1, 5), (5, 2), (2, 6), (6, 0), (0, 3), (1, 3), (2, 3)],
    ));
    out.push(build(
        "bipyramid".into(),
        vec![(0, 1), (1, 2), (2, 0), (3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2)],
    ));
    // Cycle with two crossing-free chords.
    out.push(build("C6+2".into(), {
        let mut e = cycle(6);
        e.extend([(0, 2), (3, 5)]);
        e
    }));
    out
}
