//! DOT and SVG output.
//!
//! The SVG layout is a barycentric (Tutte) drawing: the vertices of one
//! face are spread on a circle, the hub (when there is a village) is pinned
//! at the centre, and every other vertex sits at the average of its
//! neighbours.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;

use crate::embedding::{EmbeddingError, RotationSystem};
use crate::graph::LabeledGraph;
use crate::village::{VillageError, VillageHandle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("embedding has genus {0}, only spherical embeddings can be drawn")]
    NotSpherical(usize),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Village(#[from] VillageError),
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected DOT; every edge carries its label as `id`.
pub fn to_dot(g: &LabeledGraph, name: &str) -> String {
    let mut out = format!("graph {} {{\n", quote(name));
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  {} -- {} [id={}];",
            quote(g.vertex_label(e.u)),
            quote(g.vertex_label(e.v)),
            quote(&e.label)
        );
    }
    out.push_str("}\n");
    out
}

/// Vertex positions in `[-1, 1]^2`.
pub fn tutte_layout(
    e: &RotationSystem,
    hub: Option<&str>,
) -> Result<BTreeMap<String, (f64, f64)>, ExportError> {
    let genus = e.genus()?;
    if genus != 0 {
        return Err(ExportError::NotSpherical(genus));
    }
    let g = e.graph();
    let walks = e.face_walks()?;
    let hub_idx = hub.and_then(|h| g.vertex_index(h));
    // Longest face avoiding the hub; ties go to the first.
    let outer = walks
        .iter()
        .filter(|w| hub.map_or(true, |h| w.iter().all(|(v, _)| v != h)))
        .max_by(|a, b| a.len().cmp(&b.len()).then(std::cmp::Ordering::Greater))
        .or_else(|| walks.iter().max_by_key(|w| w.len()))
        .cloned()
        .unwrap_or_default();
    let n = g.vertex_count();
    let mut pos = vec![(0.0f64, 0.0f64); n];
    let mut fixed = vec![false; n];
    let mut ring = Vec::new();
    let mut seen = BTreeSet::new();
    for (v, _) in &outer {
        if seen.insert(v.clone()) {
            ring.push(g.vertex_index(v).expect("face vertex exists"));
        }
    }
    for (k, &v) in ring.iter().enumerate() {
        let a = std::f64::consts::TAU * k as f64 / ring.len() as f64;
        pos[v] = (a.cos(), a.sin());
        fixed[v] = true;
    }
    if let Some(h) = hub_idx {
        if !fixed[h] {
            pos[h] = (0.0, 0.0);
            fixed[h] = true;
        }
    }
    for _ in 0..4000 {
        let mut delta = 0.0f64;
        for v in 0..n {
            if fixed[v] || g.degree(v) == 0 {
                continue;
            }
            let nb = g.neighbors(v);
            let (sx, sy) = nb
                .iter()
                .fold((0.0, 0.0), |(x, y), &(u, _)| (x + pos[u].0, y + pos[u].1));
            let d = nb.len() as f64;
            let p = (sx / d, sy / d);
            delta = delta.max((p.0 - pos[v].0).abs() + (p.1 - pos[v].1).abs());
            pos[v] = p;
        }
        if delta < 1e-9 {
            break;
        }
    }
    Ok((0..n)
        .map(|v| (g.vertex_label(v).to_string(), pos[v]))
        .collect())
}

/// An SVG 1.1 drawing of `e`. With a village, the planet is grey, house
/// paths blue, and each inhabitant is green when it lies inside its house
/// and orange when outside.
pub fn export_svg(e: &RotationSystem, village: Option<&VillageHandle>) -> Result<String, ExportError> {
    let pos = tutte_layout(e, village.map(|v| v.hub()))?;
    let g = e.graph();
    let (size, margin) = (800.0, 40.0);
    let scale = (size - 2.0 * margin) / 2.0;
    let at = |v: &str| {
        let (x, y) = pos[v];
        (margin + (x + 1.0) * scale, margin + (1.0 - y) * scale)
    };
    let mut edge_class: BTreeMap<String, &str> = BTreeMap::new();
    let mut vertex_class: BTreeMap<String, &str> = BTreeMap::new();
    if let Some(v) = village {
        for l in v.planet_edges().iter() {
            edge_class.insert(l.clone(), "planet");
        }
        let truth = v.truth_values(e)?;
        for &i in &v.houses {
            let roles = v.house_roles(i);
            for l in &roles.path_edges {
                edge_class.insert(l.clone(), "house");
            }
            let c = if truth[&i] { "inside" } else { "outside" };
            vertex_class.insert(roles.inhabitant, c);
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    out.push_str(
        "<style>line{stroke:#333;stroke-width:1.5}line.planet{stroke:#999}line.house{stroke:#2962ff;stroke-width:2.5}\
         circle{fill:#fff;stroke:#000}circle.inside{fill:#2e7d32}circle.outside{fill:#ef6c00}\
         text{font:9px sans-serif;fill:#555}</style>\n",
    );
    for edge in g.edges() {
        let (x1, y1) = at(g.vertex_label(edge.u));
        let (x2, y2) = at(g.vertex_label(edge.v));
        let class = edge_class.get(&edge.label).copied().unwrap_or("other");
        let _ = writeln!(
            out,
            r#"<line id="{}" class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#,
            xml(&edge.label)
        );
    }
    for v in g.vertices() {
        let (x, y) = at(v);
        let class = vertex_class.get(v).copied().unwrap_or("vertex");
        let _ = writeln!(
            out,
            r#"<circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="4"><title>{}</title></circle>"#,
            xml(v)
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 5.0, y - 5.0, xml(v));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::embedding::enumerate_embeddings;
    use crate::graph::LabeledGraph;

    fn c4() -> Arc<LabeledGraph> {
        Arc::new(
            LabeledGraph::new(
                ["a", "b", "c", "d"],
                [("ab", "a", "b"), ("bc", "b", "c"), ("cd", "c", "d"), ("da", "d", "a")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn dot_lists_edges_with_ids() {
        let d = to_dot(&c4(), "C4");
        assert!(d.starts_with("graph \"C4\" {"));
        assert!(d.contains("\"a\" -- \"b\" [id=\"ab\"];"));
        assert_eq!(d.matches(" -- ").count(), 4);
    }

    #[test]
    fn quadrilateral() {
        let e = enumerate_embeddings(&c4()).unwrap().remove(0).representative;
        assert_eq!(e.trace_faces().unwrap().len(), 2);
        let pos = tutte_layout(&e, None).unwrap();
        for (x, y) in pos.values() {
            assert!((x * x + y * y - 1.0).abs() < 1e-9);
        }
        let svg = export_svg(&e, None).unwrap();
        assert_eq!(svg.matches("<line").count(), 4);
        assert_eq!(svg.matches("<circle").count(), 4);
    }
}
