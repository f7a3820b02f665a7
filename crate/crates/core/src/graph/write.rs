use std::fmt::Write as _;

use super::{Count, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// The line-based graph file format; round-trips through
    /// [`parse_graph`](super::parse_graph).
    Canonical,
    /// Graphviz DOT. ω bundles are labelled `∞`.
    Dot,
}

pub fn serialize_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::Canonical => canonical(g),
        Format::Dot => dot(g, |v| g.vertex_name(v).to_string()),
    }
}

fn canonical(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.name());
    for v in g.vertices() {
        let _ = writeln!(out, "vertex {}", g.vertex_name(v));
    }
    for b in g.bundles() {
        let _ = write!(
            out,
            "edge {} {} {}",
            b.id,
            g.vertex_name(b.source),
            g.vertex_name(b.target)
        );
        match b.multiplicity {
            Count::Finite(1) => {}
            Count::Finite(n) => {
                let _ = write!(out, " x{n}");
            }
            Count::Omega => out.push_str(" xinf"),
        }
        out.push('\n');
    }
    out
}

pub(crate) fn dot(g: &Graph, label: impl Fn(super::VertexId) -> String) -> String {
    let mut out = format!("digraph {} {{\n", quote(g.name()));
    for v in g.vertices() {
        let name = g.vertex_name(v);
        let text = label(v);
        if text == name {
            let _ = writeln!(out, "  {};", quote(name));
        } else {
            let _ = writeln!(out, "  {} [label={}];", quote(name), quote(&text));
        }
    }
    for b in g.bundles() {
        let edge_label = match b.multiplicity {
            Count::Finite(1) => b.id.clone(),
            Count::Finite(n) => format!("{} ×{n}", b.id),
            Count::Omega => "∞".to_string(),
        };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(g.vertex_name(b.source)),
            quote(g.vertex_name(b.target)),
            quote(&edge_label)
        );
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
