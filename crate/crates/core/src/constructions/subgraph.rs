use std::collections::BTreeMap;

use super::{ConstructionResult, Ids, Origin};
use crate::error::{Error, Result};
use crate::graph::{Count, EdgeInstance, Graph, VertexId, VertexSet};

/// The finite graph `E_G` of a finite `G = (G⁰, G¹)` with `r(G¹) ⊆ G⁰`.
///
/// Vertices are `G¹` together with those `v ∈ G⁰` that are sinks of `g` or
/// emit some edge outside `G¹`. There is an edge `(e, f)` from `e ∈ G¹` to
/// each vertex `f` with `s(f) = r(e)`, where `s(f) = f` for `f ∈ G⁰`. The
/// `G⁰` part consists of sinks.
pub fn build_subgraph(
    g: &Graph,
    g0: &VertexSet,
    g1: &[EdgeInstance],
) -> Result<ConstructionResult> {
    g.check_set(g0)?;
    let mut g1 = g1.to_vec();
    g1.sort();
    g1.dedup();
    if g0.is_empty() && g1.is_empty() {
        return Err(Error::Precondition("G is empty, and so is E_G".into()));
    }
    for &e in &g1 {
        if e.bundle.0 >= g.bundles().len() || !g.bundle(e.bundle).has_instance(e.index) {
            return Err(Error::UnknownEdge(format!("{}#{}", e.bundle.0, e.index)));
        }
        if !g0.contains(g.target(e)) {
            return Err(Error::Precondition(format!(
                "r({}) = {} is not in G0",
                g.instance_name(e),
                g.vertex_name(g.target(e))
            )));
        }
    }

    let emits_outside = |v: VertexId| match g.out_degree(v) {
        Count::Omega => true,
        _ => g.out_bundles(v).iter().any(|&b| {
            g.bundle(b).listed_instances().any(|index| {
                g1.binary_search(&EdgeInstance { bundle: b, index })
                    .is_err()
            })
        }),
    };
    let g0_part: Vec<VertexId> = g0
        .iter()
        .filter(|&v| g.is_sink(v) || emits_outside(v))
        .collect();

    let mut ids = Ids::default();
    for &v in &g0_part {
        ids.reserve(g.vertex_name(v));
    }
    let edge_vertices: Vec<String> = g1.iter().map(|&e| ids.fresh(&g.instance_name(e))).collect();

    let mut b = Graph::builder(format!("{}_sub", g.name()));
    let mut vertex_origin = BTreeMap::new();
    for (&e, id) in g1.iter().zip(&edge_vertices) {
        b.vertex(id)?;
        vertex_origin.insert(id.clone(), Origin::EdgeInstance(g.instance_name(e)));
    }
    for &v in &g0_part {
        let id = g.vertex_name(v);
        b.vertex(id)?;
        vertex_origin.insert(id.to_string(), Origin::Vertex(id.to_string()));
    }

    let mut edge_ids = Ids::default();
    let mut edge_origin = BTreeMap::new();
    for (&e, e_id) in g1.iter().zip(&edge_vertices) {
        let r = g.target(e);
        let targets = g1
            .iter()
            .zip(&edge_vertices)
            .filter(|(&f, _)| g.source(f) == r)
            .map(|(&f, f_id)| (f_id.as_str(), g.instance_name(f)))
            .chain(
                g0_part
                    .iter()
                    .filter(|&&v| v == r)
                    .map(|&v| (g.vertex_name(v), g.vertex_name(v).to_string())),
            );
        for (f_id, f_name) in targets {
            let id = edge_ids.fresh(&format!("{e_id}_{f_id}"));
            b.bundle(&id, e_id, f_id, Count::ONE)?;
            edge_origin.insert(
                id,
                Origin::Pair {
                    edge: g.instance_name(e),
                    target: f_name,
                },
            );
        }
    }
    let graph = b.build()?;
    for v in &g0_part {
        let w = graph.vertex(g.vertex_name(*v))?;
        if !graph.is_sink(w) {
            return Err(Error::Invariant(format!(
                "G0 vertex {} of E_G is not a sink",
                g.vertex_name(*v)
            )));
        }
    }
    Ok(ConstructionResult {
        graph,
        truncated: false,
        vertex_origin,
        edge_origin,
    })
}
