use std::collections::BTreeMap;

use super::fpaths::f_paths;
use super::{BuildOptions, ConstructionResult, Ids, Origin};
use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components, Count, Graph, Limits, VertexSet};
use crate::subsets::{HerSatSet, IdealSpec};

/// The graph `ₓE_B` of the ideal `J_{X,B}`.
///
/// Vertices are `X`, then `B`, then one vertex per F-path. Edges are those
/// leaving `X`, those from `B` into `X`, and one edge `ᾱ` from each F-path
/// vertex `α` to `r(α)`. When the F-paths are finite everything is built;
/// otherwise families up to `opts.depth` are built, `ω` families expose
/// `opts.omega_cap` instances, and `truncated` is set.
pub fn build_ideal_graph(
    g: &Graph,
    x: &HerSatSet,
    b: &VertexSet,
    opts: &BuildOptions,
    limits: &Limits,
) -> Result<ConstructionResult> {
    let spec = IdealSpec::new(g, x.vertices().clone(), b.clone())?;
    let x = spec.x.vertices();
    let mut fres = f_paths(g, &spec.x, b, opts.depth.max(1), limits)?;
    if fres.is_finite && !fres.complete {
        // finite families have length at most |E⁰ ∖ (X ∪ B)| + 1
        let full = g.vertex_count() - x.union(b).len() + 1;
        fres = f_paths(g, &spec.x, b, full, limits)?;
    }
    let truncated = !fres.is_finite;

    let mut ids = Ids::default();
    let mut builder = Graph::builder(format!("{}_ideal", g.name()));
    let mut vertex_origin = BTreeMap::new();
    let mut edge_origin = BTreeMap::new();
    for v in x.iter().chain(b.iter()) {
        let name = g.vertex_name(v);
        ids.reserve(name);
        builder.vertex(name)?;
        vertex_origin.insert(name.to_string(), Origin::Vertex(name.to_string()));
    }
    for bd in g.bundles() {
        ids.reserve(&bd.id);
    }

    let mut f_vertices = 0usize;
    let mut bars = Vec::new();
    for fam in &fres.families {
        let names = fam.names(g);
        let shown = match fam.count {
            Count::Finite(n) => n,
            Count::Omega => opts.omega_cap,
        };
        f_vertices += shown as usize;
        if f_vertices > limits.path_limit {
            return Err(Error::CapExceeded {
                what: "ideal graph F-path vertices",
                limit: limits.path_limit,
                actual: f_vertices,
            });
        }
        for k in 0..shown {
            let base = if fam.count == Count::ONE {
                format!("p_{}", names.join("_"))
            } else {
                format!("p_{}_{k}", names.join("_"))
            };
            let id = ids.fresh(&base);
            builder.vertex(&id)?;
            vertex_origin.insert(
                id.clone(),
                Origin::Path {
                    bundles: names.clone(),
                    instance: k,
                    count: fam.count.to_string(),
                },
            );
            bars.push((
                id,
                g.vertex_name(fam.target(g)).to_string(),
                names.clone(),
                k,
            ));
        }
    }

    for bd in g.bundles() {
        if x.contains(bd.source) || (b.contains(bd.source) && x.contains(bd.target)) {
            builder.bundle(
                &bd.id,
                g.vertex_name(bd.source),
                g.vertex_name(bd.target),
                bd.multiplicity,
            )?;
            edge_origin.insert(bd.id.clone(), Origin::Edge(bd.id.clone()));
        }
    }
    for (src, dst, bundles, instance) in bars {
        let id = ids.fresh(&format!("bar_{}", &src[2..]));
        builder.bundle(&id, &src, &dst, Count::ONE)?;
        edge_origin.insert(id, Origin::PathEdge { bundles, instance });
    }
    let result = ConstructionResult {
        graph: builder.build()?,
        truncated,
        vertex_origin,
        edge_origin,
    };
    check_structure(g, &spec, &result)?;
    Ok(result)
}

/// `B` vertices emit `ω` edges, all into `X`; F-path vertices emit exactly
/// one edge, into `X ∪ B`; every loop lies inside `X`.
fn check_structure(g: &Graph, spec: &IdealSpec, r: &ConstructionResult) -> Result<()> {
    let h = &r.graph;
    let x = g.transfer_set(spec.x.vertices(), h);
    let b = g.transfer_set(&spec.b, h);
    let end = x.union(&b);
    let fail = |msg: String| Err(Error::Invariant(format!("ideal graph: {msg}")));
    for v in h.vertices() {
        let name = h.vertex_name(v);
        if b.contains(v) {
            if h.out_degree(v) != Count::Omega || h.count_into(v, &x) != Count::Omega {
                return fail(format!("{name} does not emit infinitely many edges into X"));
            }
            if h.count_into(v, &x.complement()) != Count::ZERO {
                return fail(format!("{name} emits outside X"));
            }
        } else if !x.contains(v)
            && (h.out_degree(v) != Count::ONE || h.count_into(v, &end) != Count::ONE)
        {
            return fail(format!(
                "F-path vertex {name} does not emit exactly one edge into X ∪ B"
            ));
        }
    }
    for scc in strongly_connected_components(h) {
        if scc.has_internal_edge && !scc.vertices.is_subset(&x) {
            return fail(format!(
                "loop through {{{}}} leaves X",
                h.names(&scc.vertices).join(",")
            ));
        }
    }
    Ok(())
}
