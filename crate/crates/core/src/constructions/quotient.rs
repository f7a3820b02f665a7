use std::collections::BTreeMap;

use super::{ConstructionResult, Ids, Origin};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::subsets::{x_fin_inf, IdealSpec};

/// The graph of `C*(E)/J_{X,B}`: the restriction to `E⁰ ∖ X` plus a sink
/// `β(v)` for each `v ∈ X^fin_∞ ∖ B`, which receives a copy of every edge
/// into `v`. Fails for `X = E⁰`, whose quotient is zero.
pub fn build_quotient_graph(g: &Graph, spec: &IdealSpec) -> Result<ConstructionResult> {
    let spec = IdealSpec::new(g, spec.x.vertices().clone(), spec.b.clone())?;
    let x = spec.x.vertices();
    if x.is_full() {
        return Err(Error::Precondition(
            "X is every vertex; the quotient is zero and has no graph".into(),
        ));
    }
    let betas: Vec<_> = x_fin_inf(g, &spec.x)?
        .vertices()
        .difference(&spec.b)
        .iter()
        .collect();

    let mut ids = Ids::default();
    for v in g.vertices() {
        ids.reserve(g.vertex_name(v));
    }
    for bd in g.bundles() {
        ids.reserve(&bd.id);
    }
    let mut builder = Graph::builder(format!("{}_quotient", g.name()));
    let mut vertex_origin = BTreeMap::new();
    let mut edge_origin = BTreeMap::new();
    for v in x.complement().iter() {
        let name = g.vertex_name(v);
        builder.vertex(name)?;
        vertex_origin.insert(name.to_string(), Origin::Vertex(name.to_string()));
    }
    let beta_ids: Vec<String> = betas
        .iter()
        .map(|&v| {
            let id = ids.fresh(&format!("beta_{}", g.vertex_name(v)));
            vertex_origin.insert(id.clone(), Origin::Beta(g.vertex_name(v).to_string()));
            id
        })
        .collect();
    for id in &beta_ids {
        builder.vertex(id)?;
    }
    for bd in g.bundles() {
        if !x.contains(bd.target) {
            builder.bundle(
                &bd.id,
                g.vertex_name(bd.source),
                g.vertex_name(bd.target),
                bd.multiplicity,
            )?;
            edge_origin.insert(bd.id.clone(), Origin::Edge(bd.id.clone()));
        }
    }
    for (&v, beta) in betas.iter().zip(&beta_ids) {
        for bd in g.bundles().iter().filter(|bd| bd.target == v) {
            let id = ids.fresh(&format!("{}_beta", bd.id));
            builder.bundle(&id, g.vertex_name(bd.source), beta, bd.multiplicity)?;
            edge_origin.insert(
                id,
                Origin::BetaCopy {
                    edge: bd.id.clone(),
                    of: g.vertex_name(v).to_string(),
                },
            );
        }
    }
    Ok(ConstructionResult {
        graph: builder.build()?,
        truncated: false,
        vertex_origin,
        edge_origin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixture;

    fn edges(h: &Graph) -> Vec<(String, String, String)> {
        h.bundles()
            .iter()
            .map(|b| {
                (
                    b.id.clone(),
                    h.vertex_name(b.source).to_string(),
                    h.vertex_name(b.target).to_string(),
                )
            })
            .collect()
    }

    #[test]
    fn stable_example_quotient() {
        let g = fixture("ex33");
        let spec = IdealSpec::from_names(&g, &["x1", "x2", "x3"], &[]).unwrap();
        let r = build_quotient_graph(&g, &spec).unwrap();
        let h = &r.graph;
        assert_eq!(h.names(&h.all_vertices()), ["b1", "b2", "b3", "beta_b3"]);
        let s = |a: &str, b: &str, c: &str| (a.to_string(), b.to_string(), c.to_string());
        assert_eq!(
            edges(h),
            [
                s("c1", "b1", "b2"),
                s("c2", "b2", "b3"),
                s("c3", "b3", "b2"),
                s("c2_beta", "b2", "beta_b3"),
            ]
        );
        assert!(h.is_sink(h.vertex("beta_b3").unwrap()));
        assert!(r.dot().contains("β(b3)"));
    }

    #[test]
    fn zero_quotient_rejected() {
        let g = fixture("o2");
        let spec = IdealSpec::new(&g, g.all_vertices(), g.empty_set()).unwrap();
        assert!(matches!(
            build_quotient_graph(&g, &spec),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn identity_quotient() {
        for name in ["o2", "ex12", "ex33"] {
            let g = fixture(name);
            let spec = IdealSpec::new(&g, g.empty_set(), g.empty_set()).unwrap();
            assert!(build_quotient_graph(&g, &spec)
                .unwrap()
                .graph
                .same_structure(&g));
        }
    }

    #[test]
    fn breaking_vertex_kept() {
        let g = fixture("ex12");
        let spec = IdealSpec::from_names(&g, &["x1", "x2", "x3"], &["b"]).unwrap();
        let h = build_quotient_graph(&g, &spec).unwrap().graph;
        assert_eq!(h.names(&h.all_vertices()), ["b", "u", "w"]);
        let ids: Vec<_> = h.bundles().iter().map(|b| b.id.as_str()).collect();
        assert_eq!(ids, ["e", "f", "d"]);

        // without b in B, β(b) receives a copy of f
        let spec = IdealSpec::from_names(&g, &["x1", "x2", "x3"], &[]).unwrap();
        let h = build_quotient_graph(&g, &spec).unwrap().graph;
        assert_eq!(h.vertex_count(), 4);
        assert!(h.bundle_by_name("f_beta").is_ok());
    }
}
