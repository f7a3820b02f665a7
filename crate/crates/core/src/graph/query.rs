use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{Count, Graph, VertexId, VertexSet};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutProfile {
    pub vertex: VertexId,
    pub degree: Count,
    pub is_sink: bool,
    pub is_infinite_emitter: bool,
}

pub fn out_profile(g: &Graph, v: VertexId) -> Result<OutProfile> {
    g.check_vertex(v)?;
    let degree = g.out_degree(v);
    Ok(OutProfile {
        vertex: v,
        degree,
        is_sink: degree == Count::ZERO,
        is_infinite_emitter: degree.is_omega(),
    })
}

/// `v ≥ w`: a path of length ≥ 0 leads from `v` to `w`.
pub fn reaches(g: &Graph, v: VertexId, w: VertexId) -> Result<bool> {
    g.check_vertex(v)?;
    g.check_vertex(w)?;
    Ok(reachable_from(g, v).contains(w))
}

/// Every vertex reachable from `v`, `v` included.
pub fn reachable_from(g: &Graph, v: VertexId) -> VertexSet {
    reachable_within(g, v, None)
}

/// Breadth-first search from `start`, optionally confined to `allowed`.
pub(crate) fn reachable_within(
    g: &Graph,
    start: VertexId,
    allowed: Option<&VertexSet>,
) -> VertexSet {
    let mut seen = g.empty_set();
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &b in g.out_bundles(v) {
            let t = g.bundle(b).target;
            if allowed.is_some_and(|a| !a.contains(t)) {
                continue;
            }
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Reachability rows for every vertex, computed once.
#[derive(Debug, Clone)]
pub struct ReachTable {
    rows: Vec<VertexSet>,
}

impl ReachTable {
    pub fn new(g: &Graph) -> Self {
        ReachTable {
            rows: g.vertices().map(|v| reachable_from(g, v)).collect(),
        }
    }

    pub fn reaches(&self, v: VertexId, w: VertexId) -> bool {
        self.rows[v.0].contains(w)
    }

    pub fn from(&self, v: VertexId) -> &VertexSet {
        &self.rows[v.0]
    }

    /// Does `v` reach some member of `set`?
    pub fn reaches_set(&self, v: VertexId, set: &VertexSet) -> bool {
        !self.rows[v.0].is_disjoint(set)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scc {
    pub vertices: VertexSet,
    /// Some bundle has both endpoints in the component.
    pub has_internal_edge: bool,
}

/// Strongly connected components, ordered by their first vertex.
pub fn strongly_connected_components(g: &Graph) -> Vec<Scc> {
    let mut dg: DiGraph<(), ()> = DiGraph::with_capacity(g.vertex_count(), g.bundles().len());
    for _ in g.vertices() {
        dg.add_node(());
    }
    for b in g.bundles() {
        dg.add_edge(NodeIndex::new(b.source.0), NodeIndex::new(b.target.0), ());
    }
    let mut comps: Vec<Scc> = tarjan_scc(&dg)
        .into_iter()
        .map(|nodes| {
            let vertices = VertexSet::from_vertices(
                g.vertex_count(),
                nodes.iter().map(|n| VertexId(n.index())),
            );
            let has_internal_edge = g
                .bundles()
                .iter()
                .any(|b| vertices.contains(b.source) && vertices.contains(b.target));
            Scc {
                vertices,
                has_internal_edge,
            }
        })
        .collect();
    comps.sort_by_key(|c| c.vertices.iter().next());
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixture;

    #[test]
    fn profiles() {
        let g = fixture("o2");
        let p = out_profile(&g, g.vertex("v").unwrap()).unwrap();
        assert_eq!(p.degree, Count::Finite(2));
        assert!(!p.is_sink && !p.is_infinite_emitter);

        let g = fixture("ex12");
        let p = out_profile(&g, g.vertex("b").unwrap()).unwrap();
        assert_eq!(p.degree, Count::Omega);
        assert!(p.is_infinite_emitter);

        let g = fixture("ab");
        let p = out_profile(&g, g.vertex("b").unwrap()).unwrap();
        assert_eq!(p.degree, Count::ZERO);
        assert!(p.is_sink);

        assert!(out_profile(&g, VertexId(7)).is_err());
    }

    #[test]
    fn reachability() {
        let g = fixture("ab");
        let (a, b) = (g.vertex("a").unwrap(), g.vertex("b").unwrap());
        assert!(reaches(&g, a, b).unwrap());
        assert!(!reaches(&g, b, a).unwrap());
        assert!(reaches(&g, b, b).unwrap());

        let g = fixture("ex33");
        assert!(reaches(&g, g.vertex("b1").unwrap(), g.vertex("x3").unwrap()).unwrap());
    }

    #[test]
    fn components() {
        let names = |g: &Graph, s: &[Scc]| {
            let mut v: Vec<(Vec<String>, bool)> = s
                .iter()
                .map(|c| (g.names(&c.vertices), c.has_internal_edge))
                .collect();
            v.sort();
            v
        };
        let g = fixture("ab");
        assert_eq!(
            names(&g, &strongly_connected_components(&g)),
            [
                (vec!["a".to_string()], false),
                (vec!["b".to_string()], false)
            ]
        );
        let g = fixture("o2");
        assert_eq!(
            names(&g, &strongly_connected_components(&g)),
            [(vec!["v".to_string()], true)]
        );
        let g = fixture("ex33");
        let s = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(
            names(&g, &strongly_connected_components(&g)),
            [
                (s(&["b1"]), false),
                (s(&["b2", "b3"]), true),
                (s(&["x1", "x2"]), true),
                (s(&["x3"]), true),
            ]
        );
    }
}
