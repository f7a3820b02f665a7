use std::collections::{HashMap, VecDeque};

use super::{BundleId, EdgeInstance, Graph, VertexId, VertexSet};
use crate::error::{Error, Result};

/// A vertex-simple loop `(a_1, …, a_k)`: `r(a_i) = s(a_{i+1})`,
/// `r(a_k) = s(a_1)` and no source vertex repeats.
///
/// Stored in canonical rotation, starting at the vertex whose id is
/// lexicographically least, so two cycles are equal exactly when one is a
/// rotation of the other. Parallel edge instances give distinct cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    edges: Vec<EdgeInstance>,
    vertices: Vec<VertexId>,
    omega_parallel: bool,
}

impl Cycle {
    /// Validates `edges` as a vertex-simple loop of `g` and canonicalizes it.
    pub fn new(g: &Graph, edges: Vec<EdgeInstance>) -> Result<Cycle> {
        let malformed = |why: &str| Error::Precondition(format!("malformed cycle: {why}"));
        if edges.is_empty() {
            return Err(malformed("no edges"));
        }
        for e in &edges {
            if e.bundle.0 >= g.bundles().len() || !g.bundle(e.bundle).has_instance(e.index) {
                return Err(malformed("edge instance not in graph"));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            let next = edges[(i + 1) % edges.len()];
            if g.target(*e) != g.source(next) {
                return Err(malformed("consecutive edges do not compose"));
            }
        }
        let mut seen = g.empty_set();
        for e in &edges {
            if !seen.insert(g.source(*e)) {
                return Err(malformed("repeated vertex"));
            }
        }
        Ok(Self::canonical(g, edges))
    }

    /// Parses edge instance names (`id#k`, bare `id` meaning `id#0`).
    pub fn from_names<S: AsRef<str>>(g: &Graph, names: &[S]) -> Result<Cycle> {
        let edges = names
            .iter()
            .map(|n| g.instance(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Cycle::new(g, edges)
    }

    fn canonical(g: &Graph, mut edges: Vec<EdgeInstance>) -> Cycle {
        let start = (0..edges.len())
            .min_by_key(|&i| g.vertex_name(g.source(edges[i])))
            .unwrap_or(0);
        edges.rotate_left(start);
        let vertices = edges.iter().map(|&e| g.source(e)).collect();
        let omega_parallel = edges
            .iter()
            .any(|e| g.bundle(e.bundle).multiplicity.is_omega());
        Cycle {
            edges,
            vertices,
            omega_parallel,
        }
    }

    pub fn edges(&self) -> &[EdgeInstance] {
        &self.edges
    }

    /// `s(a_1), …, s(a_k)`.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Uses an edge of an ω bundle; only instances `#0`/`#1` of such
    /// bundles are ever enumerated.
    pub fn omega_parallel(&self) -> bool {
        self.omega_parallel
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// The cycle's edge leaving `v`, if `v` is on the cycle.
    pub fn edge_at(&self, v: VertexId) -> Option<EdgeInstance> {
        self.vertices
            .iter()
            .position(|&w| w == v)
            .map(|i| self.edges[i])
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        VertexSet::from_vertices(universe, self.vertices.iter().copied())
    }

    pub fn edge_names(&self, g: &Graph) -> Vec<String> {
        self.edges.iter().map(|&e| g.instance_name(e)).collect()
    }

    fn check_in(&self, g: &Graph) -> Result<()> {
        Cycle::new(g, self.edges.clone()).map(|_| ())
    }
}

/// All distinct vertex-simple loops of `g`, in canonical form.
///
/// Parallel instances are enumerated separately; an ω bundle contributes its
/// instances `#0` and `#1` only and marks the cycle `omega_parallel`.
/// Fails with [`Error::CycleLimit`] instead of returning more than `limit`
/// cycles. Output is ordered by the declaration indices of the cycle's
/// vertices, then by edge.
pub fn vertex_simple_cycles(g: &Graph, limit: usize) -> Result<Vec<Cycle>> {
    let n = g.vertex_count();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for b in g.bundles() {
        succ[b.source.0].push(b.target.0);
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
    }

    let mut vertex_cycles = Vec::new();
    let mut johnson = Johnson {
        succ: &succ,
        blocked: vec![false; n],
        blocked_by: vec![Vec::new(); n],
        stack: Vec::new(),
        limit,
    };
    for start in 0..n {
        johnson.blocked.iter_mut().for_each(|b| *b = false);
        johnson.blocked_by.iter_mut().for_each(Vec::clear);
        johnson.circuit(start, start, &mut vertex_cycles)?;
    }

    let mut cycles = Vec::new();
    for vc in &vertex_cycles {
        let choices: Vec<Vec<EdgeInstance>> = (0..vc.len())
            .map(|i| instances_between(g, VertexId(vc[i]), VertexId(vc[(i + 1) % vc.len()])))
            .collect();
        let total = choices
            .iter()
            .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
            .unwrap_or(usize::MAX);
        if cycles.len().saturating_add(total) > limit {
            return Err(Error::CycleLimit { limit });
        }
        let mut pick = vec![0usize; choices.len()];
        loop {
            let edges = pick.iter().zip(&choices).map(|(&k, c)| c[k]).collect();
            cycles.push(Cycle::canonical(g, edges));
            // odometer over the per-step instance choices
            let mut i = pick.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
            }
            if pick.iter().all(|&k| k == 0) {
                break;
            }
        }
    }
    cycles.sort_by(|a, b| {
        a.vertices
            .iter()
            .cmp(b.vertices.iter())
            .then_with(|| a.edges.cmp(&b.edges))
    });
    Ok(cycles)
}

fn instances_between(g: &Graph, v: VertexId, w: VertexId) -> Vec<EdgeInstance> {
    g.out_bundles(v)
        .iter()
        .filter(|&&b| g.bundle(b).target == w)
        .flat_map(|&b| {
            g.bundle(b)
                .listed_instances()
                .map(move |index| EdgeInstance { bundle: b, index })
        })
        .collect()
}

/// Johnson's elementary-circuit search on the simple vertex digraph.
struct Johnson<'a> {
    succ: &'a [Vec<usize>],
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    stack: Vec<usize>,
    limit: usize,
}

impl Johnson<'_> {
    fn circuit(&mut self, v: usize, start: usize, out: &mut Vec<Vec<usize>>) -> Result<bool> {
        let succ = self.succ;
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in &succ[v] {
            if w < start {
                continue;
            }
            if w == start {
                if out.len() >= self.limit {
                    return Err(Error::CycleLimit { limit: self.limit });
                }
                out.push(self.stack.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w, start, out)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in &succ[v] {
                if w >= start && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.stack.pop();
        Ok(found)
    }

    fn unblock(&mut self, v: usize) {
        let mut pending = vec![v];
        while let Some(u) = pending.pop() {
            if self.blocked[u] {
                self.blocked[u] = false;
                pending.append(&mut self.blocked_by[u]);
            }
        }
    }
}

/// Exits of `cycle` into `set`: edge instances `e ≠ a_j` with
/// `s(e) = s(a_j)` and `r(e) ∈ set`.
///
/// A parallel instance of the cycle's own bundle counts as an exit. ω
/// bundles are represented by their listed instances (`#0`, `#1`).
pub fn loop_exits(g: &Graph, cycle: &Cycle, set: &VertexSet) -> Result<Vec<EdgeInstance>> {
    cycle.check_in(g)?;
    g.check_set(set)?;
    let mut exits = Vec::new();
    for (&v, &own) in cycle.vertices.iter().zip(&cycle.edges) {
        for &b in g.out_bundles(v) {
            let bundle = g.bundle(b);
            if !set.contains(bundle.target) {
                continue;
            }
            exits.extend(
                bundle
                    .listed_instances()
                    .map(|index| EdgeInstance { bundle: b, index })
                    .filter(|&e| e != own),
            );
        }
    }
    Ok(exits)
}

/// A vertex-simple loop that starts with `first` and returns to `s(first)`
/// along a shortest path, staying inside `allowed` when given.
pub fn cycle_through(g: &Graph, first: EdgeInstance, allowed: Option<&VertexSet>) -> Option<Cycle> {
    let v = g.source(first);
    let t = g.target(first);
    if allowed.is_some_and(|a| !a.contains(t) || !a.contains(v)) {
        return None;
    }
    let mut edges = vec![first];
    if t != v {
        let mut parent: HashMap<VertexId, BundleId> = HashMap::new();
        let mut queue = VecDeque::from([t]);
        let mut seen = g.empty_set();
        seen.insert(t);
        while let Some(u) = queue.pop_front() {
            if u == v {
                break;
            }
            for &b in g.out_bundles(u) {
                let w = g.bundle(b).target;
                if allowed.is_some_and(|a| !a.contains(w)) {
                    continue;
                }
                if seen.insert(w) {
                    parent.insert(w, b);
                    queue.push_back(w);
                }
            }
        }
        if !seen.contains(v) {
            return None;
        }
        let mut path = Vec::new();
        let mut u = v;
        while u != t {
            let b = parent[&u];
            path.push(EdgeInstance {
                bundle: b,
                index: 0,
            });
            u = g.bundle(b).source;
        }
        path.reverse();
        edges.extend(path);
    }
    Some(Cycle::canonical(g, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixture;

    fn listing(g: &Graph, cycles: &[Cycle]) -> Vec<Vec<String>> {
        cycles.iter().map(|c| c.edge_names(g)).collect()
    }

    #[test]
    fn parallel_loops_are_distinct() {
        let g = fixture("o2");
        let c = vertex_simple_cycles(&g, 100).unwrap();
        assert_eq!(listing(&g, &c), [["a#0"], ["b#0"]]);
    }

    #[test]
    fn ex12_cycles() {
        let g = fixture("ex12");
        let c = vertex_simple_cycles(&g, 100).unwrap();
        assert_eq!(
            listing(&g, &c),
            [vec!["t1#0", "t2#0"], vec!["e#0", "f#0"], vec!["d#0"]]
        );
    }

    #[test]
    fn ex33_cycles() {
        let g = fixture("ex33");
        let c = vertex_simple_cycles(&g, 100).unwrap();
        assert_eq!(
            listing(&g, &c),
            [
                vec!["l1#0"],
                vec!["p#0", "q#0"],
                vec!["l3#0"],
                vec!["c2#0", "c3#0"]
            ]
        );
    }

    #[test]
    fn omega_loops_expose_two_instances() {
        let g = crate::graph::parse_graph("graph g\nvertex v\nedge a v v xinf").unwrap();
        let c = vertex_simple_cycles(&g, 100).unwrap();
        assert_eq!(listing(&g, &c), [["a#0"], ["a#1"]]);
        assert!(c.iter().all(Cycle::omega_parallel));
    }

    #[test]
    fn limit_is_an_error() {
        let g = crate::graph::parse_graph("graph g\nvertex v\nedge a v v x5").unwrap();
        assert_eq!(vertex_simple_cycles(&g, 5).unwrap().len(), 5);
        assert_eq!(
            vertex_simple_cycles(&g, 4),
            Err(Error::CycleLimit { limit: 4 })
        );
    }

    #[test]
    fn exits() {
        let g = fixture("loop");
        let c = Cycle::from_names(&g, &["a#0"]).unwrap();
        assert!(loop_exits(&g, &c, &g.all_vertices()).unwrap().is_empty());

        let g = fixture("o2");
        let c = Cycle::from_names(&g, &["a#0"]).unwrap();
        let exits = loop_exits(&g, &c, &g.all_vertices()).unwrap();
        assert_eq!(
            exits
                .iter()
                .map(|&e| g.instance_name(e))
                .collect::<Vec<_>>(),
            ["b#0"]
        );

        let g = fixture("ex33");
        let c = Cycle::from_names(&g, &["l3"]).unwrap();
        assert!(loop_exits(&g, &c, &g.all_vertices()).unwrap().is_empty());
    }

    #[test]
    fn malformed_cycles_rejected() {
        let g = fixture("ex33");
        assert!(Cycle::from_names(&g, &["p"]).is_err());
        assert!(Cycle::from_names(&g, &["l1", "l1"]).is_err());
        assert!(Cycle::from_names(&g, &["p#3"]).is_err());
        let c = Cycle::from_names(&g, &["q", "p"]).unwrap();
        assert_eq!(c.edge_names(&g), ["p#0", "q#0"]);
    }

    #[test]
    fn shortest_return_cycle() {
        let g = fixture("ex33");
        let p = g.instance("p").unwrap();
        let c = cycle_through(&g, p, None).unwrap();
        assert_eq!(c.edge_names(&g), ["p#0", "q#0"]);
        let v1 = g.instance("v1").unwrap();
        assert!(cycle_through(&g, v1, None).is_none());
    }
}
