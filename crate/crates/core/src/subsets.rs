//! Hereditary and saturated vertex sets, `Ω(S)`, `X^fin_∞` and breaking
//! vertices.
//!
//! A set `S` is *hereditary* when every edge leaving a member lands in `S`,
//! and *saturated* when every finite non-sink emitter whose edges all land
//! in `S` is itself in `S`. Sinks and infinite emitters never constrain
//! saturation.

use crate::error::{Error, Result};
use crate::graph::{reachable_from, Count, Graph, Limits, VertexId, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetFlags {
    pub hereditary: bool,
    pub saturated: bool,
}

impl SubsetFlags {
    pub fn both(self) -> bool {
        self.hereditary && self.saturated
    }
}

pub fn check_subset(g: &Graph, set: &VertexSet) -> Result<SubsetFlags> {
    g.check_set(set)?;
    let hereditary = set.iter().all(|v| {
        g.out_bundles(v)
            .iter()
            .all(|&b| set.contains(g.bundle(b).target))
    });
    let saturated = g.vertices().all(|v| {
        set.contains(v)
            || !g.is_finite_emitter(v)
            || g.count_into(v, &set.complement()) > Count::ZERO
    });
    Ok(SubsetFlags {
        hereditary,
        saturated,
    })
}

/// A validated hereditary and saturated set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HerSatSet {
    vertices: VertexSet,
}

impl HerSatSet {
    pub fn new(g: &Graph, vertices: VertexSet) -> Result<Self> {
        let flags = check_subset(g, &vertices)?;
        if !flags.both() {
            return Err(Error::Precondition(format!(
                "{{{}}} is not hereditary and saturated (hereditary: {}, saturated: {})",
                g.names(&vertices).join(","),
                flags.hereditary,
                flags.saturated
            )));
        }
        Ok(HerSatSet { vertices })
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn into_vertices(self) -> VertexSet {
        self.vertices
    }

    /// Empty or everything.
    pub fn is_trivial(&self) -> bool {
        self.vertices.is_empty() || self.vertices.is_full()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// The smallest hereditary and saturated set containing `seed`.
pub fn hersat_closure(g: &Graph, seed: &VertexSet) -> Result<HerSatSet> {
    g.check_set(seed)?;
    let mut set = seed.clone();
    loop {
        let mut grew = false;
        for v in g.vertices() {
            if set.contains(v) {
                for &b in g.out_bundles(v) {
                    grew |= set.insert(g.bundle(b).target);
                }
            } else if g.is_finite_emitter(v) && g.count_into(v, &set.complement()) == Count::ZERO {
                set.insert(v);
                grew = true;
            }
        }
        if !grew {
            return Ok(HerSatSet { vertices: set });
        }
    }
}

/// Bitmask view of a graph for subset enumeration.
pub(crate) struct Masks {
    pub n: usize,
    pub succ: Vec<u64>,
    pub finite_emitter: Vec<bool>,
}

impl Masks {
    pub fn new(g: &Graph) -> Self {
        let succ = g
            .vertices()
            .map(|v| {
                g.out_bundles(v)
                    .iter()
                    .fold(0u64, |m, &b| m | 1 << g.bundle(b).target.0)
            })
            .collect();
        Masks {
            n: g.vertex_count(),
            succ,
            finite_emitter: g.vertices().map(|v| g.is_finite_emitter(v)).collect(),
        }
    }

    pub fn is_hersat(&self, mask: u64) -> bool {
        (0..self.n).all(|v| {
            if mask >> v & 1 == 1 {
                self.succ[v] & !mask == 0
            } else {
                !self.finite_emitter[v] || self.succ[v] & !mask != 0
            }
        })
    }
}

/// Every hereditary and saturated subset, `∅` and `E⁰` included, sorted by
/// size and then lexicographically by vertex index.
pub fn enumerate_hersat(g: &Graph, limits: &Limits) -> Result<Vec<HerSatSet>> {
    limits.check_vertices(g)?;
    let masks = Masks::new(g);
    let n = g.vertex_count();
    let mut out: Vec<HerSatSet> = (0..1u64 << n)
        .filter(|&m| masks.is_hersat(m))
        .map(|m| HerSatSet {
            vertices: VertexSet::from_mask(n, m),
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `Ω(S)`: vertices outside `S` with no path into `S`.
///
/// Always hereditary. It is saturated unless some member of `S` is a finite
/// emitter all of whose edges land in `Ω(S)`.
pub fn omega(g: &Graph, set: &VertexSet) -> Result<VertexSet> {
    g.check_set(set)?;
    Ok(VertexSet::from_vertices(
        g.vertex_count(),
        g.vertices()
            .filter(|&w| !set.contains(w) && reachable_from(g, w).is_disjoint(set)),
    ))
}

/// `X^fin_∞`: infinite emitters outside `X` sending finitely many, but at
/// least one, edges outside `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadVertexSet {
    pub base: HerSatSet,
    /// Members with their number of edges into `E⁰∖X`.
    pub members: Vec<(VertexId, u64)>,
}

impl BadVertexSet {
    pub fn vertices(&self) -> VertexSet {
        VertexSet::from_vertices(
            self.base.vertices.universe(),
            self.members.iter().map(|&(v, _)| v),
        )
    }
}

pub fn x_fin_inf(g: &Graph, x: &HerSatSet) -> Result<BadVertexSet> {
    let x = HerSatSet::new(g, x.vertices.clone())?;
    Ok(x_fin_inf_unchecked(g, x))
}

pub(crate) fn x_fin_inf_unchecked(g: &Graph, x: HerSatSet) -> BadVertexSet {
    let outside = x.vertices.complement();
    let members = outside
        .iter()
        .filter(|&v| g.out_degree(v).is_omega())
        .filter_map(|v| match g.count_into(v, &outside) {
            Count::Finite(k) if k > 0 => Some((v, k)),
            _ => None,
        })
        .collect();
    BadVertexSet { base: x, members }
}

/// Vertices `v` with `|s⁻¹(v)| = ω` and `0 < |s⁻¹(v) ∖ r⁻¹(Ω(v))| < ω`.
pub fn breaking_vertices(g: &Graph) -> VertexSet {
    let mut out = g.empty_set();
    for v in g.vertices() {
        if !g.out_degree(v).is_omega() {
            continue;
        }
        let single = VertexSet::from_vertices(g.vertex_count(), [v]);
        let om = omega(g, &single).expect("set built for this graph");
        if let Count::Finite(k) = g.count_into(v, &om.complement()) {
            if k > 0 {
                out.insert(v);
            }
        }
    }
    out
}

/// A pair `(X, B)` with `X` hereditary and saturated and `B ⊆ X^fin_∞`,
/// naming the gauge-invariant ideal `J_{X,B}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    pub x: HerSatSet,
    pub b: VertexSet,
}

impl IdealSpec {
    pub fn new(g: &Graph, x: VertexSet, b: VertexSet) -> Result<Self> {
        g.check_set(&b)?;
        let x = HerSatSet::new(g, x)?;
        let bad = x_fin_inf_unchecked(g, x.clone()).vertices();
        if !b.is_subset(&bad) {
            return Err(Error::Precondition(format!(
                "B = {{{}}} is not contained in X^fin_inf = {{{}}}",
                g.names(&b).join(","),
                g.names(&bad).join(",")
            )));
        }
        Ok(IdealSpec { x, b })
    }

    pub fn from_names<S: AsRef<str>>(g: &Graph, x: &[S], b: &[S]) -> Result<Self> {
        IdealSpec::new(g, g.vertex_set(x)?, g.vertex_set(b)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixture;

    fn set(g: &Graph, names: &[&str]) -> VertexSet {
        g.vertex_set(names).unwrap()
    }

    #[test]
    fn check_subset_examples() {
        let g = fixture("ex12");
        assert!(check_subset(&g, &set(&g, &["x1", "x2", "x3"]))
            .unwrap()
            .both());
        let g = fixture("ex33");
        let f = check_subset(&g, &set(&g, &["x2", "x3"])).unwrap();
        assert!(!f.hereditary);
        assert!(check_subset(&g, &g.empty_set()).unwrap().both());
    }

    #[test]
    fn closure_examples() {
        let g = fixture("ex33");
        let x = hersat_closure(&g, &set(&g, &["x1"])).unwrap();
        assert_eq!(g.names(x.vertices()), ["x1", "x2", "x3"]);
        assert!(hersat_closure(&g, &g.empty_set()).unwrap().is_empty());

        // a's only edge lands in {b}, so saturation pulls a in
        let g = fixture("ab");
        let x = hersat_closure(&g, &set(&g, &["b"])).unwrap();
        assert_eq!(g.names(x.vertices()), ["a", "b"]);
    }

    #[test]
    fn enumeration_examples() {
        let lim = Limits::default();
        for name in ["o2", "loop"] {
            let g = fixture(name);
            let all: Vec<_> = enumerate_hersat(&g, &lim)
                .unwrap()
                .into_iter()
                .map(|h| g.names(h.vertices()))
                .collect();
            assert_eq!(all, [vec![], vec!["v".to_string()]]);
        }
        let g = fixture("ex33");
        let all: Vec<_> = enumerate_hersat(&g, &lim)
            .unwrap()
            .into_iter()
            .map(|h| g.names(h.vertices()))
            .collect();
        assert!(all.contains(&vec!["x3".to_string()]));
        assert!(all.contains(&vec!["x1".into(), "x2".into(), "x3".into()]));
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn vertex_cap() {
        let mut b = Graph::builder("big");
        for i in 0..21 {
            b.vertex(&format!("v{i}")).unwrap();
        }
        let g = b.build().unwrap();
        assert!(matches!(
            enumerate_hersat(&g, &Limits::default()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn omega_examples() {
        let g = fixture("ab");
        assert!(omega(&g, &set(&g, &["b"])).unwrap().is_empty());
        let g = fixture("ex33");
        assert!(omega(&g, &set(&g, &["x3"])).unwrap().is_empty());
        let g = fixture("ex12");
        assert_eq!(
            g.names(&omega(&g, &set(&g, &["w"])).unwrap()),
            ["x1", "x2", "x3", "b", "u"]
        );
    }

    #[test]
    fn omega_need_not_be_saturated() {
        // a is a finite emitter whose only edge lands in Ω({a}) = {b}
        let g = fixture("ab");
        let om = omega(&g, &set(&g, &["a"])).unwrap();
        assert_eq!(g.names(&om), ["b"]);
        let flags = check_subset(&g, &om).unwrap();
        assert!(flags.hereditary && !flags.saturated);
    }

    #[test]
    fn x_fin_inf_examples() {
        let g = fixture("ex12");
        let x = HerSatSet::new(&g, set(&g, &["x1", "x2", "x3"])).unwrap();
        let bad = x_fin_inf(&g, &x).unwrap();
        assert_eq!(bad.members, [(g.vertex("b").unwrap(), 1)]);

        let g = fixture("ex33");
        let x = HerSatSet::new(&g, set(&g, &["x1", "x2", "x3"])).unwrap();
        assert_eq!(g.names(&x_fin_inf(&g, &x).unwrap().vertices()), ["b3"]);

        let g = fixture("o2");
        let x = HerSatSet::new(&g, g.empty_set()).unwrap();
        assert!(x_fin_inf(&g, &x).unwrap().members.is_empty());

        assert!(HerSatSet::new(&fixture("ex33"), set(&fixture("ex33"), &["x2"])).is_err());
    }

    #[test]
    fn breaking_examples() {
        // Ω(b) = {x1,x2,x3,w}; b's only edge avoiding it is e
        let g = fixture("ex12");
        assert_eq!(g.names(&breaking_vertices(&g)), ["b"]);
        assert!(breaking_vertices(&fixture("o2")).is_empty());
        // Ω(b3) = {x1,x2,x3}; b3's only edge avoiding it is c3
        let g = fixture("ex33");
        assert_eq!(g.names(&breaking_vertices(&g)), ["b3"]);
    }

    #[test]
    fn ideal_spec_validation() {
        let g = fixture("ex12");
        assert!(IdealSpec::from_names(&g, &["x1", "x2", "x3"], &["b"]).is_ok());
        assert!(IdealSpec::from_names(&g, &["x1", "x2", "x3"], &["u"]).is_err());
        assert!(IdealSpec::from_names(&g, &["x1"], &[]).is_err());
    }
}
