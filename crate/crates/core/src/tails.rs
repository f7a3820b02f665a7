//! Maximal tails: nonempty vertex sets `M` with
//!
//! * MT1: `v ≥ w ∈ M` implies `v ∈ M`;
//! * MT2: every finite non-sink emitter in `M` has an edge into `M`;
//! * MT3: any two members reach a common member.
//!
//! MT1 and MT2 together say exactly that `E⁰∖M` is hereditary and
//! saturated, which is how [`maximal_tails`] enumerates them.

use crate::error::{Error, Result};
use crate::graph::{Count, Cycle, EdgeInstance, Graph, Limits, ReachTable, VertexId, VertexSet};
use crate::subsets::{check_subset, enumerate_hersat};

/// Which axiom fails, with the vertices showing it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TailDiagnostics {
    /// `(v, w)` with `v ≥ w`, `w ∈ M`, `v ∉ M`.
    pub mt1: Option<(VertexId, VertexId)>,
    /// A finite non-sink emitter of `M` with no edge into `M`.
    pub mt2: Option<VertexId>,
    /// Two members with no common member below them.
    pub mt3: Option<(VertexId, VertexId)>,
}

impl TailDiagnostics {
    pub fn is_tail(&self) -> bool {
        self.mt1.is_none() && self.mt2.is_none() && self.mt3.is_none()
    }
}

pub fn is_maximal_tail(g: &Graph, m: &VertexSet) -> Result<TailDiagnostics> {
    g.check_set(m)?;
    if m.is_empty() {
        return Err(Error::Precondition("a maximal tail is nonempty".into()));
    }
    Ok(diagnose(g, &ReachTable::new(g), m))
}

fn diagnose(g: &Graph, reach: &ReachTable, m: &VertexSet) -> TailDiagnostics {
    let mt1 = g
        .vertices()
        .filter(|&v| !m.contains(v))
        .find_map(|v| reach.from(v).intersection(m).iter().next().map(|w| (v, w)));
    let mt2 = m
        .iter()
        .find(|&v| g.is_finite_emitter(v) && g.count_into(v, m) == Count::ZERO);
    let members: Vec<_> = m.iter().collect();
    let mt3 = members.iter().enumerate().find_map(|(i, &v)| {
        members[i + 1..]
            .iter()
            .find(|&&w| reach.from(v).intersection(reach.from(w)).is_disjoint(m))
            .map(|&w| (v, w))
    });
    TailDiagnostics { mt1, mt2, mt3 }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailClass {
    /// Every loop of `M̃` has an exit into `M`.
    Gamma,
    /// `M̃` contains a loop with no exit into `M`.
    Tau { witness: Cycle },
}

impl TailClass {
    pub fn is_gamma(&self) -> bool {
        matches!(self, TailClass::Gamma)
    }

    pub fn witness(&self) -> Option<&Cycle> {
        match self {
            TailClass::Gamma => None,
            TailClass::Tau { witness } => Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalTail {
    pub vertices: VertexSet,
    pub class: TailClass,
}

impl MaximalTail {
    pub fn is_gamma(&self) -> bool {
        self.class.is_gamma()
    }
}

/// `M̃`: the restriction of `g` to `M`, keeping edges with both ends in `M`.
pub fn tail_restriction(g: &Graph, m: &VertexSet) -> Result<Graph> {
    g.restrict(m)
}

pub fn classify_tail(g: &Graph, m: &VertexSet) -> Result<TailClass> {
    let diag = is_maximal_tail(g, m)?;
    if !diag.is_tail() {
        return Err(Error::Precondition(format!(
            "{{{}}} is not a maximal tail",
            g.names(m).join(",")
        )));
    }
    Ok(classify_unchecked(g, m))
}

/// An exitless loop inside `M` runs through vertices with exactly one edge
/// into `M`, each pointing at the next.
fn classify_unchecked(g: &Graph, m: &VertexSet) -> TailClass {
    let next: Vec<Option<(VertexId, EdgeInstance)>> = g
        .vertices()
        .map(|v| {
            if !m.contains(v) || g.count_into(v, m) != Count::ONE {
                return None;
            }
            g.out_bundles(v)
                .iter()
                .map(|&b| (b, g.bundle(b)))
                .find(|(_, bd)| m.contains(bd.target))
                .map(|(b, bd)| {
                    (
                        bd.target,
                        EdgeInstance {
                            bundle: b,
                            index: 0,
                        },
                    )
                })
        })
        .collect();
    for start in m.iter() {
        let mut edges = Vec::new();
        let mut seen = g.empty_set();
        let mut v = start;
        while let Some((w, e)) = next[v.0] {
            if !seen.insert(v) {
                break;
            }
            edges.push(e);
            if w == start {
                let witness = Cycle::new(g, edges).expect("exitless walk closes a simple loop");
                return TailClass::Tau { witness };
            }
            v = w;
        }
    }
    TailClass::Gamma
}

/// All maximal tails, ordered by size and then by vertex index.
pub fn maximal_tails(g: &Graph, limits: &Limits) -> Result<Vec<MaximalTail>> {
    let reach = ReachTable::new(g);
    let mut out = Vec::new();
    for h in enumerate_hersat(g, limits)? {
        let m = h.vertices().complement();
        if m.is_empty() {
            continue;
        }
        let diag = diagnose(g, &reach, &m);
        if diag.mt1.is_some() || diag.mt2.is_some() {
            return Err(Error::Invariant(format!(
                "complement of hereditary saturated set {{{}}} violates MT1/MT2",
                g.names(h.vertices()).join(",")
            )));
        }
        if diag.mt3.is_none() {
            let class = classify_unchecked(g, &m);
            out.push(MaximalTail { vertices: m, class });
        }
    }
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    for t in &out {
        if !check_subset(g, &t.vertices.complement())?.both() {
            return Err(Error::Invariant(
                "tail complement is not hereditary and saturated".into(),
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixture;
    use crate::graph::loop_exits;

    fn names(g: &Graph, tails: &[MaximalTail]) -> Vec<(Vec<String>, bool)> {
        tails
            .iter()
            .map(|t| (g.names(&t.vertices), t.is_gamma()))
            .collect()
    }

    #[test]
    fn axiom_checks() {
        let g = fixture("o2");
        assert!(is_maximal_tail(&g, &g.all_vertices()).unwrap().is_tail());

        let g = fixture("ab");
        let d = is_maximal_tail(&g, &g.vertex_set(&["a"]).unwrap()).unwrap();
        assert_eq!(d.mt2, Some(g.vertex("a").unwrap()));

        let g = fixture("ex33");
        let d = is_maximal_tail(&g, &g.vertex_set(&["x1", "x2"]).unwrap()).unwrap();
        assert!(d.mt1.is_some());
        assert!(is_maximal_tail(&g, &g.empty_set()).is_err());
    }

    #[test]
    fn mt3_failure() {
        // two sinks below a common root: {r, s, t} fails MT3
        let g = crate::graph::parse_graph(
            "graph split\nvertex r\nvertex s\nvertex t\nedge a r s\nedge b r t\n",
        )
        .unwrap();
        let d = is_maximal_tail(&g, &g.all_vertices()).unwrap();
        assert!(d.mt1.is_none() && d.mt2.is_none());
        assert_eq!(
            d.mt3,
            Some((g.vertex("s").unwrap(), g.vertex("t").unwrap()))
        );
    }

    #[test]
    fn enumeration() {
        let lim = Limits::default();
        let g = fixture("o2");
        assert_eq!(
            names(&g, &maximal_tails(&g, &lim).unwrap()),
            [(vec!["v".into()], true)]
        );
        let g = fixture("loop");
        let t = maximal_tails(&g, &lim).unwrap();
        assert_eq!(names(&g, &t), [(vec!["v".into()], false)]);
        assert_eq!(t[0].class.witness().unwrap().edge_names(&g), ["a#0"]);

        let g = fixture("ex33");
        let t = maximal_tails(&g, &lim).unwrap();
        let s = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(
            names(&g, &t),
            [
                (s(&["b1", "b2", "b3"]), false),
                (s(&["x1", "x2", "b1", "b2", "b3"]), true),
                (s(&["x1", "x2", "x3", "b1", "b2", "b3"]), false),
            ]
        );
        for tail in &t {
            if let Some(w) = tail.class.witness() {
                assert!(loop_exits(&g, w, &tail.vertices).unwrap().is_empty());
            }
        }
        assert_eq!(
            t[0].class.witness().unwrap().edge_names(&g),
            ["c2#0", "c3#0"]
        );
        assert_eq!(t[2].class.witness().unwrap().edge_names(&g), ["l3#0"]);
    }

    #[test]
    fn classification() {
        let g = fixture("ex12");
        assert_eq!(
            classify_tail(&g, &g.all_vertices()).unwrap(),
            TailClass::Gamma
        );
        let g = fixture("ab");
        assert!(classify_tail(&g, &g.vertex_set(&["a"]).unwrap()).is_err());
        assert_eq!(
            classify_tail(&g, &g.all_vertices()).unwrap(),
            TailClass::Gamma
        );
    }
}
