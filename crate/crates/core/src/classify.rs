//! Decision procedures: exits, isolated loops, type I, purely infinite simple
//! unital quotients and the stable rank.
//!
//! Every verdict carries evidence made of vertices, cycles and tails that
//! can be re-checked with independent calls.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{
    cycle_through, strongly_connected_components, Count, Cycle, EdgeInstance, Graph, Limits,
    ReachTable, VertexId, VertexSet,
};
use crate::subsets::hersat_closure;
use crate::tails::{classify_tail, maximal_tails, tail_restriction, MaximalTail, TailClass};

/// A vertex on a loop that emits more than one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExitWitness {
    pub vertex: VertexId,
    pub cycle: Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoExitReport {
    pub holds: bool,
    pub witness: Option<ExitWitness>,
}

/// No loop has an exit iff every vertex lying on a loop has out-degree 1.
pub fn no_loop_has_exit(g: &Graph) -> NoExitReport {
    for scc in strongly_connected_components(g) {
        if !scc.has_internal_edge {
            continue;
        }
        for v in scc.vertices.iter() {
            if g.out_degree(v) != Count::ONE {
                let cycle = loop_at(g, v, &scc.vertices).expect("vertex of a nontrivial component");
                return NoExitReport {
                    holds: false,
                    witness: Some(ExitWitness { vertex: v, cycle }),
                };
            }
        }
    }
    NoExitReport {
        holds: true,
        witness: None,
    }
}

fn internal_instances(g: &Graph, v: VertexId, comp: &VertexSet) -> Vec<EdgeInstance> {
    g.out_bundles(v)
        .iter()
        .filter(|&&b| comp.contains(g.bundle(b).target))
        .flat_map(|&b| {
            g.bundle(b)
                .listed_instances()
                .map(move |index| EdgeInstance { bundle: b, index })
        })
        .collect()
}

fn loop_at(g: &Graph, v: VertexId, comp: &VertexSet) -> Option<Cycle> {
    let first = *internal_instances(g, v, comp).first()?;
    cycle_through(g, first, Some(comp))
}

/// Two loops through `vertex` leaving it by different edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopPair {
    pub vertex: VertexId,
    pub first: Cycle,
    pub second: Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedLoops {
    pub holds: bool,
    pub witness: Option<LoopPair>,
}

/// Loops are isolated iff each vertex of a nontrivial strongly connected
/// component has exactly one edge instance staying in the component.
pub fn has_isolated_loops(g: &Graph) -> IsolatedLoops {
    let witness = loop_pairs(g).into_iter().next();
    IsolatedLoops {
        holds: witness.is_none(),
        witness,
    }
}

/// One pair of loops per vertex admitting two loops with distinct first
/// edges. Empty exactly when loops are isolated.
pub fn properly_infinite_witnesses(g: &Graph) -> Vec<LoopPair> {
    loop_pairs(g)
}

fn loop_pairs(g: &Graph) -> Vec<LoopPair> {
    let mut out = Vec::new();
    for scc in strongly_connected_components(g) {
        if !scc.has_internal_edge {
            continue;
        }
        for v in scc.vertices.iter() {
            let inst = internal_instances(g, v, &scc.vertices);
            if inst.len() >= 2 {
                let first = cycle_through(g, inst[0], Some(&scc.vertices));
                let second = cycle_through(g, inst[1], Some(&scc.vertices));
                if let (Some(first), Some(second)) = (first, second) {
                    out.push(LoopPair {
                        vertex: v,
                        first,
                        second,
                    });
                }
            }
        }
    }
    out.sort_by_key(|p| p.vertex);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeIClause {
    /// The tail contains this vertex, which emits no edges into the tail.
    NoEdgesIntoTail(VertexId),
    /// Neither clause holds.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailRecord {
    pub tail: VertexSet,
    pub clause: TypeIClause,
}

/// The second clause asks for an infinite path through infinitely many
/// distinct vertices of the tail, which a finite vertex set cannot supply.
pub const CLAUSE_II_NOTE: &str =
    "clause (ii) needs infinitely many distinct vertices and never holds on a finite vertex set";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeIReport {
    pub verdict: bool,
    /// One record per gamma tail.
    pub tails: Vec<TailRecord>,
}

/// Type I iff every gamma tail contains a vertex emitting no edges into it.
pub fn is_type_i(g: &Graph, limits: &Limits) -> Result<TypeIReport> {
    let tails: Vec<TailRecord> = maximal_tails(g, limits)?
        .into_iter()
        .filter(MaximalTail::is_gamma)
        .map(|t| {
            let clause = t
                .vertices
                .iter()
                .find(|&v| g.count_into(v, &t.vertices) == Count::ZERO)
                .map_or(TypeIClause::None, TypeIClause::NoEdgesIntoTail);
            TailRecord {
                tail: t.vertices,
                clause,
            }
        })
        .collect();
    Ok(TypeIReport {
        verdict: tails.iter().all(|r| r.clause != TypeIClause::None),
        tails,
    })
}

/// A gamma tail `M` whose restriction `M̃` has a loop and no nontrivial
/// hereditary saturated subsets.
pub fn pi_simple_unital_quotient(g: &Graph, limits: &Limits) -> Result<Option<MaximalTail>> {
    for t in maximal_tails(g, limits)? {
        if t.is_gamma() && tail_is_simple_with_loop(g, &t.vertices)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

fn tail_is_simple_with_loop(g: &Graph, m: &VertexSet) -> Result<bool> {
    let flags = restriction_flags(g, m)?;
    Ok(flags.has_loop && flags.simple)
}

/// `M̃` has no nontrivial hereditary saturated subset iff the closure of
/// every single vertex is all of `M̃`.
fn restriction_flags(g: &Graph, m: &VertexSet) -> Result<TailFlags> {
    let h = tail_restriction(g, m)?;
    let has_loop = strongly_connected_components(&h)
        .iter()
        .any(|c| c.has_internal_edge);
    let mut simple = true;
    for v in h.vertices() {
        let single = VertexSet::from_vertices(h.vertex_count(), [v]);
        if !hersat_closure(&h, &single)?.vertices().is_full() {
            simple = false;
            break;
        }
    }
    Ok(TailFlags {
        unital: true,
        has_loop,
        simple,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StableRank {
    One,
    Two,
    Infinite,
}

impl StableRank {
    /// `"1"`, `"2"` or `"infinity"`.
    pub fn as_str(self) -> &'static str {
        match self {
            StableRank::One => "1",
            StableRank::Two => "2",
            StableRank::Infinite => "infinity",
        }
    }
}

impl fmt::Display for StableRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StableRank::One => "1",
            StableRank::Two => "2",
            StableRank::Infinite => "∞",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StableRankEvidence {
    /// No vertex on a loop has out-degree other than 1.
    NoLoopHasExit,
    /// A gamma tail giving a purely infinite simple unital quotient.
    PiQuotient(MaximalTail),
    /// A loop with an exit, and no tail giving such a quotient.
    Otherwise(ExitWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableRankVerdict {
    pub value: StableRank,
    pub evidence: StableRankEvidence,
}

/// `1` if no loop has an exit, `∞` if there is a purely infinite simple
/// unital quotient, `2` otherwise.
pub fn stable_rank(g: &Graph, limits: &Limits) -> Result<StableRankVerdict> {
    let exits = no_loop_has_exit(g);
    let pi = pi_simple_unital_quotient(g, limits)?;
    match (exits.witness, pi) {
        (None, Some(_)) => Err(Error::Invariant(
            "no loop has an exit, yet a purely infinite simple quotient exists".into(),
        )),
        (None, None) => Ok(StableRankVerdict {
            value: StableRank::One,
            evidence: StableRankEvidence::NoLoopHasExit,
        }),
        (Some(_), Some(t)) => Ok(StableRankVerdict {
            value: StableRank::Infinite,
            evidence: StableRankEvidence::PiQuotient(t),
        }),
        (Some(w), None) => Ok(StableRankVerdict {
            value: StableRank::Two,
            evidence: StableRankEvidence::Otherwise(w),
        }),
    }
}

/// Loops of a graph with isolated loops, ordered by reachability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopPoset {
    pub cycles: Vec<Cycle>,
    /// `geq[i][j]`: some vertex of cycle `i` reaches some vertex of cycle `j`.
    pub geq: Vec<Vec<bool>>,
    /// Indices of maximal cycles.
    pub maximal: Vec<usize>,
}

pub fn loop_poset(g: &Graph) -> Result<LoopPoset> {
    if let Some(pair) = has_isolated_loops(g).witness {
        return Err(Error::Precondition(format!(
            "loops are not isolated at {}",
            g.vertex_name(pair.vertex)
        )));
    }
    // with isolated loops each nontrivial component is a single loop
    let cycles: Vec<Cycle> = strongly_connected_components(g)
        .into_iter()
        .filter(|c| c.has_internal_edge)
        .map(|c| {
            let v = c.vertices.iter().next().expect("components are nonempty");
            loop_at(g, v, &c.vertices).expect("nontrivial component has a loop")
        })
        .collect();
    let reach = ReachTable::new(g);
    let n = cycles.len();
    let geq: Vec<Vec<bool>> = cycles
        .iter()
        .map(|a| {
            cycles
                .iter()
                .map(|b| {
                    a.vertices()
                        .iter()
                        .any(|&v| b.vertices().iter().any(|&w| reach.reaches(v, w)))
                })
                .collect()
        })
        .collect();
    for i in 0..n {
        if !geq[i][i] {
            return Err(Error::Invariant("loop order is not reflexive".into()));
        }
        for j in 0..n {
            if i != j && geq[i][j] && geq[j][i] {
                return Err(Error::Invariant("loop order is not antisymmetric".into()));
            }
            for k in 0..n {
                if geq[i][j] && geq[j][k] && !geq[i][k] {
                    return Err(Error::Invariant("loop order is not transitive".into()));
                }
            }
        }
    }
    let maximal = (0..n)
        .filter(|&i| (0..n).all(|j| j == i || !geq[j][i]))
        .collect();
    Ok(LoopPoset {
        cycles,
        geq,
        maximal,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailFlags {
    /// Always true: tails are finite.
    pub unital: bool,
    pub has_loop: bool,
    /// `M̃` has no nontrivial hereditary saturated subsets.
    pub simple: bool,
}

/// Flags of the restriction `M̃` of a gamma tail.
pub fn tail_algebra_flags(g: &Graph, m: &VertexSet) -> Result<TailFlags> {
    match classify_tail(g, m)? {
        TailClass::Gamma => restriction_flags(g, m),
        TailClass::Tau { .. } => Err(Error::Precondition(
            "the simplicity criterion applies to gamma tails only".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixture;
    use crate::graph::parse_graph;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn exits() {
        assert!(no_loop_has_exit(&fixture("loop")).holds);
        let g = fixture("o2");
        let r = no_loop_has_exit(&g);
        assert_eq!(r.witness.unwrap().vertex, g.vertex("v").unwrap());
        let g = fixture("ex33");
        let w = no_loop_has_exit(&g).witness.unwrap();
        assert_eq!(g.vertex_name(w.vertex), "x1");
        assert_eq!(w.cycle.edge_names(&g), ["l1#0"]);
    }

    #[test]
    fn isolated() {
        assert!(has_isolated_loops(&fixture("loop")).holds);
        assert!(has_isolated_loops(&fixture("cycle_exit")).holds);
        let g = fixture("o2");
        let p = has_isolated_loops(&g).witness.unwrap();
        assert_eq!(p.first.edge_names(&g), ["a#0"]);
        assert_eq!(p.second.edge_names(&g), ["b#0"]);
        let g = parse_graph("graph w\nvertex v\nedge a v v xinf\n").unwrap();
        let p = has_isolated_loops(&g).witness.unwrap();
        assert_eq!(p.first.edge_names(&g), ["a#0"]);
        assert_eq!(p.second.edge_names(&g), ["a#1"]);
    }

    #[test]
    fn properly_infinite() {
        let g = fixture("ex33");
        let w = properly_infinite_witnesses(&g);
        let x1 = w.iter().find(|p| g.vertex_name(p.vertex) == "x1").unwrap();
        assert_eq!(x1.first.edge_names(&g), ["l1#0"]);
        assert_eq!(x1.second.edge_names(&g), ["p#0", "q#0"]);
        assert!(properly_infinite_witnesses(&fixture("loop")).is_empty());
        assert_eq!(properly_infinite_witnesses(&fixture("o2")).len(), 1);
    }

    #[test]
    fn type_i() {
        assert!(!is_type_i(&fixture("o2"), &lim()).unwrap().verdict);
        let r = is_type_i(&fixture("loop"), &lim()).unwrap();
        assert!(r.verdict && r.tails.is_empty());
        // the gamma tail {x1,x2,b1,b2,b3}: every member emits into it
        let g = fixture("ex33");
        let r = is_type_i(&g, &lim()).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.tails.len(), 1);
        assert_eq!(r.tails[0].clause, TypeIClause::None);
        // a sink in the tail satisfies clause (i)
        let g = fixture("ab");
        let r = is_type_i(&g, &lim()).unwrap();
        assert!(r.verdict);
        assert_eq!(
            r.tails[0].clause,
            TypeIClause::NoEdgesIntoTail(g.vertex("b").unwrap())
        );
    }

    #[test]
    fn pi_quotients() {
        let g = fixture("o2");
        assert_eq!(
            g.names(
                &pi_simple_unital_quotient(&g, &lim())
                    .unwrap()
                    .unwrap()
                    .vertices
            ),
            ["v"]
        );
        assert!(pi_simple_unital_quotient(&fixture("ex33"), &lim())
            .unwrap()
            .is_none());
        assert!(pi_simple_unital_quotient(&fixture("loop"), &lim())
            .unwrap()
            .is_none());
    }

    #[test]
    fn stable_rank_trichotomy() {
        let sr = |n: &str| stable_rank(&fixture(n), &lim()).unwrap().value;
        assert_eq!(sr("loop"), StableRank::One);
        assert_eq!(sr("o2"), StableRank::Infinite);
        assert_eq!(sr("ex33"), StableRank::Two);
        assert_eq!(sr("cycle_exit"), StableRank::Two);
        assert_eq!(sr("ab"), StableRank::One);
    }

    #[test]
    fn poset() {
        let p = loop_poset(&fixture("loop")).unwrap();
        assert_eq!((p.cycles.len(), p.maximal.clone()), (1, vec![0]));
        let g = parse_graph("graph two\nvertex u\nvertex w\nedge a u u\nedge b w w\nedge c u w\n")
            .unwrap();
        let p = loop_poset(&g).unwrap();
        assert_eq!(p.cycles[0].edge_names(&g), ["a#0"]);
        assert!(p.geq[0][1] && !p.geq[1][0]);
        assert_eq!(p.maximal, [0]);
        assert!(loop_poset(&fixture("o2")).is_err());
    }

    #[test]
    fn tail_flags() {
        let g = fixture("o2");
        let f = tail_algebra_flags(&g, &g.all_vertices()).unwrap();
        assert!(f.unital && f.has_loop && f.simple);

        let g = fixture("ex33");
        let m = g.vertex_set(&["x1", "x2", "b1", "b2", "b3"]).unwrap();
        assert!(!tail_algebra_flags(&g, &m).unwrap().simple);
        assert!(tail_algebra_flags(&g, &g.all_vertices()).is_err());

        // {b} is not saturated in ab, so the restriction is simple
        let g = fixture("ab");
        let f = tail_algebra_flags(&g, &g.all_vertices()).unwrap();
        assert!(!f.has_loop && f.simple);
    }
}
