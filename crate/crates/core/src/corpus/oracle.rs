//! Brute-force recomputation of the fast procedures, straight from the
//! definitions.

use std::collections::BTreeSet;

use crate::classify::has_isolated_loops;
use crate::error::{Error, Result};
use crate::graph::{vertex_simple_cycles, Count, Cycle, EdgeInstance, Graph, Limits, VertexSet};
use crate::subsets::{check_subset, enumerate_hersat};
use crate::tails::maximal_tails;

/// Oracles refuse graphs above this many vertices.
pub const ORACLE_MAX_VERTICES: usize = 8;

/// All subsets passing `check_subset`, by mask.
pub fn brute_hersat(g: &Graph) -> Result<Vec<VertexSet>> {
    cap(g)?;
    let n = g.vertex_count();
    let mut out = Vec::new();
    for mask in 0..1u64 << n {
        let s = VertexSet::from_mask(n, mask);
        if check_subset(g, &s)?.both() {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

fn cap(g: &Graph) -> Result<()> {
    if g.vertex_count() > ORACLE_MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "vertices for brute-force oracles",
            limit: ORACLE_MAX_VERTICES,
            actual: g.vertex_count(),
        });
    }
    Ok(())
}

/// Transitive closure by repeated squaring of the adjacency relation.
fn closure(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for b in g.bundles() {
        r[b.source.0][b.target.0] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

/// Nonempty sets satisfying MT1, MT2 and MT3 verbatim.
pub fn brute_tails(g: &Graph) -> Result<Vec<VertexSet>> {
    cap(g)?;
    let n = g.vertex_count();
    let reach = closure(g);
    let mut out = Vec::new();
    for mask in 1..1u64 << n {
        let m = VertexSet::from_mask(n, mask);
        let inside = |v: usize| mask >> v & 1 == 1;
        let mt1 = (0..n).all(|v| inside(v) || !(0..n).any(|w| inside(w) && reach[v][w]));
        let mt2 = (0..n).filter(|&v| inside(v)).all(|v| {
            let out_edges: Vec<_> = g.bundles().iter().filter(|b| b.source.0 == v).collect();
            let finite_emitter =
                !out_edges.is_empty() && out_edges.iter().all(|b| !b.multiplicity.is_omega());
            !finite_emitter || out_edges.iter().any(|b| inside(b.target.0))
        });
        let mt3 = (0..n).filter(|&v| inside(v)).all(|v| {
            (0..n)
                .filter(|&w| inside(w))
                .all(|w| (0..n).any(|y| inside(y) && reach[v][y] && reach[w][y]))
        });
        if mt1 && mt2 && mt3 {
            out.push(m);
        }
    }
    out.sort();
    Ok(out)
}

/// Every vertex-simple loop, by depth-first search over listed edge
/// instances from each possible least starting vertex.
pub fn brute_cycles(g: &Graph) -> Result<Vec<Cycle>> {
    cap(g)?;
    let instances: Vec<EdgeInstance> = g
        .bundle_ids()
        .flat_map(|b| {
            g.bundle(b)
                .listed_instances()
                .map(move |index| EdgeInstance { bundle: b, index })
        })
        .collect();
    let mut found = BTreeSet::new();
    for start in g.vertices() {
        let mut path = Vec::new();
        dfs(g, &instances, start.0, start.0, &mut path, &mut found);
    }
    found
        .into_iter()
        .map(|edges| Cycle::new(g, edges))
        .collect()
}

fn dfs(
    g: &Graph,
    instances: &[EdgeInstance],
    start: usize,
    at: usize,
    path: &mut Vec<EdgeInstance>,
    found: &mut BTreeSet<Vec<EdgeInstance>>,
) {
    for &e in instances.iter().filter(|e| g.source(**e).0 == at) {
        let t = g.target(e).0;
        if t == start {
            path.push(e);
            found.insert(path.clone());
            path.pop();
        } else if t > start && t != at && !path.iter().any(|p| g.source(*p).0 == t) {
            path.push(e);
            dfs(g, instances, start, t, path, found);
            path.pop();
        }
    }
}

/// Loops are isolated iff no two loops pass through a common vertex using
/// different edges there.
pub fn brute_isolated(cycles: &[Cycle]) -> bool {
    cycles.iter().enumerate().all(|(i, a)| {
        cycles[i + 1..].iter().all(|b| {
            a.vertices()
                .iter()
                .filter(|v| b.contains_vertex(**v))
                .all(|&v| a.edge_at(v) == b.edge_at(v))
        })
    })
}

/// A tail is gamma iff every loop inside it has an edge into it besides its
/// own.
fn brute_gamma(g: &Graph, m: &VertexSet, cycles: &[Cycle]) -> bool {
    cycles
        .iter()
        .filter(|c| c.vertices().iter().all(|&v| m.contains(v)))
        .all(|c| {
            c.vertices().iter().any(|&v| {
                let into: Count = g
                    .out_bundles(v)
                    .iter()
                    .map(|&b| g.bundle(b))
                    .filter(|bd| m.contains(bd.target))
                    .map(|bd| bd.multiplicity)
                    .sum();
                into > Count::ONE
            })
        })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub diffs: Vec<String>,
}

impl OracleReport {
    pub fn is_clean(&self) -> bool {
        self.diffs.is_empty()
    }
}

/// Diffs the fast implementations against the oracles.
pub fn oracle_suite(g: &Graph, limits: &Limits) -> Result<OracleReport> {
    cap(g)?;
    let mut diffs = Vec::new();
    let names = |sets: &[VertexSet]| {
        sets.iter()
            .map(|s| format!("{{{}}}", g.names(s).join(",")))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let fast: Vec<VertexSet> = enumerate_hersat(g, limits)?
        .into_iter()
        .map(|h| h.into_vertices())
        .collect();
    let slow = brute_hersat(g)?;
    if fast != slow {
        diffs.push(format!(
            "hersat: fast [{}] vs oracle [{}]",
            names(&fast),
            names(&slow)
        ));
    }

    let tails = maximal_tails(g, limits)?;
    let fast: Vec<VertexSet> = tails.iter().map(|t| t.vertices.clone()).collect();
    let slow = brute_tails(g)?;
    if fast != slow {
        diffs.push(format!(
            "tails: fast [{}] vs oracle [{}]",
            names(&fast),
            names(&slow)
        ));
    }

    let mut fast_cycles = vertex_simple_cycles(g, limits.cycle_limit)?;
    let mut slow_cycles = brute_cycles(g)?;
    let key = |c: &Cycle| c.edge_names(g);
    fast_cycles.sort_by_key(key);
    slow_cycles.sort_by_key(key);
    if fast_cycles != slow_cycles {
        diffs.push(format!(
            "cycles: fast {} vs oracle {}",
            fast_cycles.len(),
            slow_cycles.len()
        ));
    }

    for t in &tails {
        if t.is_gamma() != brute_gamma(g, &t.vertices, &slow_cycles) {
            diffs.push(format!(
                "tail class of {{{}}}",
                g.names(&t.vertices).join(",")
            ));
        }
    }

    let fast = has_isolated_loops(g).holds;
    let slow = brute_isolated(&slow_cycles);
    if fast != slow {
        diffs.push(format!("isolated loops: fast {fast} vs oracle {slow}"));
    }
    Ok(OracleReport { diffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixture;

    #[test]
    fn fixtures_have_empty_diffs() {
        for name in ["ex33", "ex12", "o2", "loop", "ab", "o2sink", "cycle_exit"] {
            let r = oracle_suite(&fixture(name), &Limits::default()).unwrap();
            assert!(r.is_clean(), "{name}: {:?}", r.diffs);
        }
    }

    #[test]
    fn brute_cycles_of_parallel_loops() {
        let g = fixture("o2");
        let c: Vec<_> = brute_cycles(&g)
            .unwrap()
            .iter()
            .map(|c| c.edge_names(&g))
            .collect();
        assert_eq!(c, [vec!["a#0"], vec!["b#0"]]);
        assert!(!brute_isolated(&brute_cycles(&g).unwrap()));
    }
}
