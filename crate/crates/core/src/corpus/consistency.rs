//! Cross-checks between independently computed verdicts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{
    has_isolated_loops, is_type_i, no_loop_has_exit, pi_simple_unital_quotient,
    properly_infinite_witnesses, stable_rank, StableRank,
};
use crate::constructions::{build_subgraph, stable_ideal_decomposition, BuildOptions};
use crate::error::Result;
use crate::graph::{strongly_connected_components, EdgeInstance, Graph, Limits, VertexSet};
use crate::traces::{bounded_graph_trace, verify_certificate, verify_witness, TraceOutcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// `(check, failure)`; a check passes when its failure is `None`.
    pub checks: Vec<(&'static str, Option<String>)>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, f)| f.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &str)> {
        self.checks
            .iter()
            .filter_map(|(n, f)| f.as_deref().map(|f| (*n, f)))
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(msg)
}

/// Random `(G⁰, G¹)` pairs drawn per graph for the `E_G` check.
pub const SUBGRAPH_SAMPLES: usize = 4;

/// Runs checks (a) to (f): trichotomy exclusivity, the implication chain,
/// the decomposition's quotient, `E_G` preservation of isolated loops, and
/// trace evidence re-validation.
pub fn consistency_suite(g: &Graph, seed: u64, limits: &Limits) -> Result<ConsistencyReport> {
    let mut checks = Vec::new();
    let no_exit = no_loop_has_exit(g).holds;
    let isolated = has_isolated_loops(g).holds;
    let pi = pi_simple_unital_quotient(g, limits)?.is_some();
    let type_i = is_type_i(g, limits)?.verdict;
    let sr = stable_rank(g, limits)?.value;

    checks.push((
        "a: stable rank 1 and ∞ tests exclusive",
        check(!(no_exit && pi), || "both tests fire".into()),
    ));
    checks.push((
        "a: stable rank matches the tests",
        check(
            sr == match (no_exit, pi) {
                (true, _) => StableRank::One,
                (false, true) => StableRank::Infinite,
                (false, false) => StableRank::Two,
            },
            || format!("stable rank {sr}"),
        ),
    ));
    checks.push((
        "b: no exit implies isolated loops",
        check(!no_exit || isolated, || {
            "a graph without exits has non-isolated loops".into()
        }),
    ));
    checks.push((
        "c: isolated loops imply type I",
        check(!isolated || type_i, || "isolated but not type I".into()),
    ));
    checks.push((
        "c: isolated loops exclude a pi quotient",
        check(!isolated || !pi, || {
            "isolated yet a pi quotient exists".into()
        }),
    ));
    checks.push((
        "c: type I excludes a pi quotient",
        check(!type_i || !pi, || "type I yet a pi quotient exists".into()),
    ));
    checks.push((
        "c: type I iff isolated loops",
        check(type_i == isolated, || {
            format!("type I {type_i}, isolated {isolated}")
        }),
    ));
    checks.push((
        "c: loop pairs exist iff loops are not isolated",
        check(
            properly_infinite_witnesses(g).is_empty() == isolated,
            || "loop-pair witnesses disagree with the isolated-loops verdict".into(),
        ),
    ));

    let d = stable_ideal_decomposition(g, &BuildOptions::default(), limits)?;
    let quotient_ok = match &d.quotient {
        None => None,
        Some(q) => {
            let sr = stable_rank(&q.graph, limits)?.value;
            check(
                has_isolated_loops(&q.graph).holds && sr != StableRank::Infinite,
                || format!("quotient loops not isolated or stable rank {sr}"),
            )
        }
    };
    checks.push(("d: decomposition quotient has isolated loops", quotient_ok));
    let ideal_ok = d.ideal.as_ref().and_then(|ideal| {
        let x = g.transfer_set(d.x.vertices(), &ideal.graph);
        let stray = strongly_connected_components(&ideal.graph)
            .into_iter()
            .find(|c| c.has_internal_edge && !c.vertices.is_subset(&x));
        stray.map(|c| format!("loop through {:?} leaves X", ideal.graph.names(&c.vertices)))
    });
    checks.push(("d: ideal graph loops lie in X", ideal_ok));

    let mut e_fail = None;
    if isolated {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SUBGRAPH_SAMPLES {
            let (g0, g1) = random_finite_subgraph(g, &mut rng);
            let sub = build_subgraph(g, &g0, &g1)?;
            if !has_isolated_loops(&sub.graph).holds {
                e_fail = Some(format!(
                    "E_G for G1 = {:?} has non-isolated loops",
                    g1.iter().map(|&e| g.instance_name(e)).collect::<Vec<_>>()
                ));
                break;
            }
        }
    }
    checks.push(("e: E_G preserves isolated loops", e_fail));

    let trace = match bounded_graph_trace(g) {
        TraceOutcome::Witness(psi) => verify_witness(g, &psi).err(),
        TraceOutcome::Infeasible(c) => verify_certificate(g, &c).err(),
    };
    checks.push(("f: trace evidence re-validates", trace.map(|v| v.0)));

    Ok(ConsistencyReport { checks })
}

/// A seeded random finite `G¹` of listed edge instances and a nonempty
/// `G⁰ ⊇ r(G¹)`.
pub fn sample_finite_subgraph(g: &Graph, seed: u64) -> (VertexSet, Vec<EdgeInstance>) {
    random_finite_subgraph(g, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn random_finite_subgraph(g: &Graph, rng: &mut impl Rng) -> (VertexSet, Vec<EdgeInstance>) {
    let mut g1 = Vec::new();
    for b in g.bundle_ids() {
        for index in g.bundle(b).listed_instances() {
            if rng.random_range(0..2u8) == 0 {
                g1.push(EdgeInstance { bundle: b, index });
            }
        }
    }
    let mut g0 = g.empty_set();
    for v in g.vertices() {
        if rng.random_range(0..2u8) == 0 {
            g0.insert(v);
        }
    }
    for &e in &g1 {
        g0.insert(g.target(e));
    }
    if g0.is_empty() {
        g0.insert(crate::graph::VertexId(
            rng.random_range(0..g.vertex_count()),
        ));
    }
    (g0, g1)
}
