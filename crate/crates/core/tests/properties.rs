use cka::classify::{
    has_isolated_loops, is_type_i, no_loop_has_exit, pi_simple_unital_quotient,
    properly_infinite_witnesses, stable_rank, StableRank,
};
use cka::constructions::{
    build_ideal_graph, build_quotient_graph, build_subgraph, f_paths, stable_ideal_decomposition,
    BuildOptions,
};
use cka::corpus::{brute_cycles, brute_hersat, brute_tails, random_graph, GeneratorParams};
use cka::graph::{
    loop_exits, parse_graph, serialize_graph, strongly_connected_components, Count, EdgeInstance,
    Format, Graph, Limits, VertexId, VertexSet,
};
use cka::subsets::{
    check_subset, enumerate_hersat, hersat_closure, omega, x_fin_inf, HerSatSet, IdealSpec,
};
use cka::tails::maximal_tails;
use cka::traces::{bounded_graph_trace, verify_certificate, verify_witness, TraceOutcome, Q};
use num_rational::Ratio;
use proptest::prelude::*;

/// `(n, edges)` with multiplicity 0 standing for `ω`.
fn arb_edges(
    max_n: usize,
    allow_omega: bool,
) -> impl Strategy<Value = (usize, Vec<(usize, usize, u64)>)> {
    (1..=max_n).prop_flat_map(move |n| {
        let lo = if allow_omega { 0 } else { 1 };
        (
            Just(n),
            prop::collection::vec((0..n, 0..n, lo..=2u64), 0..=2 * n),
        )
    })
}

fn build((n, edges): (usize, Vec<(usize, usize, u64)>)) -> Graph {
    let mut b = Graph::builder("prop");
    for i in 0..n {
        b.vertex(&format!("v{i}")).unwrap();
    }
    for (k, (s, t, m)) in edges.into_iter().enumerate() {
        let mult = if m == 0 {
            Count::Omega
        } else {
            Count::Finite(m)
        };
        b.bundle(&format!("e{k}"), &format!("v{s}"), &format!("v{t}"), mult)
            .unwrap();
    }
    b.build().unwrap()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    arb_edges(max_n, true).prop_map(build)
}

fn arb_finite_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    arb_edges(max_n, false).prop_map(build)
}

fn subset(g: &Graph, mask: u64) -> VertexSet {
    VertexSet::from_mask(g.vertex_count(), mask & ((1 << g.vertex_count()) - 1))
}

fn lim() -> Limits {
    Limits::default()
}

proptest! {
    #[test]
    fn hersat_enumeration_matches_subset_filter(g in arb_graph(7)) {
        let fast: Vec<VertexSet> =
            enumerate_hersat(&g, &lim()).unwrap().into_iter().map(HerSatSet::into_vertices).collect();
        prop_assert_eq!(fast, brute_hersat(&g).unwrap());
    }

    #[test]
    fn closure_is_least_hersat_superset(g in arb_graph(7), mask in any::<u64>()) {
        let s = subset(&g, mask);
        let c = hersat_closure(&g, &s).unwrap().into_vertices();
        let least = brute_hersat(&g).unwrap().into_iter().filter(|h| s.is_subset(h)).min().unwrap();
        prop_assert_eq!(c, least);
    }

    #[test]
    fn closure_is_monotone(g in arb_graph(7), a in any::<u64>(), b in any::<u64>()) {
        let s = subset(&g, a & b);
        let t = subset(&g, a);
        let cs = hersat_closure(&g, &s).unwrap();
        let ct = hersat_closure(&g, &t).unwrap();
        prop_assert!(cs.vertices().is_subset(ct.vertices()));
    }

    #[test]
    fn omega_is_hereditary_and_saturation_fails_only_at_s(g in arb_graph(7), mask in any::<u64>()) {
        let s = subset(&g, mask);
        let om = omega(&g, &s).unwrap();
        let flags = check_subset(&g, &om).unwrap();
        prop_assert!(flags.hereditary);
        let blocker = s.iter().any(|v| {
            g.is_finite_emitter(v) && g.count_into(v, &om.complement()) == Count::ZERO
        });
        prop_assert_eq!(flags.saturated, !blocker);
    }

    #[test]
    fn tails_match_axiom_filter(g in arb_graph(7)) {
        let tails = maximal_tails(&g, &lim()).unwrap();
        let fast: Vec<VertexSet> = tails.iter().map(|t| t.vertices.clone()).collect();
        prop_assert_eq!(fast, brute_tails(&g).unwrap());
        for t in &tails {
            prop_assert!(check_subset(&g, &t.vertices.complement()).unwrap().both());
            if let Some(w) = t.class.witness() {
                prop_assert!(loop_exits(&g, w, &t.vertices).unwrap().is_empty());
                prop_assert!(w.vertices().iter().all(|&v| t.vertices.contains(v)));
            } else {
                // gamma: every loop inside the tail has an exit into it
                for c in brute_cycles(&g).unwrap() {
                    if c.vertices().iter().all(|&v| t.vertices.contains(v)) {
                        prop_assert!(!loop_exits(&g, &c, &t.vertices).unwrap().is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn cycles_match_dfs(g in arb_graph(6)) {
        let key = |c: &cka::graph::Cycle| c.edge_names(&g);
        let mut fast = cka::graph::vertex_simple_cycles(&g, 100_000).unwrap();
        let mut slow = brute_cycles(&g).unwrap();
        fast.sort_by_key(key);
        slow.sort_by_key(key);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn isolated_loops_match_pairwise_test(g in arb_graph(6)) {
        let cycles = brute_cycles(&g).unwrap();
        let pairwise = cka::corpus::brute_isolated(&cycles);
        prop_assert_eq!(has_isolated_loops(&g).holds, pairwise);
        prop_assert_eq!(properly_infinite_witnesses(&g).is_empty(), pairwise);
    }

    #[test]
    fn trichotomy_and_implications(g in arb_graph(7)) {
        let no_exit = no_loop_has_exit(&g).holds;
        let isolated = has_isolated_loops(&g).holds;
        let pi = pi_simple_unital_quotient(&g, &lim()).unwrap().is_some();
        let type_i = is_type_i(&g, &lim()).unwrap().verdict;
        prop_assert!(!(no_exit && pi));
        prop_assert!(!no_exit || isolated);
        prop_assert!(!isolated || (type_i && !pi));
        prop_assert!(!type_i || !pi);
        prop_assert_eq!(type_i, isolated);
        let sr = stable_rank(&g, &lim()).unwrap().value;
        prop_assert_eq!(sr == StableRank::One, no_exit);
        prop_assert_eq!(sr == StableRank::Infinite, pi);
    }

    #[test]
    fn decomposition_quotient_has_isolated_loops(g in arb_graph(7)) {
        let d = stable_ideal_decomposition(&g, &BuildOptions::default(), &lim()).unwrap();
        if let Some(q) = &d.quotient {
            prop_assert!(has_isolated_loops(&q.graph).holds);
            prop_assert_ne!(stable_rank(&q.graph, &lim()).unwrap().value, StableRank::Infinite);
        } else {
            prop_assert!(d.x.vertices().is_full());
        }
    }

    #[test]
    fn ideal_graph_structure(g in arb_graph(6), xmask in any::<u64>(), bmask in any::<u64>(), depth in 1..4usize) {
        let x = hersat_closure(&g, &subset(&g, xmask)).unwrap();
        prop_assume!(!x.is_empty());
        let bad = x_fin_inf(&g, &x).unwrap().vertices();
        let b = bad.intersection(&subset(&g, bmask));
        let opts = BuildOptions { depth, omega_cap: 2 };
        let r = build_ideal_graph(&g, &x, &b, &opts, &lim()).unwrap();
        let h = &r.graph;
        let xh = g.transfer_set(x.vertices(), h);
        let bh = g.transfer_set(&b, h);
        for scc in strongly_connected_components(h) {
            if scc.has_internal_edge {
                prop_assert!(scc.vertices.is_subset(&xh));
            }
        }
        for v in h.vertices() {
            if bh.contains(v) {
                prop_assert_eq!(h.count_into(v, &xh), Count::Omega);
                prop_assert_eq!(h.count_into(v, &xh.complement()), Count::ZERO);
            } else if !xh.contains(v) {
                prop_assert_eq!(h.out_degree(v), Count::ONE);
                prop_assert_eq!(h.count_into(v, &xh.union(&bh)), Count::ONE);
            }
        }
        let fres = f_paths(&g, &x, &b, depth, &lim()).unwrap();
        prop_assert_eq!(r.truncated, !fres.is_finite);
    }

    #[test]
    fn f_paths_finiteness_matches_growth(g in arb_finite_graph(6), xmask in any::<u64>()) {
        let x = hersat_closure(&g, &subset(&g, xmask)).unwrap();
        prop_assume!(!x.is_empty());
        let n = g.vertex_count();
        let fres = f_paths(&g, &x, &g.empty_set(), 2 * n + 1, &lim()).unwrap();
        let grows = fres.families.iter().any(|f| f.len() > n + 1);
        prop_assert_eq!(!fres.is_finite, grows);
    }

    #[test]
    fn quotient_by_nothing_is_identity(g in arb_graph(6)) {
        let spec = IdealSpec::new(&g, g.empty_set(), g.empty_set()).unwrap();
        prop_assert!(build_quotient_graph(&g, &spec).unwrap().graph.same_structure(&g));
    }

    #[test]
    fn subgraph_sink_law_and_isolated_loops(g in arb_graph(6), picks in any::<u64>(), g0mask in any::<u64>()) {
        let inst: Vec<EdgeInstance> = g
            .bundle_ids()
            .flat_map(|b| g.bundle(b).listed_instances().map(move |index| EdgeInstance { bundle: b, index }))
            .collect();
        let g1: Vec<EdgeInstance> = inst.iter().enumerate().filter(|(i, _)| picks >> (i % 64) & 1 == 1).map(|(_, &e)| e).collect();
        let mut g0 = subset(&g, g0mask);
        for &e in &g1 {
            g0.insert(g.target(e));
        }
        prop_assume!(!g0.is_empty() || !g1.is_empty());
        let r = build_subgraph(&g, &g0, &g1).unwrap();
        for v in g0.iter() {
            if let Ok(w) = r.graph.vertex(g.vertex_name(v)) {
                prop_assert!(r.graph.is_sink(w));
            }
        }
        if has_isolated_loops(&g).holds {
            prop_assert!(has_isolated_loops(&r.graph).holds);
        }
    }

    #[test]
    fn trace_evidence_revalidates(g in arb_graph(7)) {
        match bounded_graph_trace(&g) {
            TraceOutcome::Witness(psi) => {
                prop_assert!(verify_witness(&g, &psi).is_ok());
                // 2ψ renormalized is ψ again
                let two = Q::from_integer(2.into());
                let scaled: Vec<Q> = psi.iter().map(|p| p * &two / &two).collect();
                prop_assert!(verify_witness(&g, &scaled).is_ok());
                for b in g.bundles().iter().filter(|b| b.multiplicity.is_omega()) {
                    prop_assert_eq!(&psi[b.target.0], &Q::from_integer(0.into()));
                }
            }
            TraceOutcome::Infeasible(c) => prop_assert!(verify_certificate(&g, &c).is_ok()),
        }
    }

    #[test]
    fn acyclic_graphs_have_traces(seed in any::<u64>(), n in 1..=7usize) {
        let mut p = GeneratorParams::new(seed, n);
        p.acyclic = true;
        p.inf_prob = Ratio::new(1, 10);
        p.max_mult = 2;
        let g = random_graph(&p).unwrap();
        match bounded_graph_trace(&g) {
            TraceOutcome::Witness(psi) => prop_assert!(verify_witness(&g, &psi).is_ok()),
            TraceOutcome::Infeasible(_) => prop_assert!(false, "acyclic graph without trace"),
        }
    }

    #[test]
    fn generator_is_deterministic(seed in any::<u64>(), n in 1..=8usize) {
        let mut p = GeneratorParams::new(seed, n);
        p.inf_prob = Ratio::new(1, 10);
        p.max_mult = 3;
        let a = serialize_graph(&random_graph(&p).unwrap(), Format::Canonical);
        let b = serialize_graph(&random_graph(&p).unwrap(), Format::Canonical);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(serialize_graph(&parse_graph(&a).unwrap(), Format::Canonical), a);
    }
}

#[test]
fn fixtures_round_trip() {
    for name in cka::corpus::fixture_names() {
        let g = cka::corpus::fixture(name);
        let text = serialize_graph(&g, Format::Canonical);
        assert_eq!(parse_graph(&text).unwrap(), g, "{name}");
    }
}

#[test]
fn vertex_ids_are_dense() {
    let g = cka::corpus::fixture("ex33");
    assert_eq!(
        g.vertices().collect::<Vec<_>>(),
        (0..6).map(VertexId).collect::<Vec<_>>()
    );
}
