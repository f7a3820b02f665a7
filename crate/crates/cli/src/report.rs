//! Verdicts and evidence as JSON values plus their human rendering.

use std::fmt::Write as _;

use cka::classify::{self, StableRankEvidence, TypeIClause, CLAUSE_II_NOTE};
use cka::constructions::{stable_ideal_decomposition, BuildOptions, ConstructionResult};
use cka::graph::{serialize_graph, Count, Cycle, Format, Graph, Limits, VertexSet};
use cka::subsets::{breaking_vertices, enumerate_hersat, omega};
use cka::tails::{maximal_tails, TailClass};
use cka::traces::{bounded_graph_trace, verify_stable_ideal, Constraint, TraceOutcome, Q};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

pub struct Outcome {
    pub verdict: Value,
    pub evidence: Value,
    pub human: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub input_digest: String,
    pub command: String,
    pub graph: Value,
    pub verdict: Value,
    pub evidence: Value,
    pub limits: Limits,
    #[serde(skip)]
    pub outcome: HumanText,
}

/// Human output kept beside a report but never serialized.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HumanText {
    pub human: String,
}

impl Report {
    pub fn new(command: &str, digest: &str, g: &Graph, limits: &Limits, o: Outcome) -> Report {
        Report {
            tool: "cka".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            input_digest: digest.into(),
            command: command.into(),
            graph: json!({
                "name": g.name(),
                "vertices": g.vertex_count(),
                "edges": g.bundles().len(),
            }),
            verdict: o.verdict,
            evidence: o.evidence,
            limits: *limits,
            outcome: HumanText { human: o.human },
        }
    }

    /// Pretty JSON with sorted object keys, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub fn names(g: &Graph, s: &VertexSet) -> Value {
    json!(g.names(s))
}

fn braces(g: &Graph, s: &VertexSet) -> String {
    format!("{{{}}}", g.names(s).join(", "))
}

pub fn cycle(g: &Graph, c: &Cycle) -> Value {
    json!(c.edge_names(g))
}

fn cycle_text(g: &Graph, c: &Cycle) -> String {
    c.edge_names(g).join(" ")
}

fn count(c: Count) -> Value {
    match c {
        Count::Finite(n) => json!(n),
        Count::Omega => json!("omega"),
    }
}

pub fn rational(q: &Q) -> Value {
    json!(q.to_string())
}

pub fn stable_rank(g: &Graph, limits: &Limits) -> cka::Result<Outcome> {
    let v = classify::stable_rank(g, limits)?;
    let mut human = format!("stable rank: {}\n", v.value);
    let evidence = match &v.evidence {
        StableRankEvidence::NoLoopHasExit => {
            human.push_str("  no loop has an exit\n");
            json!({ "rule": "no-loop-has-exit" })
        }
        StableRankEvidence::PiQuotient(t) => {
            let _ = writeln!(
                human,
                "  purely infinite simple unital quotient from the tail {}",
                braces(g, &t.vertices)
            );
            json!({ "rule": "pi-quotient", "tail": names(g, &t.vertices) })
        }
        StableRankEvidence::Otherwise(w) => {
            let _ = writeln!(
                human,
                "  loop {} has an exit at {}; no pi quotient",
                cycle_text(g, &w.cycle),
                g.vertex_name(w.vertex)
            );
            json!({
                "rule": "otherwise",
                "exit": { "vertex": g.vertex_name(w.vertex), "cycle": cycle(g, &w.cycle) },
            })
        }
    };
    Ok(Outcome {
        verdict: json!(v.value.as_str()),
        evidence,
        human,
    })
}

pub fn type_i(g: &Graph, limits: &Limits) -> cka::Result<Outcome> {
    let r = classify::is_type_i(g, limits)?;
    let mut human = format!("type I: {}\n", yes(r.verdict));
    let mut tails = Vec::new();
    for t in &r.tails {
        let clause = match t.clause {
            TypeIClause::NoEdgesIntoTail(v) => {
                let _ = writeln!(
                    human,
                    "  gamma tail {}: {} emits no edges into it",
                    braces(g, &t.tail),
                    g.vertex_name(v)
                );
                json!({ "no_edges_into_tail": g.vertex_name(v) })
            }
            TypeIClause::None => {
                let _ = writeln!(
                    human,
                    "  gamma tail {}: no clause holds",
                    braces(g, &t.tail)
                );
                Value::Null
            }
        };
        tails.push(json!({ "tail": names(g, &t.tail), "clause": clause }));
    }
    Ok(Outcome {
        verdict: json!(r.verdict),
        evidence: json!({ "gamma_tails": tails, "note": CLAUSE_II_NOTE }),
        human,
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn isolated(g: &Graph) -> Outcome {
    let r = classify::has_isolated_loops(g);
    let mut human = format!("isolated loops: {}\n", yes(r.holds));
    let witness = match &r.witness {
        None => Value::Null,
        Some(p) => {
            let _ = writeln!(
                human,
                "  loops {} and {} leave {} by different edges",
                cycle_text(g, &p.first),
                cycle_text(g, &p.second),
                g.vertex_name(p.vertex)
            );
            json!({
                "vertex": g.vertex_name(p.vertex),
                "first": cycle(g, &p.first),
                "second": cycle(g, &p.second),
            })
        }
    };
    Outcome {
        verdict: json!(r.holds),
        evidence: json!({ "witness": witness }),
        human,
    }
}

pub fn pi_quotient(g: &Graph, limits: &Limits) -> cka::Result<Outcome> {
    Ok(match classify::pi_simple_unital_quotient(g, limits)? {
        None => Outcome {
            verdict: Value::Null,
            evidence: json!({ "tail": null }),
            human: "pi quotient: none\n".into(),
        },
        Some(t) => {
            let flags = classify::tail_algebra_flags(g, &t.vertices)?;
            Outcome {
                verdict: names(g, &t.vertices),
                evidence: json!({
                    "tail": names(g, &t.vertices),
                    "has_loop": flags.has_loop,
                    "simple": flags.simple,
                    "unital": flags.unital,
                }),
                human: format!("pi quotient: tail {}\n", braces(g, &t.vertices)),
            }
        }
    })
}

pub fn tails(g: &Graph, limits: &Limits) -> cka::Result<Outcome> {
    let ts = maximal_tails(g, limits)?;
    let mut human = format!("maximal tails: {}\n", ts.len());
    let mut list = Vec::new();
    for t in &ts {
        let (class, witness) = match &t.class {
            TailClass::Gamma => ("gamma", Value::Null),
            TailClass::Tau { witness } => ("tau", cycle(g, witness)),
        };
        let _ = write!(human, "  {} {class}", braces(g, &t.vertices));
        if let Some(w) = t.class.witness() {
            let _ = write!(human, " (exitless loop {})", cycle_text(g, w));
        }
        human.push('\n');
        list.push(json!({ "vertices": names(g, &t.vertices), "class": class, "witness": witness }));
    }
    Ok(Outcome {
        verdict: json!(ts.len()),
        evidence: json!({ "tails": list }),
        human,
    })
}

pub fn hersat(g: &Graph, limits: &Limits) -> cka::Result<Outcome> {
    let sets = enumerate_hersat(g, limits)?;
    let mut human = format!("hereditary saturated sets: {}\n", sets.len());
    for s in &sets {
        let _ = writeln!(human, "  {}", braces(g, s.vertices()));
    }
    Ok(Outcome {
        verdict: json!(sets.len()),
        evidence: json!({ "sets": sets.iter().map(|s| names(g, s.vertices())).collect::<Vec<_>>() }),
        human,
    })
}

pub fn breaking(g: &Graph) -> cka::Result<Outcome> {
    let b = breaking_vertices(g);
    let mut human = format!("breaking vertices: {}\n", braces(g, &b));
    let mut list = Vec::new();
    for v in b.iter() {
        let single = VertexSet::from_vertices(g.vertex_count(), [v]);
        let escaping = g.count_into(v, &omega(g, &single)?.complement());
        let _ = writeln!(
            human,
            "  {}: {} edges avoid Ω({})",
            g.vertex_name(v),
            escaping.finite().unwrap_or(0),
            g.vertex_name(v)
        );
        list.push(json!({ "vertex": g.vertex_name(v), "edges_avoiding_omega": count(escaping) }));
    }
    Ok(Outcome {
        verdict: names(g, &b),
        evidence: json!({ "vertices": list }),
        human,
    })
}

pub fn constraint(g: &Graph, c: &Constraint) -> Value {
    match *c {
        Constraint::Gt1(v) => json!({ "row": "gt1", "vertex": g.vertex_name(v) }),
        Constraint::OmegaTarget(b) => json!({ "row": "omega-target", "edge": g.bundle(b).id }),
        Constraint::Gt2(v) => json!({ "row": "gt2", "vertex": g.vertex_name(v) }),
        Constraint::Normalization => json!({ "row": "normalization" }),
    }
}

pub fn trace(g: &Graph) -> Outcome {
    match bounded_graph_trace(g) {
        TraceOutcome::Witness(psi) => {
            let mut human = String::from("bounded trace: yes\n");
            let mut map = Map::new();
            for v in g.vertices() {
                let _ = writeln!(human, "  ψ({}) = {}", g.vertex_name(v), psi[v.0]);
                map.insert(g.vertex_name(v).into(), rational(&psi[v.0]));
            }
            Outcome {
                verdict: json!("witness"),
                evidence: json!({ "psi": map }),
                human,
            }
        }
        TraceOutcome::Infeasible(cert) => {
            let mut human = String::from("bounded trace: none\n  certificate:\n");
            let mut rows = Vec::new();
            for (c, y) in &cert.multipliers {
                let _ = writeln!(human, "    {} × ({})", y, c.describe(g));
                rows.push(json!({ "constraint": constraint(g, c), "multiplier": rational(y) }));
            }
            Outcome {
                verdict: json!("none"),
                evidence: json!({ "certificate": rows }),
                human,
            }
        }
    }
}

pub fn construction(r: &ConstructionResult) -> Outcome {
    let text = serialize_graph(&r.graph, Format::Canonical);
    let origins = |m: &std::collections::BTreeMap<String, cka::constructions::Origin>| {
        m.iter()
            .map(|(k, o)| (k.clone(), json!(o.to_string())))
            .collect::<Map<_, _>>()
    };
    let mut human = String::new();
    if r.truncated {
        human.push_str("# finite preview of an infinite graph\n");
    }
    human.push_str(&text);
    Outcome {
        verdict: json!({
            "vertices": r.graph.vertex_count(),
            "edges": r.graph.bundles().len(),
            "truncated": r.truncated,
        }),
        evidence: json!({
            "graph": text,
            "vertex_origin": origins(&r.vertex_origin),
            "edge_origin": origins(&r.edge_origin),
        }),
        human,
    }
}

fn summary(r: &ConstructionResult) -> Value {
    json!({
        "vertices": r.graph.vertex_count(),
        "edges": r.graph.bundles().len(),
        "truncated": r.truncated,
        "graph": serialize_graph(&r.graph, Format::Canonical),
    })
}

pub fn decompose(g: &Graph, opts: &BuildOptions, limits: &Limits) -> cka::Result<Outcome> {
    let (d, stability) = if !cka::constructions::x0_vertices(g).is_empty() {
        let (d, s) = verify_stable_ideal(g, opts, limits)?;
        (d, Some(s))
    } else {
        (stable_ideal_decomposition(g, opts, limits)?, None)
    };
    let x = d.x.vertices();
    let mut human = format!("X0: {}\nX: {}\n", braces(g, &d.x0), braces(g, x));
    let stab = match &stability {
        None => {
            human.push_str("ideal: zero\n");
            Value::Null
        }
        Some(s) => {
            let _ = writeln!(human, "ideal stable: {}", yes(s.stable));
            for l in &s.loops {
                let _ = writeln!(
                    human,
                    "  loop {}: {} connectors",
                    cycle_text(g, &l.cycle),
                    if l.infinitely_many_connectors {
                        "infinitely many"
                    } else {
                        "finitely many"
                    }
                );
            }
            let _ = writeln!(human, "  trace-free: {}", yes(s.trace_free));
            json!({
                "loops": s.loops.iter().map(|l| json!({
                    "cycle": cycle(g, &l.cycle),
                    "reaching": names(g, &l.reaching),
                    "infinitely_many_connectors": l.infinitely_many_connectors,
                })).collect::<Vec<_>>(),
                "loops_ok": s.loops_ok,
                "trace_free": s.trace_free,
                "closure_covers_ideal_graph": s.reasoning.closure_covers_ideal_graph,
                "lp_infeasible": s.reasoning.lp_infeasible,
                "stable": s.stable,
            })
        }
    };
    match &d.quotient {
        None => human.push_str("quotient: zero\n"),
        Some(q) => {
            let _ = writeln!(
                human,
                "quotient: {} vertices, {} edges, isolated loops: {}",
                q.graph.vertex_count(),
                q.graph.bundles().len(),
                yes(classify::has_isolated_loops(&q.graph).holds)
            );
        }
    }
    if let Some(t) = &d.pi_quotient {
        let _ = writeln!(
            human,
            "hypothesis fails: pi quotient from the tail {}",
            braces(g, &t.vertices)
        );
    }
    Ok(Outcome {
        verdict: json!({
            "x0": names(g, &d.x0),
            "x": names(g, x),
            "hypothesis_holds": d.hypothesis_holds(),
            "stable": stability.as_ref().map(|s| s.stable),
        }),
        evidence: json!({
            "ideal": d.ideal.as_ref().map(summary),
            "quotient": d.quotient.as_ref().map(|q| {
                let mut s = summary(q);
                s["isolated_loops"] = json!(classify::has_isolated_loops(&q.graph).holds);
                s
            }),
            "pi_quotient": d.pi_quotient.as_ref().map(|t| names(g, &t.vertices)),
            "stability": stab,
        }),
        human,
    })
}

/// Every section of the battery under one verdict and one evidence object.
pub fn analyze(g: &Graph, limits: &Limits) -> cka::Result<Outcome> {
    let sections: Vec<(&str, Outcome)> = vec![
        ("stable_rank", stable_rank(g, limits)?),
        ("type_i", type_i(g, limits)?),
        ("isolated", isolated(g)),
        ("pi_quotient", pi_quotient(g, limits)?),
        ("tails", tails(g, limits)?),
        ("hersat", hersat(g, limits)?),
        ("trace", trace(g)),
        ("decompose", decompose(g, &BuildOptions::default(), limits)?),
    ];
    let mut verdict = Map::new();
    let mut evidence = Map::new();
    let mut human = String::new();
    for (name, o) in sections {
        verdict.insert(name.into(), o.verdict);
        evidence.insert(name.into(), o.evidence);
        human.push_str(&o.human);
    }
    Ok(Outcome {
        verdict: Value::Object(verdict),
        evidence: Value::Object(evidence),
        human,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cka::corpus::{fixture, fixture_names};

    #[test]
    fn reports_round_trip_byte_for_byte() {
        for name in fixture_names() {
            let g = fixture(name);
            let o = analyze(&g, &Limits::default()).unwrap();
            let text = Report::new("analyze", "sha256:00", &g, &Limits::default(), o).to_json();
            let back: Report = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_json(), text, "{name}");
        }
    }

    #[test]
    fn constraint_rows_name_their_subject() {
        let g = fixture("ex12");
        let i = g.bundle_by_name("i").unwrap();
        assert_eq!(
            constraint(&g, &Constraint::OmegaTarget(i)),
            json!({ "row": "omega-target", "edge": "i" })
        );
    }
}
