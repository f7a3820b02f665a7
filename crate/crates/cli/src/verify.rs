//! Self-audit: reads an `analyze` report back from its JSON text and
//! re-checks each evidence object against the graph.

use cka::classify::{has_isolated_loops, tail_algebra_flags};
use cka::constructions::x0_vertices;
use cka::graph::{loop_exits, parse_graph, Count, Cycle, Graph, Limits, VertexSet};
use cka::subsets::{check_subset, enumerate_hersat};
use cka::tails::{classify_tail, is_maximal_tail, TailClass};
use cka::traces::{verify_certificate, verify_witness, Certificate, Constraint, Q};
use serde_json::Value;

use crate::report::Report;

type Checked = Result<(), String>;

fn fail<T>(m: impl Into<String>) -> Result<T, String> {
    Err(m.into())
}

fn strs(v: &Value) -> Result<Vec<&str>, String> {
    v.as_array()
        .ok_or("expected a list")?
        .iter()
        .map(|x| x.as_str().ok_or_else(|| "expected a string".to_string()))
        .collect()
}

fn set(g: &Graph, v: &Value) -> Result<VertexSet, String> {
    g.vertex_set(&strs(v)?).map_err(|e| e.to_string())
}

fn cycle(g: &Graph, v: &Value) -> Result<Cycle, String> {
    Cycle::from_names(g, &strs(v)?).map_err(|e| e.to_string())
}

fn rational(v: &Value) -> Result<Q, String> {
    v.as_str()
        .ok_or("expected a rational string")?
        .parse::<Q>()
        .map_err(|e| e.to_string())
}

fn tail(g: &Graph, v: &Value) -> Result<VertexSet, String> {
    let m = set(g, v)?;
    let diag = is_maximal_tail(g, &m).map_err(|e| e.to_string())?;
    if !diag.is_tail() {
        return fail(format!("{:?} is not a maximal tail", g.names(&m)));
    }
    Ok(m)
}

/// Failures, one line each; empty when every evidence object re-verifies.
pub fn verify_json(g: &Graph, json: &str, limits: &Limits) -> cka::Result<Vec<String>> {
    let report: Report = match serde_json::from_str(json) {
        Ok(r) => r,
        Err(e) => return Ok(vec![format!("report does not parse back: {e}")]),
    };
    let ev = &report.evidence;
    let vd = &report.verdict;
    let checks: [(&str, Checked); 8] = [
        (
            "stable_rank",
            stable_rank(g, &vd["stable_rank"], &ev["stable_rank"]),
        ),
        ("type_i", type_i(g, &vd["type_i"], &ev["type_i"])),
        ("isolated", isolated(g, &vd["isolated"], &ev["isolated"])),
        ("pi_quotient", pi_quotient(g, &ev["pi_quotient"])),
        ("tails", tails(g, &ev["tails"])),
        ("hersat", hersat(g, &ev["hersat"], limits)),
        ("trace", trace(g, &ev["trace"])),
        (
            "decompose",
            decompose(g, &vd["decompose"], &ev["decompose"]),
        ),
    ];
    Ok(checks
        .into_iter()
        .filter_map(|(n, r)| r.err().map(|m| format!("{n}: {m}")))
        .collect())
}

fn stable_rank(g: &Graph, verdict: &Value, ev: &Value) -> Checked {
    match (verdict.as_str(), ev["rule"].as_str()) {
        (Some("1"), Some("no-loop-has-exit")) => {
            if let Some(c) = cka::graph::vertex_simple_cycles(g, usize::MAX)
                .map_err(|e| e.to_string())?
                .iter()
                .find(|c| c.vertices().iter().any(|&v| g.out_degree(v) != Count::ONE))
            {
                return fail(format!("loop {:?} has an exit", c.edge_names(g)));
            }
            Ok(())
        }
        (Some("infinity"), Some("pi-quotient")) => pi_tail(g, &ev["tail"]),
        (Some("2"), Some("otherwise")) => {
            let c = cycle(g, &ev["exit"]["cycle"])?;
            let v = g
                .vertex(ev["exit"]["vertex"].as_str().ok_or("missing exit vertex")?)
                .map_err(|e| e.to_string())?;
            if !c.contains_vertex(v) || g.out_degree(v) == Count::ONE {
                return fail("exit vertex is not on the loop or emits one edge");
            }
            Ok(())
        }
        _ => fail("verdict and rule disagree"),
    }
}

fn pi_tail(g: &Graph, v: &Value) -> Checked {
    let m = tail(g, v)?;
    if !classify_tail(g, &m).map_err(|e| e.to_string())?.is_gamma() {
        return fail("pi quotient tail is not gamma");
    }
    let flags = tail_algebra_flags(g, &m).map_err(|e| e.to_string())?;
    if !(flags.has_loop && flags.simple) {
        return fail("pi quotient tail lacks a loop or is not simple");
    }
    Ok(())
}

fn type_i(g: &Graph, verdict: &Value, ev: &Value) -> Checked {
    let mut all = true;
    for rec in ev["gamma_tails"].as_array().ok_or("missing gamma tails")? {
        let m = tail(g, &rec["tail"])?;
        match &rec["clause"] {
            Value::Null => {
                all = false;
                if m.iter().any(|v| g.count_into(v, &m) == Count::ZERO) {
                    return fail("a tail marked clause-free has a vertex emitting nothing into it");
                }
            }
            c => {
                let v = g
                    .vertex(c["no_edges_into_tail"].as_str().ok_or("bad clause")?)
                    .map_err(|e| e.to_string())?;
                if !m.contains(v) || g.count_into(v, &m) != Count::ZERO {
                    return fail(format!(
                        "clause vertex {} emits into its tail",
                        g.vertex_name(v)
                    ));
                }
            }
        }
    }
    if verdict.as_bool() != Some(all) {
        return fail("verdict does not follow from the tail clauses");
    }
    Ok(())
}

fn isolated(g: &Graph, verdict: &Value, ev: &Value) -> Checked {
    let w = &ev["witness"];
    match (verdict.as_bool(), w.is_null()) {
        (Some(true), true) => {
            if !has_isolated_loops(g).holds {
                return fail("loops are not isolated");
            }
            Ok(())
        }
        (Some(false), false) => {
            let v = g
                .vertex(w["vertex"].as_str().ok_or("missing vertex")?)
                .map_err(|e| e.to_string())?;
            let (a, b) = (cycle(g, &w["first"])?, cycle(g, &w["second"])?);
            match (a.edge_at(v), b.edge_at(v)) {
                (Some(x), Some(y)) if x != y => Ok(()),
                _ => fail("witness loops do not leave the vertex by different edges"),
            }
        }
        _ => fail("verdict and witness disagree"),
    }
}

fn pi_quotient(g: &Graph, ev: &Value) -> Checked {
    match &ev["tail"] {
        Value::Null => Ok(()),
        t => pi_tail(g, t),
    }
}

fn tails(g: &Graph, ev: &Value) -> Checked {
    for rec in ev["tails"].as_array().ok_or("missing tails")? {
        let m = tail(g, &rec["vertices"])?;
        let class = classify_tail(g, &m).map_err(|e| e.to_string())?;
        match (rec["class"].as_str(), &class) {
            (Some("gamma"), TailClass::Gamma) => {}
            (Some("tau"), TailClass::Tau { .. }) => {
                let c = cycle(g, &rec["witness"])?;
                if !c.vertices().iter().all(|&v| m.contains(v)) {
                    return fail("tau witness leaves the tail");
                }
                if !loop_exits(g, &c, &m).map_err(|e| e.to_string())?.is_empty() {
                    return fail("tau witness has an exit into the tail");
                }
            }
            _ => return fail(format!("class of {:?} does not re-derive", g.names(&m))),
        }
    }
    Ok(())
}

fn hersat(g: &Graph, ev: &Value, limits: &Limits) -> Checked {
    let listed = ev["sets"].as_array().ok_or("missing sets")?;
    for s in listed {
        let s = set(g, s)?;
        if !check_subset(g, &s).map_err(|e| e.to_string())?.both() {
            return fail(format!("{:?} is not hereditary and saturated", g.names(&s)));
        }
    }
    let n = enumerate_hersat(g, limits)
        .map_err(|e| e.to_string())?
        .len();
    if n != listed.len() {
        return fail(format!("{} sets listed, {n} exist", listed.len()));
    }
    Ok(())
}

fn constraint(g: &Graph, v: &Value) -> Result<Constraint, String> {
    let vertex = |k: &str| {
        g.vertex(v[k].as_str().ok_or("missing vertex")?)
            .map_err(|e| e.to_string())
    };
    Ok(match v["row"].as_str() {
        Some("gt1") => Constraint::Gt1(vertex("vertex")?),
        Some("gt2") => Constraint::Gt2(vertex("vertex")?),
        Some("omega-target") => Constraint::OmegaTarget(
            g.bundle_by_name(v["edge"].as_str().ok_or("missing edge")?)
                .map_err(|e| e.to_string())?,
        ),
        Some("normalization") => Constraint::Normalization,
        _ => return fail("unknown constraint row"),
    })
}

fn trace(g: &Graph, ev: &Value) -> Checked {
    if let Some(psi) = ev.get("psi") {
        let values = g
            .vertices()
            .map(|v| rational(&psi[g.vertex_name(v)]))
            .collect::<Result<Vec<_>, _>>()?;
        verify_witness(g, &values).map_err(|v| v.0)
    } else {
        let multipliers = ev["certificate"]
            .as_array()
            .ok_or("missing certificate")?
            .iter()
            .map(|r| {
                Ok((
                    constraint(g, &r["constraint"])?,
                    rational(&r["multiplier"])?,
                ))
            })
            .collect::<Result<Vec<_>, String>>()?;
        verify_certificate(g, &Certificate { multipliers }).map_err(|v| v.0)
    }
}

fn decompose(g: &Graph, verdict: &Value, ev: &Value) -> Checked {
    if set(g, &verdict["x0"])? != x0_vertices(g) {
        return fail("X0 does not re-derive");
    }
    let x = set(g, &verdict["x"])?;
    let x0 = set(g, &verdict["x0"])?;
    if !x0.is_subset(&x) || !check_subset(g, &x).map_err(|e| e.to_string())?.both() {
        return fail("X is not a hereditary saturated superset of X0");
    }
    match &ev["quotient"] {
        Value::Null if x.is_full() => {}
        Value::Null => return fail("quotient missing although X is proper"),
        q => {
            let text = q["graph"].as_str().ok_or("missing quotient graph")?;
            let h = parse_graph(text).map_err(|e| e.to_string())?;
            if !has_isolated_loops(&h).holds {
                return fail("quotient loops are not isolated");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::analyze;
    use cka::corpus::fixture;
    use serde_json::json;

    fn report(name: &str) -> (Graph, Value) {
        let g = fixture(name);
        let o = analyze(&g, &Limits::default()).unwrap();
        let text = Report::new("analyze", "sha256:00", &g, &Limits::default(), o).to_json();
        (g, serde_json::from_str(&text).unwrap())
    }

    fn audit(g: &Graph, v: &Value) -> Vec<String> {
        verify_json(g, &v.to_string(), &Limits::default()).unwrap()
    }

    #[test]
    fn untouched_reports_pass() {
        for name in ["ex33", "o2", "ex12"] {
            let (g, v) = report(name);
            assert!(audit(&g, &v).is_empty(), "{name}");
        }
    }

    #[test]
    fn tampered_evidence_is_caught() {
        let (g, mut v) = report("ex33");
        v["evidence"]["trace"]["psi"]["b1"] = json!("1/2");
        assert!(audit(&g, &v)[0].starts_with("trace:"));

        let (g, mut v) = report("ex33");
        v["evidence"]["tails"]["tails"][1]["class"] = json!("tau");
        assert!(audit(&g, &v)[0].starts_with("tails:"));

        let (g, mut v) = report("ex33");
        v["verdict"]["type_i"] = json!(true);
        assert!(audit(&g, &v)[0].starts_with("type_i:"));

        let (g, mut v) = report("o2");
        v["evidence"]["trace"]["certificate"][0]["multiplier"] = json!("0");
        assert!(!audit(&g, &v).is_empty());

        let (g, mut v) = report("ex33");
        v["evidence"]["stable_rank"]["exit"]["vertex"] = json!("x3");
        assert!(audit(&g, &v)[0].starts_with("stable_rank:"));
    }
}
