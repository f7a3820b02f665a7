use super::{build_ideal_graph, build_quotient_graph, BuildOptions, ConstructionResult};
use crate::classify::{has_isolated_loops, pi_simple_unital_quotient};
use crate::error::{Error, Result};
use crate::graph::{Count, Graph, Limits, ReachTable, VertexId, VertexSet};
use crate::subsets::{
    breaking_vertices, enumerate_hersat, hersat_closure, omega, x_fin_inf, HerSatSet, IdealSpec,
};
use crate::tails::{maximal_tails, MaximalTail};

/// Vertices `v` with two distinct edges `e ≠ f` leaving `v` whose ranges
/// both reach back to `v`. Parallel edges count as distinct.
pub fn x0_vertices(g: &Graph) -> VertexSet {
    let reach = ReachTable::new(g);
    VertexSet::from_vertices(
        g.vertex_count(),
        g.vertices().filter(|&v| {
            let returning: Count = g
                .out_bundles(v)
                .iter()
                .map(|&b| g.bundle(b))
                .filter(|bd| reach.reaches(bd.target, v))
                .map(|bd| bd.multiplicity)
                .sum();
            returning >= Count::Finite(2)
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub x0: VertexSet,
    /// The smallest hereditary and saturated set containing `X0`.
    pub x: HerSatSet,
    /// `ₓE`, absent when `X` is empty.
    pub ideal: Option<ConstructionResult>,
    /// Absent when `X = E⁰`: the quotient is zero.
    pub quotient: Option<ConstructionResult>,
    /// A purely infinite simple unital quotient exists, so the hypothesis of
    /// the decomposition fails. The decomposition is still computed.
    pub pi_quotient: Option<MaximalTail>,
}

impl Decomposition {
    pub fn hypothesis_holds(&self) -> bool {
        self.pi_quotient.is_none()
    }
}

/// Splits `g` along `X = closure(X0)` into the ideal graph `ₓE` (with
/// `B = ∅`) and a quotient with isolated loops.
pub fn stable_ideal_decomposition(
    g: &Graph,
    opts: &BuildOptions,
    limits: &Limits,
) -> Result<Decomposition> {
    let pi_quotient = pi_simple_unital_quotient(g, limits)?;
    let x0 = x0_vertices(g);
    let x = hersat_closure(g, &x0)?;
    let ideal = if x.is_empty() {
        None
    } else {
        Some(build_ideal_graph(g, &x, &g.empty_set(), opts, limits)?)
    };
    let quotient = if x.vertices().is_full() {
        None
    } else {
        let spec = IdealSpec::new(g, x.vertices().clone(), g.empty_set())?;
        Some(build_quotient_graph(g, &spec)?)
    };
    if let Some(q) = &quotient {
        if let Some(pair) = has_isolated_loops(&q.graph).witness {
            return Err(Error::Invariant(format!(
                "quotient of the stable decomposition has non-isolated loops at {}",
                q.graph.vertex_name(pair.vertex)
            )));
        }
    }
    Ok(Decomposition {
        x0,
        x,
        ideal,
        quotient,
        pi_quotient,
    })
}

/// Every gauge-invariant ideal, as pairs `(X, B)` with `B ⊆ X^fin_∞`.
pub fn enumerate_gauge_ideals(g: &Graph, limits: &Limits) -> Result<Vec<IdealSpec>> {
    if g.vertex_count() > limits.max_ideal_vertices {
        return Err(Error::CapExceeded {
            what: "vertices for ideal enumeration",
            limit: limits.max_ideal_vertices,
            actual: g.vertex_count(),
        });
    }
    let mut out = Vec::new();
    for x in enumerate_hersat(g, limits)? {
        let bad: Vec<VertexId> = x_fin_inf(g, &x)?.members.iter().map(|&(v, _)| v).collect();
        for mask in 0..1u64 << bad.len() {
            let b = VertexSet::from_vertices(
                g.vertex_count(),
                bad.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v),
            );
            out.push(IdealSpec { x: x.clone(), b });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimitiveOrigin {
    /// `(Ω(M), Ω(M)^fin_∞)` for a gamma tail `M`.
    Tail(VertexSet),
    /// `(Ω(v), Ω(v)^fin_∞ ∖ {v})` for a breaking vertex `v`.
    BreakingVertex(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveGaugeIdeal {
    pub spec: IdealSpec,
    pub origin: PrimitiveOrigin,
}

/// The primitive gauge-invariant ideals: one per gamma tail and one per
/// breaking vertex.
pub fn gauge_primitive_ideals(g: &Graph, limits: &Limits) -> Result<Vec<PrimitiveGaugeIdeal>> {
    if g.vertex_count() > limits.max_ideal_vertices {
        return Err(Error::CapExceeded {
            what: "vertices for ideal enumeration",
            limit: limits.max_ideal_vertices,
            actual: g.vertex_count(),
        });
    }
    let mut out = Vec::new();
    for t in maximal_tails(g, limits)?
        .into_iter()
        .filter(|t| t.is_gamma())
    {
        let x = omega(g, &t.vertices)?;
        let spec = checked_spec(g, x, |bad| bad)?;
        out.push(PrimitiveGaugeIdeal {
            spec,
            origin: PrimitiveOrigin::Tail(t.vertices),
        });
    }
    for v in breaking_vertices(g).iter() {
        let x = omega(g, &VertexSet::from_vertices(g.vertex_count(), [v]))?;
        let spec = checked_spec(g, x, |mut bad| {
            bad.remove(v);
            bad
        })?;
        out.push(PrimitiveGaugeIdeal {
            spec,
            origin: PrimitiveOrigin::BreakingVertex(v),
        });
    }
    Ok(out)
}

fn checked_spec(
    g: &Graph,
    x: VertexSet,
    b: impl FnOnce(VertexSet) -> VertexSet,
) -> Result<IdealSpec> {
    let x = HerSatSet::new(g, x).map_err(|e| Error::Invariant(e.to_string()))?;
    let bad = x_fin_inf(g, &x)?.vertices();
    IdealSpec::new(g, x.into_vertices(), b(bad)).map_err(|e| Error::Invariant(e.to_string()))
}
