//! Bounded graph traces and the stability check for the ideal of the
//! stable-ideal decomposition.
//!
//! A graph trace is `ψ: E⁰ → [0, ∞)` with
//!
//! * GT1: `ψ(v) = Σ_{s(e)=v} ψ(r(e))` at finite non-sink emitters;
//! * GT2: `ψ(v) ≥ Σ` over any finite set of edges leaving an infinite
//!   emitter `v`.
//!
//! An infinite sum of equal nonnegative terms is bounded only when the term
//! is zero, so the target of an `ω` bundle gets `ψ = 0`, and GT2 reduces to
//! `ψ(v) ≥` the sum over the finite bundles. Nonzero traces are normalized to
//! total mass 1.

pub mod lp;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::constructions::{
    f_paths_infinite_into, stable_ideal_decomposition, BuildOptions, Decomposition,
};
use crate::error::{Error, Result};
use crate::graph::{
    strongly_connected_components, vertex_simple_cycles, BundleId, Count, Cycle, Graph, Limits,
    ReachTable, VertexId, VertexSet,
};
use crate::subsets::{hersat_closure, IdealSpec};
pub use lp::Q;
use lp::{solve, Feasibility};

/// One row of the trace system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Constraint {
    /// GT1 at a finite non-sink emitter.
    Gt1(VertexId),
    /// `ψ(r(b)) = 0` for an `ω` bundle `b`.
    OmegaTarget(BundleId),
    /// GT2 at an infinite emitter, with a slack variable.
    Gt2(VertexId),
    /// `Σ ψ = 1`.
    Normalization,
}

impl Constraint {
    pub fn describe(&self, g: &Graph) -> String {
        match *self {
            Constraint::Gt1(v) => format!("GT1 at {}", g.vertex_name(v)),
            Constraint::OmegaTarget(b) => {
                let bd = g.bundle(b);
                format!("ψ({}) = 0 (ω edge {})", g.vertex_name(bd.target), bd.id)
            }
            Constraint::Gt2(v) => format!("GT2 at {}", g.vertex_name(v)),
            Constraint::Normalization => "Σψ = 1".into(),
        }
    }
}

/// `A x = b` over the variables `ψ(v)` followed by one slack per GT2 row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSystem {
    pub vertices: usize,
    pub slacks: usize,
    pub rows: Vec<(Constraint, Vec<Q>, Q)>,
}

fn finite(c: Count) -> Q {
    match c {
        Count::Finite(n) => Q::from_integer(n.into()),
        Count::Omega => unreachable!("ω multiplicities never enter a linear row"),
    }
}

impl TraceSystem {
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let omega_emitters: Vec<VertexId> = g
            .vertices()
            .filter(|&v| g.out_degree(v).is_omega())
            .collect();
        let slacks = omega_emitters.len();
        let width = n + slacks;
        let mut rows = Vec::new();
        let mut slack = n;
        for v in g.vertices() {
            match g.out_degree(v) {
                Count::Finite(0) => {}
                Count::Finite(_) => {
                    let mut row = vec![Q::zero(); width];
                    row[v.0] += Q::one();
                    for &b in g.out_bundles(v) {
                        let bd = g.bundle(b);
                        row[bd.target.0] -= finite(bd.multiplicity);
                    }
                    rows.push((Constraint::Gt1(v), row, Q::zero()));
                }
                Count::Omega => {
                    let mut row = vec![Q::zero(); width];
                    row[v.0] += Q::one();
                    for &b in g.out_bundles(v) {
                        let bd = g.bundle(b);
                        if bd.multiplicity.is_omega() {
                            let mut z = vec![Q::zero(); width];
                            z[bd.target.0] = Q::one();
                            rows.push((Constraint::OmegaTarget(b), z, Q::zero()));
                        } else {
                            row[bd.target.0] -= finite(bd.multiplicity);
                        }
                    }
                    row[slack] = -Q::one();
                    slack += 1;
                    rows.push((Constraint::Gt2(v), row, Q::zero()));
                }
            }
        }
        let mut norm = vec![Q::zero(); width];
        for x in norm.iter_mut().take(n) {
            *x = Q::one();
        }
        rows.push((Constraint::Normalization, norm, Q::one()));
        rows.sort_by_key(|r| r.0);
        TraceSystem {
            vertices: n,
            slacks,
            rows,
        }
    }
}

/// Coefficients `y` with `yᵀA ≤ 0` and `yᵀb > 0`: no nonnegative `ψ` with
/// total mass 1 satisfies the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub multipliers: Vec<(Constraint, Q)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOutcome {
    /// `ψ` indexed by vertex, summing to 1.
    Witness(Vec<Q>),
    Infeasible(Certificate),
}

impl TraceOutcome {
    pub fn is_witness(&self) -> bool {
        matches!(self, TraceOutcome::Witness(_))
    }
}

pub fn bounded_graph_trace(g: &Graph) -> TraceOutcome {
    let sys = TraceSystem::new(g);
    let a: Vec<Vec<Q>> = sys.rows.iter().map(|r| r.1.clone()).collect();
    let b: Vec<Q> = sys.rows.iter().map(|r| r.2.clone()).collect();
    match solve(&a, &b) {
        Feasibility::Feasible(mut x) => {
            x.truncate(sys.vertices);
            TraceOutcome::Witness(x)
        }
        Feasibility::Infeasible(y) => TraceOutcome::Infeasible(Certificate {
            multipliers: sys.rows.iter().map(|r| r.0).zip(y).collect(),
        }),
    }
}

/// Why a candidate trace fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceViolation(pub String);

impl fmt::Display for TraceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Checks `ψ` directly against the graph by exact substitution.
pub fn verify_witness(g: &Graph, psi: &[Q]) -> std::result::Result<(), TraceViolation> {
    let fail = |m: String| Err(TraceViolation(m));
    if psi.len() != g.vertex_count() {
        return fail(format!(
            "{} values for {} vertices",
            psi.len(),
            g.vertex_count()
        ));
    }
    if let Some(v) = g.vertices().find(|v| psi[v.0].is_negative()) {
        return fail(format!("ψ({}) < 0", g.vertex_name(v)));
    }
    if psi.iter().sum::<Q>() != Q::one() {
        return fail("total mass is not 1".into());
    }
    for v in g.vertices() {
        let mut finite_sum = Q::zero();
        for &b in g.out_bundles(v) {
            let bd = g.bundle(b);
            match bd.multiplicity {
                Count::Finite(k) => finite_sum += &psi[bd.target.0] * Q::from_integer(k.into()),
                Count::Omega => {
                    if !psi[bd.target.0].is_zero() {
                        return fail(format!(
                            "ψ({}) ≠ 0 although it receives the ω edge {}",
                            g.vertex_name(bd.target),
                            bd.id
                        ));
                    }
                }
            }
        }
        match g.out_degree(v) {
            Count::Finite(0) => {}
            Count::Finite(_) if psi[v.0] != finite_sum => {
                return fail(format!("GT1 fails at {}", g.vertex_name(v)));
            }
            Count::Omega if psi[v.0] < finite_sum => {
                return fail(format!("GT2 fails at {}", g.vertex_name(v)));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Rebuilds the system from `g` and checks `yᵀA ≤ 0`, `yᵀb > 0`.
pub fn verify_certificate(
    g: &Graph,
    cert: &Certificate,
) -> std::result::Result<(), TraceViolation> {
    let sys = TraceSystem::new(g);
    let fail = |m: String| Err(TraceViolation(m));
    let keys: Vec<Constraint> = cert.multipliers.iter().map(|m| m.0).collect();
    let rows: Vec<Constraint> = sys.rows.iter().map(|r| r.0).collect();
    if keys != rows {
        return fail("certificate rows do not match the trace system".into());
    }
    let width = sys.vertices + sys.slacks;
    for j in 0..width {
        let col: Q = sys
            .rows
            .iter()
            .zip(&cert.multipliers)
            .map(|(r, (_, y))| &r.1[j] * y)
            .sum();
        if col.is_positive() {
            return fail(format!(
                "combination has a positive coefficient in column {j}"
            ));
        }
    }
    let yb: Q = sys
        .rows
        .iter()
        .zip(&cert.multipliers)
        .map(|(r, (_, y))| &r.2 * y)
        .sum();
    if !yb.is_positive() {
        return fail("combination does not reach a contradiction".into());
    }
    Ok(())
}

/// Condition 1 for one loop of `X̃`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopCheck {
    pub cycle: Cycle,
    /// Vertices of `X` reaching the loop.
    pub reaching: VertexSet,
    /// Infinitely many vertices of `ₓE` connect to the loop.
    pub infinitely_many_connectors: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceFreeReasoning {
    /// `ψ(v) = 0` on these: each has two edges returning to it, so
    /// `ψ(v) ≥ 2ψ(v)`.
    pub x0: VertexSet,
    /// Propagating zeros forward and through GT1 covers the ideal graph.
    pub closure_covers_ideal_graph: bool,
    /// The materialized ideal graph has no normalized trace.
    pub lp_infeasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub loops: Vec<LoopCheck>,
    pub loops_ok: bool,
    pub trace_free: bool,
    pub reasoning: TraceFreeReasoning,
    pub stable: bool,
}

/// Checks that the ideal `I_X` of the stable-ideal decomposition is stable:
/// every loop of `X̃` is reached from infinitely many vertices of `ₓE`, and
/// `ₓE` has no nonzero bounded graph trace.
pub fn verify_stable_ideal(
    g: &Graph,
    opts: &BuildOptions,
    limits: &Limits,
) -> Result<(Decomposition, StabilityReport)> {
    let d = stable_ideal_decomposition(g, opts, limits)?;
    let ideal = d.ideal.as_ref().ok_or_else(|| {
        Error::Precondition("X is empty: the decomposition has no ideal to check".into())
    })?;
    let x = d.x.vertices();
    let spec = IdealSpec::new(g, x.clone(), g.empty_set())?;
    let reach = ReachTable::new(g);

    let xt = g.restrict(x)?;
    let mut loops = Vec::new();
    for c in vertex_simple_cycles(&xt, limits.cycle_limit)? {
        let on = xt.transfer_set(&c.vertex_set(xt.vertex_count()), g);
        let reaching = VertexSet::from_vertices(
            g.vertex_count(),
            x.iter().filter(|&v| reach.reaches_set(v, &on)),
        );
        let infinitely_many_connectors = f_paths_infinite_into(g, &spec, &reaching)?;
        let cycle = Cycle::from_names(g, &c.edge_names(&xt))?;
        loops.push(LoopCheck {
            cycle,
            reaching,
            infinitely_many_connectors,
        });
    }
    let loops_ok = loops.iter().all(|l| l.infinitely_many_connectors);

    let h = &ideal.graph;
    let x0_in_h = g.transfer_set(&d.x0, h);
    let closure_covers_ideal_graph = hersat_closure(h, &x0_in_h)?.vertices().is_full();
    let lp_infeasible = !bounded_graph_trace(h).is_witness();
    if closure_covers_ideal_graph && !lp_infeasible {
        return Err(Error::Invariant(
            "zero propagation covers the ideal graph but a trace exists".into(),
        ));
    }
    let trace_free = closure_covers_ideal_graph;
    let report = StabilityReport {
        loops,
        loops_ok,
        trace_free,
        reasoning: TraceFreeReasoning {
            x0: d.x0.clone(),
            closure_covers_ideal_graph,
            lp_infeasible,
        },
        stable: loops_ok && trace_free,
    };
    Ok((d, report))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnstableReason {
    /// A loop can only be reached from finitely many vertices.
    FinitelyManyConnectors(Cycle),
    /// A normalized bounded trace.
    TraceWitness(Vec<Q>),
    /// Acyclic and trace-free, but a finite vertex set makes the algebra
    /// unital.
    Unital,
}

/// Graph algebras on finitely many vertices are unital, hence never stable;
/// this reports which stability condition fails first.
pub fn is_stable_finite(g: &Graph) -> (bool, UnstableReason) {
    for scc in strongly_connected_components(g) {
        if scc.has_internal_edge {
            let v = scc.vertices.iter().next().expect("components are nonempty");
            let first = g
                .out_bundles(v)
                .iter()
                .find(|&&b| scc.vertices.contains(g.bundle(b).target))
                .map(|&b| crate::graph::EdgeInstance {
                    bundle: b,
                    index: 0,
                })
                .expect("nontrivial component has an internal edge");
            let cycle = crate::graph::cycle_through(g, first, Some(&scc.vertices))
                .expect("internal edge closes a loop");
            return (false, UnstableReason::FinitelyManyConnectors(cycle));
        }
    }
    match bounded_graph_trace(g) {
        TraceOutcome::Witness(psi) => (false, UnstableReason::TraceWitness(psi)),
        TraceOutcome::Infeasible(_) => (false, UnstableReason::Unital),
    }
}
