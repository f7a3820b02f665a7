//! Graph-to-graph constructions: the finite approximation `E_G`, the ideal
//! graph `ₓE_B` of a gauge-invariant ideal, the quotient graph, and the
//! stable-ideal decomposition.
//!
//! Every construction returns a [`ConstructionResult`] whose provenance maps
//! each new vertex and edge id back to what it was built from.

mod decompose;
mod fpaths;
mod ideal;
mod quotient;
mod subgraph;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::graph::{valid_id, write, Graph};

pub use decompose::{
    enumerate_gauge_ideals, gauge_primitive_ideals, stable_ideal_decomposition, x0_vertices,
    Decomposition, PrimitiveGaugeIdeal, PrimitiveOrigin,
};
pub use fpaths::{f_paths, f_paths_infinite_into, FResult, PathFamily};
pub use ideal::build_ideal_graph;
pub use quotient::build_quotient_graph;
pub use subgraph::build_subgraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Longest F-path materialized when the F-path collection is infinite.
    pub depth: usize,
    /// Instances exposed per path family of multiplicity `ω`.
    pub omega_cap: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            depth: 6,
            omega_cap: 3,
        }
    }
}

/// Where a vertex or edge of a constructed graph came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Origin {
    /// Copied from the input under the same id.
    Vertex(String),
    Edge(String),
    /// An `E_G` vertex standing for the edge instance `id#k`.
    EdgeInstance(String),
    /// The `E_G` edge `(e, f)`.
    Pair {
        edge: String,
        target: String,
    },
    /// Instance `instance` of the F-path family `bundles`.
    Path {
        bundles: Vec<String>,
        instance: u64,
        count: String,
    },
    /// The edge `ᾱ` leaving an F-path vertex.
    PathEdge {
        bundles: Vec<String>,
        instance: u64,
    },
    /// The sink `β(v)`.
    Beta(String),
    /// The copy of `edge` retargeted at `β(of)`.
    BetaCopy {
        edge: String,
        of: String,
    },
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = |bundles: &[String]| format!("({})", bundles.join(","));
        match self {
            Origin::Vertex(v) | Origin::Edge(v) | Origin::EdgeInstance(v) => f.write_str(v),
            Origin::Pair { edge, target } => write!(f, "({edge},{target})"),
            Origin::Path {
                bundles,
                instance,
                count,
            } => {
                if count == "1" {
                    f.write_str(&path(bundles))
                } else {
                    write!(f, "{}#{instance}", path(bundles))
                }
            }
            Origin::PathEdge { bundles, instance } => write!(f, "bar{}#{instance}", path(bundles)),
            Origin::Beta(v) => write!(f, "β({v})"),
            Origin::BetaCopy { edge, of } => write!(f, "{edge}→β({of})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionResult {
    pub graph: Graph,
    /// The construction is an infinite graph and `graph` is a finite preview.
    pub truncated: bool,
    pub vertex_origin: BTreeMap<String, Origin>,
    pub edge_origin: BTreeMap<String, Origin>,
}

impl ConstructionResult {
    /// DOT output labelling F-path vertices by their path and sinks `β(v)`.
    pub fn dot(&self) -> String {
        write::dot(&self.graph, |v| {
            let name = self.graph.vertex_name(v);
            match self.vertex_origin.get(name) {
                Some(o @ (Origin::Path { .. } | Origin::Beta(_) | Origin::EdgeInstance(_))) => {
                    o.to_string()
                }
                _ => name.to_string(),
            }
        })
    }

    pub fn vertex_origin(&self, id: &str) -> Option<&Origin> {
        self.vertex_origin.get(id)
    }

    pub fn edge_origin(&self, id: &str) -> Option<&Origin> {
        self.edge_origin.get(id)
    }
}

/// Deterministic fresh identifiers.
#[derive(Default)]
pub(crate) struct Ids {
    used: HashSet<String>,
}

impl Ids {
    pub fn reserve(&mut self, id: &str) {
        self.used.insert(id.to_string());
    }

    pub fn fresh(&mut self, base: &str) -> String {
        let base: String = base
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '_' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        let base = if base.is_empty() {
            "n".to_string()
        } else {
            base
        };
        debug_assert!(valid_id(&base));
        let mut id = base.clone();
        let mut k = 2;
        while self.used.contains(&id) {
            id = format!("{base}_{k}");
            k += 1;
        }
        self.used.insert(id.clone());
        id
    }
}
