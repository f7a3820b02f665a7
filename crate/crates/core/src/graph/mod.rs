//! The graph data model: a finite vertex set and edge bundles whose
//! multiplicity is a positive integer or the symbolic infinity ω.
//!
//! A bundle of multiplicity `m` stands for the `m` parallel edges
//! `<id>#0 … <id>#(m-1)`. Bundles of multiplicity ω are never expanded;
//! code that needs individual edges asks for instances on demand.

mod cycles;
mod parse;
mod query;
pub(crate) mod write;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, GraphError, Result};

pub use cycles::{cycle_through, loop_exits, vertex_simple_cycles, Cycle};
pub use parse::parse_graph;
pub(crate) use query::reachable_within;
pub use query::{
    out_profile, reachable_from, reaches, strongly_connected_components, OutProfile, ReachTable,
    Scc,
};
pub use write::{serialize_graph, Format};

/// An edge count: a nonnegative integer or ω.
///
/// `Finite(_) < Omega`; sums and products absorb ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Count {
    Finite(u64),
    Omega,
}

impl Count {
    pub const ZERO: Count = Count::Finite(0);
    pub const ONE: Count = Count::Finite(1);

    pub fn is_omega(self) -> bool {
        self == Count::Omega
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Count::Finite(n) => Some(n),
            Count::Omega => None,
        }
    }
}

impl Add for Count {
    type Output = Count;
    fn add(self, rhs: Count) -> Count {
        match (self, rhs) {
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a.saturating_add(b)),
            _ => Count::Omega,
        }
    }
}

impl Mul for Count {
    type Output = Count;
    fn mul(self, rhs: Count) -> Count {
        match (self, rhs) {
            (Count::Finite(0), _) | (_, Count::Finite(0)) => Count::ZERO,
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a.saturating_mul(b)),
            _ => Count::Omega,
        }
    }
}

impl std::iter::Sum for Count {
    fn sum<I: Iterator<Item = Count>>(iter: I) -> Count {
        iter.fold(Count::ZERO, Add::add)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Omega => f.write_str("ω"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BundleId(pub usize);

/// One edge `<bundle>#<index>` of a bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeInstance {
    pub bundle: BundleId,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub id: String,
    pub source: VertexId,
    pub target: VertexId,
    pub multiplicity: Count,
}

impl Bundle {
    /// Instance indices to use when edges have to be listed: all of them for
    /// finite bundles, `#0` and `#1` for ω bundles.
    pub fn listed_instances(&self) -> std::ops::Range<u64> {
        match self.multiplicity {
            Count::Finite(m) => 0..m,
            Count::Omega => 0..2,
        }
    }

    pub fn has_instance(&self, index: u64) -> bool {
        match self.multiplicity {
            Count::Finite(m) => index < m,
            Count::Omega => true,
        }
    }
}

/// A set of vertices of one particular graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        VertexSet(bits)
    }

    pub fn from_vertices(universe: usize, vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut set = Self::empty(universe);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    /// Builds a set from the low `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe <= 64);
        Self::from_vertices(
            universe,
            (0..universe).filter(|i| mask >> i & 1 == 1).map(VertexId),
        )
    }

    pub fn to_mask(&self) -> u64 {
        debug_assert!(self.universe() <= 64);
        self.iter().fold(0, |m, v| m | 1 << v.0)
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(v.0)
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        !self.0.put(v.0)
    }

    pub fn remove(&mut self, v: VertexId) {
        self.0.set(v.0, false);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.ones().map(VertexId)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.0.clone();
        bits.union_with(&other.0);
        VertexSet(bits)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.0.clone();
        bits.intersect_with(&other.0);
        VertexSet(bits)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.0.clone();
        bits.difference_with(&other.0);
        VertexSet(bits)
    }

    pub fn complement(&self) -> VertexSet {
        let mut bits = self.0.clone();
        bits.toggle_range(..);
        VertexSet(bits)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

/// Size first, then the sorted index sequence.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Caps on exponential work. Exceeding one is an error, never a silent
/// truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Vertex cap for subset enumerations (hereditary sets, tails).
    pub max_vertices: usize,
    /// Vertex cap for enumerating all gauge-invariant ideals.
    pub max_ideal_vertices: usize,
    /// Maximum number of cycles `vertex_simple_cycles` may return.
    pub cycle_limit: usize,
    /// Maximum number of path families/instances materialized by the
    /// ideal-graph construction.
    pub path_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: 20,
            max_ideal_vertices: 16,
            cycle_limit: 1_000_000,
            path_limit: 200_000,
        }
    }
}

impl Limits {
    /// Hard ceiling: subset enumeration packs vertex sets into `u64`.
    pub const MASK_BITS: usize = 64;

    pub fn check_vertices(&self, g: &Graph) -> Result<()> {
        let limit = self.max_vertices.min(Self::MASK_BITS);
        if g.vertex_count() > limit {
            return Err(Error::CapExceeded {
                what: "vertex count",
                limit,
                actual: g.vertex_count(),
            });
        }
        Ok(())
    }
}

pub(crate) fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// A finite directed graph with edge multiplicities in `{1, 2, …} ∪ {ω}`.
///
/// Immutable once built; construct through [`GraphBuilder`] or
/// [`parse_graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    vertices: Vec<String>,
    bundles: Vec<Bundle>,
    vertex_index: HashMap<String, VertexId>,
    bundle_index: HashMap<String, BundleId>,
    out: Vec<Vec<BundleId>>,
}

impl Graph {
    pub fn builder(name: impl Into<String>) -> GraphBuilder {
        GraphBuilder::new(name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }

    pub fn bundle_ids(&self) -> impl Iterator<Item = BundleId> {
        (0..self.bundles.len()).map(BundleId)
    }

    pub fn bundle(&self, b: BundleId) -> &Bundle {
        &self.bundles[b.0]
    }

    pub fn bundle_by_name(&self, name: &str) -> Result<BundleId> {
        self.bundle_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    /// Bundles with source `v`, in declaration order.
    pub fn out_bundles(&self, v: VertexId) -> &[BundleId] {
        &self.out[v.0]
    }

    /// `|s⁻¹(v)|`, counting edge instances.
    pub fn out_degree(&self, v: VertexId) -> Count {
        self.out[v.0]
            .iter()
            .map(|&b| self.bundles[b.0].multiplicity)
            .sum()
    }

    /// Number of edge instances from `v` whose range lies in `set`.
    pub fn count_into(&self, v: VertexId, set: &VertexSet) -> Count {
        self.out[v.0]
            .iter()
            .map(|&b| &self.bundles[b.0])
            .filter(|b| set.contains(b.target))
            .map(|b| b.multiplicity)
            .sum()
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out[v.0].is_empty()
    }

    /// `0 < |s⁻¹(v)| < ω`.
    pub fn is_finite_emitter(&self, v: VertexId) -> bool {
        !self.is_sink(v) && !self.out_degree(v).is_omega()
    }

    pub fn source(&self, e: EdgeInstance) -> VertexId {
        self.bundles[e.bundle.0].source
    }

    pub fn target(&self, e: EdgeInstance) -> VertexId {
        self.bundles[e.bundle.0].target
    }

    pub fn instance_name(&self, e: EdgeInstance) -> String {
        format!("{}#{}", self.bundles[e.bundle.0].id, e.index)
    }

    /// Parses `id#k`; a bare `id` means `id#0`.
    pub fn instance(&self, text: &str) -> Result<EdgeInstance> {
        let (id, index) = match text.split_once('#') {
            Some((id, k)) => {
                let index = k
                    .parse::<u64>()
                    .map_err(|_| Error::UnknownEdge(text.to_string()))?;
                (id, index)
            }
            None => (text, 0),
        };
        let bundle = self.bundle_by_name(id)?;
        if !self.bundle(bundle).has_instance(index) {
            return Err(Error::UnknownEdge(text.to_string()));
        }
        Ok(EdgeInstance { bundle, index })
    }

    /// Edge selection as written on a command line: `id#k` picks one
    /// instance, a bare `id` picks every instance of a finite bundle.
    pub fn edge_selection<S: AsRef<str>>(&self, items: &[S]) -> Result<Vec<EdgeInstance>> {
        let mut out = Vec::new();
        for item in items {
            let item = item.as_ref();
            if item.contains('#') {
                out.push(self.instance(item)?);
                continue;
            }
            let bundle = self.bundle_by_name(item)?;
            match self.bundle(bundle).multiplicity {
                Count::Omega => return Err(Error::OmegaWholesale(item.to_string())),
                Count::Finite(m) => out.extend((0..m).map(|index| EdgeInstance { bundle, index })),
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        let mut set = VertexSet::empty(self.vertex_count());
        for name in names {
            set.insert(self.vertex(name.as_ref())?);
        }
        Ok(set)
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.vertex_count())
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    /// Vertex names of `set` in declaration order.
    pub fn names(&self, set: &VertexSet) -> Vec<String> {
        set.iter()
            .map(|v| self.vertex_name(v).to_string())
            .collect()
    }

    pub(crate) fn check_set(&self, set: &VertexSet) -> Result<()> {
        if set.universe() != self.vertex_count() {
            return Err(Error::Precondition(format!(
                "vertex set over {} vertices used with graph `{}` of {} vertices",
                set.universe(),
                self.name,
                self.vertex_count()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 >= self.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{}", v.0)));
        }
        Ok(())
    }

    /// The restriction to `keep`: those vertices, and the bundles with both
    /// endpoints in `keep`. Ids are preserved.
    pub fn restrict(&self, keep: &VertexSet) -> Result<Graph> {
        self.check_set(keep)?;
        let mut builder = Graph::builder(self.name.clone());
        for v in keep.iter() {
            builder.vertex(self.vertex_name(v))?;
        }
        for b in &self.bundles {
            if keep.contains(b.source) && keep.contains(b.target) {
                builder.bundle(
                    &b.id,
                    self.vertex_name(b.source),
                    self.vertex_name(b.target),
                    b.multiplicity,
                )?;
            }
        }
        builder.build()
    }

    /// Maps a set of `self` onto a graph sharing vertex names (e.g. a
    /// restriction). Names missing from `other` are dropped.
    pub fn transfer_set(&self, set: &VertexSet, other: &Graph) -> VertexSet {
        VertexSet::from_vertices(
            other.vertex_count(),
            set.iter()
                .filter_map(|v| other.vertex(self.vertex_name(v)).ok()),
        )
    }

    /// Equal vertices and bundles, ignoring the graph name.
    pub fn same_structure(&self, other: &Graph) -> bool {
        self.vertices == other.vertices && self.bundles == other.bundles
    }
}

/// Incremental, validating graph construction.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    graph: Graph,
}

impl GraphBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        GraphBuilder {
            graph: Graph {
                name: name.into(),
                vertices: Vec::new(),
                bundles: Vec::new(),
                vertex_index: HashMap::new(),
                bundle_index: HashMap::new(),
                out: Vec::new(),
            },
        }
    }

    pub fn vertex(&mut self, id: &str) -> Result<VertexId, GraphError> {
        if !valid_id(id) {
            return Err(GraphError::InvalidId(id.to_string()));
        }
        let g = &mut self.graph;
        if g.vertex_index.contains_key(id) {
            return Err(GraphError::DuplicateVertex(id.to_string()));
        }
        let v = VertexId(g.vertices.len());
        g.vertices.push(id.to_string());
        g.vertex_index.insert(id.to_string(), v);
        g.out.push(Vec::new());
        Ok(v)
    }

    pub fn bundle(
        &mut self,
        id: &str,
        source: &str,
        target: &str,
        multiplicity: Count,
    ) -> Result<BundleId, GraphError> {
        if !valid_id(id) {
            return Err(GraphError::InvalidId(id.to_string()));
        }
        let g = &mut self.graph;
        if g.bundle_index.contains_key(id) {
            return Err(GraphError::DuplicateBundle(id.to_string()));
        }
        if multiplicity == Count::ZERO {
            return Err(GraphError::ZeroMultiplicity(id.to_string()));
        }
        let lookup = |name: &str| {
            g.vertex_index
                .get(name)
                .copied()
                .ok_or_else(|| GraphError::UndeclaredVertex(name.to_string()))
        };
        let (source, target) = (lookup(source)?, lookup(target)?);
        let b = BundleId(g.bundles.len());
        g.bundles.push(Bundle {
            id: id.to_string(),
            source,
            target,
            multiplicity,
        });
        g.bundle_index.insert(id.to_string(), b);
        g.out[source.0].push(b);
        Ok(b)
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.graph.vertex_index.contains_key(id)
    }

    pub fn has_bundle(&self, id: &str) -> bool {
        self.graph.bundle_index.contains_key(id)
    }

    pub fn build(self) -> Result<Graph> {
        if self.graph.vertices.is_empty() {
            return Err(GraphError::EmptyVertexSet.into());
        }
        Ok(self.graph)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_arithmetic_absorbs_omega() {
        assert_eq!(Count::Finite(2) + Count::Finite(3), Count::Finite(5));
        assert_eq!(Count::Finite(2) + Count::Omega, Count::Omega);
        assert_eq!(Count::Finite(2) * Count::Omega, Count::Omega);
        assert_eq!(Count::Finite(2) * Count::Finite(3), Count::Finite(6));
        assert!(Count::Finite(u64::MAX) < Count::Omega);
    }

    #[test]
    fn builder_rejects_bad_input() {
        let mut b = Graph::builder("g");
        b.vertex("v").unwrap();
        assert_eq!(b.vertex("v"), Err(GraphError::DuplicateVertex("v".into())));
        assert_eq!(
            b.bundle("a", "v", "w", Count::ONE),
            Err(GraphError::UndeclaredVertex("w".into()))
        );
        assert_eq!(
            b.bundle("a", "v", "v", Count::ZERO),
            Err(GraphError::ZeroMultiplicity("a".into()))
        );
        assert_eq!(b.vertex("a-b"), Err(GraphError::InvalidId("a-b".into())));
        assert!(matches!(
            Graph::builder("g").build(),
            Err(Error::InvalidGraph(GraphError::EmptyVertexSet))
        ));
    }

    #[test]
    fn vertex_set_ops() {
        let a = VertexSet::from_mask(5, 0b00111);
        let b = VertexSet::from_mask(5, 0b01100);
        assert_eq!(a.union(&b).to_mask(), 0b01111);
        assert_eq!(a.intersection(&b).to_mask(), 0b00100);
        assert_eq!(a.difference(&b).to_mask(), 0b00011);
        assert_eq!(a.complement().to_mask(), 0b11000);
        assert!(VertexSet::from_mask(5, 0b100).is_subset(&a));
        assert!(VertexSet::full(5).is_full());
    }

    #[test]
    fn edge_selection_refuses_omega_bundles() {
        let g = crate::corpus::fixture("ex12");
        assert!(matches!(
            g.edge_selection(&["i"]),
            Err(Error::OmegaWholesale(_))
        ));
        let sel = g.edge_selection(&["i#5", "e"]).unwrap();
        assert_eq!(sel.len(), 2);
        assert_eq!(g.instance_name(sel[0]), "i#5");
        assert_eq!(g.instance_name(sel[1]), "e#0");
    }
}
