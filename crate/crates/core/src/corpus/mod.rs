//! Named fixtures and a seeded random-graph generator.

use crate::graph::{parse_graph, Graph};

const FIXTURES: &[(&str, &str)] = &[
    ("loop", include_str!("../../../../fixtures/loop.gph")),
    ("o2", include_str!("../../../../fixtures/o2.gph")),
    ("ab", include_str!("../../../../fixtures/ab.gph")),
    ("ex12", include_str!("../../../../fixtures/ex12.gph")),
    ("ex33", include_str!("../../../../fixtures/ex33.gph")),
    ("o2sink", include_str!("../../../../fixtures/o2sink.gph")),
    (
        "cycle_exit",
        include_str!("../../../../fixtures/cycle_exit.gph"),
    ),
];

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|&(n, _)| n)
}

pub fn fixture_source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|&&(n, _)| n == name).map(|&(_, s)| s)
}

/// Parses a bundled fixture. Panics on an unknown name.
pub fn fixture(name: &str) -> Graph {
    let src = fixture_source(name).unwrap_or_else(|| panic!("no fixture named `{name}`"));
    parse_graph(src).expect("bundled fixtures parse")
}

mod consistency;
mod oracle;
mod random;

pub use consistency::{consistency_suite, ConsistencyReport};
pub use consistency::{sample_finite_subgraph, SUBGRAPH_SAMPLES};
pub use oracle::{
    brute_cycles, brute_hersat, brute_isolated, brute_tails, oracle_suite, OracleReport,
    ORACLE_MAX_VERTICES,
};
pub use random::{random_graph, GeneratorParams};
