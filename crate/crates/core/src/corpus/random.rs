use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Count, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    pub seed: u64,
    pub vertices: usize,
    /// Probability that an ordered pair (self-pairs included) gets a bundle.
    pub density: Ratio<u64>,
    /// Probability that a bundle's multiplicity becomes `ω`.
    pub inf_prob: Ratio<u64>,
    pub max_mult: u64,
    /// Only pairs `(i, j)` with `i < j`.
    pub acyclic: bool,
}

impl GeneratorParams {
    pub fn new(seed: u64, vertices: usize) -> Self {
        GeneratorParams {
            seed,
            vertices,
            density: Ratio::new(1, 2),
            inf_prob: Ratio::new(0, 1),
            max_mult: 1,
            acyclic: false,
        }
    }
}

fn chance(rng: &mut ChaCha8Rng, p: Ratio<u64>) -> bool {
    rng.random_range(0..*p.denom()) < *p.numer()
}

/// Deterministic for equal parameters: the generator uses integer draws only.
pub fn random_graph(p: &GeneratorParams) -> Result<Graph> {
    if p.vertices == 0 {
        return Err(Error::Precondition(
            "a graph needs at least one vertex".into(),
        ));
    }
    for (what, r) in [("density", p.density), ("inf_prob", p.inf_prob)] {
        if r > Ratio::from_integer(1) {
            return Err(Error::Precondition(format!("{what} must lie in [0, 1]")));
        }
    }
    if p.max_mult == 0 {
        return Err(Error::Precondition("max_mult must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut b = Graph::builder(format!("random_{}", p.seed));
    for i in 0..p.vertices {
        b.vertex(&format!("v{i}"))?;
    }
    let mut k = 0;
    for i in 0..p.vertices {
        for j in 0..p.vertices {
            if p.acyclic && i >= j {
                continue;
            }
            if !chance(&mut rng, p.density) {
                continue;
            }
            let mult = rng.random_range(1..=p.max_mult);
            let mult = if chance(&mut rng, p.inf_prob) {
                Count::Omega
            } else {
                Count::Finite(mult)
            };
            b.bundle(&format!("e{k}"), &format!("v{i}"), &format!("v{j}"), mult)?;
            k += 1;
        }
    }
    b.build()
}
