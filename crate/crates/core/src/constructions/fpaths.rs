use crate::error::{Error, Result};
use crate::graph::{reachable_within, BundleId, Count, Graph, Limits, VertexId, VertexSet};
use crate::subsets::{HerSatSet, IdealSpec};

/// Paths sharing a bundle sequence; `count` is the product of the
/// multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFamily {
    pub bundles: Vec<BundleId>,
    pub count: Count,
}

impl PathFamily {
    pub fn source(&self, g: &Graph) -> VertexId {
        g.bundle(self.bundles[0]).source
    }

    pub fn target(&self, g: &Graph) -> VertexId {
        g.bundle(*self.bundles.last().expect("families are nonempty"))
            .target
    }

    pub fn names(&self, g: &Graph) -> Vec<String> {
        self.bundles
            .iter()
            .map(|&b| g.bundle(b).id.clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FResult {
    /// Families of length at most `depth_used`, by length and then bundle
    /// order.
    pub families: Vec<PathFamily>,
    /// Decided exactly, independent of the depth.
    pub is_finite: bool,
    pub depth_used: usize,
    /// No family is longer than `depth_used`.
    pub complete: bool,
}

/// `F_E(X, B)`: paths `α` of positive length with `s(α) ∉ X`,
/// `r(α) ∈ X ∪ B`, every intermediate range outside `X ∪ B`, minus the single
/// edges from `B` into `X`. Families longer than `depth` are not listed.
pub fn f_paths(
    g: &Graph,
    x: &HerSatSet,
    b: &VertexSet,
    depth: usize,
    limits: &Limits,
) -> Result<FResult> {
    let spec = IdealSpec::new(g, x.vertices().clone(), b.clone())?;
    if spec.x.is_empty() {
        return Err(Error::Precondition("F-paths need a nonempty X".into()));
    }
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let sides = Sides::new(&spec);
    let mut families = Vec::new();
    let mut stack = Vec::new();
    let mut longer = false;
    for start in sides.x.complement().iter() {
        extend(
            g,
            &sides,
            start,
            depth,
            limits,
            &mut stack,
            &mut families,
            &mut longer,
        )?;
    }
    families.sort_by(|a: &PathFamily, b| (a.len(), &a.bundles).cmp(&(b.len(), &b.bundles)));
    Ok(FResult {
        families,
        is_finite: !sides.infinite_into(g, &sides.end),
        depth_used: depth,
        complete: !longer,
    })
}

/// Are there infinitely many F-paths ending in `targets ⊆ X ∪ B`?
pub fn f_paths_infinite_into(g: &Graph, spec: &IdealSpec, targets: &VertexSet) -> Result<bool> {
    g.check_set(targets)?;
    let sides = Sides::new(spec);
    if !targets.is_subset(&sides.end) {
        return Err(Error::Precondition("targets must lie in X ∪ B".into()));
    }
    Ok(sides.infinite_into(g, targets))
}

struct Sides {
    x: VertexSet,
    b: VertexSet,
    /// `X ∪ B`.
    end: VertexSet,
    /// `E⁰ ∖ (X ∪ B)`.
    middle: VertexSet,
}

impl Sides {
    fn new(spec: &IdealSpec) -> Self {
        let x = spec.x.vertices().clone();
        let end = x.union(&spec.b);
        let middle = end.complement();
        Sides {
            x,
            b: spec.b.clone(),
            end,
            middle,
        }
    }

    fn allowed_last(&self, g: &Graph, bundle: BundleId, targets: &VertexSet, first: bool) -> bool {
        let bd = g.bundle(bundle);
        targets.contains(bd.target)
            && !(first && self.b.contains(bd.source) && self.x.contains(bd.target))
    }

    /// Infinite iff some family has count `ω`, or a loop inside the middle
    /// reaches `targets` through the middle.
    fn infinite_into(&self, g: &Graph, targets: &VertexSet) -> bool {
        // middle vertices from which a middle path and one more edge reach `targets`
        let feeders = VertexSet::from_vertices(
            g.vertex_count(),
            self.middle.iter().filter(|&v| {
                g.out_bundles(v)
                    .iter()
                    .any(|&b| targets.contains(g.bundle(b).target))
            }),
        );
        let feeds = VertexSet::from_vertices(
            g.vertex_count(),
            self.middle
                .iter()
                .filter(|&v| !reachable_within(g, v, Some(&self.middle)).is_disjoint(&feeders)),
        );
        let omega_family = g.bundles().iter().enumerate().any(|(i, bd)| {
            bd.multiplicity.is_omega()
                && !self.x.contains(bd.source)
                && (feeds.contains(bd.target)
                    || (targets.contains(bd.target)
                        && (self.middle.contains(bd.source)
                            || self.allowed_last(g, BundleId(i), targets, true))))
        });
        if omega_family {
            return true;
        }
        let on_loop = feeds.iter().any(|v| {
            g.out_bundles(v).iter().any(|&b| {
                let t = g.bundle(b).target;
                self.middle.contains(t) && reachable_within(g, t, Some(&self.middle)).contains(v)
            })
        });
        on_loop
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Graph,
    sides: &Sides,
    v: VertexId,
    depth: usize,
    limits: &Limits,
    stack: &mut Vec<BundleId>,
    out: &mut Vec<PathFamily>,
    longer: &mut bool,
) -> Result<()> {
    for &b in g.out_bundles(v) {
        let t = g.bundle(b).target;
        let first = stack.is_empty();
        if sides.end.contains(t) {
            if !sides.allowed_last(g, b, &sides.end, first) {
                continue;
            }
            if stack.len() == depth {
                *longer = true;
                continue;
            }
            stack.push(b);
            let count = stack
                .iter()
                .map(|&b| g.bundle(b).multiplicity)
                .fold(Count::ONE, |a, m| a * m);
            out.push(PathFamily {
                bundles: stack.clone(),
                count,
            });
            stack.pop();
            if out.len() > limits.path_limit {
                return Err(Error::CapExceeded {
                    what: "F-path families",
                    limit: limits.path_limit,
                    actual: out.len(),
                });
            }
        } else if stack.len() + 1 < depth {
            stack.push(b);
            extend(g, sides, t, depth, limits, stack, out, longer)?;
            stack.pop();
        } else if stack.len() + 1 == depth {
            // a longer family exists only if t leads on to X ∪ B
            if reachable_within(g, t, Some(&sides.middle)).iter().any(|w| {
                g.out_bundles(w)
                    .iter()
                    .any(|&c| sides.end.contains(g.bundle(c).target))
            }) {
                *longer = true;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixture;

    fn run(name: &str, x: &[&str], b: &[&str], depth: usize) -> (Graph, FResult) {
        let g = fixture(name);
        let x = HerSatSet::new(&g, g.vertex_set(x).unwrap()).unwrap();
        let b = g.vertex_set(b).unwrap();
        let r = f_paths(&g, &x, &b, depth, &Limits::default()).unwrap();
        (g, r)
    }

    fn listing(g: &Graph, r: &FResult) -> Vec<(String, String)> {
        r.families
            .iter()
            .map(|f| (f.names(g).join(","), f.count.to_string()))
            .collect()
    }

    #[test]
    fn ideal_graph_example_listing() {
        let (g, r) = run("ex12", &["x1", "x2", "x3"], &["b"], 3);
        let mut got: Vec<String> = r.families.iter().map(|f| f.names(&g).join(",")).collect();
        got.sort();
        assert_eq!(got, ["d,d,h", "d,h", "e,f", "e,g", "f", "g", "h"]);
        assert!(r.families.iter().all(|f| f.count == Count::ONE));
        assert!(!r.is_finite);
        assert!(!r.complete);
    }

    #[test]
    fn omega_family() {
        let (g, r) = run("ex33", &["x1", "x2", "x3"], &[], 1);
        assert!(listing(&g, &r).contains(&("v3".into(), "ω".into())));
        assert!(!r.is_finite);
    }

    #[test]
    fn loops_feeding_a_sink() {
        let (g, r) = run("o2sink", &["s"], &[], 1);
        assert_eq!(listing(&g, &r), [("c".to_string(), "1".to_string())]);
        assert!(!r.is_finite);
        let (g, r) = run("o2sink", &["s"], &[], 2);
        assert_eq!(
            listing(&g, &r)
                .into_iter()
                .map(|(p, _)| p)
                .collect::<Vec<_>>(),
            ["c", "a,c", "b,c"]
        );
    }

    #[test]
    fn finite_collection() {
        let (g, r) = run("ab", &["a", "b"], &[], 4);
        assert!(r.families.is_empty() && r.is_finite && r.complete);
        let g2 = crate::graph::parse_graph(
            "graph chain\nvertex a\nvertex b\nvertex c\nvertex s\nedge e a b x2\nedge f b c x3\nedge k b s\n",
        )
        .unwrap();
        let x = HerSatSet::new(&g2, g2.vertex_set(&["c"]).unwrap()).unwrap();
        let r = f_paths(&g2, &x, &g2.empty_set(), 5, &Limits::default()).unwrap();
        assert_eq!(
            listing(&g2, &r),
            [("f".into(), "3".into()), ("e,f".into(), "6".into())]
        );
        assert!(r.is_finite && r.complete);
        let _ = g;
    }

    #[test]
    fn rejects_bad_input() {
        let g = fixture("ex12");
        let x = HerSatSet::new(&g, g.vertex_set(&["x1", "x2", "x3"]).unwrap()).unwrap();
        let lim = Limits::default();
        assert!(f_paths(&g, &x, &g.vertex_set(&["u"]).unwrap(), 3, &lim).is_err());
        assert!(f_paths(&g, &x, &g.empty_set(), 0, &lim).is_err());
        let empty = HerSatSet::new(&g, g.empty_set()).unwrap();
        assert!(f_paths(&g, &empty, &g.empty_set(), 3, &lim).is_err());
    }

    #[test]
    fn infinite_into_subsets() {
        let g = fixture("ex12");
        let spec = IdealSpec::from_names(&g, &["x1", "x2", "x3"], &["b"]).unwrap();
        // only the d-loop feeds x3; b and x2 get finitely many
        assert!(f_paths_infinite_into(&g, &spec, &g.vertex_set(&["x3"]).unwrap()).unwrap());
        assert!(!f_paths_infinite_into(&g, &spec, &g.vertex_set(&["x2", "b"]).unwrap()).unwrap());
    }
}
