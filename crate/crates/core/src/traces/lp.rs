//! Exact feasibility of `A x = b, x ≥ 0` by Phase-I simplex over the
//! rationals, with Bland's rule against cycling.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// A nonnegative solution.
    Feasible(Vec<Q>),
    /// `y` with `yᵀA ≤ 0` and `yᵀb > 0`.
    Infeasible(Vec<Q>),
}

pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Feasibility {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m;

    // make the right-hand side nonnegative
    let flip: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let mut t: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let sign = if flip[i] { -Q::one() } else { Q::one() };
            let mut row: Vec<Q> = a[i].iter().map(|v| v * &sign).collect();
            row.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
            row.push(&b[i] * &sign);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();

    // reduced costs of minimizing the sum of artificials
    let mut cost: Vec<Q> = (0..=width)
        .map(|j| {
            let base = if (n..width).contains(&j) {
                Q::one()
            } else {
                Q::zero()
            };
            t.iter().fold(base, |acc, row| acc - &row[j])
        })
        .collect();
    // cost[width] holds minus the objective value

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            // unbounded cannot happen: the objective is bounded below by 0
            unreachable!("phase-one objective is bounded");
        };
        pivot(&mut t, &mut cost, row, enter);
        basis[row] = enter;
    }

    if cost[width].is_zero() {
        let mut x = vec![Q::zero(); n];
        for (i, &j) in basis.iter().enumerate() {
            if j < n {
                x[j] = t[i][width].clone();
            }
        }
        Feasibility::Feasible(x)
    } else {
        let y = (0..m)
            .map(|i| {
                let yi = Q::one() - &cost[n + i];
                if flip[i] {
                    -yi
                } else {
                    yi
                }
            })
            .collect();
        Feasibility::Infeasible(y)
    }
}

fn pivot(t: &mut [Vec<Q>], cost: &mut [Q], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            *v -= &f * pv;
        }
    }
    let f = cost[col].clone();
    for (v, pv) in cost.iter_mut().zip(&pivot_row) {
        *v -= &f * pv;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn check_feasible(a: &[Vec<Q>], b: &[Q], x: &[Q]) {
        assert!(x.iter().all(|v| !v.is_negative()));
        for (row, bi) in a.iter().zip(b) {
            let lhs: Q = row.iter().zip(x).map(|(c, v)| c * v).sum();
            assert_eq!(&lhs, bi);
        }
    }

    fn check_farkas(a: &[Vec<Q>], b: &[Q], y: &[Q]) {
        for j in 0..a[0].len() {
            let col: Q = a.iter().zip(y).map(|(row, yi)| &row[j] * yi).sum();
            assert!(!col.is_positive());
        }
        let yb: Q = b.iter().zip(y).map(|(bi, yi)| bi * yi).sum();
        assert!(yb.is_positive());
    }

    #[test]
    fn feasible_system() {
        // x0 - x1 = 0, x0 + x1 = 1
        let a = vec![vec![q(1), q(-1)], vec![q(1), q(1)]];
        let b = vec![q(0), q(1)];
        match solve(&a, &b) {
            Feasibility::Feasible(x) => {
                check_feasible(&a, &b, &x);
                assert_eq!(x, vec![Q::new(1.into(), 2.into()); 2]);
            }
            f => panic!("{f:?}"),
        }
    }

    #[test]
    fn infeasible_system() {
        // x0 = 2 x0, x0 = 1
        let a = vec![vec![q(-1)], vec![q(1)]];
        let b = vec![q(0), q(1)];
        match solve(&a, &b) {
            Feasibility::Infeasible(y) => check_farkas(&a, &b, &y),
            f => panic!("{f:?}"),
        }
    }

    #[test]
    fn negative_rhs() {
        // -x0 = -3
        let a = vec![vec![q(-1)]];
        let b = vec![q(-3)];
        assert_eq!(solve(&a, &b), Feasibility::Feasible(vec![q(3)]));
        // x0 + x1 = -1
        let a = vec![vec![q(1), q(1)]];
        let b = vec![q(-1)];
        match solve(&a, &b) {
            Feasibility::Infeasible(y) => check_farkas(&a, &b, &y),
            f => panic!("{f:?}"),
        }
    }

    #[test]
    fn degenerate_rows() {
        let a = vec![vec![q(0), q(0)], vec![q(1), q(1)], vec![q(1), q(1)]];
        let b = vec![q(0), q(1), q(1)];
        match solve(&a, &b) {
            Feasibility::Feasible(x) => check_feasible(&a, &b, &x),
            f => panic!("{f:?}"),
        }
    }
}
