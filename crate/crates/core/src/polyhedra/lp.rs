//! Exact phase-one simplex for convex-combination feasibility.
//!
//! Solves `Σ λ_k p_k = x, Σ λ_k = 1, λ ≥ 0` with a revised simplex over the
//! rationals and Bland's rule. When the system is infeasible the final
//! phase-one duals give a Farkas vector `(a, c)` with `a·p_k + c ≥ 0` for all
//! `k` and `a·x + c < 0`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Feasibility {
    /// `(column, weight)` with positive weights.
    Feasible(Vec<(usize, Rational)>),
    /// Farkas vector over the rows `(coordinates..., convexity)`.
    Infeasible(Vec<Rational>),
}

/// Column `k` is `(points[k], 1)` scaled to a primitive integer vector; only
/// signs of reduced costs are needed from these.
struct Columns {
    sparse: Vec<Vec<(usize, BigInt)>>,
}

pub(crate) fn convex_combination(points: &[Vec<Rational>], x: &[Rational]) -> Feasibility {
    let n = x.len();
    let m = n + 1;
    let npts = points.len();

    // rhs b = (x, 1), rows flipped so that b ≥ 0
    let mut b: Vec<Rational> = x.to_vec();
    b.push(Rational::one());
    let flip: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let signed = |row: usize, v: Rational| if flip[row] { -v } else { v };
    let beta0: Vec<Rational> = b.iter().map(|v| v.abs()).collect();

    let column = |k: usize| -> Vec<Rational> {
        let mut c: Vec<Rational> = (0..n).map(|r| signed(r, points[k][r].clone())).collect();
        c.push(signed(n, Rational::one()));
        c
    };
    let columns = Columns {
        sparse: (0..npts)
            .map(|k| {
                let ints = rational::primitive_integer_vector(&column(k));
                ints.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect(),
    };

    // basis: row i holds variable basic[i]; artificials are npts + i
    let mut basic: Vec<usize> = (0..m).map(|i| npts + i).collect();
    let mut binv: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|k| if i == k { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    let mut beta = beta0;

    loop {
        // duals y = c_B B^{-1}
        let mut y = vec![Rational::zero(); m];
        for (i, row) in binv.iter().enumerate() {
            if basic[i] >= npts {
                for (yk, v) in y.iter_mut().zip(row) {
                    *yk += v;
                }
            }
        }
        let den = rational::common_denominator(&y);
        let y_int: Vec<BigInt> = y.iter().map(|v| v.numer() * (&den / v.denom())).collect();

        // Bland: lowest-index variable with negative reduced cost
        let entering = (0..npts)
            .find(|&k| {
                // reduced cost −y·A_k < 0  ⇔  y·A_k > 0
                let dot: BigInt = columns.sparse[k].iter().map(|(r, v)| &y_int[*r] * v).sum();
                dot.is_positive()
            })
            .or_else(|| (0..m).find(|&i| (Rational::one() - &y[i]).is_negative()).map(|i| npts + i));

        let Some(entering) = entering else {
            let objective: Rational = (0..m)
                .filter(|&i| basic[i] >= npts)
                .map(|i| beta[i].clone())
                .sum();
            if objective.is_zero() {
                let mut weights: Vec<(usize, Rational)> = (0..m)
                    .filter(|&i| basic[i] < npts && beta[i].is_positive())
                    .map(|i| (basic[i], beta[i].clone()))
                    .collect();
                weights.sort_by_key(|(k, _)| *k);
                return Feasibility::Feasible(weights);
            }
            // z = −y certifies infeasibility in the flipped rows; undo flips
            let farkas = y
                .into_iter()
                .enumerate()
                .map(|(r, v)| signed(r, -v))
                .collect();
            return Feasibility::Infeasible(farkas);
        };

        let a_col: Vec<Rational> = if entering < npts {
            column(entering)
        } else {
            (0..m)
                .map(|r| if r == entering - npts { Rational::one() } else { Rational::zero() })
                .collect()
        };
        let u: Vec<Rational> = binv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&a_col)
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(x, a)| x * a)
                    .sum()
            })
            .collect();

        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !u[i].is_positive() {
                continue;
            }
            let ratio = &beta[i] / &u[i];
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basic[i] < basic[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (l, _) = leave.expect("phase one objective is bounded below");

        let pivot = u[l].clone();
        for v in binv[l].iter_mut() {
            *v /= &pivot;
        }
        beta[l] = &beta[l] / &pivot;
        let pivot_row = binv[l].clone();
        let pivot_beta = beta[l].clone();
        for i in 0..m {
            if i == l || u[i].is_zero() {
                continue;
            }
            let f = u[i].clone();
            for (v, p) in binv[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            beta[i] = &beta[i] - &f * &pivot_beta;
        }
        basic[l] = entering;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn pts(v: &[[i64; 2]]) -> Vec<Vec<Rational>> {
        v.iter().map(|p| vec![int(p[0]), int(p[1])]).collect()
    }

    #[test]
    fn centre_of_square_is_feasible() {
        let p = pts(&[[0, 0], [1, 0], [0, 1], [1, 1]]);
        let x = vec![frac(1, 2), frac(1, 2)];
        let Feasibility::Feasible(w) = convex_combination(&p, &x) else {
            panic!("expected feasible");
        };
        let total: Rational = w.iter().map(|(_, v)| v.clone()).sum();
        assert_eq!(total, int(1));
        for c in 0..2 {
            let s: Rational = w.iter().map(|(k, v)| v * &p[*k][c]).sum();
            assert_eq!(s, x[c]);
        }
    }

    #[test]
    fn outside_point_gets_farkas_vector() {
        let p = pts(&[[0, 0], [1, 0], [0, 1]]);
        let x = vec![int(1), int(1)];
        let Feasibility::Infeasible(z) = convex_combination(&p, &x) else {
            panic!("expected infeasible");
        };
        for q in &p {
            let s = &z[0] * &q[0] + &z[1] * &q[1] + &z[2];
            assert!(!s.is_negative());
        }
        let s = &z[0] * &x[0] + &z[1] * &x[1] + &z[2];
        assert!(s.is_negative());
    }

    #[test]
    fn negative_coordinates_handled() {
        let p = pts(&[[-2, -1], [3, -1], [0, 4]]);
        assert!(matches!(
            convex_combination(&p, &[int(0), int(0)]),
            Feasibility::Feasible(_)
        ));
        assert!(matches!(
            convex_combination(&p, &[int(-2), int(3)]),
            Feasibility::Infeasible(_)
        ));
    }
}
