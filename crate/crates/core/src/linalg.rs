//! Small exact linear-algebra kernels.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::rational::Rational;

/// Reduced row echelon form over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    /// Nonzero rows only, each with a leading 1 in its pivot column.
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

pub fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Rref { rows, pivots }
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows.to_vec(), ncols).pivots.len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let r = rref(rows.to_vec(), ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &p) in r.rows.iter().zip(&r.pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|c| if c == k { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let red = rref(aug, n);
    if red.pivots.len() < n || red.pivots.iter().enumerate().any(|(k, &p)| k != p) {
        return None;
    }
    Some(red.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
///
/// Runs in `i128` and falls back to big integers on overflow.
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128()).collect())
        .collect();
    if let Some(m) = small {
        if let Some(r) = bareiss_rank_i128(m) {
            return r;
        }
    }
    bareiss_rank_big(rows.to_vec())
}

fn bareiss_rank_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&k| m[k][col] != 0) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = pivot_row[col];
        for row in tail.iter_mut() {
            let f = row[col];
            for k in col + 1..ncols {
                let v = piv
                    .checked_mul(row[k])?
                    .checked_sub(f.checked_mul(pivot_row[k])?)?;
                row[k] = v / prev;
            }
            row[col] = 0;
        }
        prev = piv;
        r += 1;
    }
    Some(r)
}

fn bareiss_rank_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&k| !m[k][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let f = row[col].clone();
            for k in col + 1..ncols {
                row[k] = (&piv * &row[k] - &f * &pivot_row[k]) / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = piv;
        r += 1;
    }
    r
}
