//! Incremental double description on integer data.
//!
//! Input is a list of integer rows `r_k` spanning `Z^d`; output is the set of
//! extreme rays of the pointed cone `{h : r_k·h ≥ 0 for all k}`. Rows are
//! inserted in the order given. Adjacency of a (+, −) ray pair is decided
//! combinatorially: their common zero set must have at least `d − 2`
//! elements and must not be contained in the zero set of any third ray.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::linalg;
use crate::rational::{self, Rational};

/// Integer type the cone is computed in. Arithmetic reports overflow as
/// `None` so the caller can retry with wider integers.
pub(crate) trait DdInt: Clone + Debug + Ord + Send + Sync + 'static {
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn dot(a: &[Self], b: &[Self]) -> Option<Self>;
    /// `ca·a + cb·b` divided by the gcd of its entries.
    fn combine(ca: &Self, a: &[Self], cb: &Self, b: &[Self]) -> Option<Vec<Self>>;
    fn signum(&self) -> i8;
    fn neg(&self) -> Self;
}

impl DdInt for i64 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i64()
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn dot(a: &[i64], b: &[i64]) -> Option<i64> {
        let mut acc: i128 = 0;
        for (x, y) in a.iter().zip(b) {
            acc = acc.checked_add(*x as i128 * *y as i128)?;
        }
        i64::try_from(acc).ok()
    }

    fn combine(ca: &i64, a: &[i64], cb: &i64, b: &[i64]) -> Option<Vec<i64>> {
        let mut wide = Vec::with_capacity(a.len());
        let mut g: i128 = 0;
        for (x, y) in a.iter().zip(b) {
            let v = (*ca as i128)
                .checked_mul(*x as i128)?
                .checked_add((*cb as i128).checked_mul(*y as i128)?)?;
            g = g.gcd(&v);
            wide.push(v);
        }
        if g > 1 {
            for v in &mut wide {
                *v /= g;
            }
        }
        wide.into_iter().map(|v| i64::try_from(v).ok()).collect()
    }

    fn signum(&self) -> i8 {
        i64::signum(*self) as i8
    }

    fn neg(&self) -> Self {
        -*self
    }
}

impl DdInt for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }

    fn dot(a: &[BigInt], b: &[BigInt]) -> Option<BigInt> {
        let mut acc = BigInt::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
        Some(acc)
    }

    fn combine(ca: &BigInt, a: &[BigInt], cb: &BigInt, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let v: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect();
        Some(rational::divide_by_gcd(v))
    }

    fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }

    fn neg(&self) -> Self {
        -self
    }
}

fn bit_set(bits: &mut [u64], k: usize) {
    bits[k / 64] |= 1 << (k % 64);
}

fn ones(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let t = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + t)
        })
    })
}

/// Rays stored contiguously: coordinates in `vecs` (`d` per ray) and zero
/// sets over the processed rows in `zeros` (`words` per ray), indexed by
/// insertion position.
struct Rays<T> {
    d: usize,
    words: usize,
    vecs: Vec<T>,
    zeros: Vec<u64>,
}

impl<T: Clone> Rays<T> {
    fn new(d: usize, words: usize) -> Self {
        Rays {
            d,
            words,
            vecs: Vec::new(),
            zeros: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.vecs.len() / self.d
    }

    fn v(&self, k: usize) -> &[T] {
        &self.vecs[k * self.d..(k + 1) * self.d]
    }

    fn z(&self, k: usize) -> &[u64] {
        &self.zeros[k * self.words..(k + 1) * self.words]
    }

    fn push(&mut self, v: &[T], z: &[u64]) {
        self.vecs.extend_from_slice(v);
        self.zeros.extend_from_slice(z);
    }
}

/// Binary tree over rays for "is `z` contained in some other ray's zero
/// set" queries. Each split separates rays with and without one row in
/// their zero set; every node keeps the union of the zero sets below it.
struct PatternTree {
    words: usize,
    unions: Vec<u64>,
    nodes: Vec<Node>,
}

enum Node {
    Leaf(Vec<u32>),
    Split { bit: usize, without: usize, with: usize },
}

const LEAF_SIZE: usize = 16;

impl PatternTree {
    fn build<T: Clone>(rays: &Rays<T>, rows: usize) -> Self {
        let mut tree = PatternTree {
            words: rays.words,
            unions: Vec::new(),
            nodes: Vec::new(),
        };
        let ids: Vec<u32> = (0..rays.len() as u32).collect();
        let mut counts = vec![0u32; rows];
        tree.add(rays, ids, &mut counts);
        tree
    }

    fn add<T: Clone>(&mut self, rays: &Rays<T>, ids: Vec<u32>, counts: &mut [u32]) -> usize {
        let me = self.nodes.len();
        let mut union = vec![0u64; self.words];
        for &r in &ids {
            for (u, z) in union.iter_mut().zip(rays.z(r as usize)) {
                *u |= z;
            }
        }
        self.unions.extend_from_slice(&union);
        self.nodes.push(Node::Leaf(Vec::new()));
        if ids.len() <= LEAF_SIZE {
            self.nodes[me] = Node::Leaf(ids);
            return me;
        }
        // split on the row whose frequency is closest to half
        counts.iter_mut().for_each(|c| *c = 0);
        for &r in &ids {
            for b in ones(rays.z(r as usize)) {
                counts[b] += 1;
            }
        }
        let half = ids.len() as i64 / 2;
        let bit = ones(&union)
            .min_by_key(|&b| (counts[b] as i64 - half).abs())
            .filter(|&b| (counts[b] as usize) < ids.len());
        let Some(bit) = bit else {
            self.nodes[me] = Node::Leaf(ids);
            return me;
        };
        let (with, without): (Vec<u32>, Vec<u32>) = ids
            .into_iter()
            .partition(|&r| rays.z(r as usize)[bit / 64] >> (bit % 64) & 1 == 1);
        let without = self.add(rays, without, counts);
        let with = self.add(rays, with, counts);
        self.nodes[me] = Node::Split { bit, without, with };
        me
    }

    /// Whether some ray other than `p` and `q` has a zero set containing `z`.
    fn covered<T: Clone>(&self, rays: &Rays<T>, z: &[u64], p: usize, q: usize) -> bool {
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            let union = &self.unions[node * self.words..(node + 1) * self.words];
            if z.iter().zip(union).any(|(a, u)| a & !u != 0) {
                continue;
            }
            match &self.nodes[node] {
                Node::Leaf(ids) => {
                    let hit = ids.iter().any(|&r| {
                        let r = r as usize;
                        r != p && r != q && rays.z(r).iter().zip(z).all(|(zr, a)| a & !zr == 0)
                    });
                    if hit {
                        return true;
                    }
                }
                Node::Split { bit, without, with } => {
                    stack.push(*with);
                    if z[bit / 64] >> (bit % 64) & 1 == 0 {
                        stack.push(*without);
                    }
                }
            }
        }
        false
    }
}

/// Extreme rays of `{h : rows[k]·h ≥ 0}`. Returns `None` if `T` overflows.
///
/// Panics if the rows do not have full column rank.
pub(crate) fn extreme_rays<T: DdInt>(rows: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let d = rows[0].len();
    let m = rows.len();
    let words = m.div_ceil(64);
    let trace = std::env::var_os("BELLPOLY_DD_TRACE").is_some();

    // Initial simplex cone from the first linearly independent rows.
    let mut basis: Vec<usize> = Vec::with_capacity(d);
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        if basis.len() == d {
            break;
        }
        let as_rat: Vec<Rational> = row.iter().map(|x| Rational::from_integer(x.to_big())).collect();
        let mut trial = echelon.clone();
        trial.push(as_rat);
        let red = linalg::rref(trial, d);
        if red.pivots.len() > echelon.len() {
            echelon = red.rows;
            basis.push(k);
        }
    }
    assert_eq!(basis.len(), d, "double description needs full-rank input rows");

    let mut order: Vec<usize> = basis.clone();
    order.extend((0..m).filter(|k| !basis.contains(k)));

    let bmat: Vec<Vec<Rational>> = basis
        .iter()
        .map(|&k| rows[k].iter().map(|x| Rational::from_integer(x.to_big())).collect())
        .collect();
    let inv = linalg::inverse(&bmat).expect("basis rows are independent");
    let mut rays: Rays<T> = Rays::new(d, words);
    for c in 0..d {
        let col: Vec<Rational> = inv.iter().map(|row| row[c].clone()).collect();
        let v = rational::primitive_integer_vector(&col)
            .iter()
            .map(T::from_big)
            .collect::<Option<Vec<T>>>()?;
        let mut zeros = vec![0u64; words];
        for pos in 0..d {
            if pos != c {
                bit_set(&mut zeros, pos);
            }
        }
        rays.push(&v, &zeros);
    }

    for (pos, &k) in order.iter().enumerate().skip(d) {
        let row = &rows[k];
        let n = rays.len();
        let signs: Vec<T> = (0..n)
            .into_par_iter()
            .map(|r| T::dot(row, rays.v(r)))
            .collect::<Option<Vec<T>>>()?;
        let (mut plus, mut zero, mut minus) = (Vec::new(), Vec::new(), Vec::new());
        for (idx, s) in signs.iter().enumerate() {
            match s.signum() {
                1 => plus.push(idx),
                0 => zero.push(idx),
                _ => minus.push(idx),
            }
        }
        if minus.is_empty() {
            for &z in &zero {
                bit_set(&mut rays.zeros[z * words..(z + 1) * words], pos);
            }
            continue;
        }

        let tree = PatternTree::build(&rays, pos);
        let adjacent = |p: usize, q: usize, common: &mut [u64]| -> bool {
            let (zp, zq) = (rays.z(p), rays.z(q));
            let mut count = 0;
            for w in 0..words {
                count += (zp[w] & zq[w]).count_ones() as usize;
            }
            if count + 2 < d {
                return false;
            }
            for w in 0..words {
                common[w] = zp[w] & zq[w];
            }
            !tree.covered(&rays, common, p, q)
        };

        let new_rays: Vec<(Vec<T>, Vec<u64>)> = plus
            .par_iter()
            .map(|&p| {
                let mut common = vec![0u64; words];
                let mut found = Vec::new();
                for &q in &minus {
                    if !adjacent(p, q, &mut common) {
                        continue;
                    }
                    // s_p > 0 > s_q: s_p·v_q − s_q·v_p vanishes on the new row
                    let v = T::combine(&signs[p], rays.v(q), &signs[q].neg(), rays.v(p))?;
                    let mut z = common.clone();
                    bit_set(&mut z, pos);
                    found.push((v, z));
                }
                Some(found)
            })
            .collect::<Option<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        if trace {
            eprintln!(
                "dd row {pos}/{m}: +{} 0:{} -{} new {}",
                plus.len(),
                zero.len(),
                minus.len(),
                new_rays.len()
            );
        }

        let mut next: Rays<T> = Rays::new(d, words);
        for &p in &plus {
            next.push(rays.v(p), rays.z(p));
        }
        for &z in &zero {
            let mut zs = rays.z(z).to_vec();
            bit_set(&mut zs, pos);
            next.push(rays.v(z), &zs);
        }
        for (v, z) in &new_rays {
            next.push(v, z);
        }
        rays = next;
    }

    Some((0..rays.len()).map(|k| rays.v(k).to_vec()).collect())
}
