//! Set partitions, Stirling numbers and function enumeration.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Stirling number of the second kind: partitions of an `n`-set into exactly
/// `k` nonempty blocks.
pub fn stirling_second_kind(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    // row[k] = S(m, k), built up for m = 0..=n
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one();
    for m in 1..=n {
        for b in (1..=k.min(m)).rev() {
            row[b] = BigInt::from(b) * &row[b] + &row[b - 1];
        }
        row[0] = BigInt::zero();
    }
    row[k].clone()
}

/// A partition of `{0..m-1}` into nonempty blocks.
///
/// Blocks are ordered by their least element and each block is sorted, so
/// equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grouping {
    blocks: Vec<Vec<usize>>,
}

impl Grouping {
    /// Builds the grouping whose block labels are `labels[x]`. Labels need
    /// not be contiguous.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<(usize, usize)> = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            match seen.iter().find(|(lab, _)| *lab == l) {
                Some(&(_, b)) => blocks[b].push(x),
                None => {
                    seen.push((l, blocks.len()));
                    blocks.push(vec![x]);
                }
            }
        }
        Grouping { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block index of every element, blocks numbered in leader order.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.size()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                out[x] = b;
            }
        }
        out
    }

    /// Blocks are disjoint, nonempty and cover `{0..m-1}`.
    pub fn is_partition_of(&self, m: usize) -> bool {
        let mut seen = vec![false; m];
        for block in &self.blocks {
            if block.is_empty() {
                return false;
            }
            for &x in block {
                if x >= m || seen[x] {
                    return false;
                }
                seen[x] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// All partitions of `{0..m-1}` into `1..=min(max_blocks, m)` blocks.
///
/// Ordered by block count, then lexicographically by restricted growth
/// string (equivalently by the sequence of block leaders' memberships).
pub fn enumerate_groupings(m: usize, max_blocks: usize) -> Vec<Grouping> {
    let cap = max_blocks.min(m);
    let mut out = Vec::new();
    for blocks in 1..=cap {
        let mut rgs = vec![0usize; m];
        restricted_growth(&mut rgs, 1, 0, blocks, &mut out);
    }
    out
}

fn restricted_growth(
    rgs: &mut [usize],
    pos: usize,
    max_used: usize,
    blocks: usize,
    out: &mut Vec<Grouping>,
) {
    let m = rgs.len();
    if pos >= m {
        if m > 0 && max_used + 1 == blocks {
            out.push(Grouping::from_labels(rgs));
        }
        return;
    }
    // remaining positions must still be able to open the missing blocks
    let remaining = m - pos;
    for l in 0..=(max_used + 1).min(blocks - 1) {
        let used = max_used.max(l);
        if blocks - 1 - used > remaining - 1 {
            continue;
        }
        rgs[pos] = l;
        restricted_growth(rgs, pos + 1, used, blocks, out);
    }
}

/// Odometer over all maps `{0..domain-1} → {0..codomain-1}`, last position
/// varying fastest. Yields exactly one empty map when `domain == 0`.
#[derive(Debug, Clone)]
pub struct Functions {
    current: Vec<usize>,
    codomain: usize,
    done: bool,
}

pub fn all_functions(domain: usize, codomain: usize) -> Functions {
    Functions {
        current: vec![0; domain],
        codomain,
        done: codomain == 0 && domain > 0,
    }
}

impl Iterator for Functions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut k = self.current.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.current[k] += 1;
            if self.current[k] < self.codomain {
                break;
            }
            self.current[k] = 0;
        }
        Some(out)
    }
}
