//! Vertex enumeration for the three models.
//!
//! Message functions are enumerated as groupings of the sender's inputs
//! (block ids in leader order), capped at `min(2^bits, #inputs)` blocks.
//! Receiver maps range over every `(input, block)` assignment, so relabeled
//! message values and message-conditioned output flips are covered.

use std::cmp::Reverse;
use std::collections::HashSet;

use rayon::prelude::*;

use super::combinatorics::{all_functions, enumerate_groupings, Grouping};
use super::{BidirCcStrategy, FixedCcStrategy, LsrStrategy, Strategy};
use crate::coords::{project_raw, Direction, ReducedPoint, Space};
use crate::error::{Error, Result};
use crate::table::{CorrelationTable, Scenario};

/// Largest message size accepted by the enumerators.
pub const MAX_ENUMERATION_BITS: u32 = 16;

fn check_bits(bits: u32) -> Result<()> {
    if bits > MAX_ENUMERATION_BITS {
        return Err(Error::Precondition(format!(
            "{bits} bits exceeds the enumeration limit of {MAX_ENUMERATION_BITS}"
        )));
    }
    Ok(())
}

fn sorted_unique<T: Ord + Send>(mut v: Vec<T>) -> Vec<T> {
    v.par_sort_unstable();
    v.dedup();
    v
}

/// All `kA^mA · kB^mB` deterministic local tables, sorted.
pub fn enumerate_lsr_vertices(sc: Scenario) -> Vec<CorrelationTable> {
    let tables: Vec<CorrelationTable> = all_functions(sc.ma, sc.ka)
        .flat_map(|alice| {
            all_functions(sc.mb, sc.kb).map(move |bob| {
                Strategy::Lsr(LsrStrategy {
                    scenario: sc,
                    alice: alice.clone(),
                    bob,
                })
                .to_table_unchecked()
            })
        })
        .collect();
    sorted_unique(tables)
}

/// Receiver map `[input][message]` from a flat assignment over
/// `inputs × blocks`, padded with output 0 for unused messages.
fn receiver_map(flat: &[usize], inputs: usize, blocks: usize, alphabet: usize) -> Vec<Vec<usize>> {
    (0..inputs)
        .map(|x| {
            let mut row = vec![0; alphabet];
            row[..blocks].copy_from_slice(&flat[x * blocks..(x + 1) * blocks]);
            row
        })
        .collect()
}

/// Deterministic tables of the one-way model with `bits` bits sent in
/// `direction`, deduplicated and sorted.
pub fn enumerate_fixed_cc_vertex_tables(
    sc: Scenario,
    direction: Direction,
    bits: u32,
) -> Result<Vec<CorrelationTable>> {
    check_bits(bits)?;
    if direction == Direction::BobToAlice {
        let swapped = enumerate_fixed_cc_vertex_tables(sc.swapped(), Direction::AliceToBob, bits)?;
        return Ok(sorted_unique(swapped.iter().map(CorrelationTable::swapped).collect()));
    }
    let alphabet = 1usize << bits;
    let groupings = enumerate_groupings(sc.ma, alphabet);
    let tables: Vec<CorrelationTable> = groupings
        .par_iter()
        .flat_map_iter(|g: &Grouping| {
            let blocks = g.block_count();
            let kappa = g.labels();
            all_functions(sc.ma, sc.ka).flat_map(move |alpha| {
                let kappa = kappa.clone();
                all_functions(sc.mb * blocks, sc.kb).map(move |beta| {
                    Strategy::Fixed(FixedCcStrategy {
                        scenario: sc,
                        direction: Direction::AliceToBob,
                        alphabet,
                        kappa: kappa.clone(),
                        sender_output: alpha.clone(),
                        receiver_output: receiver_map(&beta, sc.mb, blocks, alphabet),
                    })
                    .to_table_unchecked()
                })
            })
        })
        .collect();
    Ok(sorted_unique(tables))
}

/// Vertices of the one-way polytope in its fixed chart, sorted by
/// coordinates.
pub fn enumerate_fixed_cc_vertices(
    sc: Scenario,
    direction: Direction,
    bits: u32,
) -> Result<Vec<ReducedPoint>> {
    sc.require_binary()?;
    let space = Space::Fixed(direction);
    let tables = enumerate_fixed_cc_vertex_tables(sc, direction, bits)?;
    Ok(project_all(space, sc, &tables))
}

fn project_all(space: Space, sc: Scenario, tables: &[CorrelationTable]) -> Vec<ReducedPoint> {
    let points: Vec<ReducedPoint> = tables
        .par_iter()
        .map(|t| ReducedPoint {
            space,
            scenario: sc,
            coords: project_raw(space, &sc, t.entries()),
        })
        .collect();
    sorted_unique(points)
}

/// Deterministic tables of the two-way model with a total of `bits` bits,
/// over every split `s` (Alice sends `s`, Bob sends `bits - s`).
///
/// Tables are grouped by the largest split that produces them, most bits
/// to Bob first, and sorted within a group. For one bit this lists the
/// Alice→Bob polytope's vertices before the rest, an insertion order under
/// which the double description stays small.
pub fn enumerate_bidir_cc_vertex_tables(sc: Scenario, bits: u32) -> Result<Vec<CorrelationTable>> {
    check_bits(bits)?;
    let mut jobs = Vec::new();
    for s in 0..=bits {
        let to_bob = 1usize << s;
        let to_alice = 1usize << (bits - s);
        for gk in enumerate_groupings(sc.ma, to_bob) {
            for gs in enumerate_groupings(sc.mb, to_alice) {
                jobs.push((s, gk.clone(), gs));
            }
        }
    }
    let mut tables: Vec<(Reverse<u32>, CorrelationTable)> = jobs
        .par_iter()
        .flat_map_iter(|(s, gk, gs)| {
            let (s, bk, bs) = (*s, gk.block_count(), gs.block_count());
            let (to_bob, to_alice) = (1usize << s, 1usize << (bits - s));
            let (kappa, sigma) = (gk.labels(), gs.labels());
            all_functions(sc.ma * bs, sc.ka).flat_map(move |alpha| {
                let (kappa, sigma) = (kappa.clone(), sigma.clone());
                all_functions(sc.mb * bk, sc.kb).map(move |beta| {
                    Strategy::Bidir(BidirCcStrategy {
                        scenario: sc,
                        s_bits: s,
                        r_bits: bits,
                        kappa: kappa.clone(),
                        sigma: sigma.clone(),
                        alice_output: receiver_map(&alpha, sc.ma, bs, to_alice),
                        bob_output: receiver_map(&beta, sc.mb, bk, to_bob),
                    })
                    .to_table_unchecked()
                })
            })
            .map(move |t| (Reverse(s), t))
        })
        .collect();
    tables.par_sort_unstable();
    let mut seen = HashSet::with_capacity(tables.len());
    Ok(tables.into_iter().map(|(_, t)| t).filter(|t| seen.insert(t.clone())).collect())
}

/// Vertices of the two-way polytope in the bidirectional chart, in the
/// order of [`enumerate_bidir_cc_vertex_tables`]. The chart is injective on
/// binary tables, so no duplicates arise.
pub fn enumerate_bidir_cc_vertices(sc: Scenario, bits: u32) -> Result<Vec<ReducedPoint>> {
    sc.require_binary()?;
    let tables = enumerate_bidir_cc_vertex_tables(sc, bits)?;
    Ok(tables
        .par_iter()
        .map(|t| ReducedPoint {
            space: Space::Bidir,
            scenario: sc,
            coords: project_raw(Space::Bidir, &sc, t.entries()),
        })
        .collect())
}

/// Number of raw deterministic two-way strategies (all message functions,
/// not just groupings), or `None` if it does not fit in `u128`.
pub fn bidir_strategy_count(sc: Scenario, bits: u32) -> Option<u128> {
    let mut total: u128 = 0;
    for s in 0..=bits {
        let to_bob = 1u128.checked_shl(s)?;
        let to_alice = 1u128.checked_shl(bits - s)?;
        let pow = |base: u128, exp: u128| -> Option<u128> {
            let e = u32::try_from(exp).ok()?;
            base.checked_pow(e)
        };
        let (ma, mb, ka, kb) = (sc.ma as u128, sc.mb as u128, sc.ka as u128, sc.kb as u128);
        let n = pow(to_bob, ma)?
            .checked_mul(pow(to_alice, mb)?)?
            .checked_mul(pow(ka, ma.checked_mul(to_alice)?)?)?
            .checked_mul(pow(kb, mb.checked_mul(to_bob)?)?)?;
        total = total.checked_add(n)?;
    }
    Some(total)
}

/// Every deterministic two-way strategy with `bits` total bits, with
/// arbitrary (not necessarily surjective) message functions.
pub fn all_bidir_strategies(sc: Scenario, bits: u32) -> impl Iterator<Item = BidirCcStrategy> {
    (0..=bits).flat_map(move |s| {
        let to_bob = 1usize << s;
        let to_alice = 1usize << (bits - s);
        all_functions(sc.ma, to_bob).flat_map(move |kappa| {
            all_functions(sc.mb, to_alice).flat_map(move |sigma| {
                let kappa = kappa.clone();
                all_functions(sc.ma * to_alice, sc.ka).flat_map(move |alpha| {
                    let (kappa, sigma) = (kappa.clone(), sigma.clone());
                    all_functions(sc.mb * to_bob, sc.kb).map(move |beta| BidirCcStrategy {
                        scenario: sc,
                        s_bits: s,
                        r_bits: bits,
                        kappa: kappa.clone(),
                        sigma: sigma.clone(),
                        alice_output: alpha.chunks(to_alice).map(<[usize]>::to_vec).collect(),
                        bob_output: beta.chunks(to_bob).map(<[usize]>::to_vec).collect(),
                    })
                })
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::project_bidir;
    use std::collections::BTreeSet;

    fn sc(ma: usize, mb: usize) -> Scenario {
        Scenario::binary(ma, mb).unwrap()
    }

    #[test]
    fn lsr_vertex_counts() {
        assert_eq!(enumerate_lsr_vertices(sc(2, 2)).len(), 16);
        assert_eq!(enumerate_lsr_vertices(sc(3, 2)).len(), 32);
        assert_eq!(enumerate_lsr_vertices(sc(1, 1)).len(), 4);
        assert_eq!(enumerate_lsr_vertices(Scenario::new(2, 1, 3, 2).unwrap()).len(), 18);
    }

    #[test]
    fn fixed_vertices_have_product_structure() {
        let pts = enumerate_fixed_cc_vertices(sc(3, 2), Direction::AliceToBob, 1).unwrap();
        for p in &pts {
            let t = crate::coords::lift_fixed(p).unwrap();
            for i in 0..3 {
                assert!(p.coords[i] == crate::rational::int(0) || p.coords[i] == crate::rational::int(1));
                for j in 0..2 {
                    let s = t.get(0, 0, i, j) + t.get(1, 0, i, j);
                    assert!(s == crate::rational::int(0) || s == crate::rational::int(1));
                }
            }
        }
    }

    #[test]
    fn fixed_vertices_contain_lsr_vertices() {
        for dir in [Direction::AliceToBob, Direction::BobToAlice] {
            let space = Space::Fixed(dir);
            let pts: BTreeSet<_> = enumerate_fixed_cc_vertices(sc(3, 2), dir, 1)
                .unwrap()
                .into_iter()
                .collect();
            for t in enumerate_lsr_vertices(sc(3, 2)) {
                assert!(pts.contains(&crate::coords::project(space, &t).unwrap()));
            }
        }
    }

    #[test]
    fn bidir_zero_bits_is_lsr() {
        let lsr: BTreeSet<_> = enumerate_lsr_vertices(sc(3, 2))
            .iter()
            .map(|t| project_bidir(t).unwrap())
            .collect();
        let bidir = enumerate_bidir_cc_vertices(sc(3, 2), 0).unwrap();
        assert_eq!(bidir.len(), lsr.len());
        assert_eq!(bidir.into_iter().collect::<BTreeSet<_>>(), lsr);
    }

    #[test]
    fn one_bit_bidir_is_union_of_fixed_directions() {
        let s = sc(3, 2);
        let mut union = BTreeSet::new();
        for dir in [Direction::AliceToBob, Direction::BobToAlice] {
            for t in enumerate_fixed_cc_vertex_tables(s, dir, 1).unwrap() {
                union.insert(project_bidir(&t).unwrap());
            }
        }
        let bidir: BTreeSet<_> = enumerate_bidir_cc_vertices(s, 1).unwrap().into_iter().collect();
        assert_eq!(bidir, union);
    }

    #[test]
    fn one_bit_bidir_lists_alice_to_bob_vertices_first() {
        let s = sc(3, 2);
        let ab = enumerate_fixed_cc_vertex_tables(s, Direction::AliceToBob, 1).unwrap();
        let tables = enumerate_bidir_cc_vertex_tables(s, 1).unwrap();
        assert_eq!(tables[..ab.len()], ab[..]);
        assert!(tables[ab.len()..].windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn raw_strategy_count_matches_iterator() {
        let s = sc(2, 2);
        let n = all_bidir_strategies(s, 1).count() as u128;
        assert_eq!(bidir_strategy_count(s, 1), Some(n));
        assert_eq!(bidir_strategy_count(sc(3, 3), 1), Some(8192));
    }

    #[test]
    fn raw_strategies_cover_grouped_vertices() {
        let s = sc(2, 2);
        let raw: BTreeSet<_> = all_bidir_strategies(s, 1)
            .map(|b| Strategy::Bidir(b).to_table().unwrap())
            .collect();
        let grouped: BTreeSet<_> = enumerate_bidir_cc_vertex_tables(s, 1).unwrap().into_iter().collect();
        assert_eq!(raw, grouped);
    }

    #[test]
    fn too_many_bits_rejected() {
        assert!(enumerate_bidir_cc_vertices(sc(2, 2), MAX_ENUMERATION_BITS + 1).is_err());
    }
}
