//! Reduced coordinate charts for binary-output tables.
//!
//! * Fixed Alice→Bob space (`mA(2mB+1)` coordinates): `q_A(0|i)` at `i`,
//!   `p(00|ij)` at `mA + j·mA + i`, `p(10|ij)` at `mA + mA·mB + j·mA + i`.
//!   Alice's marginal must not depend on `j`; `p(01|ij)` and `p(11|ij)` are
//!   recovered from `q_A(0|i)` and normalization.
//! * Fixed Bob→Alice space: the Alice→Bob chart applied to the table with
//!   the parties exchanged, i.e. `q_B(0|j)` at `j`, `p(00|ij)` at
//!   `mB + i·mB + j` and `p(01|ij)` at `mB + mA·mB + i·mB + j`.
//! * Bidirectional space (`3mAmB` coordinates): `p(00|ij)` at `j·mA + i`,
//!   `p(10|ij)` at `mA·mB + j·mA + i`, `p(01|ij)` at `2mA·mB + j·mA + i`.

use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::table::{CorrelationTable, Scenario};

/// Direction of a one-way message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::AliceToBob => Direction::BobToAlice,
            Direction::BobToAlice => Direction::AliceToBob,
        }
    }
}

/// Which reduced chart a point or inequality lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    Fixed(Direction),
    Bidir,
}

impl Space {
    pub const FIXED: Space = Space::Fixed(Direction::AliceToBob);

    pub fn dimension(&self, sc: &Scenario) -> usize {
        match self {
            Space::Fixed(Direction::AliceToBob) => sc.ma * (2 * sc.mb + 1),
            Space::Fixed(Direction::BobToAlice) => sc.mb * (2 * sc.ma + 1),
            Space::Bidir => 3 * sc.ma * sc.mb,
        }
    }

    /// Token used in the text formats.
    pub fn token(&self) -> &'static str {
        match self {
            Space::Fixed(Direction::AliceToBob) => "fixed",
            Space::Fixed(Direction::BobToAlice) => "fixed-ba",
            Space::Bidir => "bidir",
        }
    }

    pub fn from_token(s: &str) -> Option<Space> {
        match s {
            "fixed" | "fixed-ab" => Some(Space::Fixed(Direction::AliceToBob)),
            "fixed-ba" => Some(Space::Fixed(Direction::BobToAlice)),
            "bidir" => Some(Space::Bidir),
            _ => None,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A table expressed in one of the reduced charts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedPoint {
    pub space: Space,
    pub scenario: Scenario,
    pub coords: Vec<Rational>,
}

impl ReducedPoint {
    pub fn new(space: Space, scenario: Scenario, coords: Vec<Rational>) -> Result<Self> {
        scenario.require_binary()?;
        let expected = space.dimension(&scenario);
        if coords.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coords.len(),
            });
        }
        Ok(ReducedPoint {
            space,
            scenario,
            coords,
        })
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }
}

/// Linear projection of raw table entries onto a chart. No admissibility
/// checks; `q_A(0|i)` is read off at `j = 0`.
pub fn project_raw<T>(space: Space, sc: &Scenario, entries: &[T]) -> Vec<T>
where
    T: Clone + Zero + Add<Output = T>,
{
    debug_assert!(sc.is_binary());
    debug_assert_eq!(entries.len(), sc.len());
    match space {
        Space::Fixed(Direction::AliceToBob) => {
            let (ma, mb) = (sc.ma, sc.mb);
            let mut out = vec![T::zero(); space.dimension(sc)];
            for i in 0..ma {
                out[i] = entries[sc.index(0, 0, i, 0)].clone() + entries[sc.index(0, 1, i, 0)].clone();
                for j in 0..mb {
                    out[ma + j * ma + i] = entries[sc.index(0, 0, i, j)].clone();
                    out[ma + ma * mb + j * ma + i] = entries[sc.index(1, 0, i, j)].clone();
                }
            }
            out
        }
        Space::Fixed(Direction::BobToAlice) => {
            let swapped = swap_raw(sc, entries);
            project_raw(Space::FIXED, &sc.swapped(), &swapped)
        }
        Space::Bidir => {
            let (ma, mb) = (sc.ma, sc.mb);
            let mut out = vec![T::zero(); space.dimension(sc)];
            for i in 0..ma {
                for j in 0..mb {
                    let k = j * ma + i;
                    out[k] = entries[sc.index(0, 0, i, j)].clone();
                    out[ma * mb + k] = entries[sc.index(1, 0, i, j)].clone();
                    out[2 * ma * mb + k] = entries[sc.index(0, 1, i, j)].clone();
                }
            }
            out
        }
    }
}

/// Affine reconstruction of table entries from chart coordinates, without
/// range checks.
pub fn lift_raw<T>(space: Space, sc: &Scenario, coords: &[T]) -> Vec<T>
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T>,
{
    debug_assert!(sc.is_binary());
    debug_assert_eq!(coords.len(), space.dimension(sc));
    let mut out = vec![T::zero(); sc.len()];
    match space {
        Space::Fixed(Direction::AliceToBob) => {
            let (ma, mb) = (sc.ma, sc.mb);
            for i in 0..ma {
                let qa = coords[i].clone();
                for j in 0..mb {
                    let p00 = coords[ma + j * ma + i].clone();
                    let p10 = coords[ma + ma * mb + j * ma + i].clone();
                    out[sc.index(0, 1, i, j)] = qa.clone() - p00.clone();
                    out[sc.index(1, 1, i, j)] = T::one() - qa.clone() - p10.clone();
                    out[sc.index(0, 0, i, j)] = p00;
                    out[sc.index(1, 0, i, j)] = p10;
                }
            }
        }
        Space::Fixed(Direction::BobToAlice) => {
            let swapped_sc = sc.swapped();
            let swapped = lift_raw(Space::FIXED, &swapped_sc, coords);
            return swap_raw(&swapped_sc, &swapped);
        }
        Space::Bidir => {
            let (ma, mb) = (sc.ma, sc.mb);
            for i in 0..ma {
                for j in 0..mb {
                    let k = j * ma + i;
                    let p00 = coords[k].clone();
                    let p10 = coords[ma * mb + k].clone();
                    let p01 = coords[2 * ma * mb + k].clone();
                    out[sc.index(1, 1, i, j)] =
                        T::one() - p00.clone() - p10.clone() - p01.clone();
                    out[sc.index(0, 0, i, j)] = p00;
                    out[sc.index(1, 0, i, j)] = p10;
                    out[sc.index(0, 1, i, j)] = p01;
                }
            }
        }
    }
    out
}

fn swap_raw<T: Clone + Zero>(sc: &Scenario, entries: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); entries.len()];
    for (a, b, i, j) in sc.cells() {
        out[sc.swapped_index(a, b, i, j)] = entries[sc.index(a, b, i, j)].clone();
    }
    out
}

/// Projects an admissible table onto `space`.
///
/// The fixed Alice→Bob chart needs Alice's marginal to be independent of
/// Bob's input; the Bob→Alice chart needs the mirror condition.
pub fn project(space: Space, t: &CorrelationTable) -> Result<ReducedPoint> {
    let sc = t.scenario();
    sc.require_binary()?;
    let ns = t.check_no_signaling();
    match space {
        Space::Fixed(Direction::AliceToBob) if !ns.alice_marginal_well_defined => {
            return Err(Error::Signaling(
                "Alice's marginal depends on Bob's input".into(),
            ))
        }
        Space::Fixed(Direction::BobToAlice) if !ns.bob_marginal_well_defined => {
            return Err(Error::Signaling(
                "Bob's marginal depends on Alice's input".into(),
            ))
        }
        _ => {}
    }
    Ok(ReducedPoint {
        space,
        scenario: sc,
        coords: project_raw(space, &sc, t.entries()),
    })
}

/// Reconstructs the table of a reduced point, rejecting any entry outside
/// `[0, 1]`.
pub fn lift(p: &ReducedPoint) -> Result<CorrelationTable> {
    let sc = p.scenario;
    sc.require_binary()?;
    let entries = lift_raw(p.space, &sc, &p.coords);
    for (a, b, i, j) in sc.cells() {
        let v = &entries[sc.index(a, b, i, j)];
        if v.is_negative() || *v > Rational::one() {
            return Err(Error::LiftOutOfRange {
                a,
                b,
                i,
                j,
                value: rational::to_text(v),
            });
        }
    }
    CorrelationTable::from_entries(sc, entries)
}

pub fn project_fixed(t: &CorrelationTable) -> Result<ReducedPoint> {
    project(Space::FIXED, t)
}

pub fn project_bidir(t: &CorrelationTable) -> Result<ReducedPoint> {
    project(Space::Bidir, t)
}

pub fn lift_fixed(p: &ReducedPoint) -> Result<CorrelationTable> {
    expect_space(p, Space::FIXED)?;
    lift(p)
}

pub fn lift_bidir(p: &ReducedPoint) -> Result<CorrelationTable> {
    expect_space(p, Space::Bidir)?;
    lift(p)
}

fn expect_space(p: &ReducedPoint, space: Space) -> Result<()> {
    if p.space != space {
        return Err(Error::Precondition(format!(
            "expected a {space} point, found {}",
            p.space
        )));
    }
    Ok(())
}

/// Human-readable label of coordinate `k` in `space`, e.g. `qA(0|2)` or
/// `p(10|01)`.
pub fn coordinate_label(space: Space, sc: &Scenario, k: usize) -> String {
    let (ma, mb) = (sc.ma, sc.mb);
    match space {
        Space::Fixed(Direction::AliceToBob) => {
            if k < ma {
                format!("qA(0|{k})")
            } else {
                let r = k - ma;
                let (block, rest) = (r / (ma * mb), r % (ma * mb));
                let (j, i) = (rest / ma, rest % ma);
                let ab = if block == 0 { "00" } else { "10" };
                format!("p({ab}|{i}{j})")
            }
        }
        Space::Fixed(Direction::BobToAlice) => {
            if k < mb {
                format!("qB(0|{k})")
            } else {
                let r = k - mb;
                let (block, rest) = (r / (ma * mb), r % (ma * mb));
                let (i, j) = (rest / mb, rest % mb);
                let ab = if block == 0 { "00" } else { "01" };
                format!("p({ab}|{i}{j})")
            }
        }
        Space::Bidir => {
            let (block, rest) = (k / (ma * mb), k % (ma * mb));
            let (j, i) = (rest / ma, rest % ma);
            let ab = ["00", "10", "01"][block];
            format!("p({ab}|{i}{j})")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn sc32() -> Scenario {
        Scenario::binary(3, 2).unwrap()
    }

    #[test]
    fn deterministic_zero_table_fixed_coords() {
        let t = CorrelationTable::deterministic(sc32(), |_, _| 0, |_, _| 0);
        let p = project_fixed(&t).unwrap();
        let expected: Vec<Rational> = [vec![1; 3], vec![1; 6], vec![0; 6]]
            .concat()
            .into_iter()
            .map(int)
            .collect();
        assert_eq!(p.coords, expected);
        assert_eq!(lift_fixed(&p).unwrap(), t);
    }

    #[test]
    fn uniform_round_trips() {
        let t = CorrelationTable::uniform(sc32());
        assert_eq!(lift_fixed(&project_fixed(&t).unwrap()).unwrap(), t);
        let b = project_bidir(&t).unwrap();
        assert_eq!(b.coords.len(), 18);
        assert!(b.coords.iter().all(|x| *x == frac(1, 4)));
        assert_eq!(lift_bidir(&b).unwrap(), t);
        let m = project(Space::Fixed(Direction::BobToAlice), &t).unwrap();
        assert_eq!(m.coords.len(), 14);
        assert_eq!(lift(&m).unwrap(), t);
    }

    #[test]
    fn signaling_table_has_no_fixed_image() {
        let t = CorrelationTable::deterministic(sc32(), |_, j| j, |i, _| i % 2);
        assert!(matches!(project_fixed(&t), Err(Error::Signaling(_))));
        assert!(project_bidir(&t).is_ok());
    }

    #[test]
    fn deterministic_one_one_bidir() {
        let t = CorrelationTable::deterministic(sc32(), |_, _| 1, |_, _| 1);
        let p = project_bidir(&t).unwrap();
        assert!(p.coords.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn lift_of_zero_vector_puts_mass_on_one_one() {
        let p = ReducedPoint::new(Space::Bidir, sc32(), vec![int(0); 18]).unwrap();
        let t = lift_bidir(&p).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(t.get(1, 1, i, j), &int(1));
            }
        }
    }

    #[test]
    fn lift_rejects_negative_entries() {
        let mut coords = vec![int(0); 18];
        coords[0] = int(1);
        coords[6] = int(1);
        let p = ReducedPoint::new(Space::Bidir, sc32(), coords).unwrap();
        assert!(matches!(lift_bidir(&p), Err(Error::LiftOutOfRange { .. })));
        let mut coords = vec![int(0); 15];
        coords[3] = int(1); // p(00|00) = 1 but qA(0|0) = 0
        let p = ReducedPoint::new(Space::FIXED, sc32(), coords).unwrap();
        assert!(lift_fixed(&p).is_err());
    }

    #[test]
    fn non_binary_rejected() {
        let sc = Scenario::new(2, 2, 3, 2).unwrap();
        let t = CorrelationTable::uniform(sc);
        assert!(matches!(project_bidir(&t), Err(Error::NonBinaryOutputs { .. })));
    }

    #[test]
    fn labels_follow_chart() {
        let sc = sc32();
        assert_eq!(coordinate_label(Space::FIXED, &sc, 0), "qA(0|0)");
        assert_eq!(coordinate_label(Space::FIXED, &sc, 4), "p(00|10)");
        assert_eq!(coordinate_label(Space::FIXED, &sc, 7), "p(00|11)");
        assert_eq!(coordinate_label(Space::FIXED, &sc, 14), "p(10|21)");
        assert_eq!(coordinate_label(Space::Bidir, &sc, 17), "p(01|21)");
    }
}
