//! Deterministic strategies for the local, one-way and two-way communication
//! models, their tables, and convex mixtures of them.

mod combinatorics;
mod enumerate;

pub use combinatorics::{all_functions, enumerate_groupings, stirling_second_kind, Functions, Grouping};
pub use enumerate::{
    all_bidir_strategies, bidir_strategy_count, enumerate_bidir_cc_vertices,
    enumerate_bidir_cc_vertex_tables, enumerate_fixed_cc_vertex_tables,
    enumerate_fixed_cc_vertices, enumerate_lsr_vertices, MAX_ENUMERATION_BITS,
};

use num_traits::{One, Signed};

use crate::coords::Direction;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::table::{CorrelationTable, Scenario};

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: usize) -> u32 {
    assert!(n >= 1, "ceil_log2 of zero");
    usize::BITS - (n - 1).leading_zeros()
}

/// No communication: `a = alice[i]`, `b = bob[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LsrStrategy {
    pub scenario: Scenario,
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

/// One-way communication. The sender maps its input to a message with
/// `kappa`, outputs `sender_output[input]`, and the receiver outputs
/// `receiver_output[own input][message]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FixedCcStrategy {
    pub scenario: Scenario,
    pub direction: Direction,
    /// Message alphabet size `L`.
    pub alphabet: usize,
    pub kappa: Vec<usize>,
    pub sender_output: Vec<usize>,
    pub receiver_output: Vec<Vec<usize>>,
}

/// Two-way communication: Alice sends `kappa[i] < 2^s`, Bob sends
/// `sigma[j] < 2^(r-s)`; outputs are `alice_output[i][sigma[j]]` and
/// `bob_output[j][kappa[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BidirCcStrategy {
    pub scenario: Scenario,
    pub s_bits: u32,
    pub r_bits: u32,
    pub kappa: Vec<usize>,
    pub sigma: Vec<usize>,
    pub alice_output: Vec<Vec<usize>>,
    pub bob_output: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Strategy {
    Lsr(LsrStrategy),
    Fixed(FixedCcStrategy),
    Bidir(BidirCcStrategy),
}

fn check_map(name: &str, map: &[usize], len: usize, range: usize) -> Result<()> {
    if map.len() != len {
        return Err(Error::InvalidStrategy(format!(
            "{name} has {} entries, expected {len}",
            map.len()
        )));
    }
    if let Some(&bad) = map.iter().find(|&&v| v >= range) {
        return Err(Error::InvalidStrategy(format!(
            "{name} value {bad} out of range {range}"
        )));
    }
    Ok(())
}

fn check_table(name: &str, map: &[Vec<usize>], rows: usize, cols: usize, range: usize) -> Result<()> {
    if map.len() != rows {
        return Err(Error::InvalidStrategy(format!(
            "{name} has {} rows, expected {rows}",
            map.len()
        )));
    }
    map.iter().try_for_each(|row| check_map(name, row, cols, range))
}

impl LsrStrategy {
    pub fn validate(&self) -> Result<()> {
        let sc = &self.scenario;
        check_map("alice", &self.alice, sc.ma, sc.ka)?;
        check_map("bob", &self.bob, sc.mb, sc.kb)
    }
}

impl FixedCcStrategy {
    fn sender_inputs(&self) -> (usize, usize, usize, usize) {
        // (sender inputs, sender outputs, receiver inputs, receiver outputs)
        let sc = &self.scenario;
        match self.direction {
            Direction::AliceToBob => (sc.ma, sc.ka, sc.mb, sc.kb),
            Direction::BobToAlice => (sc.mb, sc.kb, sc.ma, sc.ka),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphabet == 0 {
            return Err(Error::InvalidStrategy("empty message alphabet".into()));
        }
        let (ms, ks, mr, kr) = self.sender_inputs();
        check_map("kappa", &self.kappa, ms, self.alphabet)?;
        check_map("sender output", &self.sender_output, ms, ks)?;
        check_table("receiver output", &self.receiver_output, mr, self.alphabet, kr)
    }

    pub fn bit_cost(&self) -> u32 {
        ceil_log2(self.alphabet)
    }
}

impl BidirCcStrategy {
    pub fn validate(&self) -> Result<()> {
        if self.s_bits > self.r_bits || self.r_bits >= usize::BITS {
            return Err(Error::InvalidStrategy(format!(
                "bit split s={} r={} invalid",
                self.s_bits, self.r_bits
            )));
        }
        let sc = &self.scenario;
        let to_bob = 1usize << self.s_bits;
        let to_alice = 1usize << (self.r_bits - self.s_bits);
        check_map("kappa", &self.kappa, sc.ma, to_bob)?;
        check_map("sigma", &self.sigma, sc.mb, to_alice)?;
        check_table("alice output", &self.alice_output, sc.ma, to_alice, sc.ka)?;
        check_table("bob output", &self.bob_output, sc.mb, to_bob, sc.kb)
    }
}

impl Strategy {
    pub fn scenario(&self) -> Scenario {
        match self {
            Strategy::Lsr(s) => s.scenario,
            Strategy::Fixed(s) => s.scenario,
            Strategy::Bidir(s) => s.scenario,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Strategy::Lsr(s) => s.validate(),
            Strategy::Fixed(s) => s.validate(),
            Strategy::Bidir(s) => s.validate(),
        }
    }

    /// Bits of communication used.
    pub fn bit_cost(&self) -> u32 {
        match self {
            Strategy::Lsr(_) => 0,
            Strategy::Fixed(s) => s.bit_cost(),
            Strategy::Bidir(s) => s.r_bits,
        }
    }

    /// Outputs `(a, b)` on inputs `(i, j)`.
    pub fn outputs(&self, i: usize, j: usize) -> (usize, usize) {
        match self {
            Strategy::Lsr(s) => (s.alice[i], s.bob[j]),
            Strategy::Fixed(s) => match s.direction {
                Direction::AliceToBob => (s.sender_output[i], s.receiver_output[j][s.kappa[i]]),
                Direction::BobToAlice => (s.receiver_output[i][s.kappa[j]], s.sender_output[j]),
            },
            Strategy::Bidir(s) => (
                s.alice_output[i][s.sigma[j]],
                s.bob_output[j][s.kappa[i]],
            ),
        }
    }

    fn kind(&self) -> (u8, Option<Direction>) {
        match self {
            Strategy::Lsr(_) => (0, None),
            Strategy::Fixed(s) => (1, Some(s.direction)),
            Strategy::Bidir(_) => (2, None),
        }
    }

    /// The deterministic 0/1 table of the strategy.
    pub fn to_table(&self) -> Result<CorrelationTable> {
        self.validate()?;
        Ok(self.to_table_unchecked())
    }

    pub(crate) fn to_table_unchecked(&self) -> CorrelationTable {
        let sc = self.scenario();
        CorrelationTable::deterministic(sc, |i, j| self.outputs(i, j).0, |i, j| self.outputs(i, j).1)
    }
}

pub fn strategy_to_table(s: &Strategy) -> Result<CorrelationTable> {
    s.to_table()
}

/// Convex mixture of deterministic strategies of one model and scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyEnsemble {
    entries: Vec<(Rational, Strategy)>,
}

impl StrategyEnsemble {
    pub fn new(entries: Vec<(Rational, Strategy)>) -> Result<Self> {
        let Some((_, first)) = entries.first() else {
            return Err(Error::WeightSum("0 (empty ensemble)".into()));
        };
        let sc = first.scenario();
        let kind = first.kind();
        for (w, s) in &entries {
            if !w.is_positive() {
                return Err(Error::Precondition(format!(
                    "ensemble weight {} is not positive",
                    rational::to_text(w)
                )));
            }
            if s.scenario() != sc {
                return Err(Error::ScenarioMismatch(format!(
                    "ensemble mixes {sc} and {}",
                    s.scenario()
                )));
            }
            if s.kind() != kind {
                return Err(Error::Precondition("ensemble mixes strategy models".into()));
            }
            s.validate()?;
        }
        let total: Rational = entries.iter().map(|(w, _)| w).sum();
        if !total.is_one() {
            return Err(Error::WeightSum(rational::to_text(&total)));
        }
        Ok(StrategyEnsemble { entries })
    }

    pub fn entries(&self) -> &[(Rational, Strategy)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scenario(&self) -> Scenario {
        self.entries[0].1.scenario()
    }

    /// Largest bit cost among members.
    pub fn bit_cost(&self) -> u32 {
        self.entries.iter().map(|(_, s)| s.bit_cost()).max().unwrap_or(0)
    }

    pub fn to_table(&self) -> CorrelationTable {
        let sc = self.scenario();
        let mut out = CorrelationTable::zeros(sc);
        for (w, s) in &self.entries {
            for i in 0..sc.ma {
                for j in 0..sc.mb {
                    let (a, b) = s.outputs(i, j);
                    let v = out.get(a, b, i, j) + w;
                    out.set(a, b, i, j, v);
                }
            }
        }
        out
    }
}

/// Entrywise mixture of the members' tables. Weights are checked when the
/// ensemble is built, so this only fails on an empty ensemble.
pub fn ensemble_to_table(e: &StrategyEnsemble) -> CorrelationTable {
    e.to_table()
}
