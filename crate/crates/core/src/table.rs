//! Conditional distributions `p(ab|ij)` and their marginals.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Input and output counts for both parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scenario {
    pub ma: usize,
    pub mb: usize,
    pub ka: usize,
    pub kb: usize,
}

impl Scenario {
    pub fn new(ma: usize, mb: usize, ka: usize, kb: usize) -> Result<Self> {
        if ma == 0 || mb == 0 || ka == 0 || kb == 0 {
            return Err(Error::InvalidScenario);
        }
        Ok(Scenario { ma, mb, ka, kb })
    }

    /// Binary-output scenario with the given input counts.
    pub fn binary(ma: usize, mb: usize) -> Result<Self> {
        Self::new(ma, mb, 2, 2)
    }

    pub fn is_binary(&self) -> bool {
        self.ka == 2 && self.kb == 2
    }

    pub fn require_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::NonBinaryOutputs {
                ka: self.ka,
                kb: self.kb,
            })
        }
    }

    /// The scenario seen with Alice and Bob exchanged.
    pub fn swapped(&self) -> Scenario {
        Scenario {
            ma: self.mb,
            mb: self.ma,
            ka: self.kb,
            kb: self.ka,
        }
    }

    pub fn len(&self) -> usize {
        self.ma * self.mb * self.ka * self.kb
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat index of `p(ab|ij)`. Each `(i, j)` slice is contiguous.
    #[inline]
    pub fn index(&self, a: usize, b: usize, i: usize, j: usize) -> usize {
        ((i * self.mb + j) * self.ka + a) * self.kb + b
    }

    /// Flat index in the party-swapped layout that holds the same entry.
    #[inline]
    pub(crate) fn swapped_index(&self, a: usize, b: usize, i: usize, j: usize) -> usize {
        self.swapped().index(b, a, j, i)
    }

    /// Iterates `(a, b, i, j)` in flat-index order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let s = *self;
        (0..s.ma).flat_map(move |i| {
            (0..s.mb)
                .flat_map(move |j| (0..s.ka).flat_map(move |a| (0..s.kb).map(move |b| (a, b, i, j))))
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.ma, self.mb, self.ka, self.kb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    Alice,
    Bob,
}

/// Exact table of `p(ab|ij)`.
///
/// Construction does not validate; use [`CorrelationTable::validate`] for
/// the probability constraints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorrelationTable {
    scenario: Scenario,
    entries: Vec<Rational>,
}

impl CorrelationTable {
    pub fn zeros(scenario: Scenario) -> Self {
        CorrelationTable {
            scenario,
            entries: vec![Rational::zero(); scenario.len()],
        }
    }

    pub fn from_entries(scenario: Scenario, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != scenario.len() {
            return Err(Error::DimensionMismatch {
                expected: scenario.len(),
                found: entries.len(),
            });
        }
        Ok(CorrelationTable { scenario, entries })
    }

    /// Builds a table from a closure over `(a, b, i, j)`.
    pub fn from_fn(scenario: Scenario, mut f: impl FnMut(usize, usize, usize, usize) -> Rational) -> Self {
        let entries = scenario.cells().map(|(a, b, i, j)| f(a, b, i, j)).collect();
        CorrelationTable { scenario, entries }
    }

    /// Uniform table `p(ab|ij) = 1/(kA kB)`.
    pub fn uniform(scenario: Scenario) -> Self {
        let v = Rational::new(1.into(), ((scenario.ka * scenario.kb) as i64).into());
        CorrelationTable {
            scenario,
            entries: vec![v; scenario.len()],
        }
    }

    /// Deterministic table `p(ab|ij) = δ(a, alice(i, j)) δ(b, bob(i, j))`.
    pub fn deterministic(
        scenario: Scenario,
        alice: impl Fn(usize, usize) -> usize,
        bob: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let mut t = Self::zeros(scenario);
        for i in 0..scenario.ma {
            for j in 0..scenario.mb {
                let idx = scenario.index(alice(i, j), bob(i, j), i, j);
                t.entries[idx] = Rational::one();
            }
        }
        t
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn get(&self, a: usize, b: usize, i: usize, j: usize) -> &Rational {
        &self.entries[self.scenario.index(a, b, i, j)]
    }

    pub fn set(&mut self, a: usize, b: usize, i: usize, j: usize, value: Rational) {
        let idx = self.scenario.index(a, b, i, j);
        self.entries[idx] = value;
    }

    /// The same correlations with Alice and Bob exchanged.
    pub fn swapped(&self) -> CorrelationTable {
        let sc = self.scenario;
        let mut entries = vec![Rational::zero(); sc.len()];
        for (a, b, i, j) in sc.cells() {
            entries[sc.swapped_index(a, b, i, j)] = self.get(a, b, i, j).clone();
        }
        CorrelationTable {
            scenario: sc.swapped(),
            entries,
        }
    }

    /// Entries are nonnegative and every `(i, j)` slice sums to one.
    pub fn validate(&self) -> ValidationReport {
        let sc = self.scenario;
        let mut violations = Vec::new();
        for (a, b, i, j) in sc.cells() {
            if self.get(a, b, i, j).is_negative() {
                violations.push(Violation::NegativeEntry { a, b, i, j });
            }
        }
        for i in 0..sc.ma {
            for j in 0..sc.mb {
                let sum = self.slice_sum(i, j);
                if !sum.is_one() {
                    violations.push(Violation::SliceSum { i, j, sum });
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    fn slice_sum(&self, i: usize, j: usize) -> Rational {
        let sc = self.scenario;
        let start = sc.index(0, 0, i, j);
        self.entries[start..start + sc.ka * sc.kb].iter().sum()
    }

    /// Marginal of `side` computed at the other party's input `other_input`.
    ///
    /// For Alice this is `Σ_b p(ab|i j)` with `j = other_input`, for Bob
    /// `Σ_a p(ab|i j)` with `i = other_input`.
    pub fn marginal(&self, side: Party, other_input: usize) -> Result<Marginal> {
        let sc = self.scenario;
        match side {
            Party::Alice => {
                if other_input >= sc.mb {
                    return Err(Error::IndexOutOfRange {
                        what: "Bob input",
                        index: other_input,
                        limit: sc.mb,
                    });
                }
                let j = other_input;
                let mut values = vec![Rational::zero(); sc.ka * sc.ma];
                for i in 0..sc.ma {
                    for a in 0..sc.ka {
                        values[i * sc.ka + a] = (0..sc.kb).map(|b| self.get(a, b, i, j)).sum();
                    }
                }
                Ok(Marginal {
                    side,
                    outputs: sc.ka,
                    values,
                })
            }
            Party::Bob => {
                if other_input >= sc.ma {
                    return Err(Error::IndexOutOfRange {
                        what: "Alice input",
                        index: other_input,
                        limit: sc.ma,
                    });
                }
                let i = other_input;
                let mut values = vec![Rational::zero(); sc.kb * sc.mb];
                for j in 0..sc.mb {
                    for b in 0..sc.kb {
                        values[j * sc.kb + b] = (0..sc.ka).map(|a| self.get(a, b, i, j)).sum();
                    }
                }
                Ok(Marginal {
                    side,
                    outputs: sc.kb,
                    values,
                })
            }
        }
    }

    /// Whether each party's marginal is independent of the other's input.
    pub fn check_no_signaling(&self) -> NoSignaling {
        let sc = self.scenario;
        let alice0 = self.marginal(Party::Alice, 0).expect("input 0 exists");
        let bob0 = self.marginal(Party::Bob, 0).expect("input 0 exists");
        NoSignaling {
            alice_marginal_well_defined: (1..sc.mb)
                .all(|j| self.marginal(Party::Alice, j).expect("in range") == alice0),
            bob_marginal_well_defined: (1..sc.ma)
                .all(|i| self.marginal(Party::Bob, i).expect("in range") == bob0),
        }
    }

    /// Entrywise `Σ w_k t_k`.
    pub fn weighted_sum<'a>(
        scenario: Scenario,
        parts: impl IntoIterator<Item = (&'a Rational, &'a CorrelationTable)>,
    ) -> Result<CorrelationTable> {
        let mut out = CorrelationTable::zeros(scenario);
        for (w, t) in parts {
            if t.scenario != scenario {
                return Err(Error::ScenarioMismatch(format!(
                    "expected {scenario}, found {}",
                    t.scenario
                )));
            }
            for (o, x) in out.entries.iter_mut().zip(&t.entries) {
                if !x.is_zero() {
                    *o += w * x;
                }
            }
        }
        Ok(out)
    }

    /// Indices of nonzero entries.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, _)| k)
    }
}

/// Marginal distribution of one party, indexed by `(output, own input)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marginal {
    pub side: Party,
    outputs: usize,
    values: Vec<Rational>,
}

impl Marginal {
    pub fn get(&self, output: usize, input: usize) -> &Rational {
        &self.values[input * self.outputs + output]
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn inputs(&self) -> usize {
        self.values.len() / self.outputs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoSignaling {
    /// Alice's marginal does not depend on Bob's input.
    pub alice_marginal_well_defined: bool,
    /// Bob's marginal does not depend on Alice's input.
    pub bob_marginal_well_defined: bool,
}

impl NoSignaling {
    pub fn both(&self) -> bool {
        self.alice_marginal_well_defined && self.bob_marginal_well_defined
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NegativeEntry { a: usize, b: usize, i: usize, j: usize },
    SliceSum { i: usize, j: usize, sum: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeEntry { a, b, i, j } => {
                write!(f, "negative entry ({a},{b},{i},{j})")
            }
            Violation::SliceSum { i, j, sum } => {
                write!(f, "slice ({i},{j}) sums to {}", rational::to_text(sum))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}
