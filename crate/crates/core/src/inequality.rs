//! Integer linear inequalities `coeffs·x ≤ bound` and equations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::coords::{Direction, Space};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::table::Scenario;

/// `coeffs·x ≤ bound`, stored divided by the positive gcd of all entries.
///
/// Only a positive factor can be removed without changing the half-space,
/// so the sign of the stored form is the sign it was constructed with.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearInequality {
    coeffs: Vec<BigInt>,
    bound: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Rational,
    pub satisfied: bool,
    pub tight: bool,
}

fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

impl LinearInequality {
    pub fn new(coeffs: Vec<BigInt>, bound: BigInt) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::ZeroInequality);
        }
        let mut q = LinearInequality { coeffs, bound };
        q.normalize();
        Ok(q)
    }

    pub fn from_i64(coeffs: &[i64], bound: i64) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), bound.into())
    }

    fn normalize(&mut self) {
        let g = gcd_all(self.coeffs.iter().chain(std::iter::once(&self.bound)));
        if g > BigInt::from(1) {
            for c in &mut self.coeffs {
                *c /= &g;
            }
            self.bound /= &g;
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn bound(&self) -> &BigInt {
        &self.bound
    }

    pub fn dimension(&self) -> usize {
        self.coeffs.len()
    }

    pub fn value(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                found: x.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(x)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| v * c)
            .sum())
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Evaluation> {
        let value = self.value(x)?;
        let bound = Rational::from_integer(self.bound.clone());
        Ok(Evaluation {
            satisfied: value <= bound,
            tight: value == bound,
            value,
        })
    }

    /// Renders the coefficients as a chart of `rows` followed by `≤ bound`.
    ///
    /// Fixed Alice→Bob inequalities use the layout with one `q_A` row, then
    /// `mB` rows of `p(00|ij)` and `mB` rows of `p(10|ij)` (row `j`, column
    /// `i`). Other spaces fall back to three `p` blocks or a single row.
    pub fn chart(&self, space: Space, sc: &Scenario) -> String {
        let (ma, mb) = (sc.ma, sc.mb);
        let (width, groups): (usize, Vec<usize>) = match space {
            Space::Fixed(Direction::AliceToBob) => (ma, vec![1, mb, mb]),
            Space::Fixed(Direction::BobToAlice) => (mb, vec![1, ma, ma]),
            Space::Bidir => (ma, vec![mb, mb, mb]),
        };
        let cells: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        let w = cells.iter().map(String::len).max().unwrap_or(1).max(2);
        let mut out = String::new();
        let mut row = 0;
        let rule = "-".repeat((w + 1) * width + 1);
        for (g, &rows) in groups.iter().enumerate() {
            if g > 0 {
                out.push_str(&rule);
                out.push('\n');
            }
            for _ in 0..rows {
                for c in &cells[row * width..(row + 1) * width] {
                    out.push_str(&format!(" {c:>w$}"));
                }
                row += 1;
                if row * width == cells.len() {
                    out.push_str(&format!("  <= {}", self.bound));
                }
                out.push('\n');
            }
        }
        out
    }
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.coeffs {
            write!(f, "{c} ")?;
        }
        write!(f, "<= {}", self.bound)
    }
}

/// `coeffs·x = rhs`, divided by the gcd and signed so that the first
/// nonzero coefficient is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearEquation {
    coeffs: Vec<BigInt>,
    rhs: BigInt,
}

impl LinearEquation {
    pub fn new(coeffs: Vec<BigInt>, rhs: BigInt) -> Result<Self> {
        let Some(first) = coeffs.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::ZeroInequality);
        };
        let mut g = gcd_all(coeffs.iter().chain(std::iter::once(&rhs)));
        if first.is_negative() {
            g = -g;
        }
        Ok(LinearEquation {
            coeffs: coeffs.into_iter().map(|c| c / &g).collect(),
            rhs: rhs / &g,
        })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn rhs(&self) -> &BigInt {
        &self.rhs
    }

    pub fn holds(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                found: x.len(),
            });
        }
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(c, v)| v * c).sum();
        Ok(lhs == Rational::from_integer(self.rhs.clone()))
    }
}

impl fmt::Display for LinearEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.coeffs {
            write!(f, "{c} ")?;
        }
        write!(f, "= {}", self.rhs)
    }
}
