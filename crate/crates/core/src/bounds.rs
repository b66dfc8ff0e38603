//! Communication lower bound for simulating no-signaling tables, and the
//! matching simulation protocol.
//!
//! The witness table `p̂` is perfectly correlated everywhere except on the
//! diagonal inputs `1 ≤ i = j < mB`, where it is perfectly anti-correlated.
//! A deterministic two-way strategy with fewer than `⌈log₂ mB⌉` bits always
//! puts mass on a zero of `p̂`, and [`certificate_triple`] names the three
//! inputs exhibiting this.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::coords::{project, Direction, Space};
use crate::error::{Error, Result};
use crate::inequality::LinearInequality;
use crate::polyhedra::{membership, MembershipResult, VRep};
use crate::rational::{half, Rational};
use crate::strategies::{
    all_bidir_strategies, bidir_strategy_count, ceil_log2, enumerate_bidir_cc_vertices, BidirCcStrategy,
    FixedCcStrategy, Strategy, StrategyEnsemble,
};
use crate::table::{CorrelationTable, Party, Scenario};

/// Largest number of raw strategies [`lower_bound_report`] will check one
/// by one.
pub const MAX_EXHAUSTIVE_STRATEGIES: u128 = 1 << 24;

/// Number of sample refutations kept in a report.
pub const MAX_CERTIFICATE_EXAMPLES: usize = 10;

/// Three distinct inputs with `κ(t0) = κ(t2)` and `σ(t1) = σ(t2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CertificateTriple {
    pub t0: usize,
    pub t1: usize,
    pub t2: usize,
}

/// A zero entry `p(ab|ij) = 0` of the witness table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroConstraint {
    pub a: usize,
    pub b: usize,
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for ZeroConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p({}{}|{}{}) = 0", self.a, self.b, self.i, self.j)
    }
}

/// The witness table on `mA × mB` inputs with binary outputs.
pub fn hat_distribution(ma: usize, mb: usize) -> Result<CorrelationTable> {
    if ma < mb {
        return Err(Error::Precondition(format!(
            "witness table needs mA >= mB, got mA={ma} mB={mb}"
        )));
    }
    let sc = Scenario::binary(ma, mb)?;
    let h = half();
    Ok(CorrelationTable::from_fn(sc, |a, b, i, j| {
        let support = if i >= mb {
            a == 0
        } else if i > 0 && i == j {
            a != b
        } else {
            a == b
        };
        if support {
            h.clone()
        } else {
            Rational::zero()
        }
    }))
}

/// Finds the triple of the counting argument: inside a largest fiber of
/// `κ` (restricted to the first `mB` inputs) either two elements share a
/// `σ` value, or `σ` is constant. `t2` is never 0.
pub fn certificate_triple(
    kappa: &[usize],
    sigma: &[usize],
    mb: usize,
    r_bits: u32,
    s_bits: u32,
) -> Result<CertificateTriple> {
    if s_bits > r_bits || r_bits >= usize::BITS || (1usize << r_bits) >= mb {
        return Err(Error::Precondition(format!(
            "no triple guaranteed for mB={mb}, r={r_bits}, s={s_bits}"
        )));
    }
    if kappa.len() < mb || sigma.len() < mb {
        return Err(Error::Precondition(format!(
            "kappa and sigma must be defined on at least {mb} inputs"
        )));
    }
    let fibers = (0..mb).into_group_map_by(|&t| kappa[t]);
    let largest = fibers
        .into_iter()
        .sorted_by_key(|(x, _)| *x)
        .max_by_key(|(x, f)| (f.len(), std::cmp::Reverse(*x)))
        .map(|(_, f)| f)
        .expect("mB >= 2");

    let triple = if r_bits == s_bits {
        let (t0, t2) = (largest[0], largest[1]);
        let t1 = (0..mb).find(|t| *t != t0 && *t != t2).expect("mB >= 3");
        CertificateTriple { t0, t1, t2 }
    } else {
        let (t1, t2) = largest
            .iter()
            .tuple_combinations()
            .find(|(x, y)| sigma[**x] == sigma[**y])
            .map(|(x, y)| (*x, *y))
            .ok_or_else(|| Error::Internal("pigeonhole failed in the largest fiber".into()))?;
        let t0 = *largest
            .iter()
            .find(|t| **t != t1 && **t != t2)
            .ok_or_else(|| Error::Internal("largest fiber has fewer than three inputs".into()))?;
        CertificateTriple { t0, t1, t2 }
    };

    let CertificateTriple { t0, t1, t2 } = triple;
    let ok = t0 != t1
        && t1 != t2
        && t0 != t2
        && t2 != 0
        && kappa[t0] == kappa[t2]
        && sigma[t1] == sigma[t2];
    if !ok {
        return Err(Error::Internal(format!("bad certificate triple {triple:?}")));
    }
    Ok(triple)
}

/// The eight zeros of `p̂` on the inputs `{t0, t2} × {t1, t2}`.
pub fn zero_constraints(t: &CertificateTriple) -> [ZeroConstraint; 8] {
    let z = |a, b, i, j| ZeroConstraint { a, b, i, j };
    let CertificateTriple { t0, t1, t2 } = *t;
    [
        z(0, 1, t0, t1),
        z(1, 0, t0, t1),
        z(0, 1, t0, t2),
        z(1, 0, t0, t2),
        z(0, 1, t2, t1),
        z(1, 0, t2, t1),
        z(0, 0, t2, t2),
        z(1, 1, t2, t2),
    ]
}

/// Which of the eight zeros the deterministic strategy puts mass on.
pub fn zero_violations(s: &BidirCcStrategy, t: &CertificateTriple) -> Vec<ZeroConstraint> {
    let strategy = Strategy::Bidir(s.clone());
    zero_constraints(t)
        .into_iter()
        .filter(|c| strategy.outputs(c.i, c.j) == (c.a, c.b))
        .collect()
}

/// Whether every outcome of `s` has positive probability under `hat`.
pub fn strategy_consistent_with_hat(s: &BidirCcStrategy, hat: &CorrelationTable) -> Result<bool> {
    if s.scenario != hat.scenario() {
        return Err(Error::ScenarioMismatch(format!(
            "strategy on {} but table on {}",
            s.scenario,
            hat.scenario()
        )));
    }
    s.validate()?;
    let sc = s.scenario;
    let strategy = Strategy::Bidir(s.clone());
    Ok((0..sc.ma).all(|i| {
        (0..sc.mb).all(|j| {
            let (a, b) = strategy.outputs(i, j);
            hat.get(a, b, i, j).is_positive()
        })
    }))
}

/// Exact finite form of the simulation protocol: the sender announces its
/// input, both parties read the sender's output from shared randomness
/// distributed as its marginal, and the receiver samples from the
/// conditional distribution. Bob sends when `mA ≥ mB`, otherwise Alice.
///
/// Only branches of positive probability are listed. The result is
/// checked to reproduce `t` exactly.
pub fn bacon_toner_ensemble(t: &CorrelationTable) -> Result<StrategyEnsemble> {
    if let Some(v) = t.validate().violations.first() {
        return Err(Error::Precondition(format!("not a correlation table: {v}")));
    }
    let ns = t.check_no_signaling();
    if !ns.both() {
        return Err(Error::Signaling(
            "the simulation protocol needs a no-signaling table".into(),
        ));
    }
    let sc = t.scenario();
    let sender = if sc.ma >= sc.mb { Party::Bob } else { Party::Alice };
    // p(r s | x y) with r the receiver output, s the sender output, x the
    // receiver input and y the sender input
    let (mr, kr, ms, ks) = match sender {
        Party::Bob => (sc.ma, sc.ka, sc.mb, sc.kb),
        Party::Alice => (sc.mb, sc.kb, sc.ma, sc.ka),
    };
    let p = |r: usize, s: usize, x: usize, y: usize| -> &Rational {
        match sender {
            Party::Bob => t.get(r, s, x, y),
            Party::Alice => t.get(s, r, y, x),
        }
    };
    let sender_marginal = t.marginal(sender, 0)?;

    let sender_choices: Vec<Vec<usize>> = (0..ms)
        .map(|y| (0..ks).filter(|&s| sender_marginal.get(s, y).is_positive()).collect())
        .collect();

    let mut entries = Vec::new();
    for outs in sender_choices.iter().multi_cartesian_product() {
        let outs: Vec<usize> = outs.into_iter().copied().collect();
        let base: Rational = (0..ms).map(|y| sender_marginal.get(outs[y], y).clone()).product();
        // receiver choices per (x, y), with their conditional probabilities
        let cells: Vec<Vec<(usize, Rational)>> = (0..mr)
            .cartesian_product(0..ms)
            .map(|(x, y)| {
                let q = sender_marginal.get(outs[y], y);
                (0..kr)
                    .filter_map(|r| {
                        let v = p(r, outs[y], x, y);
                        v.is_positive().then(|| (r, v / q))
                    })
                    .collect()
            })
            .collect();
        for choice in cells.iter().multi_cartesian_product() {
            let weight = choice.iter().fold(base.clone(), |w, (_, c)| w * c);
            let receiver_output: Vec<Vec<usize>> = choice
                .iter()
                .map(|(r, _)| *r)
                .collect::<Vec<_>>()
                .chunks(ms)
                .map(<[usize]>::to_vec)
                .collect();
            entries.push((
                weight,
                Strategy::Fixed(FixedCcStrategy {
                    scenario: sc,
                    direction: match sender {
                        Party::Bob => Direction::BobToAlice,
                        Party::Alice => Direction::AliceToBob,
                    },
                    alphabet: ms,
                    kappa: (0..ms).collect(),
                    sender_output: outs.clone(),
                    receiver_output,
                }),
            ));
        }
    }
    let ensemble = StrategyEnsemble::new(entries)?;
    if ensemble.to_table() != *t {
        return Err(Error::Internal("simulation ensemble does not reproduce the table".into()));
    }
    Ok(ensemble)
}

/// Bits used by [`bacon_toner_ensemble`] on this scenario.
pub fn simulation_bits(sc: &Scenario) -> u32 {
    ceil_log2(sc.ma.min(sc.mb))
}

/// One deterministic strategy and a zero of `p̂` it violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateExample {
    pub strategy: BidirCcStrategy,
    pub triple: CertificateTriple,
    pub violated: ZeroConstraint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundReport {
    /// Scenario the witness lives on (`mA ≥ mB`).
    pub scenario: Scenario,
    pub r_bits: u32,
    /// Whether the parties were exchanged to reach `mA ≥ mB`.
    pub swapped: bool,
    /// `None` when there are too many strategies to check one by one.
    pub exhaustive_refuted: Option<bool>,
    pub strategies_checked: u128,
    pub lp_outside: bool,
    /// Valid for every vertex, violated by the witness.
    pub separator: Option<LinearInequality>,
    pub certificate_examples: Vec<CertificateExample>,
}

impl LowerBoundReport {
    /// Both methods ran and reached the same verdict.
    pub fn consistent(&self) -> bool {
        self.exhaustive_refuted.is_none_or(|e| e == self.lp_outside)
    }
}

/// Decides whether `p̂` on `mA × mB` inputs can be simulated with `r` bits
/// of two-way communication, once by checking every deterministic strategy
/// against the zeros of `p̂` and once by an exact membership test.
pub fn lower_bound_report(ma: usize, mb: usize, r_bits: u32) -> Result<LowerBoundReport> {
    let swapped = ma < mb;
    let (ma, mb) = if swapped { (mb, ma) } else { (ma, mb) };
    let hat = hat_distribution(ma, mb)?;
    let sc = hat.scenario();

    let count = bidir_strategy_count(sc, r_bits).filter(|&n| n <= MAX_EXHAUSTIVE_STRATEGIES);
    let exhaustive_refuted = count.map(|_| {
        !all_bidir_strategies(sc, r_bits)
            .par_bridge()
            .any(|s| strategy_consistent_with_hat(&s, &hat).unwrap_or(false))
    });

    let mut certificate_examples = Vec::new();
    if (1usize << r_bits.min(usize::BITS - 1)) < mb {
        for s in all_bidir_strategies(sc, r_bits).take(MAX_CERTIFICATE_EXAMPLES) {
            let triple = certificate_triple(&s.kappa, &s.sigma, mb, r_bits, s.s_bits)?;
            let violated = *zero_violations(&s, &triple)
                .first()
                .ok_or_else(|| Error::Internal("strategy satisfies all eight zeros".into()))?;
            certificate_examples.push(CertificateExample {
                strategy: s,
                triple,
                violated,
            });
        }
    }

    let vertices = enumerate_bidir_cc_vertices(sc, r_bits)?;
    let vrep = VRep::from_points(vertices.into_iter().map(|p| p.coords).collect())?;
    let point = project(Space::Bidir, &hat)?;
    let (lp_outside, separator) = match membership(&point.coords, &vrep)? {
        MembershipResult::Inside { .. } => (false, None),
        MembershipResult::Outside { separator } => (true, Some(separator)),
    };

    Ok(LowerBoundReport {
        scenario: sc,
        r_bits,
        swapped,
        exhaustive_refuted,
        strategies_checked: count.unwrap_or(0),
        lp_outside,
        separator,
        certificate_examples,
    })
}

/// Sum of `weight · table` over the ensemble members minus `t`, which is
/// zero exactly when the ensemble reproduces `t`.
pub fn reconstruction_error(e: &StrategyEnsemble, t: &CorrelationTable) -> Vec<Rational> {
    e.to_table()
        .entries()
        .iter()
        .zip(t.entries())
        .map(|(x, y)| x - y)
        .collect()
}

/// Whether all weights are positive and sum to one.
pub fn weights_are_distribution(e: &StrategyEnsemble) -> bool {
    let total: Rational = e.entries().iter().map(|(w, _)| w.clone()).sum();
    total.is_one() && e.entries().iter().all(|(w, _)| w.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn hat_slices() {
        let h = hat_distribution(3, 3).unwrap();
        assert_eq!(*h.get(0, 1, 1, 1), half());
        assert_eq!(*h.get(1, 0, 1, 1), half());
        assert_eq!(*h.get(0, 0, 1, 0), half());
        assert_eq!(*h.get(1, 1, 1, 0), half());
        assert_eq!(*h.get(0, 0, 0, 0), half());
        assert!(h.check_no_signaling().both());
        assert!(h.is_valid());

        let h = hat_distribution(2, 2).unwrap();
        let anti: Vec<(usize, usize)> = (0..2)
            .cartesian_product(0..2)
            .filter(|&(i, j)| h.get(0, 1, i, j).is_positive())
            .collect();
        assert_eq!(anti, vec![(1, 1)]);

        let h = hat_distribution(4, 2).unwrap();
        for i in 2..4 {
            for j in 0..2 {
                assert_eq!(*h.get(0, 0, i, j), half());
                assert_eq!(*h.get(0, 1, i, j), half());
            }
        }
        assert!(h.check_no_signaling().both());
        assert!(hat_distribution(2, 3).is_err());
    }

    #[test]
    fn alice_marginal_of_hat_is_uniform() {
        let h = hat_distribution(3, 3).unwrap();
        for j in 0..3 {
            let m = h.marginal(Party::Alice, j).unwrap();
            for i in 0..3 {
                assert_eq!(*m.get(0, i), half());
                assert_eq!(*m.get(1, i), half());
            }
        }
    }

    #[test]
    fn triple_examples() {
        let t = certificate_triple(&[0, 1, 0], &[0, 0, 0], 3, 1, 1).unwrap();
        assert_eq!(t, CertificateTriple { t0: 0, t1: 1, t2: 2 });

        let t = certificate_triple(&[0, 0, 1, 1], &[0, 0, 0, 0], 4, 1, 1).unwrap();
        assert!([0, 1].contains(&t.t0) && [0, 1].contains(&t.t2));

        // one bit from Bob: κ constant, any σ
        for bits in 0..8usize {
            let sigma: Vec<usize> = (0..3).map(|k| (bits >> k) & 1).collect();
            let t = certificate_triple(&[0, 0, 0], &sigma, 3, 1, 0).unwrap();
            assert_eq!(sigma[t.t1], sigma[t.t2]);
        }
        assert!(certificate_triple(&[0, 1], &[0, 0], 2, 1, 1).is_err());
        assert!(certificate_triple(&[0, 0, 0], &[0, 0, 0], 3, 0, 1).is_err());
    }

    #[test]
    fn every_short_strategy_violates_a_zero() {
        let sc = Scenario::binary(3, 3).unwrap();
        let hat = hat_distribution(3, 3).unwrap();
        for s in all_bidir_strategies(sc, 1) {
            let t = certificate_triple(&s.kappa, &s.sigma, 3, 1, s.s_bits).unwrap();
            let v = zero_violations(&s, &t);
            assert!(!v.is_empty());
            for c in v {
                assert!(hat.get(c.a, c.b, c.i, c.j).is_zero());
            }
            assert!(!strategy_consistent_with_hat(&s, &hat).unwrap());
        }
    }

    #[test]
    fn mass_on_a_zero_is_inconsistent() {
        let sc = Scenario::binary(3, 3).unwrap();
        let hat = hat_distribution(3, 3).unwrap();
        // Alice always 0, Bob always 1: p(01|01) = 1 but p̂(01|01) = 0
        let s = BidirCcStrategy {
            scenario: sc,
            s_bits: 0,
            r_bits: 1,
            kappa: vec![0; 3],
            sigma: vec![0; 3],
            alice_output: vec![vec![0, 0]; 3],
            bob_output: vec![vec![1]; 3],
        };
        assert!(!strategy_consistent_with_hat(&s, &hat).unwrap());
    }

    #[test]
    fn ensemble_members_are_consistent_with_hat() {
        let hat = hat_distribution(2, 2).unwrap();
        let e = bacon_toner_ensemble(&hat).unwrap();
        for (_, s) in e.entries() {
            let Strategy::Fixed(f) = s else { panic!() };
            assert_eq!(f.direction, Direction::BobToAlice);
            // as a two-way strategy with Bob sending one bit
            let b = BidirCcStrategy {
                scenario: f.scenario,
                s_bits: 0,
                r_bits: 1,
                kappa: vec![0; 2],
                sigma: f.kappa.clone(),
                alice_output: f.receiver_output.clone(),
                bob_output: f.sender_output.iter().map(|&b| vec![b]).collect(),
            };
            assert!(strategy_consistent_with_hat(&b, &hat).unwrap());
        }
    }

    #[test]
    fn pr_box_needs_one_bit() {
        let sc = Scenario::binary(2, 2).unwrap();
        let pr = CorrelationTable::from_fn(sc, |a, b, i, j| {
            if (a ^ b) == (i & j) {
                half()
            } else {
                int(0)
            }
        });
        let e = bacon_toner_ensemble(&pr).unwrap();
        assert_eq!(e.bit_cost(), 1);
        assert_eq!(e.to_table(), pr);
        assert!(weights_are_distribution(&e));
        assert!(reconstruction_error(&e, &pr).iter().all(Zero::is_zero));
    }

    #[test]
    fn deterministic_table_gives_single_member() {
        let sc = Scenario::binary(3, 2).unwrap();
        let t = CorrelationTable::deterministic(sc, |i, _| i % 2, |_, j| 1 - j);
        let e = bacon_toner_ensemble(&t).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.entries()[0].0, int(1));
    }

    #[test]
    fn hat_three_needs_two_bits() {
        let hat = hat_distribution(3, 3).unwrap();
        let e = bacon_toner_ensemble(&hat).unwrap();
        assert_eq!(e.bit_cost(), 2);
        assert_eq!(e.to_table(), hat);
    }

    #[test]
    fn fewer_alice_inputs_swaps_sender() {
        let sc = Scenario::binary(1, 3).unwrap();
        let t = CorrelationTable::from_fn(sc, |a, b, _, j| match (a, b, j) {
            (0, 0, 0) => frac(1, 3),
            (1, 1, 0) => frac(2, 3),
            (0, _, 1) => frac(1, 6),
            (1, _, 1) => frac(1, 3),
            (0, 0, 2) => frac(1, 3),
            (1, 0, 2) => frac(2, 3),
            _ => int(0),
        });
        assert!(t.is_valid() && t.check_no_signaling().both());
        let e = bacon_toner_ensemble(&t).unwrap();
        assert_eq!(e.bit_cost(), 0);
        assert_eq!(e.to_table(), t);
    }

    #[test]
    fn signaling_table_rejected() {
        let sc = Scenario::binary(2, 2).unwrap();
        let t = CorrelationTable::deterministic(sc, |_, j| j, |i, _| i);
        assert!(matches!(bacon_toner_ensemble(&t), Err(Error::Signaling(_))));
    }

    #[test]
    fn lower_bound_small_cases() {
        let r = lower_bound_report(2, 2, 1).unwrap();
        assert_eq!(r.exhaustive_refuted, Some(false));
        assert!(!r.lp_outside);
        assert!(r.certificate_examples.is_empty());

        let r = lower_bound_report(3, 3, 1).unwrap();
        assert_eq!(r.exhaustive_refuted, Some(true));
        assert!(r.lp_outside);
        assert_eq!(r.strategies_checked, 8192);
        assert_eq!(r.certificate_examples.len(), MAX_CERTIFICATE_EXAMPLES);
        assert!(r.consistent());
    }
}
