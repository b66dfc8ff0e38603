//! Exact polyhedral toolkit for bipartite correlations generated by local
//! shared randomness plus a bounded amount of classical communication.
//!
//! The crate is organised bottom-up:
//!
//! * [`table`] and [`coords`] hold correlation tables and their reduced
//!   coordinate charts,
//! * [`inequality`] holds integer Bell inequalities,
//! * [`strategies`] enumerates deterministic strategies and polytope vertices,
//! * [`polyhedra`] converts vertex lists to facets and answers membership
//!   queries with certificates,
//! * [`symmetry`] implements local relabelings and inequality classes,
//! * [`bounds`] covers the lower-bound witness and the simulation protocol,
//! * [`format`] reads and writes the plain-text file formats.
//!
//! All arithmetic is exact.

pub mod bounds;
pub mod coords;
pub mod error;
pub mod format;
pub mod inequality;
pub mod linalg;
pub mod polyhedra;
pub mod rational;
pub mod strategies;
pub mod symmetry;
pub mod table;

pub use coords::{Direction, ReducedPoint, Space};
pub use error::{Error, Result};
pub use inequality::{Evaluation, LinearEquation, LinearInequality};
pub use polyhedra::{HRep, MembershipResult, VRep};
pub use rational::Rational;
pub use strategies::{
    BidirCcStrategy, FixedCcStrategy, Grouping, LsrStrategy, Strategy, StrategyEnsemble,
};
pub use symmetry::LocalSymmetry;
pub use table::{CorrelationTable, Marginal, Party, Scenario};
