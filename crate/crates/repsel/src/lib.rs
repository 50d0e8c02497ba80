//! Expected voting weights and representation axioms for representative-body
//! selection mechanisms.
//!
//! A group of `n` agents is described by a row-stochastic *representation
//! matrix*: entry `(i, j)` is the probability that agent `i` votes for agent
//! `j`. Starting from such a matrix, this crate computes the expected voting
//! weight every agent receives under five selection mechanisms — direct
//! democracy, single-winner first-past-the-post, proxy voting, liquid
//! democracy (transitive delegations), and sortition — either exactly, by
//! enumerating the product distribution of votes with arbitrary-precision
//! rationals, or approximately, by seeded Monte Carlo sampling.
//!
//! On top of the mechanism outputs it evaluates five representation axioms:
//! ε-proportionality (with best/worst-case sweeps over candidate sets),
//! diversity, monotonicity, faithfulness, and γ-effectiveness.
//!
//! ```
//! use repsel::generators::running_example;
//! use repsel::mechanisms::{self, MechanismSpec};
//!
//! let gamma = running_example();
//! let spec = MechanismSpec::liquid();
//! let weights = mechanisms::evaluate(&gamma, &spec, mechanisms::default_guard()).unwrap();
//! assert_eq!(weights.to_rationals()[0], repsel::rational::ratio(89, 45));
//! ```
//!
//! The `repsel` binary exposes the same functionality as subcommands
//! (`evaluate`, `axioms`, `sweep`, `generate`, `check-monotonicity`,
//! `search-mono`, `reproduce-paper`); the crate's `examples/` directory has
//! one runnable program per capability.

pub mod axioms;
pub mod cli;
pub mod generators;
pub mod io;
pub mod matrix;
pub mod mechanisms;
pub mod rational;
pub mod report;
pub mod reproduction;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

pub use matrix::{CandidateSet, Fallback, ProjectedMatrix, RepresentationMatrix, VoteShareVector};
pub use mechanisms::{ExpectedWeightVector, MechanismKind, MechanismSpec, Method, TieRule};
