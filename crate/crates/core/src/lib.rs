//! Decision-tree recognizers over finite pattern universes.
//!
//! The crate builds wildcard-defined pattern universes, runs binary
//! decision-tree recognizers over them, and compares recognizers by how many
//! patterns each recognizes strictly faster. That relation is not transitive:
//! [`verify::verify_theorem1`] checks a three-recognizer cycle on a
//! 25-pattern universe together with an exhaustive search showing that no
//! correct reduced tree beats one of the three without losing to another,
//! and [`verify::verify_theorem2`] checks an `n`-recognizer cycle for any
//! `n ≥ 3`.
//!
//! ```
//! use nontrans_core::patterns::theorem1_universe;
//! use nontrans_core::recognizers::builtin;
//! use nontrans_core::tournament::pairwise_wins;
//!
//! let u = theorem1_universe();
//! let wins = pairwise_wins(&builtin::algorithm_a(), &builtin::algorithm_b(), &u).unwrap();
//! assert_eq!(wins, (16, 8));
//! ```

pub mod adversary;
pub mod error;
pub mod patterns;
pub mod recognizers;
pub mod simulation;
pub mod tournament;
pub mod verify;

pub use error::{Error, Result};
pub use patterns::{Pattern, Template, Universe};
pub use recognizers::DecisionTree;
