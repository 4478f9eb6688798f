//! Coarse Nash bargaining solutions.
//!
//! A bargaining problem is the comprehensive hull of finitely many positive
//! utility vectors. An [`ImprovingSet`] `A` in log-utility space defines a
//! dominance relation, and the coarse Nash solution keeps every candidate
//! that no other candidate dominates. Half-spaces give weighted Nash, the
//! positive orthant gives weak Pareto.
//!
//! Beyond the solvers the crate checks choice axioms on sampled problems
//! ([`axioms`]), finds weights whose half-space contains an improving set
//! ([`separation`]), and rebuilds the improving set from any solution's
//! pairwise choices ([`revealed`]).
//!
//! ```
//! use coarse_nash::{solver, BargainingProblem, ImprovingSet};
//!
//! let s = BargainingProblem::from_rows("S", &[&[1.0, 2.0], &[2.0, 1.0], &[1.5, 1.5]])?;
//! let f = solver::coarse_nash(&ImprovingSet::nash_threshold(0.3)?, &s)?;
//! assert_eq!(f.chosen().len(), 3);
//! assert_eq!(solver::nash(&s)?.chosen().len(), 1);
//! # Ok::<(), coarse_nash::Error>(())
//! ```

pub mod axioms;
pub mod error;
pub mod files;
pub mod improving;
pub mod model;
pub mod revealed;
pub mod rules;
pub mod sampling;
pub mod separation;
pub mod solver;

pub use axioms::{Axiom, AxiomVerdict, Profile, Status, SuiteConfig, Witness};
pub use error::{Error, Result};
pub use improving::{CustomSet, ImprovingSet, LogVector, WeightVector};
pub use model::{BargainingProblem, Permutation, SolutionSet, UtilityVector};
pub use rules::{AdversarialRule, Solution, SolutionRule};
