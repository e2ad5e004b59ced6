//! Algebraic semantics of finite-group quantum query algorithms.
//!
//! This crate evaluates the string-diagrammatic presentation of three
//! query algorithms (Deutsch-Jozsa, single-shot Grover, and the hidden
//! subgroup problem) into dense complex linear algebra, and makes every
//! algebraic law that presentation relies on numerically checkable at
//! desk scale: classical structures on finite sets, linearized set
//! functions, finite groups by Cayley table, unitary irreducible
//! representations, and the normalization and decomposition identities
//! connecting them.
//!
//! Modules:
//! - [`linalg`]: dense complex maps, tensor/compose/adjoint/trace, names.
//! - [`setalg`]: copy/delete/multiply/unit for a finite set, spiders,
//!   linearization of functions.
//! - [`groupalg`]: finite groups as Cayley tables, subgroups, quotients.
//! - [`repr`]: unitary representations, irrep decomposition of the
//!   regular representation, verification identities, projector states.
//! - [`tensornet`]: an s-expression diagram DSL and its evaluator.
//! - [`algorithms`]: exact state-vector runs of the three protocols and
//!   their generalized forms, plus the classical predicates they answer.
//!
//! The core is generic over the real scalar ([`Scalar`]); `f64` aliases
//! for the main types are exported at the crate root and are what the
//! command-line front end and the test suite use.

pub mod algorithms;
pub mod eigen;
pub mod groupalg;
pub mod linalg;
pub mod repr;
pub mod scalar;
pub mod setalg;
pub mod tensornet;

pub use linalg::{LinalgError, LinearMap};
pub use scalar::Scalar;

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;

/// Double-precision linear map, the working type of the shipped tools.
pub type LinearMap64 = LinearMap<f64>;

/// Double-precision distribution over measurement outcomes.
pub type Distribution64 = algorithms::Distribution<f64>;

/// Double-precision unitary representation.
pub type Representation64 = repr::Representation<f64>;

/// Double-precision complete set of irreducible representations.
pub type IrrepSet64 = repr::IrrepSet<f64>;
