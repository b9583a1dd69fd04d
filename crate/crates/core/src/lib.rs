//! Numerical toolkit relating variance-based and entropic uncertainty relations.
//!
//! The crate reconstructs the outcome distribution of an observable from
//! variances of a commuting operator family or from covariances of its
//! Lagrange projectors, maps qubit variances to Rényi entropies and back,
//! and checks uncertainty relations by sampling and optimizing over states.
//!
//! ## Modules
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`linalg`] | complex matrices, Jacobi eigensolver, expectation values |
//! | [`states`] | pure/mixed states, seeded Haar and Hilbert–Schmidt samplers |
//! | [`observables`] | Born probabilities, variance, covariance, Lagrange projectors, spin operators |
//! | [`reconstruction`] | distributions from variances and covariances |
//! | [`entropy`] | Rényi entropies and variance ↔ entropy maps |
//! | [`relations`] | registry of uncertainty relations with structured reports |
//! | [`optimize`] | Nelder–Mead simplex minimizer |
//! | [`explorer`] | region sampling, multi-start minimization, violation scans |
//! | [`report`] | CSV/JSON output |
//! | [`cli`] | command-line front end |

pub mod cli;
pub mod entropy;
pub mod error;
pub mod explorer;
pub mod linalg;
pub mod observables;
pub mod optimize;
pub mod reconstruction;
pub mod relations;
pub mod report;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianOperator, C64};
pub use observables::{Observable, ProbDist};
pub use states::{DensityMatrix, StateVector};
