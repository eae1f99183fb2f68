//! Accelerated first-order methods (GM, FGM, OGM and their proximal
//! counterparts) with adaptive restart, plus a spectral analyzer for
//! constant-coefficient iterations on strongly convex quadratics.
//!
//! The crate is organized bottom-up:
//!
//! - [`oracles`]: smooth and proximable function abstractions and the seeded
//!   test-problem generators.
//! - [`schedules`]: per-iteration `(alpha, beta, gamma)` coefficients for each
//!   named method.
//! - [`analysis`]: characteristic roots, spectral radii, optimal coefficients
//!   and a per-eigenmode simulator.
//! - [`engine`]: the iteration loops (plain, adaptive restart with decreasing
//!   over-relaxation, fixed restart, proximal variants) and their traces.
//! - [`experiments`]: the experiment catalog behind the `ogmr` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::collapsible_match)]

pub mod analysis;
pub mod engine;
mod error;
pub mod experiments;
pub mod oracles;
pub mod schedules;

pub use error::{Error, Result};

/// Dense column vector used throughout the crate.
pub type Vector = nalgebra::DVector<f64>;
/// Dense matrix used throughout the crate.
pub type Matrix = nalgebra::DMatrix<f64>;
