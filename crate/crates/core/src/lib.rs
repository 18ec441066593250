//! # dg-gauge
//!
//! Nonlinear gauge transformations of an eight-parameter family of nonlinear
//! Schrodinger equations whose nonlinearities are quotients of the density,
//! the probability current and their derivatives.
//!
//! - [`fields`]: states on a periodic grid, density, current, unwrapped phase
//!   and spectral derivatives.
//! - [`functionals`]: the quotient functionals `R_1 .. R_5`.
//! - [`gauge`]: the transformations `N(lambda, gamma)`, their group law and
//!   their action on states, currents and family parameters.
//! - [`family`]: family coefficients, gauge invariants, leaves and the
//!   linearizability classifier.
//! - [`evolve`]: RK4 time integration with residual, continuity and
//!   commuting-diagram diagnostics.
//! - [`sample`]: seeded random states, gauge elements and parameter sets.
//! - [`cli`]: JSON-configured experiment runner behind the `dg-gauge` binary.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod evolve;
pub mod family;
pub mod fields;
pub mod functionals;
pub mod gauge;
pub mod sample;

pub use error::{Error, Result};
pub use family::{DgParams, EhrenfestParams, FamilyParams, InvariantTuple, LinearizationResult};
pub use fields::{Grid, Potential, ScalarField, VectorField, Wavefunction, ZeroFloor};
pub use gauge::GaugeElement;
