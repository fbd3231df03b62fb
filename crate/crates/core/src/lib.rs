//! Closed-form quantum correlations of two coupled spins-1/2 driven by
//! time-dependent longitudinal fields.
//!
//! The pipeline: build an X-state ([`states`]), evolve it with the exact block
//! propagators ([`dynamics`]), and evaluate concurrence, mutual information,
//! classical correlations and discord in closed form ([`correlations`]).
//! [`oracles`] holds slow independent reference routines used for
//! cross-checking, and [`experiment`] the sweep and verification drivers.

// Validity checks are written as `!(x <= tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod matrix;
pub mod oracles;
pub mod states;

pub use correlations::{full_report, ClassicalCorrelations, CorrelationReport};
pub use dynamics::{
    evolve_xstate, evolved_mixture_closed_form, propagator, Block, CouplingConstants, Drive,
    PropagatorPair, ScenarioConfig,
};
pub use error::{Error, Result};
pub use matrix::{DensityMatrix, Mat2, Mat4, Subsystem, TwoQubitState, C64};
pub use states::{bell_mixture, BellMixture, BellState, BlochParams, MixtureKind, XState};
