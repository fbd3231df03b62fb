//! Slow, independent reference computations.
//!
//! Nothing in the closed-form path calls into this module. The routines here
//! share only the matrix primitives with it, so agreement between the two is
//! meaningful evidence.

mod discord;
mod ode;
mod wootters;

pub use discord::{
    conditional_entropy_measured, conditional_entropy_measured_on, discord_bruteforce,
    DiscordOptions, MeasurementBasis, OUTCOME_PROBABILITY_FLOOR,
};
pub use ode::{ode_propagate, ode_trajectory, OdeSettings};
pub use wootters::{wootters_concurrence, WOOTTERS_NEGATIVE_TOL};
