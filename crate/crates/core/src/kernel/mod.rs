//! Closed-form transition kernel, resolvent and generator.

mod density;
mod generator;
pub mod quad;
mod resolvent;
pub mod special;

pub use density::{
    barrier_integral, crossing_probability, hitting_prob, sample_transition, transition_cdf,
    transition_density, DensityQuery,
};
pub use generator::{generator_apply, TestFunction};
pub use resolvent::{resolvent_solve, HalfLineGrid, ResolventSolution};
