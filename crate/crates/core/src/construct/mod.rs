//! Path constructions of the process and their crossing structure.

mod crossings;
mod samplers;

pub use crossings::{crossing_indices, crossing_times, local_time_increments, local_time_tail};
pub use samplers::{
    origin_mixture, sample_marginals, simulate_exact, simulate_flip, simulate_speed_scale, FlipStepper, Sampler,
    SidedPath, SpeedScaleStepper,
};
