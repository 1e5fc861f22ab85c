//! Random walk with a slow barrier and its diffusive rescaling.

mod decompose;
mod exit;
mod walk;

pub use decompose::{decompose, modulus_of_continuity, occupation_until, Decomposition};
pub use exit::{
    crossing_geometric_param, exit_below_probability, expected_exit_time, simulate_exit, GeometricParam,
};
pub use walk::{jump_rates, simulate_walk, LatticeConfig, WalkPath, WalkStepper};
