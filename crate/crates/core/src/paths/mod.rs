//! Brownian path generation, reflection maps and random streams.

mod brownian;
mod reflection;
mod rng;

pub use brownian::{reflected_bm_with_local_time, simulate_bm, ReflectedStepper};
pub use reflection::{skorokhod_map, two_sided_regulator};
pub use rng::{derive_seed, RngStream};
