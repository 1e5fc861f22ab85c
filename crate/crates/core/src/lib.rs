//! Partially reflected Brownian motion on the doubled real line.
//!
//! The process lives on two copies of the half line glued at a semi-permeable
//! origin with permeability `gamma`. This crate provides the transition kernel,
//! three path samplers, the lattice walk approximation, a finite-difference
//! solver for the forward equation, and the statistical checks that tie them
//! together.

pub mod construct;
pub mod ensemble;
pub mod error;
pub mod kernel;
pub mod lattice;
pub mod line;
pub mod paths;
pub mod pde;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use line::{dotted_distance, scale_r, scale_r_inv, Path, Permeability, PrbmParams, Side, SidedReal};
