//! Dequantized dynamics of a trapped ion in quadrupole and octupole
//! combined (Paul + Penning) and RF traps.
//!
//! The pipeline runs from squeezed SU(1,1) coherent states to classical
//! Hamilton functions on the Poincaré disk, their equations of motion,
//! equilibrium configurations and the Floquet quasienergy spectrum.

pub mod algebra;
pub mod cli;
pub mod coherent;
pub mod config;
pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod floquet;
pub mod linalg;
pub mod ode;
pub mod trap;
pub mod verify;

pub use error::{Error, Result};
