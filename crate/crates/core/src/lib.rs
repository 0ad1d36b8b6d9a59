//! Planetary orbits around the interstellar axis of a circular binary.
//!
//! The crate covers the motionless-star equilibrium analysis (circular orbits
//! around the axis, their stability and perturbation amplitudes), the torque
//! balance for a tilted circular orbit in the co-rotating frame, integration of
//! the full restricted three-body motion over one stellar period, and the
//! planar / nonplanar / unbound classification used by the parameter survey.
//!
//! Everything is expressed in scaled units: the stellar separation, the
//! gravitational constant and the mass of the lighter star are all 1, and the
//! heavier star has mass `b >= 1`.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, the command-line
//! front end and the parallel survey driver live in the `polar-orbits` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod equilibrium;
mod error;
pub mod integrator;
pub mod roots;
pub mod survey;
pub mod system;
pub mod torque;
mod vector;

pub use error::{Error, Result};
pub use system::{kepler_frequency, Frame, PhaseState, Star, SystemConfig};
pub use vector::Vec3;
