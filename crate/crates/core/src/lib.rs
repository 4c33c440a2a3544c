//! Local phase-flip LDPC codes for cat qubits: lattice code construction,
//! exact distances, shape searches, circuit-level noise, BP+OSD decoding,
//! Monte-Carlo memory experiments and qubit footprint estimates.

pub mod cli;
pub mod decoder;
pub mod distance;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod gf2;
pub mod lattice;
pub mod noise;
pub mod search;

pub use error::{Error, Result};
