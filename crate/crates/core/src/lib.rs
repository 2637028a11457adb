//! Adiabatic holonomic gates on stabilizer and subsystem codes.
//!
//! Gates are compiled into sequences of Hamiltonian interpolation segments
//! whose adiabatic transport realizes the target unitary on the code space,
//! then checked by exact transport, finite-time integration and Pauli
//! fault injection.

pub mod cli;
pub mod codes;
pub mod error;
pub mod gates;
pub mod holonomy;
pub mod linalg;
pub mod evolution;
pub mod faults;
pub mod pauli;
pub mod programs;
pub mod schedules;

pub use error::{Error, Result};
