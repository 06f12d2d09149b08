//! Open-system simulation of small qubit registers coupled to thermal bosonic
//! baths, with ideal stabilizer error correction (five-qubit, Steane and the
//! [[8,2,2]] toric code) applied between evolution segments.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`], [`pauli`], [`state`]: dense matrices, Pauli strings,
//!   density matrices, partial traces and Uhlmann fidelity;
//! * [`bath`]: Bose occupations, discretized mode sets, correlation kernels
//!   and time-dependent rate coefficients;
//! * [`dynamics`]: master-equation right-hand sides and the fixed-step RK4
//!   integrator;
//! * [`codes`]: encode / recover / decode for the three codes plus a
//!   brute-force syndrome-table oracle;
//! * [`experiments`]: fidelity protocols, critical-time search and sweeps;
//! * [`config`], [`output`], [`commands`]: the configuration schema, CSV/JSON
//!   writers and the command implementations used by the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod codes;
pub mod commands;
pub mod config;
pub mod dynamics;
mod error;
pub mod experiments;
pub mod linalg;
pub mod output;
pub mod parallel;
pub mod pauli;
pub mod state;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use parallel::Parallelism;
pub use state::DensityMatrix;

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;
