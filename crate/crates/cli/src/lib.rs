//! Sweeps of the symmetric distortion bounds, scheme simulations, single-point
//! rate-distortion queries and a self-verification suite, all emitting CSV.

pub mod config;
pub mod error;
pub mod output;
pub mod rd;
pub mod simulate;
pub mod sweep;
pub mod verify;

pub use error::{CliError, Result};
