//! Experiment harness for online linear regression on ℓ¹-balls: CSV stream
//! and trace formats, spec files, single runs with bound checks, the `κ`
//! sweep and the acceptance suites behind the `ell1` binary.

pub mod config;
pub mod csvio;
pub mod error;
pub mod experiment;
pub mod sweep;
pub mod verify;

pub use error::{HarnessError, Result};
