//! Exact spectra, cycle counts and random walks on generalized Johnson graphs
//! `G(n, r, s)`.
//!
//! Counts are exact big integers and probabilities exact rationals throughout;
//! floating point appears only in asymptotic predictions and numeric validation.

pub mod asymptotics;
pub mod cli;
pub mod combinatorics;
pub mod counting;
pub mod error;
pub mod graph;
pub mod spectrum;
pub mod walks;

pub use counting::ExactProb;
pub use error::{Error, Result};
