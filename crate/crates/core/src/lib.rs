//! Streaming sketches for dense inputs.
pub mod cli;
pub mod error;
pub mod f0;
pub mod generators;
pub mod hardlab;
pub mod hashing;
pub mod optimizers;
pub mod sampler;
pub mod simrare;
pub mod universe;

pub use error::{Error, Result};
