//! Rate, gap, and outage analysis for cooperative Gaussian relay networks.
//!
//! The crate evaluates achievable rates of mixed decode-and-compress relaying
//! schemes, cut-set upper bounds, constant additive gaps between the two,
//! outage probabilities of selective strategies over composite (e.g. fading)
//! channels, and two-sided bounds on the ε-capacity. See the `examples/`
//! directory for end-to-end usage.

pub mod cli;
pub mod error;
pub mod fading;
pub mod gap;
pub mod gauss;
pub mod mc;
pub mod model;
pub mod outage;
pub mod rate;
pub mod sets;

pub use error::{Error, Result};
