//! Simulator for stake-weighted post curation with limited voting power.
//!
//! Players repeatedly vote on a ranked list of posts. Each vote costs voting
//! power, which regenerates every round, and adds stake-weighted score to the
//! post. The crate measures how close the list gets to the order implied by the
//! players' summed likabilities, and predicts from the parameters alone whether
//! honest play reaches that order.

pub mod analysis;
pub mod config;
pub mod engine;
pub mod error;
pub mod instance;
pub mod metrics;
pub mod model;
pub mod report;
pub mod scenario;
pub mod strategy;

pub use error::{Error, Result};
