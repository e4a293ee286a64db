//! Simulation of a two-state hidden Markov chain observed in small noise, its
//! Wonham filter, the fixed-lag smoothed filter, and the spike process that
//! describes their small-noise limit.

pub mod config;
pub mod coordinates;
pub mod error;
pub mod experiments;
pub mod filter;
pub mod graph;
pub mod grid;
pub mod markov;
pub mod metrics;
pub mod observation;
pub mod output;
pub mod path;
pub mod rng;
pub mod smoother;
pub mod spikes;

pub use config::{ExperimentConfig, ModelParams, Smoothing};
pub use error::{Error, Result};
pub use grid::{SamplePath, TimeGrid};
pub use path::{JumpPath, State};
