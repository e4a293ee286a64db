//! Experiment configuration shared by every run.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RootSeed;

/// Largest accepted `gamma * dt`.
pub const MAX_GAMMA_DT: f64 = 0.5;
/// Above this `gamma * dt` a warning is logged.
pub const WARN_GAMMA_DT: f64 = 0.1;

/// Smoothing lag, either explicit or through `delta = C log(gamma) / gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Smoothing {
    Delta(f64),
    Coefficient(f64),
}

impl Smoothing {
    pub fn delta(&self, gamma: f64) -> f64 {
        match *self {
            Smoothing::Delta(d) => d,
            Smoothing::Coefficient(c) => lag_from_coefficient(c, gamma),
        }
    }
}

/// `C log(gamma) / gamma`.
pub fn lag_from_coefficient(c: f64, gamma: f64) -> f64 {
    c * gamma.ln() / gamma
}

/// Parameters of the filtering model alone. Unlike [`ExperimentConfig`],
/// `gamma = 0` is accepted here so the noiseless ODE limit can be integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub lambda: f64,
    pub p: f64,
    pub gamma: f64,
}

impl ModelParams {
    pub fn new(lambda: f64, p: f64, gamma: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Config(format!("lambda must be positive, got {lambda}")));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Config(format!("p must lie in (0,1), got {p}")));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::Config(format!("gamma must be non-negative, got {gamma}")));
        }
        Ok(Self { lambda, p, gamma })
    }

    /// Rate of the 0 -> 1 transition, `lambda * p`.
    pub fn rate01(&self) -> f64 {
        self.lambda * self.p
    }

    /// Rate of the 1 -> 0 transition, `lambda * (1 - p)`.
    pub fn rate10(&self) -> f64 {
        self.lambda * (1.0 - self.p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub lambda: f64,
    pub p: f64,
    pub gamma: f64,
    pub horizon: f64,
    pub dt: f64,
    pub smoothing: Smoothing,
    pub seed: u64,
    pub replicas: usize,
}

impl ExperimentConfig {
    /// Builds and validates a configuration.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: f64,
        p: f64,
        gamma: f64,
        horizon: f64,
        dt: f64,
        smoothing: Smoothing,
        seed: u64,
        replicas: usize,
    ) -> Result<Self> {
        let cfg = Self {
            lambda,
            p,
            gamma,
            horizon,
            dt,
            smoothing,
            seed,
            replicas,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The parameters of the showcase figures: lambda = 1.3, p = 0.4,
    /// gamma = 1e4 on [0,10] with 1e6 steps, C = 2.
    pub fn paper_defaults() -> Self {
        Self {
            lambda: 1.3,
            p: 0.4,
            gamma: 1e4,
            horizon: 10.0,
            dt: 1e-5,
            smoothing: Smoothing::Coefficient(2.0),
            seed: 20_240_901,
            replicas: 200,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ModelParams::new(self.lambda, self.p, self.gamma)?;
        if self.gamma <= 0.0 {
            return Err(Error::Config(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Config(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        let gdt = self.gamma * self.dt;
        if gdt > MAX_GAMMA_DT {
            return Err(Error::Config(format!(
                "gamma*dt = {gdt} exceeds the stability guard {MAX_GAMMA_DT}"
            )));
        }
        if gdt > WARN_GAMMA_DT {
            log::warn!("gamma*dt = {gdt} is above {WARN_GAMMA_DT}; expect discretization bias");
        }
        let delta = self.delta();
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::Config(format!("smoothing lag must be non-negative, got {delta}")));
        }
        if delta >= self.horizon {
            return Err(Error::Config(format!(
                "smoothing lag {delta} must be smaller than the horizon {}",
                self.horizon
            )));
        }
        if self.replicas == 0 {
            return Err(Error::Config("replicas must be positive".into()));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        self.smoothing.delta(self.gamma)
    }

    pub fn model(&self) -> ModelParams {
        ModelParams {
            lambda: self.lambda,
            p: self.p,
            gamma: self.gamma,
        }
    }

    pub fn root_seed(&self) -> RootSeed {
        RootSeed(self.seed)
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self {
            gamma,
            ..self.clone()
        }
    }

    pub fn with_smoothing(&self, smoothing: Smoothing) -> Self {
        Self {
            smoothing,
            ..self.clone()
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
