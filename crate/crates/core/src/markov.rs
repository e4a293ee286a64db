//! Exact sampling of the hidden two-state Markov jump process.
//!
//! The chain leaves 0 at rate `lambda p` and leaves 1 at rate
//! `lambda (1 - p)`, so its stationary law puts mass `p` on state 1.

use rand::Rng;

use crate::config::ModelParams;
use crate::error::{Error, Result};
use crate::path::{JumpPath, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub rate01: f64,
    pub rate10: f64,
}

impl RatePair {
    pub fn new(rate01: f64, rate10: f64) -> Result<Self> {
        if !(rate01 > 0.0 && rate10 > 0.0 && rate01.is_finite() && rate10.is_finite()) {
            return Err(Error::Config(format!(
                "jump rates must be positive, got ({rate01}, {rate10})"
            )));
        }
        Ok(Self { rate01, rate10 })
    }

    pub fn from_model(model: &ModelParams) -> Self {
        Self {
            rate01: model.rate01(),
            rate10: model.rate10(),
        }
    }

    pub fn total(&self) -> f64 {
        self.rate01 + self.rate10
    }

    /// Probability of state 1 under the stationary law.
    pub fn stationary_one(&self) -> f64 {
        self.rate01 / self.total()
    }

    pub fn leaving(&self, s: State) -> f64 {
        match s {
            State::Zero => self.rate01,
            State::One => self.rate10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialLaw {
    Fixed(State),
    Stationary,
}

/// Stationary probability of state 1, which is `p`.
pub fn stationary_law(model: &ModelParams) -> f64 {
    RatePair::from_model(model).stationary_one()
}

/// Exponential holding time by inverse CDF.
fn exponential<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    // 1 - U lies in (0, 1], so the log is finite.
    let u: f64 = rng.random();
    -(1.0 - u).ln() / rate
}

/// Samples a path on `[0, horizon]` with exact (off-grid) jump times.
pub fn sample_jump_path<R: Rng + ?Sized>(
    rates: &RatePair,
    horizon: f64,
    initial: InitialLaw,
    rng: &mut R,
) -> Result<JumpPath> {
    let start = match initial {
        InitialLaw::Fixed(s) => s,
        InitialLaw::Stationary => {
            if rng.random::<f64>() < rates.stationary_one() {
                State::One
            } else {
                State::Zero
            }
        }
    };
    let mut jumps = Vec::new();
    let mut state = start;
    let mut t = 0.0;
    loop {
        t += exponential(rates.leaving(state), rng);
        if t > horizon {
            break;
        }
        jumps.push(t);
        state = state.flip();
    }
    JumpPath::new(start, jumps, horizon)
}

/// Path conditioned on staying at `initial` during `[0, t]`, continued by
/// unconditioned sampling on `(t, horizon]`.
pub fn conditioned_no_jump_path<R: Rng + ?Sized>(
    rates: &RatePair,
    initial: State,
    t: f64,
    horizon: f64,
    rng: &mut R,
) -> Result<JumpPath> {
    if !(t >= 0.0 && t <= horizon) {
        return Err(Error::Domain(format!("conditioning time {t} outside [0, {horizon}]")));
    }
    let head = JumpPath::constant(initial, horizon)?;
    if horizon - t <= 0.0 {
        return Ok(head);
    }
    let tail = sample_jump_path(rates, horizon - t, InitialLaw::Fixed(initial), rng)?;
    head.splice(t, &tail)
}
