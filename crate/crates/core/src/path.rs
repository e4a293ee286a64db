//! Exact trajectories of the hidden two-state chain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{SamplePath, TimeGrid};

/// Relative slack on the horizon in [`JumpPath::state_at`].
const HORIZON_SLACK: f64 = 1e-12;
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum State {
    Zero,
    One,
}

impl State {
    pub fn flip(self) -> Self {
        match self {
            State::Zero => State::One,
            State::One => State::Zero,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            State::Zero => 0.0,
            State::One => 1.0,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            State::Zero => 0,
            State::One => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Result<Self> {
        match bit {
            0 => Ok(State::Zero),
            1 => Ok(State::One),
            b => Err(Error::Domain(format!("state must be 0 or 1, got {b}"))),
        }
    }
}

/// Càdlàg path on `[0, horizon]`: an initial state flipped at each jump time.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpPath {
    initial: State,
    jumps: Vec<f64>,
    horizon: f64,
}

impl JumpPath {
    pub fn new(initial: State, jumps: Vec<f64>, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Config(format!("horizon must be positive, got {horizon}")));
        }
        if let Some(w) = jumps.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::Domain(format!(
                "jump times must be strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
        if let Some(&t) = jumps.iter().find(|&&t| !(t > 0.0 && t <= horizon)) {
            return Err(Error::Domain(format!("jump time {t} outside (0, {horizon}]")));
        }
        Ok(Self {
            initial,
            jumps,
            horizon,
        })
    }

    pub fn constant(state: State, horizon: f64) -> Result<Self> {
        Self::new(state, Vec::new(), horizon)
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of jumps at times `<= t`.
    pub fn jumps_up_to(&self, t: f64) -> usize {
        self.jumps.partition_point(|&j| j <= t)
    }

    /// State at `t`; at a jump time the post-jump state is returned. Times a
    /// rounding error past the horizon, as grid times can be, are accepted.
    pub fn state_at(&self, t: f64) -> Result<State> {
        if !(0.0..=self.horizon * (1.0 + HORIZON_SLACK)).contains(&t) {
            return Err(Error::Domain(format!("time {t} outside [0, {}]", self.horizon)));
        }
        Ok(self.state_after(self.jumps_up_to(t)))
    }

    fn state_after(&self, count: usize) -> State {
        if count % 2 == 0 {
            self.initial
        } else {
            self.initial.flip()
        }
    }

    /// Maximal constancy intervals `(start, end, state)` covering `[0, horizon]`.
    pub fn constancy_intervals(&self) -> Vec<(f64, f64, State)> {
        let mut out = Vec::with_capacity(self.jumps.len() + 1);
        let mut start = 0.0;
        let mut state = self.initial;
        for &j in &self.jumps {
            out.push((start, j, state));
            start = j;
            state = state.flip();
        }
        if start < self.horizon {
            out.push((start, self.horizon, state));
        }
        out
    }

    /// Time spent in each state on `[0, horizon]`, as `(time in 0, time in 1)`.
    pub fn occupation(&self) -> (f64, f64) {
        self.constancy_intervals()
            .into_iter()
            .fold((0.0, 0.0), |(z, o), (a, b, s)| match s {
                State::Zero => (z + b - a, o),
                State::One => (z, o + b - a),
            })
    }

    /// Value of the path at every grid point.
    pub fn sample_on(&self, grid: &TimeGrid) -> Result<SamplePath> {
        let mut values = Vec::with_capacity(grid.len());
        let mut count = 0;
        for t in grid.times() {
            while count < self.jumps.len() && self.jumps[count] <= t {
                count += 1;
            }
            values.push(self.state_after(count).as_f64());
        }
        SamplePath::new(*grid, values)
    }

    /// Concatenates `self` on `[0, cut]` with `tail` shifted to start at `cut`.
    pub fn splice(&self, cut: f64, tail: &JumpPath) -> Result<JumpPath> {
        let mut jumps: Vec<f64> = self.jumps.iter().copied().filter(|&j| j <= cut).collect();
        let end_state = self.state_after(jumps.len());
        if end_state != tail.initial {
            return Err(Error::Domain("tail does not start in the state reached at the cut".into()));
        }
        jumps.extend(tail.jumps.iter().map(|&j| j + cut));
        JumpPath::new(self.initial, jumps, cut + tail.horizon)
    }
}
