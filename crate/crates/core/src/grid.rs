//! Uniform time grids and scalar sample paths living on them.

use crate::error::{Error, Result};

/// Grid points `t0 + k dt` for `k = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    dt: f64,
    n: usize,
    horizon: f64,
}

impl TimeGrid {
    /// Uniform grid covering `[t0, horizon]` with `n = round((horizon - t0) / dt)` steps.
    ///
    /// The last grid point may fall short of (or slightly past) `horizon`;
    /// [`TimeGrid::shortfall`] reports by how much.
    pub fn build(t0: f64, horizon: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        if !(horizon > t0) {
            return Err(Error::Config(format!("horizon {horizon} must exceed start {t0}")));
        }
        let steps = ((horizon - t0) / dt + 0.5).floor();
        if steps < 1.0 {
            return Err(Error::Config(format!(
                "grid on [{t0}, {horizon}] with dt = {dt} has no steps"
            )));
        }
        Ok(Self {
            t0,
            dt,
            n: steps as usize,
            horizon,
        })
    }

    /// Grid with exactly `n` steps of size `dt` from `t0`.
    pub fn with_steps(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) || n == 0 {
            return Err(Error::Config(format!("invalid grid: dt = {dt}, n = {n}")));
        }
        Ok(Self {
            t0,
            dt,
            n,
            horizon: t0 + n as f64 * dt,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of steps; there are `n + 1` grid points.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The horizon the grid was requested for.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn last_time(&self) -> f64 {
        self.time(self.n)
    }

    /// `horizon - last_time`; positive when the last point stops short.
    pub fn shortfall(&self) -> f64 {
        self.horizon - self.last_time()
    }

    pub fn falls_short(&self) -> bool {
        self.shortfall() > 1e-9 * self.dt
    }

    /// Nearest grid index (ties round up), or `None` outside `[t0, last_time]`
    /// by more than a rounding slack of `1e-9 dt`.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let slack = 1e-9 * self.dt;
        if !(t >= self.t0 - slack && t <= self.last_time() + slack) {
            return None;
        }
        let x = ((t - self.t0) / self.dt + 0.5).floor();
        Some((x.max(0.0) as usize).min(self.n))
    }

    /// Number of whole steps closest to a duration, ties rounding up.
    pub fn steps_for(&self, duration: f64) -> usize {
        (duration / self.dt + 0.5).floor().max(0.0) as usize
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(move |k| self.time(k))
    }

    pub fn same_as(&self, other: &TimeGrid) -> bool {
        self.n == other.n && self.dt == other.dt && self.t0 == other.t0
    }

    /// Prefix of this grid with `n` steps.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n {
            return Err(Error::Config(format!("cannot truncate {} steps to {n}", self.n)));
        }
        Self::with_steps(self.t0, self.dt, n)
    }
}

/// Values of a scalar process at every point of a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl SamplePath {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite value {} at index {k}", values[k])));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.times().map(f).collect())
    }

    pub fn constant(grid: TimeGrid, value: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.len()])
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn ensure_same_grid(&self, other: &SamplePath) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)))
        }
    }
}
