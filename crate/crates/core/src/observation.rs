//! Grid increments of the observation `dy = x dt + gamma^{-1/2} dB`.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::grid::{SamplePath, TimeGrid};
use crate::output::CsvHeader;
use crate::path::JumpPath;

/// `dy[k]` is the observation increment over `[t_k, t_{k+1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationIncrements {
    grid: TimeGrid,
    dy: Vec<f64>,
}

impl ObservationIncrements {
    pub fn new(grid: TimeGrid, dy: Vec<f64>) -> Result<Self> {
        if dy.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "{} increments for a grid of {} steps",
                dy.len(),
                grid.n()
            )));
        }
        Ok(Self { grid, dy })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn dy(&self) -> &[f64] {
        &self.dy
    }

    /// Levels `y_{t_k}` with `y_0 = 0`, by prefix sum. Only meant for display.
    pub fn levels(&self) -> SamplePath {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.dy.len() + 1);
        out.push(0.0);
        for d in &self.dy {
            acc += d;
            out.push(acc);
        }
        SamplePath::new(self.grid, out).expect("prefix sums of finite increments")
    }

    /// Average slope `(y_{t_k} - y_{t_k - w dt}) / (w dt)` over the `w`
    /// steps ending at grid index `k` (requires `k >= w >= 1`).
    pub fn window_average(&self, k: usize, w: usize) -> f64 {
        assert!(w >= 1 && k >= w, "window of {w} steps ending at {k}");
        self.dy[k - w..k].iter().sum::<f64>() / (w as f64 * self.grid.dt())
    }

    /// Writes `t, y_level, x_state` rows.
    pub fn write_csv<W: Write>(&self, path: &JumpPath, header: &CsvHeader, out: &mut W) -> Result<()> {
        header.write(out)?;
        writeln!(out, "t,y_level,x_state")?;
        let levels = self.levels();
        let x = path.sample_on(&self.grid)?;
        for k in 0..self.grid.len() {
            writeln!(out, "{},{},{}", self.grid.time(k), levels.value(k), x.value(k))?;
        }
        Ok(())
    }
}

/// Simulates the observation increments with noise level `gamma^{-1/2}`.
pub fn simulate_observation<R: Rng + ?Sized>(
    path: &JumpPath,
    gamma: f64,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<ObservationIncrements> {
    if !(gamma > 0.0) {
        return Err(Error::Config(format!("gamma must be positive, got {gamma}")));
    }
    simulate_observation_with_noise(path, gamma.powf(-0.5), grid, rng)
}

/// Same as [`simulate_observation`] with an explicit noise coefficient in
/// front of `dB`; a coefficient of 0 yields the noiseless increments `x dt`.
pub fn simulate_observation_with_noise<R: Rng + ?Sized>(
    path: &JumpPath,
    noise: f64,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<ObservationIncrements> {
    if grid.t0() < 0.0 || grid.last_time() > path.horizon() + 1e-9 * grid.dt() {
        return Err(Error::Domain(format!(
            "grid [{}, {}] exceeds the path horizon {}",
            grid.t0(),
            grid.last_time(),
            path.horizon()
        )));
    }
    let dt = grid.dt();
    let sqrt_dt = dt.sqrt();
    let jumps = path.jumps();
    let mut count = jumps.partition_point(|&j| j <= grid.t0());
    let init = path.initial().as_f64();
    let mut dy = Vec::with_capacity(grid.n());
    for k in 0..grid.n() {
        let t = grid.time(k);
        while count < jumps.len() && jumps[count] <= t {
            count += 1;
        }
        // Left-endpoint (Itô) evaluation of the drift.
        let x = if count % 2 == 0 { init } else { 1.0 - init };
        let db: f64 = rng.sample::<f64, _>(StandardNormal) * sqrt_dt;
        dy.push(x * dt + noise * db);
    }
    ObservationIncrements::new(*grid, dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::State;
    use crate::rng::{RootSeed, StreamKey, StreamKind};

    fn rng(r: u32) -> rand_chacha::ChaCha8Rng {
        RootSeed(5).substream(StreamKey::replica(r, StreamKind::Brownian))
    }

    #[test]
    fn noiseless_increments_equal_drift() {
        let path = JumpPath::new(State::Zero, vec![0.5], 1.0).unwrap();
        let grid = TimeGrid::build(0.0, 1.0, 0.1).unwrap();
        let obs = simulate_observation_with_noise(&path, 0.0, &grid, &mut rng(0)).unwrap();
        for (k, d) in obs.dy().iter().enumerate() {
            let x = path.state_at(grid.time(k)).unwrap().as_f64();
            assert_eq!(*d, x * 0.1);
        }
    }

    #[test]
    fn flat_zero_total_has_variance_h_over_gamma() {
        let path = JumpPath::constant(State::Zero, 1.0).unwrap();
        let grid = TimeGrid::build(0.0, 1.0, 0.01).unwrap();
        let gamma = 50.0;
        let reps = 10_000;
        let mut g = rng(1);
        let totals: Vec<f64> = (0..reps)
            .map(|_| simulate_observation(&path, gamma, &grid, &mut g).unwrap().dy().iter().sum())
            .collect();
        let mean = totals.iter().sum::<f64>() / reps as f64;
        let var = totals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
        let target = 1.0 / gamma;
        let se_mean = (target / reps as f64).sqrt();
        // Var of the sample variance of a Gaussian: 2 sigma^4 / (n - 1).
        let se_var = target * (2.0 / (reps - 1) as f64).sqrt();
        assert!(mean.abs() < 3.0 * se_mean, "mean {mean}");
        assert!((var - target).abs() < 3.0 * se_var, "var {var}");
    }

    #[test]
    fn residual_increments_have_variance_dt_over_gamma() {
        let path = JumpPath::new(State::One, vec![0.2, 0.7], 1.0).unwrap();
        let grid = TimeGrid::build(0.0, 1.0, 1e-4).unwrap();
        let gamma = 1e3;
        let obs = simulate_observation(&path, gamma, &grid, &mut rng(2)).unwrap();
        let x = path.sample_on(&grid).unwrap();
        let resid: Vec<f64> = obs
            .dy()
            .iter()
            .enumerate()
            .map(|(k, d)| d - x.value(k) * grid.dt())
            .collect();
        let n = resid.len() as f64;
        let var = resid.iter().map(|r| r * r).sum::<f64>() / n;
        let target = grid.dt() / gamma;
        assert!((var - target).abs() < 3.0 * target * (2.0 / n).sqrt());
    }

    #[test]
    fn levels_and_window_average() {
        let grid = TimeGrid::build(0.0, 1.0, 0.25).unwrap();
        let obs = ObservationIncrements::new(grid, vec![0.25, 0.0, 0.25, 0.25]).unwrap();
        assert_eq!(obs.levels().values(), &[0.0, 0.25, 0.25, 0.5, 0.75]);
        assert_eq!(obs.window_average(4, 2), 1.0);
        assert_eq!(obs.window_average(2, 2), 0.5);
    }

    #[test]
    fn grid_beyond_path_rejected() {
        let path = JumpPath::constant(State::Zero, 1.0).unwrap();
        let grid = TimeGrid::build(0.0, 2.0, 0.5).unwrap();
        assert!(simulate_observation(&path, 10.0, &grid, &mut rng(0)).is_err());
    }
}
