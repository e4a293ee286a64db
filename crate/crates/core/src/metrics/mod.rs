//! Pathwise metrics, excursions, hitting times and the false-detection
//! probability.

pub mod hausdorff;

use rayon::prelude::*;

pub use hausdorff::distance_h;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::filter::{integrate_filter_logistic, FilterOptions};
use crate::grid::{SamplePath, TimeGrid};
use crate::markov::{conditioned_no_jump_path, RatePair};
use crate::observation::simulate_observation_with_noise;
use crate::path::State;
use crate::rng::{StreamKey, StreamKind};
use crate::smoother::smooth_logit;

/// `int_0^H min(|f - g|, 1) dt` by the trapezoid rule.
pub fn distance_l(f: &SamplePath, g: &SamplePath) -> Result<f64> {
    f.ensure_same_grid(g)?;
    let d: Vec<f64> = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| (a - b).abs().min(1.0))
        .collect();
    Ok(crate::smoother::trapezoid_indices(&d, 0, d.len() - 1, f.grid().dt(), |v| v))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Excursion {
    /// Entry into `[eps, 1 - eps]`.
    pub start: f64,
    /// Next return to `[0, eps/2] or [1 - eps/2, 1]`.
    pub end: f64,
    pub start_index: usize,
    pub end_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcursionSet {
    pub excursions: Vec<Excursion>,
    pub enter_level: f64,
    pub exit_level: f64,
}

impl ExcursionSet {
    pub fn len(&self) -> usize {
        self.excursions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.excursions.is_empty()
    }
}

/// Alternating scan for the excursions of `pi` away from `{0, 1}`.
///
/// The scan is armed by the first visit to `[0, eps/2] or [1 - eps/2, 1]`; an
/// excursion then starts at the first grid point in `[eps, 1 - eps]` and ends
/// at the next visit to the outer band, which re-arms the scan. An excursion
/// still open at the end of the path is dropped.
pub fn extract_excursions(pi: &SamplePath, epsilon: f64) -> Result<ExcursionSet> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
    }
    let near = |v: f64| v <= epsilon / 2.0 || v >= 1.0 - epsilon / 2.0;
    let inside = |v: f64| v >= epsilon && v <= 1.0 - epsilon;
    let grid = pi.grid();
    let mut out = Vec::new();
    let mut armed = false;
    let mut open: Option<usize> = None;
    for (k, &v) in pi.values().iter().enumerate() {
        match open {
            None => {
                if armed && inside(v) {
                    open = Some(k);
                } else if near(v) {
                    armed = true;
                }
            }
            Some(s) => {
                if near(v) {
                    out.push(Excursion {
                        start: grid.time(s),
                        end: grid.time(k),
                        start_index: s,
                        end_index: k,
                    });
                    open = None;
                }
            }
        }
    }
    Ok(ExcursionSet {
        excursions: out,
        enter_level: epsilon,
        exit_level: epsilon / 2.0,
    })
}

/// First grid time with `z > 1/2`.
pub fn hitting_time(z: &SamplePath) -> Option<f64> {
    hitting_time_from(z, 0)
}

/// First grid time at or after index `from` with `z > 1/2`.
pub fn hitting_time_from(z: &SamplePath, from: usize) -> Option<f64> {
    z.values()
        .iter()
        .enumerate()
        .skip(from)
        .find(|(_, &v)| v > 0.5)
        .map(|(k, _)| z.grid().time(k))
}

/// `1{pi > 1/2}`.
pub fn estimator_path(pi: &SamplePath) -> SamplePath {
    pi.map(|v| if v > 0.5 { 1.0 } else { 0.0 })
        .expect("indicator values are finite")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProportionEstimate {
    pub hits: usize,
    pub replicas: usize,
    pub estimate: f64,
    pub stderr: f64,
}

impl ProportionEstimate {
    pub fn from_counts(hits: usize, replicas: usize) -> Result<Self> {
        if replicas == 0 {
            return Err(Error::NoReplicas);
        }
        let p = hits as f64 / replicas as f64;
        Ok(Self {
            hits,
            replicas,
            estimate: p,
            stderr: (p * (1.0 - p) / replicas as f64).sqrt(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorProbabilityOptions {
    /// Coefficient in front of `dB`; `None` means `gamma^{-1/2}`.
    pub noise: Option<f64>,
    /// Cell index used to derive the random substreams.
    pub cell: u32,
    /// Filter initial value; `None` means the stationary probability `p`.
    pub pi0: Option<f64>,
}

impl Default for ErrorProbabilityOptions {
    fn default() -> Self {
        Self {
            noise: None,
            cell: 0,
            pi0: None,
        }
    }
}

/// Whether the lagged estimator raises a false alarm on `[delta, t]` for one
/// replica in which `x` stays at 0 on `[0, t]`.
pub fn false_detection(config: &ExperimentConfig, t: f64, replica: u32, opts: &ErrorProbabilityOptions) -> Result<bool> {
    let model = config.model();
    let rates = RatePair::from_model(&model);
    let seed = config.root_seed();
    let mut chain = seed.substream(StreamKey::new(opts.cell, replica, StreamKind::ChainJumps));
    let mut noise_rng = seed.substream(StreamKey::new(opts.cell, replica, StreamKind::Brownian));
    let x = conditioned_no_jump_path(&rates, State::Zero, t, t, &mut chain)?;
    let grid = TimeGrid::build(0.0, t, config.dt)?;
    let noise = opts.noise.unwrap_or(config.gamma.powf(-0.5));
    let obs = simulate_observation_with_noise(&x, noise, &grid, &mut noise_rng)?;
    let filt = integrate_filter_logistic(&obs, &model, opts.pi0.unwrap_or(model.p), &FilterOptions::default())?;
    let smoothed = smooth_logit(&filt.y_logit, config.delta(), &model)?;
    Ok(hitting_time_from(&smoothed.pi_smoothed, smoothed.lag.steps).is_some())
}

/// Monte Carlo estimate of `P(T(xhat^delta) <= t | T(x) > t)`.
///
/// Each replica draws `x` conditioned to stay at 0 on `[0, t]` and fresh
/// observation noise; the estimator is scanned over the grid times in
/// `[delta, t]`, where the lagged filter is defined. Replicas run in
/// parallel on independent substreams and are merged in replica order.
pub fn error_probability(
    config: &ExperimentConfig,
    t: f64,
    n_replicas: usize,
    opts: &ErrorProbabilityOptions,
) -> Result<ProportionEstimate> {
    if n_replicas == 0 {
        return Err(Error::NoReplicas);
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    config.validate()?;
    let outcomes = (0..n_replicas as u32)
        .into_par_iter()
        .map(|r| false_detection(config, t, r, opts))
        .collect::<Result<Vec<bool>>>()?;
    ProportionEstimate::from_counts(outcomes.iter().filter(|&&h| h).count(), n_replicas)
}
