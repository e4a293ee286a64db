use rayon::prelude::*;

use spikefilter::grid::TimeGrid;
use spikefilter::markov::{sample_jump_path, InitialLaw, RatePair};
use spikefilter::observation::{simulate_observation, simulate_observation_with_noise};
use spikefilter::path::{JumpPath, State};
use spikefilter::rng::{RootSeed, StreamKey, StreamKind};
use spikefilter::ModelParams;

fn key(r: u32, kind: StreamKind) -> rand_chacha::ChaCha8Rng {
    RootSeed(77).substream(StreamKey::replica(r, kind))
}

#[test]
fn total_increment_under_zero_state() {
    let gamma = 1e2;
    let grid = TimeGrid::build(0.0, 1.0, 1e-2).unwrap();
    let x = JumpPath::constant(State::Zero, 1.0).unwrap();
    let n = 10_000;
    let sums: Vec<f64> = (0..n as u32)
        .into_par_iter()
        .map(|r| {
            simulate_observation(&x, gamma, &grid, &mut key(r, StreamKind::Brownian))
                .unwrap()
                .dy()
                .iter()
                .sum()
        })
        .collect();
    let mean = sums.iter().sum::<f64>() / n as f64;
    let var = sums.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let expected_var = 1.0 / gamma;
    assert!(mean.abs() <= 3.0 * (expected_var / n as f64).sqrt());
    // Var of the sample variance of normals is 2 sigma^4 / (n - 1).
    let var_se = expected_var * (2.0 / (n - 1) as f64).sqrt();
    assert!((var - expected_var).abs() <= 3.0 * var_se, "{var}");
}

#[test]
fn noiseless_hook_gives_drift_only() {
    let x = JumpPath::new(State::Zero, vec![0.5], 1.0).unwrap();
    let grid = TimeGrid::build(0.0, 1.0, 0.1).unwrap();
    let obs = simulate_observation_with_noise(&x, 0.0, &grid, &mut key(0, StreamKind::Brownian)).unwrap();
    let expected: Vec<f64> = (0..10).map(|k| if k >= 5 { 0.1 } else { 0.0 }).collect();
    for (a, b) in obs.dy().iter().zip(&expected) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn residual_increments_have_the_right_variance() {
    let model = ModelParams::new(1.3, 0.4, 1e3).unwrap();
    let grid = TimeGrid::build(0.0, 10.0, 1e-4).unwrap();
    for r in 0..5 {
        let x = sample_jump_path(&RatePair::from_model(&model), 10.0, InitialLaw::Stationary, &mut key(r, StreamKind::ChainJumps)).unwrap();
        let obs = simulate_observation(&x, model.gamma, &grid, &mut key(r, StreamKind::Brownian)).unwrap();
        let xs = x.sample_on(&grid).unwrap();
        let resid: Vec<f64> = (0..grid.n()).map(|k| obs.dy()[k] - xs.value(k) * grid.dt()).collect();
        let n = resid.len() as f64;
        let var = resid.iter().map(|e| e * e).sum::<f64>() / n;
        let expected = grid.dt() / model.gamma;
        let se = expected * (2.0 / n).sqrt();
        assert!((var - expected).abs() <= 3.0 * se, "replica {r}: {var} vs {expected}");
    }
}

#[test]
fn window_estimator_error_bound() {
    let model = ModelParams::new(1.3, 0.4, 1e3).unwrap();
    let (t, eps) = (1.0, 0.1);
    let grid = TimeGrid::build(0.0, t, 1e-4).unwrap();
    let w = grid.steps_for(eps);
    let n = 4000;
    let errs: Vec<f64> = (0..n as u32)
        .into_par_iter()
        .map(|r| {
            let x = sample_jump_path(&RatePair::from_model(&model), t, InitialLaw::Stationary, &mut key(r, StreamKind::ChainJumps)).unwrap();
            let obs = simulate_observation(&x, model.gamma, &grid, &mut key(r, StreamKind::Brownian)).unwrap();
            let z = obs.window_average(grid.n(), w);
            (z - x.state_at(t).unwrap().as_f64()).powi(2)
        })
        .collect();
    let mean = errs.iter().sum::<f64>() / n as f64;
    let sd = (errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let (l, p) = (model.lambda, model.p);
    let no_jump = (1.0 - p) * (-l * p * eps).exp() + p * (-l * (1.0 - p) * eps).exp();
    let bound = 2.0 * (1.0 - no_jump) + 2.0 / (eps * model.gamma);
    assert!(mean <= bound + 3.0 * sd / (n as f64).sqrt(), "{mean} vs {bound}");
}

#[test]
fn slope_estimates_discriminate_only_on_long_windows() {
    let model = ModelParams::new(1.3, 0.4, 1e2).unwrap();
    let grid = TimeGrid::build(0.0, 10.0, 1e-5).unwrap();
    let x = sample_jump_path(&RatePair::from_model(&model), 10.0, InitialLaw::Stationary, &mut key(3, StreamKind::ChainJumps)).unwrap();
    let obs = simulate_observation(&x, model.gamma, &grid, &mut key(3, StreamKind::Brownian)).unwrap();
    let misclassified = |window: f64| {
        let w = grid.steps_for(window);
        let mut wrong = 0;
        let mut total = 0;
        for k in (w..=grid.n()).step_by(w) {
            let (s, t) = (grid.time(k - w), grid.time(k));
            if x.jumps_up_to(s) != x.jumps_up_to(t) {
                continue;
            }
            let guess = if obs.window_average(k, w) > 0.5 { 1.0 } else { 0.0 };
            total += 1;
            if guess != x.state_at(t).unwrap().as_f64() {
                wrong += 1;
            }
        }
        wrong as f64 / total as f64
    };
    assert!(misclassified(0.5) < 0.02);
    assert!(misclassified(0.01) > 0.2);
}
