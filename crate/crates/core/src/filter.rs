//! The two-state Wonham filter driven by observation increments.
//!
//! Two integrators are provided. [`integrate_filter_logistic`] works in the
//! logit coordinate `Y = log(pi / (1 - pi))`, where the volatility is the
//! constant `sqrt(gamma)` and the boundary `{0, 1}` is sent to infinity; it
//! is the one used by the experiments. [`integrate_filter_pi`] is a plain
//! Euler–Maruyama scheme in `pi` and serves as an independent cross-check.
//!
//! Both substitute the innovation `dW = sqrt(gamma) (dy - pi dt)` into the
//! filter SDE, so they consume `dy` directly.

use std::io::Write;

use crate::config::ModelParams;
use crate::coordinates::{logistic, logit};
use crate::error::{Error, Result};
use crate::grid::{SamplePath, TimeGrid};
use crate::observation::ObservationIncrements;
use crate::output::CsvHeader;
use crate::path::JumpPath;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterOptions {
    /// `pi`-space values are clamped to `[clamp_eps, 1 - clamp_eps]`.
    pub clamp_eps: f64,
    /// Logit values are capped to `[-y_max, y_max]`.
    pub y_max: f64,
    /// Adds the Milstein correction to the `pi`-space scheme.
    pub milstein: bool,
}

impl Default for FilterOptions {
    fn default() -> Self {
        Self {
            clamp_eps: 1e-12,
            y_max: 500.0,
            milstein: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterPath {
    pub pi: SamplePath,
    pub y_logit: SamplePath,
    /// Number of steps where the `pi`-space scheme left `[eps, 1 - eps]`.
    pub clamp_events: usize,
}

impl FilterPath {
    pub fn grid(&self) -> &TimeGrid {
        self.pi.grid()
    }

    /// Writes `t, pi, Y, x_state` rows.
    pub fn write_csv<W: Write>(&self, x: &JumpPath, header: &CsvHeader, out: &mut W) -> Result<()> {
        header.write(out)?;
        writeln!(out, "t,pi,Y,x_state")?;
        let grid = self.grid();
        let xs = x.sample_on(grid)?;
        for k in 0..grid.len() {
            writeln!(
                out,
                "{},{},{},{}",
                grid.time(k),
                self.pi.value(k),
                self.y_logit.value(k),
                xs.value(k)
            )?;
        }
        Ok(())
    }
}

fn check_pi0(pi0: f64) -> Result<()> {
    if pi0 > 0.0 && pi0 < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("initial probability {pi0} outside (0,1)")))
    }
}

fn check_step(model: &ModelParams, grid: &TimeGrid) -> Result<()> {
    let gdt = model.gamma * grid.dt();
    if gdt > crate::config::MAX_GAMMA_DT {
        return Err(Error::Config(format!("gamma*dt = {gdt} exceeds the stability guard")));
    }
    Ok(())
}

/// Euler–Maruyama in `pi`:
/// `pi += -lambda (pi - p) dt + gamma pi (1 - pi) (dy - pi dt)`.
pub fn integrate_filter_pi(
    obs: &ObservationIncrements,
    model: &ModelParams,
    pi0: f64,
    opts: &FilterOptions,
) -> Result<FilterPath> {
    check_pi0(pi0)?;
    let grid = *obs.grid();
    check_step(model, &grid)?;
    let dt = grid.dt();
    let (lambda, p, gamma) = (model.lambda, model.p, model.gamma);
    let (lo, hi) = (opts.clamp_eps, 1.0 - opts.clamp_eps);

    let mut pis = Vec::with_capacity(grid.len());
    let mut pi = pi0;
    pis.push(pi);
    let mut clamp_events = 0;
    for (k, &dy) in obs.dy().iter().enumerate() {
        let v = pi * (1.0 - pi);
        let innov = dy - pi * dt;
        let mut next = pi - lambda * (pi - p) * dt + gamma * v * innov;
        if opts.milstein {
            let dw2 = gamma * innov * innov;
            next += 0.5 * gamma * v * (1.0 - 2.0 * pi) * (dw2 - dt);
        }
        if !next.is_finite() {
            return Err(Error::Integration {
                step: k,
                reason: format!("non-finite value from pi = {pi}"),
            });
        }
        if next < lo || next > hi {
            clamp_events += 1;
            next = next.clamp(lo, hi);
        }
        pi = next;
        pis.push(pi);
    }
    let ys = pis.iter().map(|&v| logit(v)).collect();
    Ok(FilterPath {
        pi: SamplePath::new(grid, pis)?,
        y_logit: SamplePath::new(grid, ys)?,
        clamp_events,
    })
}

/// Exact flow over a time `h` of the deterministic part
/// `dY = lambda p e^{-Y} dt - lambda (1 - p) e^{Y} dt`.
///
/// With `u = e^Y` this is the Riccati equation `du = (a - b u^2) dt`, whose
/// solution satisfies `(u - r)/(u + r) = (u0 - r)/(u0 + r) e^{-2 k h}` with
/// `r = sqrt(a/b)` and `k = sqrt(a b)`. The update is written with sums of
/// positive terms only so it stays accurate for large `|Y|`.
pub(crate) fn exponential_drift_flow(y: f64, a: f64, b: f64, h: f64) -> f64 {
    let ln_r = 0.5 * (a / b).ln();
    let k = (a * b).sqrt();
    let z = y - ln_r;
    let q = (-2.0 * k * h).exp();
    let one_minus_q = -(-2.0 * k * h).exp_m1();
    // 1 - w0 = 2 sigma(-z), 1 + w0 = 2 sigma(z), with w0 = tanh(z / 2).
    let one_minus_w = 2.0 * logistic(-z);
    let one_plus_w = 2.0 * logistic(z);
    ln_r + (one_minus_q + q * one_plus_w).ln() - (one_minus_q + q * one_minus_w).ln()
}

/// Integrates the filter in logit coordinates.
///
/// Per step, the exponential drift terms are advanced by their exact flow
/// (first order splitting), then the linear part
/// `gamma (dy - dt/2) + lambda (2p - 1) dt` is added. When the exponential
/// terms are small this coincides with Euler–Maruyama; when `pi` is close to
/// the boundary it avoids the overshoot of the explicit step.
pub fn integrate_filter_logistic(
    obs: &ObservationIncrements,
    model: &ModelParams,
    pi0: f64,
    opts: &FilterOptions,
) -> Result<FilterPath> {
    check_pi0(pi0)?;
    let grid = *obs.grid();
    check_step(model, &grid)?;
    let dt = grid.dt();
    let (lambda, p, gamma) = (model.lambda, model.p, model.gamma);
    let (a, b) = (model.rate01(), model.rate10());
    let linear_drift = lambda * (2.0 * p - 1.0) * dt - 0.5 * gamma * dt;

    let mut ys = Vec::with_capacity(grid.len());
    let mut y = logit(pi0);
    ys.push(y);
    for (k, &dy) in obs.dy().iter().enumerate() {
        let mut next = exponential_drift_flow(y, a, b, dt) + gamma * dy + linear_drift;
        if !next.is_finite() {
            return Err(Error::Integration {
                step: k,
                reason: format!("non-finite logit from Y = {y}"),
            });
        }
        next = next.clamp(-opts.y_max, opts.y_max);
        y = next;
        ys.push(y);
    }
    let pis = ys.iter().map(|&v| logistic(v)).collect();
    Ok(FilterPath {
        pi: SamplePath::new(grid, pis)?,
        y_logit: SamplePath::new(grid, ys)?,
        clamp_events: 0,
    })
}

/// Innovation increments `dW_k = sqrt(gamma) (dy_k - pi_k dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnovationIncrements {
    grid: TimeGrid,
    dw: Vec<f64>,
}

impl InnovationIncrements {
    pub fn dw(&self) -> &[f64] {
        &self.dw
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Cumulated innovation `W_{t_k}` with `W_0 = 0`.
    pub fn cumulative(&self) -> SamplePath {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.dw.len() + 1);
        out.push(0.0);
        for d in &self.dw {
            acc += d;
            out.push(acc);
        }
        SamplePath::new(self.grid, out).expect("finite innovations")
    }

    /// Sum of squared increments, i.e. the realized quadratic variation.
    pub fn quadratic_variation(&self) -> f64 {
        self.dw.iter().map(|d| d * d).sum()
    }
}

pub fn innovation_increments(
    obs: &ObservationIncrements,
    pi: &SamplePath,
    gamma: f64,
) -> Result<InnovationIncrements> {
    if !obs.grid().same_as(pi.grid()) {
        return Err(Error::GridMismatch(format!("{:?} vs {:?}", obs.grid(), pi.grid())));
    }
    let dt = obs.grid().dt();
    let s = gamma.sqrt();
    let dw = obs
        .dy()
        .iter()
        .zip(pi.values())
        .map(|(dy, pi)| s * (dy - pi * dt))
        .collect();
    Ok(InnovationIncrements {
        grid: *obs.grid(),
        dw,
    })
}
