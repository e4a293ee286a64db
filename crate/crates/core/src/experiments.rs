//! Experiment harness: single-path showcase runs, the sweep over
//! `(gamma, C)`, the invariant report and spike-process samples.
//!
//! Every random quantity is drawn from a substream keyed by
//! `(cell, replica, kind)`, so outputs depend only on the configuration and
//! the seed, never on the number of worker threads.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::config::{lag_from_coefficient, ExperimentConfig, ModelParams, Smoothing};
use crate::coordinates::{backward_transform, forward_transform};
use crate::error::{Error, Result};
use crate::filter::{integrate_filter_logistic, integrate_filter_pi, FilterOptions, FilterPath};
use crate::graph::{graph_of_cadlag, graph_of_continuous_clamped};
use crate::grid::{SamplePath, TimeGrid};
use crate::markov::{conditioned_no_jump_path, sample_jump_path, InitialLaw, RatePair};
use crate::metrics::{distance_h, hitting_time_from, ProportionEstimate};
use crate::observation::{simulate_observation, ObservationIncrements};
use crate::output::CsvHeader;
use crate::path::{JumpPath, State};
use crate::rng::{StreamKey, StreamKind};
use crate::smoother::{
    additive_functional, smooth_backward_ode, smooth_logit, smoothing_terms_logit, trapezoid_indices,
    write_smoothed_csv,
};
use crate::spikes::{max_spike_cdf, sample_spike_process, write_spikes_csv};

/// Graph resolution used for Hausdorff distances.
pub const DEFAULT_GRAPH_RES: f64 = 1e-3;
/// Margin kept away from the jumps of `x` when measuring excursions.
pub const NO_JUMP_GUARD: f64 = 0.02;
/// Lag coefficients of the smoothed showcase runs.
pub const SHOWCASE_COEFFICIENTS: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];
/// Noise level of the observation showcase.
pub const SHOWCASE_OBSERVATION_GAMMA: f64 = 1e2;

/// One simulated trajectory: hidden path, observations and filter.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub x: JumpPath,
    pub obs: ObservationIncrements,
    pub filter: FilterPath,
}

/// Hidden path from the stationary law on `[0, horizon]`, observations at
/// `gamma` and the logistic filter started at `p`.
pub fn simulate_trajectory(config: &ExperimentConfig, gamma: f64, horizon: f64, cell: u32, replica: u32) -> Result<Trajectory> {
    let model = ModelParams::new(config.lambda, config.p, gamma)?;
    let seed = config.root_seed();
    let mut chain = seed.substream(StreamKey::new(cell, replica, StreamKind::ChainJumps));
    let x = sample_jump_path(&RatePair::from_model(&model), horizon, InitialLaw::Stationary, &mut chain)?;
    observe(config, &model, x, cell, replica)
}

/// Same as [`simulate_trajectory`] with `x` held at 0 on `[0, t]` and the
/// horizon set to `t`.
pub fn simulate_no_jump_trajectory(config: &ExperimentConfig, gamma: f64, t: f64, cell: u32, replica: u32) -> Result<Trajectory> {
    let model = ModelParams::new(config.lambda, config.p, gamma)?;
    let seed = config.root_seed();
    let mut chain = seed.substream(StreamKey::new(cell, replica, StreamKind::ChainJumps));
    let x = conditioned_no_jump_path(&RatePair::from_model(&model), State::Zero, t, t, &mut chain)?;
    observe(config, &model, x, cell, replica)
}

fn observe(config: &ExperimentConfig, model: &ModelParams, x: JumpPath, cell: u32, replica: u32) -> Result<Trajectory> {
    let mut noise = config
        .root_seed()
        .substream(StreamKey::new(cell, replica, StreamKind::Brownian));
    let grid = TimeGrid::build(0.0, x.horizon(), config.dt)?;
    let obs = simulate_observation(&x, model.gamma, &grid, &mut noise)?;
    let filter = integrate_filter_logistic(&obs, model, model.p, &FilterOptions::default())?;
    Ok(Trajectory { x, obs, filter })
}

/// Geometry of one smoothed trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothedGeometry {
    /// Hausdorff distance between the graphs of `pi^delta` and `x` on `[delta, H]`.
    pub hausdorff: f64,
    /// `max |pi^delta_t - x_t|` over times `t` with `[t - delta - g, t + g]`
    /// inside a constancy interval of `x`; 0 when there is none.
    pub max_excursion: f64,
}

pub fn smoothed_geometry(x: &JumpPath, smoothed: &SamplePath, lag_steps: usize, res: f64) -> Result<SmoothedGeometry> {
    let grid = smoothed.grid();
    if lag_steps >= grid.n() {
        return Err(Error::Domain("lag leaves no grid point to compare".into()));
    }
    let sub = TimeGrid::with_steps(grid.time(lag_steps), grid.dt(), grid.n() - lag_steps)?;
    let tail = SamplePath::new(sub, smoothed.values()[lag_steps..].to_vec())?;
    let hausdorff = distance_h(&graph_of_continuous_clamped(&tail, res)?, &graph_of_cadlag(x, &sub, res)?)?;

    let delta = lag_steps as f64 * grid.dt();
    let mut max_excursion: f64 = 0.0;
    for (a, b, state) in x.constancy_intervals() {
        let (lo, hi) = (a + delta + NO_JUMP_GUARD, b - NO_JUMP_GUARD);
        if hi < lo {
            continue;
        }
        let level = state.as_f64();
        let first = ((lo - grid.t0()) / grid.dt()).ceil().max(0.0) as usize;
        for k in first..grid.len() {
            let t = grid.time(k);
            if t > hi {
                break;
            }
            max_excursion = max_excursion.max((smoothed.value(k) - level).abs());
        }
    }
    Ok(SmoothedGeometry {
        hausdorff,
        max_excursion,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub gammas: Vec<f64>,
    pub coefficients: Vec<f64>,
    /// Replicas of the false-detection experiment per cell.
    pub replicas: usize,
    /// Time `t` of the false-detection probability.
    pub error_time: f64,
    /// Replicas of the geometry experiment on `[0, H]` per cell; 0 skips it.
    pub geometry_replicas: usize,
    pub graph_res: f64,
}

impl SweepSpec {
    pub fn new(gammas: Vec<f64>, coefficients: Vec<f64>, replicas: usize) -> Self {
        Self {
            gammas,
            coefficients,
            replicas,
            error_time: 1.0,
            geometry_replicas: 50,
            graph_res: DEFAULT_GRAPH_RES,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub gamma: f64,
    pub coefficient: f64,
    pub delta: f64,
    pub error: Option<ProportionEstimate>,
    pub geometry_replicas: usize,
    pub mean_hausdorff: f64,
    pub mean_max_excursion: f64,
    /// Fraction of geometry replicas with `max_excursion > 1/2`.
    pub excursion_above_half: f64,
    pub wall_time_s: f64,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn cell(&self, gamma: f64, coefficient: f64) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| c.gamma == gamma && c.coefficient == coefficient)
    }
}

fn run_cell(config: &ExperimentConfig, spec: &SweepSpec, gamma_index: u32, gamma: f64, c: f64) -> Result<SweepCell> {
    let model = ModelParams::new(config.lambda, config.p, gamma)?;
    let cfg = config.with_gamma(gamma).with_smoothing(Smoothing::Coefficient(c));
    cfg.validate()?;
    let delta = cfg.delta();
    // Cells that share gamma share their random inputs, so comparisons across
    // C are made on the same trajectories.
    let error_cell = 2 * gamma_index;
    let geometry_cell = 2 * gamma_index + 1;

    let error = if spec.replicas > 0 {
        let hits = (0..spec.replicas as u32)
            .into_par_iter()
            .map(|r| {
                let tr = simulate_no_jump_trajectory(&cfg, gamma, spec.error_time, error_cell, r)?;
                let s = smooth_logit(&tr.filter.y_logit, delta, &model)?;
                Ok(hitting_time_from(&s.pi_smoothed, s.lag.steps).is_some())
            })
            .collect::<Result<Vec<bool>>>()?;
        Some(ProportionEstimate::from_counts(
            hits.iter().filter(|&&h| h).count(),
            spec.replicas,
        )?)
    } else {
        None
    };

    let geo = (0..spec.geometry_replicas as u32)
        .into_par_iter()
        .map(|r| {
            let tr = simulate_trajectory(&cfg, gamma, cfg.horizon, geometry_cell, r)?;
            let s = smooth_logit(&tr.filter.y_logit, delta, &model)?;
            smoothed_geometry(&tr.x, &s.pi_smoothed, s.lag.steps, spec.graph_res)
        })
        .collect::<Result<Vec<SmoothedGeometry>>>()?;
    let n = geo.len() as f64;
    let mean = |f: fn(&SmoothedGeometry) -> f64| {
        if geo.is_empty() {
            f64::NAN
        } else {
            geo.iter().map(f).sum::<f64>() / n
        }
    };
    Ok(SweepCell {
        gamma,
        coefficient: c,
        delta,
        error,
        geometry_replicas: geo.len(),
        mean_hausdorff: mean(|g| g.hausdorff),
        mean_max_excursion: mean(|g| g.max_excursion),
        excursion_above_half: mean(|g| if g.max_excursion > 0.5 { 1.0 } else { 0.0 }),
        wall_time_s: 0.0,
        failure: None,
    })
}

/// Runs every `(gamma, C)` cell. A failing cell is kept with its error message.
pub fn run_sweep(config: &ExperimentConfig, spec: &SweepSpec) -> Result<SweepResult> {
    if spec.gammas.is_empty() || spec.coefficients.is_empty() {
        return Err(Error::Config("sweep needs at least one gamma and one C".into()));
    }
    if spec.replicas == 0 && spec.geometry_replicas == 0 {
        return Err(Error::NoReplicas);
    }
    let mut cells = Vec::new();
    for (gi, &gamma) in spec.gammas.iter().enumerate() {
        for &c in &spec.coefficients {
            let start = Instant::now();
            let mut cell = run_cell(config, spec, gi as u32, gamma, c).unwrap_or_else(|e| {
                log::error!("cell gamma={gamma} C={c} failed: {e}");
                SweepCell {
                    gamma,
                    coefficient: c,
                    delta: lag_from_coefficient(c, gamma),
                    error: None,
                    geometry_replicas: 0,
                    mean_hausdorff: f64::NAN,
                    mean_max_excursion: f64::NAN,
                    excursion_above_half: f64::NAN,
                    wall_time_s: 0.0,
                    failure: Some(e.to_string()),
                }
            });
            cell.wall_time_s = start.elapsed().as_secs_f64();
            log::info!("cell gamma={gamma} C={c} done in {:.2}s", cell.wall_time_s);
            cells.push(cell);
        }
    }
    Ok(SweepResult { cells })
}

fn sweep_header(config: &ExperimentConfig, spec: &SweepSpec) -> CsvHeader {
    CsvHeader::new(config.to_json())
        .with("error_time", spec.error_time)
        .with("replicas", spec.replicas)
        .with("geometry_replicas", spec.geometry_replicas)
        .with("graph_res", spec.graph_res)
        .with("no_jump_guard", NO_JUMP_GUARD)
}

/// Writes the deterministic part of the sweep:
/// `gamma,C,delta,replicas,hits,error_probability,stderr,geometry_replicas,mean_hausdorff,mean_max_excursion,excursion_above_half,status`.
pub fn write_sweep_csv<W: Write>(result: &SweepResult, header: &CsvHeader, out: &mut W) -> Result<()> {
    header.write(out)?;
    writeln!(
        out,
        "gamma,C,delta,replicas,hits,error_probability,stderr,geometry_replicas,mean_hausdorff,mean_max_excursion,excursion_above_half,status"
    )?;
    for c in &result.cells {
        let (n, hits, est, se) = match c.error {
            Some(e) => (e.replicas.to_string(), e.hits.to_string(), e.estimate.to_string(), e.stderr.to_string()),
            None => (String::new(), String::new(), String::new(), String::new()),
        };
        let status = match &c.failure {
            None => "ok".to_string(),
            Some(m) => format!("failed: {}", m.replace([',', '\n'], ";")),
        };
        writeln!(
            out,
            "{},{},{},{n},{hits},{est},{se},{},{},{},{},{status}",
            c.gamma, c.coefficient, c.delta, c.geometry_replicas, c.mean_hausdorff, c.mean_max_excursion, c.excursion_above_half
        )?;
    }
    Ok(())
}

/// Writes `gamma,C,wall_time_s`; kept apart because timings vary between runs.
pub fn write_sweep_timing_csv<W: Write>(result: &SweepResult, header: &CsvHeader, out: &mut W) -> Result<()> {
    header.write(out)?;
    writeln!(out, "gamma,C,wall_time_s")?;
    for c in &result.cells {
        writeln!(out, "{},{},{}", c.gamma, c.coefficient, c.wall_time_s)?;
    }
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    std::fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// Runs the sweep and writes `sweep.csv` and `sweep_timing.csv` into `dir`.
pub fn cmd_sweep(config: &ExperimentConfig, spec: &SweepSpec, dir: &Path) -> Result<(SweepResult, Vec<PathBuf>)> {
    let result = run_sweep(config, spec)?;
    let header = sweep_header(config, spec);
    let mut out = create(dir, "sweep.csv")?;
    write_sweep_csv(&result, &header, &mut out)?;
    out.flush()?;
    let mut timing = create(dir, "sweep_timing.csv")?;
    write_sweep_timing_csv(&result, &header, &mut timing)?;
    timing.flush()?;
    Ok((result, vec![dir.join("sweep.csv"), dir.join("sweep_timing.csv")]))
}

/// Writes the single-path runs:
///
/// - `observation.csv` (`t,y_level,x_state`) at `gamma = 1e2`,
/// - `filter.csv` (`t,pi,Y,x_state`) at the configured `gamma`,
/// - `smoothed_C<c>.csv` (`t,pi,pi_smoothed,D`) for each coefficient.
///
/// All files share one hidden path `x`; each `gamma` gets its own noise.
/// Only every `stride`-th row is written.
pub fn cmd_showcase(config: &ExperimentConfig, dir: &Path, stride: usize) -> Result<Vec<PathBuf>> {
    config.validate()?;
    let stride = stride.max(1);
    let seed = config.root_seed();
    let model = config.model();
    let mut chain = seed.substream(StreamKey::new(0, 0, StreamKind::ChainJumps));
    let x = sample_jump_path(&RatePair::from_model(&model), config.horizon, InitialLaw::Stationary, &mut chain)?;
    let mut files = Vec::new();

    let low = config.with_gamma(SHOWCASE_OBSERVATION_GAMMA);
    let tr = observe(&low, &low.model(), x.clone(), 1, 0)?;
    let header = CsvHeader::new(low.to_json()).with("figure", "observation").with("stride", stride);
    let mut out = create(dir, "observation.csv")?;
    let levels = tr.obs.levels();
    let xs = x.sample_on(tr.obs.grid())?;
    header.write(&mut out)?;
    writeln!(out, "t,y_level,x_state")?;
    for k in (0..levels.grid().len()).step_by(stride) {
        writeln!(out, "{},{},{}", levels.grid().time(k), levels.value(k), xs.value(k))?;
    }
    out.flush()?;
    files.push(dir.join("observation.csv"));

    let tr = observe(config, &model, x.clone(), 2, 0)?;
    let header = CsvHeader::new(config.to_json()).with("figure", "filter").with("stride", stride);
    let mut out = create(dir, "filter.csv")?;
    let xs = x.sample_on(tr.filter.grid())?;
    header.write(&mut out)?;
    writeln!(out, "t,pi,Y,x_state")?;
    let grid = *tr.filter.grid();
    for k in (0..grid.len()).step_by(stride) {
        writeln!(
            out,
            "{},{},{},{}",
            grid.time(k),
            tr.filter.pi.value(k),
            tr.filter.y_logit.value(k),
            xs.value(k)
        )?;
    }
    out.flush()?;
    files.push(dir.join("filter.csv"));

    for c in SHOWCASE_COEFFICIENTS {
        let delta = lag_from_coefficient(c, model.gamma);
        let terms = smoothing_terms_logit(&tr.filter.y_logit, delta, &model)?;
        let smoothed = smooth_logit(&tr.filter.y_logit, delta, &model)?;
        let name = format!("smoothed_C{c}.csv");
        let cfg = config.with_smoothing(Smoothing::Coefficient(c));
        let header = CsvHeader::new(cfg.to_json())
            .with("figure", "smoothed")
            .with("delta", smoothed.lag.rounded)
            .with("boundary", smoothed.boundary_note());
        let mut buf = Vec::new();
        write_smoothed_csv(&terms, &smoothed, &header, &mut buf)?;
        let mut out = create(dir, &name)?;
        let text = String::from_utf8(buf).expect("csv is utf-8");
        let mut lines = text.lines();
        // Header comment and column names, then the thinned rows.
        for _ in 0..2 {
            if let Some(l) = lines.next() {
                writeln!(out, "{l}")?;
            }
        }
        for l in lines.step_by(stride) {
            writeln!(out, "{l}")?;
        }
        out.flush()?;
        files.push(dir.join(name));
    }
    Ok(files)
}

/// Samples `count` spike sets on independent hidden paths and writes
/// `spikes.csv` with columns `sample,t,m,side`.
pub fn cmd_spikes(config: &ExperimentConfig, epsilon_min: f64, count: usize, dir: &Path) -> Result<PathBuf> {
    config.validate()?;
    let model = config.model();
    let seed = config.root_seed();
    let header = CsvHeader::new(config.to_json())
        .with("epsilon_min", epsilon_min)
        .with("samples", count);
    let mut out = create(dir, "spikes.csv")?;
    header.write(&mut out)?;
    writeln!(out, "sample,t,m,side")?;
    for r in 0..count as u32 {
        let mut chain = seed.substream(StreamKey::replica(r, StreamKind::ChainJumps));
        let mut rng = seed.substream(StreamKey::replica(r, StreamKind::Spikes));
        let base = sample_jump_path(&RatePair::from_model(&model), config.horizon, InitialLaw::Stationary, &mut chain)?;
        let set = sample_spike_process(&base, epsilon_min, &model, &mut rng)?;
        let mut buf = Vec::new();
        write_spikes_csv(&set, &CsvHeader::default(), &mut buf)?;
        for row in String::from_utf8(buf).expect("csv is utf-8").lines().skip(2) {
            writeln!(out, "{r},{row}")?;
        }
    }
    out.flush()?;
    Ok(dir.join("spikes.csv"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write<W: Write>(&self, out: &mut W) -> Result<()> {
        for c in &self.checks {
            writeln!(
                out,
                "{} {:<22} measured={:.3e} threshold={:.3e} {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.threshold,
                c.detail
            )?;
        }
        Ok(())
    }
}

fn check(name: &'static str, measured: f64, threshold: f64, detail: String) -> Check {
    Check {
        name,
        measured,
        threshold,
        passed: measured <= threshold,
        detail,
    }
}

/// Runs the invariant suite on the configured model (gamma overridden per
/// check) and reports measured values against their tolerances.
pub fn cmd_validate(config: &ExperimentConfig) -> Result<ValidationReport> {
    let mut checks = Vec::new();

    let tr = simulate_trajectory(config, 1e3, 1.0, 100, 0)?;
    let model = ModelParams::new(config.lambda, config.p, 1e3)?;
    let pi = &tr.filter.pi;
    let grid = *pi.grid();

    let a1 = additive_functional(pi, |_| 1.0, 0.1, 0.9)?;
    let exact = grid.time(grid.index_of(0.9).unwrap()) - grid.time(grid.index_of(0.1).unwrap());
    checks.push(check("additive_identity", (a1 - exact).abs(), 1e-12, format!("A={a1}")));

    // int_s^t a e^{-int_s^u a} du against 1 - e^{-int_s^t a}, trapezoid in u.
    let a: Vec<f64> = tr
        .filter
        .y_logit
        .values()
        .iter()
        .map(|&y| crate::smoother::damping_coefficient_logit(y, &model))
        .collect();
    let (i, j) = (grid.index_of(0.2).unwrap(), grid.index_of(0.2 + 0.01).unwrap());
    let mut inner = 0.0;
    let mut integrand = Vec::with_capacity(j - i + 1);
    integrand.push(a[i]);
    for k in i + 1..=j {
        inner += 0.5 * (a[k - 1] + a[k]) * grid.dt();
        integrand.push(a[k] * (-inner).exp());
    }
    let lhs = trapezoid_indices(&integrand, 0, integrand.len() - 1, grid.dt(), |v| v);
    let rhs = -(-inner).exp_m1();
    checks.push(check("exact_derivative", (lhs - rhs).abs() / rhs, 1e-3, format!("lhs={lhs} rhs={rhs}")));

    let delta = 10.0 * config.dt;
    let fast = smooth_logit(&tr.filter.y_logit, delta, &model)?;
    let ode = smooth_backward_ode(pi, delta, &model)?;
    let sup = fast
        .pi_smoothed
        .values()
        .iter()
        .zip(ode.pi_smoothed.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    checks.push(check("smoother_oracle", sup, 1e-5, format!("delta={delta}")));

    let terms = smoothing_terms_logit(&tr.filter.y_logit, 0.005, &model)?;
    let dual = (0..grid.len())
        .map(|k| (terms.complement_dual(k) - (1.0 - terms.smoothed_raw(k))).abs())
        .fold(0.0, f64::max);
    checks.push(check("dual_expression", dual, 1e-6, String::new()));

    let low = simulate_trajectory(config, 1e2, 1.0, 101, 0)?;
    let model_low = ModelParams::new(config.lambda, config.p, 1e2)?;
    let by_pi = integrate_filter_pi(&low.obs, &model_low, config.p, &FilterOptions::default())?;
    let cross = by_pi
        .pi
        .values()
        .iter()
        .zip(low.filter.pi.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    checks.push(check("cross_integrator", cross, 0.05, format!("clamps={}", by_pi.clamp_events)));

    checks.push(path_transform_check()?);

    let (spike_check, cdf_check) = spike_checks(config)?;
    checks.push(spike_check);
    checks.push(cdf_check);
    Ok(ValidationReport { checks })
}

/// Backward and forward formulas against RK4 on `da = db + e^{-a} dt` with a
/// smooth `b`.
fn path_transform_check() -> Result<Check> {
    let grid = TimeGrid::build(0.0, 1.0, 1e-4)?;
    let b_fn = |t: f64| 0.5 * (3.0 * t).sin();
    let db = |t: f64| 1.5 * (3.0 * t).cos();
    let b = SamplePath::from_fn(grid, b_fn)?;
    let (s, t, a_s) = (0.2, 0.8, 0.3);
    let rhs = |u: f64, a: f64| db(u) + (-a).exp();
    let steps = 6000;
    let h = (t - s) / steps as f64;
    let mut a = a_s;
    for n in 0..steps {
        let u = s + n as f64 * h;
        let k1 = rhs(u, a);
        let k2 = rhs(u + h / 2.0, a + h / 2.0 * k1);
        let k3 = rhs(u + h / 2.0, a + h / 2.0 * k2);
        let k4 = rhs(u + h, a + h * k3);
        a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    let fwd = forward_transform(&b, a_s, s, t)?;
    let bwd = backward_transform(&b, a, s, t)?;
    let err = (fwd - (a - a_s)).abs().max((bwd - (a - a_s)).abs());
    Ok(check("path_transforms", err, 1e-6, format!("a_t={a}")))
}

/// Mean truncated spike count and `P(M* <= 0.7)` on `x = 0` over `[0, 10]`
/// with `eps_min = 0.5`, 1000 samples, against their closed forms.
fn spike_checks(config: &ExperimentConfig) -> Result<(Check, Check)> {
    let model = config.model();
    let base = JumpPath::constant(State::Zero, 10.0)?;
    let n = 1000;
    let seed = config.root_seed();
    let sets = (0..n as u32)
        .map(|r| sample_spike_process(&base, 0.5, &model, &mut seed.substream(StreamKey::new(200, r, StreamKind::Spikes))))
        .collect::<Result<Vec<_>>>()?;
    let counts: Vec<f64> = sets.iter().map(|s| s.spikes.len() as f64).collect();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let expected = model.lambda * model.p * 10.0;
    let se = (expected / n as f64).sqrt();
    let count = check(
        "spike_count",
        (mean - expected).abs() / se,
        3.0,
        format!("mean={mean} expected={expected}"),
    );
    let cdf = max_spike_cdf(&base, &model, 0.3)?;
    let hits = sets.iter().filter(|s| crate::spikes::max_spike(s) <= 0.7).count();
    let est = ProportionEstimate::from_counts(hits, n)?;
    let se = (cdf * (1.0 - cdf) / n as f64).sqrt();
    let cdf_check = check(
        "max_spike_cdf",
        (est.estimate - cdf).abs() / se,
        3.0,
        format!("empirical={} closed_form={cdf}", est.estimate),
    );
    Ok((count, cdf_check))
}
