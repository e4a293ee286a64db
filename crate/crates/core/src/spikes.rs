//! The limiting spike process: the graph of `x` decorated with vertical
//! segments at the points of a Poisson process with intensity
//! `lambda (p 1{x=0} + (1-p) 1{x=1}) dt dm/m^2`, truncated to `m > eps_min`.

use std::io::Write;

use rand::distr::{OpenClosed01, Open01};
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::config::ModelParams;
use crate::error::{Error, Result};
use crate::graph::{graph_of_cadlag, PlanarGraph};
use crate::grid::TimeGrid;
use crate::output::CsvHeader;
use crate::path::{JumpPath, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    From0,
    From1,
}

impl Side {
    pub fn of(state: State) -> Self {
        match state {
            State::Zero => Side::From0,
            State::One => Side::From1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::From0 => "from0",
            Side::From1 => "from1",
        }
    }

    /// Vertical extent `[0, m]` or `[1 - m, 1]`.
    pub fn extent(self, m: f64) -> (f64, f64) {
        match self {
            Side::From0 => (0.0, m),
            Side::From1 => (1.0 - m, 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spike {
    pub t: f64,
    pub m: f64,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpikeSet {
    pub base: JumpPath,
    /// Sorted by time.
    pub spikes: Vec<Spike>,
    pub epsilon_min: f64,
}

/// Slice of the limit estimator at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceClass {
    Zero,
    One,
    Both,
}

impl SliceClass {
    pub fn label(self) -> &'static str {
        match self {
            SliceClass::Zero => "{0}",
            SliceClass::One => "{1}",
            SliceClass::Both => "{0,1}",
        }
    }
}

/// Weight `p` in state 0 and `1 - p` in state 1.
fn state_weight(state: State, p: f64) -> f64 {
    match state {
        State::Zero => p,
        State::One => 1.0 - p,
    }
}

/// Expected number of spikes with `m > eps_min` over `base`.
pub fn expected_spike_count(base: &JumpPath, epsilon_min: f64, model: &ModelParams) -> f64 {
    weighted_occupation(base, model) * model.lambda * (1.0 / epsilon_min - 1.0)
}

/// `int_0^H (p 1{x=0} + (1-p) 1{x=1}) dt`.
pub fn weighted_occupation(base: &JumpPath, model: &ModelParams) -> f64 {
    let (zero, one) = base.occupation();
    model.p * zero + (1.0 - model.p) * one
}

/// `P(M* <= 1 - eta)` given the base path: the number of spikes longer than
/// `1 - eta` is Poisson with mean `lambda eta/(1-eta) int (p 1{x=0} + (1-p) 1{x=1})`.
pub fn max_spike_cdf(base: &JumpPath, model: &ModelParams, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Domain(format!("eta must lie in (0, 1), got {eta}")));
    }
    Ok((-(model.lambda * eta / (1.0 - eta)) * weighted_occupation(base, model)).exp())
}

/// Samples the truncated spike process on top of `base`.
pub fn sample_spike_process<R: Rng + ?Sized>(
    base: &JumpPath,
    epsilon_min: f64,
    model: &ModelParams,
    rng: &mut R,
) -> Result<SpikeSet> {
    if !(epsilon_min > 0.0 && epsilon_min <= 1.0) {
        return Err(Error::Domain(format!("epsilon_min must lie in (0, 1], got {epsilon_min}")));
    }
    let inv = 1.0 / epsilon_min;
    let mut spikes = Vec::new();
    for (a, b, state) in base.constancy_intervals() {
        let mean = model.lambda * state_weight(state, model.p) * (b - a) * (inv - 1.0);
        if !(mean > 0.0) {
            continue;
        }
        let count = Poisson::new(mean)
            .map_err(|e| Error::Domain(format!("spike count law: {e}")))?
            .sample(rng) as usize;
        for _ in 0..count {
            let u: f64 = rng.sample(Open01);
            let t = a + u * (b - a);
            // Inverse CDF of the density m^{-2}/(1/eps - 1) on (eps, 1].
            let v: f64 = rng.sample(OpenClosed01);
            let m = 1.0 / (inv - v * (inv - 1.0));
            spikes.push(Spike {
                t,
                m: m.min(1.0),
                side: Side::of(state),
            });
        }
    }
    spikes.sort_by(|x, y| x.t.total_cmp(&y.t));
    Ok(SpikeSet {
        base: base.clone(),
        spikes,
        epsilon_min,
    })
}

/// Longest spike, 0 if there is none.
pub fn max_spike(set: &SpikeSet) -> f64 {
    set.spikes.iter().map(|s| s.m).fold(0.0, f64::max)
}

impl SpikeSet {
    /// Spikes with `m > 1 - eta`.
    pub fn count_longer_than(&self, level: f64) -> usize {
        self.spikes.iter().filter(|s| s.m > level).count()
    }

    /// Slice of the limit estimator at time `t`: both values where the vertical
    /// slice of the decorated graph meets `[0, 1/2)` and `(1/2, 1]`, otherwise
    /// the side it lies in.
    pub fn estimator_at(&self, t: f64) -> Result<SliceClass> {
        if self.base.jumps().contains(&t) {
            return Ok(SliceClass::Both);
        }
        let state = self.base.state_at(t)?;
        let crosses = self.spikes.iter().any(|s| s.t == t && s.m > 0.5);
        Ok(match (crosses, state) {
            (true, _) => SliceClass::Both,
            (false, State::Zero) => SliceClass::Zero,
            (false, State::One) => SliceClass::One,
        })
    }
}

/// Times where the limit estimator is `{0,1}`: every jump and every spike
/// crossing 1/2, in time order. Elsewhere it is the singleton of the base state.
pub fn limit_estimator_slices(set: &SpikeSet) -> Vec<(f64, SliceClass)> {
    let mut out: Vec<(f64, SliceClass)> = set
        .base
        .jumps()
        .iter()
        .map(|&t| (t, SliceClass::Both))
        .chain(set.spikes.iter().filter(|s| s.m > 0.5).map(|s| (s.t, SliceClass::Both)))
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Graph of the base path with a vertical bar per spike.
pub fn spike_graph(set: &SpikeSet, res: f64) -> Result<PlanarGraph> {
    let span = TimeGrid::with_steps(0.0, set.base.horizon(), 1)?;
    let mut g = graph_of_cadlag(&set.base, &span, res)?;
    for s in &set.spikes {
        let (lo, hi) = s.side.extent(s.m);
        g.add_vertical_bar(s.t, lo, hi)?;
    }
    Ok(g)
}

/// Writes `t, m, side` rows.
pub fn write_spikes_csv<W: Write>(set: &SpikeSet, header: &CsvHeader, out: &mut W) -> Result<()> {
    header.write(out)?;
    writeln!(out, "t,m,side")?;
    for s in &set.spikes {
        writeln!(out, "{},{},{}", s.t, s.m, s.side.as_str())?;
    }
    Ok(())
}
