//! Fixed-lag smoothing of the filter.
//!
//! For `s <= t`, the smoothed probability `pi_{s,t} = P(x_s = 1 | y up to t)`
//! is
//!
//! ```text
//! pi_{s,t} = pi_t e^{-int_s^t a} + int_s^t lambda10 pi_u/(1-pi_u) e^{-int_s^u a} du
//! a(pi)    = lambda10 pi/(1-pi) + lambda01 (1-pi)/pi
//! ```
//!
//! and the lagged filter is `pi^{delta}_t = pi_{t-delta,t}`. For `t < delta`
//! the window is truncated at 0, i.e. `pi^{delta}_t = pi_{0,t}`.
//!
//! Everything is evaluated from the logit path, where
//! `lambda10 pi/(1-pi) = lambda10 e^Y` and `lambda01 (1-pi)/pi = lambda01 e^{-Y}`
//! stay finite even when `pi` rounds to 0 or 1.
//!
//! Discretization: on each grid interval `a` is replaced by its trapezoid
//! average `abar`, so `int a` is the trapezoid rule, and the integrand
//! `f e^{-int a}` is integrated exactly against that piecewise-linear
//! exponent with `f` frozen at its interval average. The two integrands
//! `lambda10 e^Y` and `lambda01 e^{-Y}` add up to `a`, hence the discrete
//! weights telescope to `1 - e^{-D}` exactly.

use std::io::Write;

use crate::config::ModelParams;
use crate::coordinates::{checked_logit, logistic};
use crate::error::{Error, Result};
use crate::grid::{SamplePath, TimeGrid};
use crate::output::CsvHeader;
use crate::path::JumpPath;

/// Smoothed values may leave `[0, 1]` by at most this much before being an error.
pub const SMOOTHED_RANGE_SLACK: f64 = 1e-9;

/// `a(pi) = lambda (1-p) pi/(1-pi) + lambda p (1-pi)/pi`.
pub fn damping_coefficient(pi: f64, model: &ModelParams) -> Result<f64> {
    if !(pi > 0.0 && pi < 1.0) {
        return Err(Error::Domain(format!("damping is infinite at pi = {pi}")));
    }
    Ok(model.rate10() * pi / (1.0 - pi) + model.rate01() * (1.0 - pi) / pi)
}

/// `a` as a function of the logit `Y`: `lambda (1-p) e^Y + lambda p e^{-Y}`.
pub fn damping_coefficient_logit(y: f64, model: &ModelParams) -> f64 {
    model.rate10() * y.exp() + model.rate01() * (-y).exp()
}

/// Lag rounded to a whole number of grid steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lag {
    pub requested: f64,
    pub steps: usize,
    pub rounded: f64,
}

impl Lag {
    pub fn on_grid(delta: f64, grid: &TimeGrid) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::Config(format!("lag must be non-negative, got {delta}")));
        }
        let steps = grid.steps_for(delta);
        Ok(Self {
            requested: delta,
            steps,
            rounded: steps as f64 * grid.dt(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DampingPath {
    /// Instantaneous damping `a(pi_u)`.
    pub a: SamplePath,
    /// `D_t = int_{max(t - delta, 0)}^t a_u du`.
    pub d: SamplePath,
    pub lag: Lag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedPath {
    pub pi_smoothed: SamplePath,
    pub lag: Lag,
    /// Grid points before the first full window, where `pi_{0,t}` is reported.
    pub truncated_points: usize,
    /// Points clipped back into `[0, 1]` (each by at most [`SMOOTHED_RANGE_SLACK`]).
    pub clipped_points: usize,
}

impl SmoothedPath {
    pub fn boundary_note(&self) -> &'static str {
        "t<delta:window_truncated_at_0"
    }
}

/// All per-time quantities of the lagged smoothing formula.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingTerms {
    pub lag: Lag,
    /// `D_t`.
    pub damping: Vec<f64>,
    /// `int lambda10 pi/(1-pi) e^{-int_s^u a} du`.
    pub primal: Vec<f64>,
    /// `int lambda01 (1-pi)/pi e^{-int_s^u a} du`.
    pub dual: Vec<f64>,
    /// The filter itself, `pi_t`.
    pub pi: Vec<f64>,
}

impl SmoothingTerms {
    /// `pi_t e^{-D} + primal`, unclipped.
    pub fn smoothed_raw(&self, k: usize) -> f64 {
        self.pi[k] * (-self.damping[k]).exp() + self.primal[k]
    }

    /// `1 - pi_{s,t}` by the dual expression `(1 - pi_t) e^{-D} + dual`.
    pub fn complement_dual(&self, k: usize) -> f64 {
        (1.0 - self.pi[k]) * (-self.damping[k]).exp() + self.dual[k]
    }

    /// `x + (pi_t - x) e^{-D} + 1{x=0} primal - 1{x=1} dual`.
    pub fn single_expression(&self, k: usize, x: f64) -> f64 {
        let e = (-self.damping[k]).exp();
        let base = x + (self.pi[k] - x) * e;
        if x == 0.0 {
            base + self.primal[k]
        } else {
            base - self.dual[k]
        }
    }
}

/// Per-interval quantities: `abar dt`, and the exact integrals over the
/// interval of `fbar e^{-abar (u - t_j)}` for both integrands.
struct Intervals {
    adt: Vec<f64>,
    cf: Vec<f64>,
    cg: Vec<f64>,
}

fn intervals(y: &[f64], dt: f64, model: &ModelParams) -> Intervals {
    let (l10, l01) = (model.rate10(), model.rate01());
    let n = y.len() - 1;
    let mut adt = Vec::with_capacity(n);
    let mut cf = Vec::with_capacity(n);
    let mut cg = Vec::with_capacity(n);
    let mut f0 = l10 * y[0].exp();
    let mut g0 = l01 * (-y[0]).exp();
    for k in 0..n {
        let f1 = l10 * y[k + 1].exp();
        let g1 = l01 * (-y[k + 1]).exp();
        let fbar = 0.5 * (f0 + f1);
        let gbar = 0.5 * (g0 + g1);
        let abar = fbar + gbar;
        let x = abar * dt;
        // int_0^dt e^{-abar u} du = (1 - e^{-x}) / abar
        let kernel = -(-x).exp_m1() / abar;
        adt.push(x);
        cf.push(fbar * kernel);
        cg.push(gbar * kernel);
        f0 = f1;
        g0 = g1;
    }
    Intervals { adt, cf, cg }
}

/// Computes the lagged smoothing terms from a logit path in O(n).
///
/// The grid is cut into blocks of `W` (window) steps. For `t_k` in the block
/// starting at anchor `b`, the window `[k - W, k]` is split at `b`: the part
/// left of `b` is a suffix sum accumulated backward from `b`, the part right
/// of `b` a prefix sum accumulated forward from `b`. Both only add
/// non-negative terms damped by factors `<= 1`, so there is no cancellation
/// however long the path.
pub fn smoothing_terms_logit(y_logit: &SamplePath, delta: f64, model: &ModelParams) -> Result<SmoothingTerms> {
    let grid = *y_logit.grid();
    let lag = Lag::on_grid(delta, &grid)?;
    let y = y_logit.values();
    let pi: Vec<f64> = y.iter().map(|&v| logistic(v)).collect();
    let len = grid.len();
    let w = lag.steps;
    if w == 0 {
        return Ok(SmoothingTerms {
            lag,
            damping: vec![0.0; len],
            primal: vec![0.0; len],
            dual: vec![0.0; len],
            pi,
        });
    }
    let iv = intervals(y, grid.dt(), model);

    let mut damping = vec![0.0; len];
    let mut primal = vec![0.0; len];
    let mut dual = vec![0.0; len];

    // Suffix quantities on [b - W, b], indexed by i - (b - W).
    let mut suf_s = vec![0.0; w + 1];
    let mut suf_f = vec![0.0; w + 1];
    let mut suf_g = vec![0.0; w + 1];

    let mut b = 0;
    while b < len {
        let left = b.saturating_sub(w);
        let span = b - left;
        suf_s[span] = 0.0;
        suf_f[span] = 0.0;
        suf_g[span] = 0.0;
        for off in (0..span).rev() {
            let j = left + off;
            let e = (-iv.adt[j]).exp();
            suf_s[off] = suf_s[off + 1] + iv.adt[j];
            suf_f[off] = iv.cf[j] + e * suf_f[off + 1];
            suf_g[off] = iv.cg[j] + e * suf_g[off + 1];
        }

        let mut q = 0.0;
        let mut pf = 0.0;
        let mut pg = 0.0;
        let end = (b + w).min(len);
        for k in b..end {
            let i = k.saturating_sub(w);
            let off = i - left;
            let s_i = suf_s[off];
            let to_anchor = (-s_i).exp();
            damping[k] = s_i + q;
            primal[k] = suf_f[off] + to_anchor * pf;
            dual[k] = suf_g[off] + to_anchor * pg;
            if k + 1 < len {
                let from_anchor = (-q).exp();
                pf += from_anchor * iv.cf[k];
                pg += from_anchor * iv.cg[k];
                q += iv.adt[k];
            }
        }
        b = end;
    }

    Ok(SmoothingTerms {
        lag,
        damping,
        primal,
        dual,
        pi,
    })
}

fn logit_path(pi: &SamplePath) -> Result<SamplePath> {
    let ys = pi
        .values()
        .iter()
        .map(|&v| checked_logit(v))
        .collect::<Result<Vec<_>>>()?;
    SamplePath::new(*pi.grid(), ys)
}

fn finish(terms: &SmoothingTerms, grid: TimeGrid) -> Result<SmoothedPath> {
    let mut clipped = 0;
    let mut out = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        let v = terms.smoothed_raw(k);
        if !(v >= -SMOOTHED_RANGE_SLACK && v <= 1.0 + SMOOTHED_RANGE_SLACK) {
            return Err(Error::Quadrature(format!(
                "smoothed value {v} at t = {} outside [0,1]",
                grid.time(k)
            )));
        }
        if !(0.0..=1.0).contains(&v) {
            clipped += 1;
        }
        out.push(v.clamp(0.0, 1.0));
    }
    Ok(SmoothedPath {
        pi_smoothed: SamplePath::new(grid, out)?,
        lag: terms.lag,
        truncated_points: terms.lag.steps.min(grid.len()),
        clipped_points: clipped,
    })
}

/// Lagged filter `pi_{t-delta, t}` from a logit path.
pub fn smooth_logit(y_logit: &SamplePath, delta: f64, model: &ModelParams) -> Result<SmoothedPath> {
    let terms = smoothing_terms_logit(y_logit, delta, model)?;
    finish(&terms, *y_logit.grid())
}

/// Lagged filter `pi_{t-delta, t}` from a path with values in `(0, 1)`.
pub fn smooth_path(pi: &SamplePath, delta: f64, model: &ModelParams) -> Result<SmoothedPath> {
    smooth_logit(&logit_path(pi)?, delta, model)
}

pub fn smoothing_terms(pi: &SamplePath, delta: f64, model: &ModelParams) -> Result<SmoothingTerms> {
    smoothing_terms_logit(&logit_path(pi)?, delta, model)
}

pub fn damping_window_logit(y_logit: &SamplePath, delta: f64, model: &ModelParams) -> Result<DampingPath> {
    let terms = smoothing_terms_logit(y_logit, delta, model)?;
    let grid = *y_logit.grid();
    let a = y_logit.map(|y| damping_coefficient_logit(y, model))?;
    Ok(DampingPath {
        a,
        d: SamplePath::new(grid, terms.damping)?,
        lag: terms.lag,
    })
}

/// `D_t`, the trapezoid integral of `a(pi)` over the trailing window.
pub fn damping_window(pi: &SamplePath, delta: f64, model: &ModelParams) -> Result<DampingPath> {
    damping_window_logit(&logit_path(pi)?, delta, model)
}

/// Independent route: integrates, for every `t`, the backward equation
/// `d/ds pi_{s,t} = -lambda10 pi_s/(1-pi_s) + a_s pi_{s,t}` from
/// `pi_{t,t} = pi_t` down to `s = t - delta` with classical RK4 in `s`.
/// Coefficients between grid points are linearly interpolated. Cost is
/// O(n W).
pub fn smooth_backward_ode(pi: &SamplePath, delta: f64, model: &ModelParams) -> Result<SmoothedPath> {
    let grid = *pi.grid();
    let lag = Lag::on_grid(delta, &grid)?;
    let y = logit_path(pi)?;
    let l10 = model.rate10();
    let f: Vec<f64> = y.values().iter().map(|&v| l10 * v.exp()).collect();
    let a: Vec<f64> = y.values().iter().map(|&v| damping_coefficient_logit(v, model)).collect();
    let h = grid.dt();
    let mut out = Vec::with_capacity(grid.len());
    let mut clipped = 0;
    for k in 0..grid.len() {
        let start = k.saturating_sub(lag.steps);
        let mut z = pi.value(k);
        // Step from node j to node j - 1; rhs in s is -f + a z, so the
        // backward step uses the negated field.
        for j in (start + 1..=k).rev() {
            let rhs = |f: f64, a: f64, z: f64| f - a * z;
            let (f1, a1) = (f[j], a[j]);
            let (fm, am) = (0.5 * (f[j] + f[j - 1]), 0.5 * (a[j] + a[j - 1]));
            let (f0, a0) = (f[j - 1], a[j - 1]);
            let k1 = rhs(f1, a1, z);
            let k2 = rhs(fm, am, z + 0.5 * h * k1);
            let k3 = rhs(fm, am, z + 0.5 * h * k2);
            let k4 = rhs(f0, a0, z + h * k3);
            z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if !z.is_finite() || !(z >= -SMOOTHED_RANGE_SLACK && z <= 1.0 + SMOOTHED_RANGE_SLACK) {
            return Err(Error::Quadrature(format!(
                "backward ODE value {z} at t = {} outside [0,1]",
                grid.time(k)
            )));
        }
        if !(0.0..=1.0).contains(&z) {
            clipped += 1;
        }
        out.push(z.clamp(0.0, 1.0));
    }
    Ok(SmoothedPath {
        pi_smoothed: SamplePath::new(grid, out)?,
        lag,
        truncated_points: lag.steps.min(grid.len()),
        clipped_points: clipped,
    })
}

/// `A_{s,t}(f) = int_s^t f(pi_u) du` by the trapezoid rule on the grid.
pub fn additive_functional(pi: &SamplePath, f: impl Fn(f64) -> f64, s: f64, t: f64) -> Result<f64> {
    let g = pi.grid();
    let i = g.index_of(s).ok_or_else(|| Error::Domain(format!("time {s} outside the grid")))?;
    let j = g.index_of(t).ok_or_else(|| Error::Domain(format!("time {t} outside the grid")))?;
    if i > j {
        return Err(Error::Domain(format!("s = {s} after t = {t}")));
    }
    Ok(trapezoid_indices(pi.values(), i, j, g.dt(), f))
}

pub(crate) fn trapezoid_indices(v: &[f64], i: usize, j: usize, dt: f64, f: impl Fn(f64) -> f64) -> f64 {
    if i == j {
        return 0.0;
    }
    let inner: f64 = v[i + 1..j].iter().map(|&x| f(x)).sum();
    dt * (0.5 * f(v[i]) + inner + 0.5 * f(v[j]))
}

/// Writes `t, pi, pi_smoothed, D` rows.
pub fn write_smoothed_csv<W: Write>(
    terms: &SmoothingTerms,
    smoothed: &SmoothedPath,
    header: &CsvHeader,
    out: &mut W,
) -> Result<()> {
    header.write(out)?;
    writeln!(out, "t,pi,pi_smoothed,D")?;
    let grid = smoothed.pi_smoothed.grid();
    for k in 0..grid.len() {
        writeln!(
            out,
            "{},{},{},{}",
            grid.time(k),
            terms.pi[k],
            smoothed.pi_smoothed.value(k),
            terms.damping[k]
        )?;
    }
    Ok(())
}

/// Grid indices whose trailing window `[t - delta, t]` contains no jump of `x`
/// and lies inside `[0, H]`.
pub fn jump_free_windows(x: &JumpPath, grid: &TimeGrid, lag_steps: usize) -> Vec<usize> {
    (lag_steps..grid.len())
        .filter(|&k| {
            let t = grid.time(k);
            let s = grid.time(k - lag_steps);
            x.jumps_up_to(t) == x.jumps_up_to(s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> ModelParams {
        ModelParams::new(1.3, 0.4, 100.0).unwrap()
    }

    #[test]
    fn damping_examples() {
        let m = model();
        assert!((damping_coefficient(0.5, &m).unwrap() - 1.3).abs() < 1e-15);
        let v = damping_coefficient(0.01, &m).unwrap();
        let oracle = 1.3 * 0.6 * (0.01 / 0.99) + 1.3 * 0.4 * (0.99 / 0.01);
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - 51.49).abs() < 0.01);
        assert!(damping_coefficient(0.0, &m).is_err());
        assert!(damping_coefficient(1.0, &m).is_err());
    }

    #[test]
    fn damping_minimum() {
        let m = model();
        let floor = 2.0 * 1.3 * (0.4f64 * 0.6).sqrt();
        // odds = sqrt(p/(1-p)) at the minimum.
        let odds = (0.4f64 / 0.6).sqrt();
        let arg = odds / (1.0 + odds);
        assert!((damping_coefficient(arg, &m).unwrap() - floor).abs() < 1e-12);
        for i in 1..1000 {
            let pi = i as f64 / 1000.0;
            assert!(damping_coefficient(pi, &m).unwrap() >= floor - 1e-12);
        }
    }

    #[test]
    fn lag_rounding() {
        let g = TimeGrid::build(0.0, 1.0, 1e-3).unwrap();
        for d in [0.0, 0.0104, 0.0105, 0.25, 0.33333] {
            let lag = Lag::on_grid(d, &g).unwrap();
            assert!((lag.rounded - d).abs() <= g.dt() / 2.0 + 1e-15);
        }
        assert!(Lag::on_grid(-1.0, &g).is_err());
    }

    #[test]
    fn zero_lag_is_identity() {
        let g = TimeGrid::build(0.0, 1.0, 1e-3).unwrap();
        let pi = SamplePath::from_fn(g, |t| 0.5 + 0.4 * (9.0 * t).sin()).unwrap();
        let s = smooth_path(&pi, 0.0, &model()).unwrap();
        for (a, b) in s.pi_smoothed.values().iter().zip(pi.values()) {
            assert!((a - b).abs() < 1e-15);
        }
        let s = smooth_backward_ode(&pi, 0.0, &model()).unwrap();
        assert_eq!(s.pi_smoothed.values(), pi.values());
        let d = damping_window(&pi, 0.0, &model()).unwrap();
        assert!(d.d.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_path_closed_forms() {
        let m = model();
        let g = TimeGrid::build(0.0, 1.0, 1e-3).unwrap();
        let c = 0.2;
        let pi = SamplePath::constant(g, c).unwrap();
        let delta = 0.05;
        let ac = damping_coefficient(c, &m).unwrap();
        let d = damping_window(&pi, delta, &m).unwrap();
        let lag = d.lag;
        for k in lag.steps..g.len() {
            assert!((d.d.value(k) - ac * lag.rounded).abs() < 1e-12);
        }
        let expected = c * (-ac * lag.rounded).exp()
            + (m.rate10() * c / (1.0 - c)) * (1.0 - (-ac * lag.rounded).exp()) / ac;
        let s = smooth_path(&pi, delta, &m).unwrap();
        let o = smooth_backward_ode(&pi, delta, &m).unwrap();
        for k in lag.steps..g.len() {
            assert!((s.pi_smoothed.value(k) - expected).abs() < 1e-12);
            assert!((o.pi_smoothed.value(k) - expected).abs() < 1e-12);
        }
        // Truncated windows at the start still follow the closed form with t - 0.
        let k = lag.steps / 2;
        let span = g.time(k);
        let e = c * (-ac * span).exp() + (m.rate10() * c / (1.0 - c)) * (1.0 - (-ac * span).exp()) / ac;
        assert!((s.pi_smoothed.value(k) - e).abs() < 1e-12);
    }

    #[test]
    fn additive_functional_examples() {
        let g = TimeGrid::build(0.0, 2.0, 1e-3).unwrap();
        let pi = SamplePath::from_fn(g, |t| 0.5 + 0.45 * (5.0 * t).cos()).unwrap();
        let one = additive_functional(&pi, |_| 1.0, 0.3, 1.7).unwrap();
        assert!((one - (g.time(1700) - g.time(300))).abs() <= 1e-12);
        assert_eq!(additive_functional(&pi, |_| 1.0, 0.5, 0.5).unwrap(), 0.0);
        assert!(additive_functional(&pi, |_| 1.0, 1.0, 0.5).is_err());

        let m = model();
        let d = damping_window(&pi, 0.1, &m).unwrap();
        let k = 1500;
        let direct = additive_functional(&pi, |v| damping_coefficient(v, &m).unwrap(), g.time(k - 100), g.time(k)).unwrap();
        assert!((direct - d.d.value(k)).abs() <= 1e-12 * direct);

        let inside = |v: f64| if (0.1..=0.9).contains(&v) { 1.0 } else { 0.0 };
        let occ = additive_functional(&pi, inside, 0.0, 2.0).unwrap();
        let riemann: f64 = (0..g.n()).map(|k| 0.5 * (inside(pi.value(k)) + inside(pi.value(k + 1))) * g.dt()).sum();
        assert!((occ - riemann).abs() < 1e-12);
    }

    #[test]
    fn identity_and_dual_are_exact_on_the_discrete_rule() {
        let m = model();
        let g = TimeGrid::build(0.0, 1.0, 1e-3).unwrap();
        let pi = SamplePath::from_fn(g, |t| 0.5 + 0.49 * (13.0 * t).sin()).unwrap();
        let terms = smoothing_terms(&pi, 0.08, &m).unwrap();
        for k in 0..g.len() {
            let lhs = terms.primal[k] + terms.dual[k];
            let rhs = -(-terms.damping[k]).exp_m1();
            assert!((lhs - rhs).abs() < 1e-14);
            assert!((terms.complement_dual(k) - (1.0 - terms.smoothed_raw(k))).abs() < 1e-14);
        }
    }

    #[test]
    fn damping_is_monotone_in_lag() {
        let m = model();
        let g = TimeGrid::build(0.0, 1.0, 1e-3).unwrap();
        let pi = SamplePath::from_fn(g, |t| 0.5 + 0.45 * (21.0 * t).sin()).unwrap();
        let mut prev = damping_window(&pi, 0.0, &m).unwrap().d;
        for delta in [0.01, 0.05, 0.2, 0.5] {
            let d = damping_window(&pi, delta, &m).unwrap().d;
            // Equal truncated windows near t = 0 are summed in a different
            // order for each lag, hence the few-ulp slack.
            for (a, b) in d.values().iter().zip(prev.values()) {
                assert!(*a >= *b * (1.0 - 4.0 * f64::EPSILON));
            }
            prev = d;
        }
    }

    #[test]
    fn block_algorithm_matches_direct_window_sums() {
        let m = model();
        let g = TimeGrid::build(0.0, 0.5, 1e-3).unwrap();
        let y = SamplePath::from_fn(g, |t| 6.0 * (17.0 * t).sin() - 2.0).unwrap();
        for w in [1usize, 3, 7, 50, 600] {
            let terms = smoothing_terms_logit(&y, w as f64 * g.dt(), &m).unwrap();
            let iv = intervals(y.values(), g.dt(), &m);
            for k in 0..g.len() {
                let i = k.saturating_sub(w);
                let (mut acc, mut pf, mut pg) = (0.0f64, 0.0, 0.0);
                for j in i..k {
                    let e = (-acc).exp();
                    pf += e * iv.cf[j];
                    pg += e * iv.cg[j];
                    acc += iv.adt[j];
                }
                assert!((terms.damping[k] - acc).abs() <= 1e-12 * (1.0 + acc));
                assert!((terms.primal[k] - pf).abs() <= 1e-12);
                assert!((terms.dual[k] - pg).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn out_of_range_input_rejected() {
        let g = TimeGrid::build(0.0, 1.0, 0.5).unwrap();
        let pi = SamplePath::new(g, vec![0.5, 1.0, 0.5]).unwrap();
        assert!(smooth_path(&pi, 0.5, &model()).is_err());
    }
}
