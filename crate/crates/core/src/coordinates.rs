//! Coordinate changes for the filter: the logit map, the scale function,
//! the residual decomposition of the logit SDE and the two path transforms
//! that integrate `da = db + e^{-a} dt` for a known driver `b`.

use crate::config::ModelParams;
use crate::error::{Error, Result};
use crate::filter::{FilterPath, InnovationIncrements};
use crate::grid::SamplePath;

/// `log(x / (1 - x))`.
pub fn logit(x: f64) -> f64 {
    x.ln() - (-x).ln_1p()
}

/// `1 / (1 + e^{-y})`, evaluated without overflow for either sign of `y`.
pub fn logistic(y: f64) -> f64 {
    if y >= 0.0 {
        1.0 / (1.0 + (-y).exp())
    } else {
        let e = y.exp();
        e / (1.0 + e)
    }
}

pub fn checked_logit(x: f64) -> Result<f64> {
    if x > 0.0 && x < 1.0 {
        Ok(logit(x))
    } else {
        Err(Error::Domain(format!("logit undefined at {x}")))
    }
}

/// `g(x) = p (1/x + log((1-x)/x)) + (1-p) (1/(1-x) + log(x/(1-x)))`.
pub fn scale_g(x: f64, p: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("g undefined at {x}")));
    }
    let l = logit(x);
    Ok(p * (1.0 / x - l) + (1.0 - p) * (1.0 / (1.0 - x) + l))
}

pub const SCALE_H_TOL: f64 = 1e-9;
const SIMPSON_MAX_DEPTH: u32 = 48;

/// Scale function `h(x) = x0 + int_{x0}^{x} exp((2 lambda / gamma) g(y)) dy`,
/// by adaptive Simpson quadrature to an absolute tolerance of `1e-9`.
pub fn scale_h(x: f64, model: &ModelParams, x0: f64) -> Result<f64> {
    for v in [x, x0] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Domain(format!("scale function undefined at {v}")));
        }
    }
    if model.gamma <= 0.0 {
        return Err(Error::Config("scale function needs gamma > 0".into()));
    }
    let c = 2.0 * model.lambda / model.gamma;
    let p = model.p;
    let f = |y: f64| {
        let l = logit(y);
        (c * (p * (1.0 / y - l) + (1.0 - p) * (1.0 / (1.0 - y) + l))).exp()
    };
    if x == x0 {
        return Ok(x0);
    }
    let (lo, hi, sign) = if x > x0 { (x0, x, 1.0) } else { (x, x0, -1.0) };
    Ok(x0 + sign * adaptive_simpson(&f, lo, hi, SCALE_H_TOL)?)
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, SIMPSON_MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if !diff.is_finite() {
        return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
    }
    if diff.abs() <= 15.0 * tol {
        return Ok(left + right + diff / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "adaptive Simpson did not converge on [{a}, {b}] (error {diff:e})"
        )));
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}

/// The residual decomposition of the logit path:
/// `a = Y - log(lambda p)`, `b = sqrt(gamma) W - gamma t / 2 + r`, with
/// `r_t = int_0^t (lambda (2p-1) - lambda (1-p) e^{Y} + gamma pi) du`,
/// so that `da = db + e^{-a} dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualDecomposition {
    pub a_path: SamplePath,
    pub b_path: SamplePath,
    pub r_path: SamplePath,
}

impl ResidualDecomposition {
    /// Largest per-step defect `|da_k - db_k - e^{-a_k} dt|`.
    pub fn max_step_defect(&self) -> f64 {
        let dt = self.a_path.grid().dt();
        let a = self.a_path.values();
        let b = self.b_path.values();
        (0..a.len() - 1)
            .map(|k| ((a[k + 1] - a[k]) - (b[k + 1] - b[k]) - (-a[k]).exp() * dt).abs())
            .fold(0.0, f64::max)
    }
}

/// Uses `1 + tanh(Y/2) = 2 pi` in the integrand of `r`.
pub fn residual_decompose(
    filter: &FilterPath,
    innovation: &InnovationIncrements,
    model: &ModelParams,
) -> Result<ResidualDecomposition> {
    let grid = *filter.grid();
    if !grid.same_as(innovation.grid()) {
        return Err(Error::GridMismatch("filter and innovation grids differ".into()));
    }
    let dt = grid.dt();
    let (lambda, p, gamma) = (model.lambda, model.p, model.gamma);
    let ys = filter.y_logit.values();
    let integrand = |k: usize| {
        let y = ys[k];
        lambda * (2.0 * p - 1.0) - lambda * (1.0 - p) * y.exp() + gamma * logistic(y)
    };

    let shift = (lambda * p).ln();
    let a: Vec<f64> = ys.iter().map(|y| y - shift).collect();

    let mut r = Vec::with_capacity(grid.len());
    r.push(0.0);
    let mut acc = 0.0;
    let mut prev = integrand(0);
    for k in 1..grid.len() {
        let cur = integrand(k);
        acc += 0.5 * dt * (prev + cur);
        r.push(acc);
        prev = cur;
    }

    let w = innovation.cumulative();
    let s = gamma.sqrt();
    let b: Vec<f64> = (0..grid.len())
        .map(|k| s * w.value(k) - 0.5 * gamma * (grid.time(k) - grid.t0()) + r[k])
        .collect();

    Ok(ResidualDecomposition {
        a_path: SamplePath::new(grid, a)?,
        b_path: SamplePath::new(grid, b)?,
        r_path: SamplePath::new(grid, r)?,
    })
}

fn window_indices(b: &SamplePath, s: f64, t: f64) -> Result<(usize, usize)> {
    let g = b.grid();
    let i = g.index_of(s).ok_or_else(|| Error::Domain(format!("time {s} outside the grid")))?;
    let j = g.index_of(t).ok_or_else(|| Error::Domain(format!("time {t} outside the grid")))?;
    if i > j {
        return Err(Error::Domain(format!("window start {s} after end {t}")));
    }
    Ok((i, j))
}

/// `log(dt * trapezoid sum of e^{e_k})` for exponents `e_k`, computed
/// around the maximum exponent.
fn log_trapezoid_exp(exponents: &[f64], dt: f64) -> f64 {
    let n = exponents.len();
    if n < 2 {
        return f64::NEG_INFINITY;
    }
    let m = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = exponents
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            w * (e - m).exp()
        })
        .sum();
    m + (sum * dt).ln()
}

/// Backward formula: given `a_t`, returns
/// `a_t - a_s = b_{s,t} - log(1 - e^{-a_t} int_s^t e^{b_t - b_u} du)`.
pub fn backward_transform(b: &SamplePath, a_terminal: f64, s: f64, t: f64) -> Result<f64> {
    let (i, j) = window_indices(b, s, t)?;
    let bv = b.values();
    let bt = bv[j];
    let exps: Vec<f64> = bv[i..=j].iter().map(|bu| bt - bu).collect();
    let log_term = log_trapezoid_exp(&exps, b.grid().dt()) - a_terminal;
    let argument = -log_term.exp_m1();
    if !(argument > 0.0) {
        return Err(Error::SingularWindow { argument });
    }
    Ok((bt - bv[i]) - argument.ln())
}

/// Forward formula: given `a_s`, returns
/// `a_t - a_s = b_{s,t} + log(1 + e^{-a_s} int_s^t e^{-(b_u - b_s)} du)`.
pub fn forward_transform(b: &SamplePath, a_initial: f64, s: f64, t: f64) -> Result<f64> {
    let (i, j) = window_indices(b, s, t)?;
    let bv = b.values();
    let bs = bv[i];
    let exps: Vec<f64> = bv[i..=j].iter().map(|bu| bs - bu).collect();
    let log_term = log_trapezoid_exp(&exps, b.grid().dt()) - a_initial;
    Ok((bv[j] - bs) + softplus(log_term))
}

/// `log(1 + e^x)`.
fn softplus(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
