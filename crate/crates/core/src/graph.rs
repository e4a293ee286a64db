//! Point-sampled graphs of paths in `[0, H] x [0, 1]`.
//!
//! Both path metrics act on finite point sets. A graph is built by sampling
//! polylines and vertical bars so that consecutive samples along any piece
//! are at most `res` apart; the sampled set is then within Hausdorff
//! distance `res` of the ideal closed set.

use crate::error::{Error, Result};
use crate::grid::{SamplePath, TimeGrid};
use crate::path::JumpPath;

const COORD_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarGraph {
    points: Vec<[f64; 2]>,
    res: f64,
}

impl PlanarGraph {
    pub fn empty(res: f64) -> Result<Self> {
        if !(res > 0.0 && res.is_finite()) {
            return Err(Error::Config(format!("graph resolution must be positive, got {res}")));
        }
        Ok(Self {
            points: Vec::new(),
            res,
        })
    }

    /// Raw point set; coordinates must lie in `[0, inf) x [0, 1]`.
    pub fn from_points(points: Vec<[f64; 2]>, res: f64) -> Result<Self> {
        let mut g = Self::empty(res)?;
        for p in points {
            g.push(p)?;
        }
        Ok(g)
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn res(&self) -> f64 {
        self.res
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn push(&mut self, [t, v]: [f64; 2]) -> Result<()> {
        if !(t >= -COORD_SLACK && t.is_finite()) || !(-COORD_SLACK..=1.0 + COORD_SLACK).contains(&v) {
            return Err(Error::Domain(format!("graph point ({t}, {v}) outside [0,H]x[0,1]")));
        }
        self.points.push([t.max(0.0), v.clamp(0.0, 1.0)]);
        Ok(())
    }

    /// Samples the segment `a -> b` uniformly with spacing at most `res`,
    /// both endpoints included.
    pub fn add_segment(&mut self, a: [f64; 2], b: [f64; 2]) -> Result<()> {
        self.push(a)?;
        self.add_segment_tail(a, b)
    }

    /// Like [`add_segment`](Self::add_segment) but without re-emitting `a`.
    fn add_segment_tail(&mut self, a: [f64; 2], b: [f64; 2]) -> Result<()> {
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        let pieces = (len / self.res).ceil().max(1.0) as usize;
        for i in 1..=pieces {
            let s = i as f64 / pieces as f64;
            self.push([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])])?;
        }
        Ok(())
    }

    /// Vertical bar `{t} x [lo, hi]`.
    pub fn add_vertical_bar(&mut self, t: f64, lo: f64, hi: f64) -> Result<()> {
        self.add_segment([t, lo], [t, hi])
    }

    pub fn extend(&mut self, other: &PlanarGraph) {
        self.points.extend_from_slice(&other.points);
    }

    /// Bounding box `(tmin, tmax, vmin, vmax)`.
    pub fn bounds(&self) -> Option<(f64, f64, f64, f64)> {
        let first = self.points.first()?;
        Some(self.points.iter().fold(
            (first[0], first[0], first[1], first[1]),
            |(a, b, c, d), p| (a.min(p[0]), b.max(p[0]), c.min(p[1]), d.max(p[1])),
        ))
    }
}

/// Graph of a jump path over the span of `grid`: horizontal pieces at the
/// levels 0/1 and a full vertical bar at each jump inside the span.
pub fn graph_of_cadlag(path: &JumpPath, grid: &TimeGrid, res: f64) -> Result<PlanarGraph> {
    let mut g = PlanarGraph::empty(res)?;
    let (start, end) = (grid.t0(), grid.last_time());
    let mut t = start;
    let mut level = path.state_at(start.clamp(0.0, path.horizon()))?.as_f64();
    for &j in path.jumps().iter().filter(|&&j| j > start && j <= end) {
        g.add_segment([t, level], [j, level])?;
        g.add_vertical_bar(j, 0.0, 1.0)?;
        t = j;
        level = 1.0 - level;
    }
    g.add_segment([t, level], [end, level])?;
    Ok(g)
}

/// Graph of the linear interpolation of a grid path with values in `[0, 1]`.
pub fn graph_of_continuous(path: &SamplePath, res: f64) -> Result<PlanarGraph> {
    if let Some((k, v)) = path
        .values()
        .iter()
        .enumerate()
        .find(|(_, v)| !(0.0..=1.0).contains(*v))
    {
        return Err(Error::Domain(format!("path value {v} at index {k} outside [0,1]")));
    }
    thin_polyline(path, res)
}

/// As [`graph_of_continuous`], clamping values into `[0, 1]` first.
pub fn graph_of_continuous_clamped(path: &SamplePath, res: f64) -> Result<PlanarGraph> {
    thin_polyline(&path.map(|v| v.clamp(0.0, 1.0))?, res)
}

/// Greedy thinning: vertices within `res` of the last emitted sample are
/// skipped; longer hops are subdivided. Runs of exactly equal values are
/// merged first so flat stretches are sampled the same way as
/// [`graph_of_cadlag`] samples its horizontal pieces.
fn thin_polyline(path: &SamplePath, res: f64) -> Result<PlanarGraph> {
    let mut g = PlanarGraph::empty(res)?;
    let grid = path.grid();
    let vals = path.values();
    let n = vals.len();

    let mut vertices: Vec<[f64; 2]> = Vec::new();
    for k in 0..n {
        let interior_of_flat_run = k > 0 && k + 1 < n && vals[k - 1] == vals[k] && vals[k] == vals[k + 1];
        if !interior_of_flat_run {
            vertices.push([grid.time(k), vals[k]]);
        }
    }

    let dist = |a: [f64; 2], b: [f64; 2]| (b[0] - a[0]).hypot(b[1] - a[1]);
    let mut emitted = vertices[0];
    g.push(emitted)?;
    let mut prev = emitted;
    for &v in &vertices[1..] {
        if dist(emitted, v) <= res {
            prev = v;
            continue;
        }
        if prev != emitted {
            g.push(prev)?;
            emitted = prev;
        }
        g.add_segment_tail(emitted, v)?;
        emitted = v;
        prev = v;
    }
    if prev != emitted {
        g.push(prev)?;
    }
    Ok(g)
}
