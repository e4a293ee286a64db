//! Hausdorff distance between sampled point sets.
//!
//! The second set is bucketed in a uniform grid; each query scans rings of
//! cells outward until the ring lower bound exceeds the best candidate. A
//! query stops as soon as it finds a point closer than the running maximum,
//! since it can no longer raise the directed distance.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::PlanarGraph;

type Point = [f64; 2];

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// `max_{a in A} min_{b in B} |a - b|` by exhaustive search.
pub fn directed_brute_force(a: &[Point], b: &[Point]) -> f64 {
    a.iter()
        .map(|&p| b.iter().map(|&q| dist(p, q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

struct Buckets<'a> {
    points: &'a [Point],
    x0: f64,
    y0: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    /// `start[c]..start[c + 1]` indexes `order` for cell `c`.
    start: Vec<usize>,
    order: Vec<usize>,
}

impl<'a> Buckets<'a> {
    fn new(points: &'a [Point]) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        let (w, h) = (x1 - x0, y1 - y0);
        let n = points.len() as f64;
        // About two points per cell for points spread over the bounding box,
        // with a floor so degenerate boxes still get a positive cell size.
        let mut cell = ((w * h) / n * 2.0).sqrt();
        let floor = (w.max(h) / n).max(1e-12);
        if !(cell > floor) {
            cell = floor;
        }
        let nx = ((w / cell) as usize + 1).min(1 << 20);
        let ny = ((h / cell) as usize + 1).min(1 << 20);
        let cell = cell.max(w / nx as f64).max(h / ny as f64);
        let mut b = Self {
            points,
            x0,
            y0,
            cell,
            nx,
            ny,
            start: vec![0; nx * ny + 1],
            order: vec![0; points.len()],
        };
        let ids: Vec<usize> = points.iter().map(|&p| b.cell_id(b.coords(p))).collect();
        for &c in &ids {
            b.start[c + 1] += 1;
        }
        for c in 0..nx * ny {
            b.start[c + 1] += b.start[c];
        }
        let mut fill = b.start.clone();
        for (i, &c) in ids.iter().enumerate() {
            b.order[fill[c]] = i;
            fill[c] += 1;
        }
        b
    }

    fn coords(&self, p: Point) -> (usize, usize) {
        let ix = ((p[0] - self.x0) / self.cell).floor().clamp(0.0, (self.nx - 1) as f64) as usize;
        let iy = ((p[1] - self.y0) / self.cell).floor().clamp(0.0, (self.ny - 1) as f64) as usize;
        (ix, iy)
    }

    fn cell_id(&self, (ix, iy): (usize, usize)) -> usize {
        iy * self.nx + ix
    }

    fn scan_cell(&self, ix: usize, iy: usize, q: Point, best: &mut f64) {
        let c = self.cell_id((ix, iy));
        for &i in &self.order[self.start[c]..self.start[c + 1]] {
            let d = dist(q, self.points[i]);
            if d < *best {
                *best = d;
            }
        }
    }

    /// Nearest distance from `q`, or any value `<= stop_below` once one is found.
    fn nearest(&self, q: Point, stop_below: f64) -> f64 {
        let (cx, cy) = self.coords(q);
        let mut best = f64::INFINITY;
        let max_ring = self.nx.max(self.ny);
        for r in 0..=max_ring {
            if r >= 1 && best <= (r - 1) as f64 * self.cell {
                break;
            }
            let (r_i, cx_i, cy_i) = (r as isize, cx as isize, cy as isize);
            let (nx, ny) = (self.nx as isize, self.ny as isize);
            for dy in -r_i..=r_i {
                let y = cy_i + dy;
                if y < 0 || y >= ny {
                    continue;
                }
                if dy.abs() == r_i {
                    for x in (cx_i - r_i).max(0)..=(cx_i + r_i).min(nx - 1) {
                        self.scan_cell(x as usize, y as usize, q, &mut best);
                    }
                } else {
                    for x in [cx_i - r_i, cx_i + r_i] {
                        if x >= 0 && x < nx {
                            self.scan_cell(x as usize, y as usize, q, &mut best);
                        }
                    }
                }
            }
            if best <= stop_below {
                break;
            }
        }
        best
    }
}

/// `max_{a in A} min_{b in B} |a - b|` via spatial bucketing.
pub fn directed(a: &[Point], b: &[Point]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let buckets = Buckets::new(b);
    // The early exit only needs a lower bound on the final maximum, so each
    // chunk keeps its own running value; the result does not depend on how
    // the work is split.
    Ok(a.par_chunks(4096)
        .map(|chunk| {
            let mut m: f64 = 0.0;
            for &q in chunk {
                let d = buckets.nearest(q, m);
                if d > m {
                    m = d;
                }
            }
            m
        })
        .reduce(|| 0.0, f64::max))
}

/// Hausdorff distance between the sampled graphs. The sampling itself adds an
/// uncertainty of up to the coarser of the two resolutions.
pub fn distance_h(g1: &PlanarGraph, g2: &PlanarGraph) -> Result<f64> {
    Ok(directed(g1.points(), g2.points())?.max(directed(g2.points(), g1.points())?))
}
