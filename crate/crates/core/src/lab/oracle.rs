//! Reachability race oracle: geodesic distances from a grid search that
//! never touches the visibility graph or the corner closed form.

use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::CheckReport;
use crate::geometry::Point2;
use crate::region::DominanceRegion;
use crate::world::{Polygon, World};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub min: Point2,
    pub max: Point2,
    /// Cells per side; nodes are cell centers.
    pub cells: usize,
}

impl GridSpec {
    pub fn node(&self, i: usize, j: usize) -> Point2 {
        let h = self.cell();
        Point2::new(self.min.x + (i as f64 + 0.5) * h.x, self.min.y + (j as f64 + 0.5) * h.y)
    }

    pub fn cell(&self) -> Point2 {
        Point2::new((self.max.x - self.min.x) / self.cells as f64, (self.max.y - self.min.y) / self.cells as f64)
    }
}

/// Grid distances from one source, row-major over `(i, j)`.
pub struct OracleGrid {
    pub spec: GridSpec,
    pub dist: Vec<f64>,
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Neighbor offsets `(a, b)` with `max(|a|, |b|) <= r` and `gcd = 1`.
fn stencil(r: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            if (a, b) != (0, 0) && gcd(a, b) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Dijkstra over grid nodes. Nodes seen directly from `source` start at
/// their Euclidean distance; edges are straight segments checked against
/// the obstacles.
pub fn race_oracle_distances(world: &World, source: Point2, spec: GridSpec) -> OracleGrid {
    let n = spec.cells;
    let idx = |i: usize, j: usize| i * n + j;
    let mut dist = vec![f64::INFINITY; n * n];
    let inside: Vec<bool> = (0..n * n).into_par_iter().map(|k| world.contains_point(spec.node(k / n, k % n))).collect();
    let seed: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let x = spec.node(k / n, k % n);
            if inside[k] && world.visible(source, x).unwrap_or(false) {
                source.dist(x)
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let mut heap = BinaryHeap::new();
    for (k, d) in seed.iter().enumerate() {
        if d.is_finite() {
            dist[k] = *d;
            heap.push(Item(*d, k));
        }
    }
    let offsets = stencil(4);
    let mut done = vec![false; n * n];
    while let Some(Item(d, k)) = heap.pop() {
        if done[k] {
            continue;
        }
        done[k] = true;
        let (i, j) = (k / n, k % n);
        let x = spec.node(i, j);
        for &(a, b) in &offsets {
            let (ni, nj) = (i as i64 + a, j as i64 + b);
            if ni < 0 || nj < 0 || ni >= n as i64 || nj >= n as i64 {
                continue;
            }
            let m = idx(ni as usize, nj as usize);
            if done[m] || !inside[m] {
                continue;
            }
            let y = spec.node(ni as usize, nj as usize);
            let nd = d + x.dist(y);
            if nd < dist[m] && world.visible(x, y).unwrap_or(false) {
                dist[m] = nd;
                heap.push(Item(nd, m));
            }
        }
    }
    OracleGrid { spec, dist }
}

/// Two squares on either side of the x axis.
pub fn two_blocks() -> World {
    let sq = |cx: f64, cy: f64, r: f64| {
        Polygon::new(vec![
            Point2::new(cx - r, cy - r),
            Point2::new(cx + r, cy - r),
            Point2::new(cx + r, cy + r),
            Point2::new(cx - r, cy + r),
        ])
        .expect("square")
    };
    World::polygons(vec![sq(1.5, 1.5, 1.0), sq(-2.0, -1.0, 0.8)]).expect("disjoint squares")
}

/// Sign agreement between `phi` and the grid race on cells outside the
/// band `|phi| < cell diagonal`. The margin is the agreement fraction less
/// the required fraction.
pub fn check_reachability_oracle(region: &DominanceRegion, spec: GridSpec, required: f64, label: &str) -> CheckReport {
    let from_p = race_oracle_distances(&region.world, region.x_p, spec);
    let from_e = race_oracle_distances(&region.world, region.x_e, spec);
    let band = spec.cell().norm();
    let field = region.field();
    let n = spec.cells;
    let (mut agree, mut total) = (0usize, 0usize);
    let mut worst = String::new();
    for k in 0..n * n {
        let x = spec.node(k / n, k % n);
        if !region.world.contains_point(x) {
            continue;
        }
        let phi = field.phi(x);
        if phi.abs() < band {
            continue;
        }
        let race = from_p.dist[k] - region.alpha * from_e.dist[k] - region.capture_radius;
        total += 1;
        if (race > 0.0) == (phi > 0.0) {
            agree += 1;
        } else if worst.is_empty() {
            worst = format!("x={x} phi={phi} race={race}");
        }
    }
    let mut rep = CheckReport::new(format!("reachability_oracle.{label}"), 0.0);
    let frac = if total == 0 { 0.0 } else { agree as f64 / total as f64 };
    rep.observe(frac - required, || format!("agree={agree}/{total} {worst}"));
    rep.finish()
}
