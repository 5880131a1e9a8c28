//! Boundary of a dominance region as a list of typed arcs.
//!
//! In the free plane and the corner world the boundary is assembled from
//! closed-form curves: the plane is cut into angular cells about the corner
//! vertex in which neither player's visibility changes, and inside a cell
//! `phi` is one of four closed forms. Polygon worlds fall back to a
//! marching-squares contour whose arcs are untyped.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::contour::zero_contour;
use crate::curves::{ApolloniusCircle, OvalCurve};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::region::DominanceRegion;
use crate::roots::bisect_predicate;
use crate::world::WorldKind;

/// Grid resolution for untyped contours.
pub const CONTOUR_CELLS: usize = 256;
/// Residual bound for contour vertices.
pub const CONTOUR_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ArcCurve {
    Apollonius { circle: ApolloniusCircle },
    Oval { oval: OvalCurve },
    CircleAtVertex { center: Point2, radius: f64 },
    Untyped,
}

impl ArcCurve {
    pub fn tag(&self) -> &'static str {
        match self {
            ArcCurve::Apollonius { .. } => "apollonius",
            ArcCurve::Oval { .. } => "oval",
            ArcCurve::CircleAtVertex { .. } => "vertex_circle",
            ArcCurve::Untyped => "untyped",
        }
    }

    /// Point at angle `t` about the pole.
    pub fn point_at(&self, t: f64) -> Point2 {
        match self {
            ArcCurve::Apollonius { circle } => circle.as_oval().point_at(t),
            ArcCurve::Oval { oval } => oval.point_at(t),
            ArcCurve::CircleAtVertex { center, radius } => *center + Point2::unit(t) * *radius,
            ArcCurve::Untyped => Point2::new(f64::NAN, f64::NAN),
        }
    }
}

/// One piece of the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryArc {
    pub curve: ArcCurve,
    /// Angular parameter interval about the curve's pole (untyped arcs use
    /// the vertex index range).
    pub param: [f64; 2],
    pub endpoints: [Point2; 2],
    pub points: Vec<Point2>,
}

impl BoundaryArc {
    pub fn is_closed(&self) -> bool {
        self.endpoints[0] == self.endpoints[1] && self.points.len() > 2
    }

    fn reversed(mut self) -> Self {
        self.param.swap(0, 1);
        self.endpoints.swap(0, 1);
        self.points.reverse();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    pub arcs: Vec<BoundaryArc>,
}

impl Boundary {
    /// Arc type tags in boundary order.
    pub fn summary(&self) -> Vec<&'static str> {
        self.arcs.iter().map(|a| a.curve.tag()).collect()
    }

    /// All points in order, consecutive arcs sharing their junction once.
    pub fn polyline(&self) -> Vec<Point2> {
        let mut out: Vec<Point2> = Vec::new();
        for a in &self.arcs {
            for p in &a.points {
                if out.last() != Some(p) {
                    out.push(*p);
                }
            }
        }
        out
    }

    pub fn junctions(&self) -> Vec<Point2> {
        self.arcs.windows(2).map(|w| w[0].endpoints[1]).collect()
    }
}

/// Builds the boundary of `region` with roughly `n_samples` points per
/// full turn of each curve.
pub fn boundary_arcs(region: &DominanceRegion, n_samples: usize) -> Result<Boundary> {
    let n = n_samples.max(64);
    match region.world.kind() {
        WorldKind::FreePlane => {
            let curve = if region.capture_radius == 0.0 {
                ArcCurve::Apollonius {
                    circle: ApolloniusCircle { focus_p: region.x_p, focus_e: region.x_e, alpha: region.alpha },
                }
            } else {
                ArcCurve::Oval {
                    oval: OvalCurve::new(region.x_p, region.x_e, region.alpha, region.capture_radius)?,
                }
            };
            let points: Vec<Point2> = (0..=n).map(|k| curve.point_at(TAU * k as f64 / n as f64)).collect();
            let first = points[0];
            let mut points = points;
            *points.last_mut().unwrap() = first;
            Ok(Boundary {
                arcs: vec![BoundaryArc { curve, param: [0.0, TAU], endpoints: [first, first], points }],
            })
        }
        WorldKind::CornerWedge { theta0 } => corner_arcs(region, *theta0, n),
        WorldKind::Polygons { .. } => contour_arcs(region),
    }
}

fn corner_arcs(region: &DominanceRegion, theta0: f64, n: usize) -> Result<Boundary> {
    let world = &region.world;
    let (xp, xe, al) = (region.x_p, region.x_e, region.alpha);
    let (lo, hi) = (theta0, TAU - theta0);
    let mut cuts = vec![lo, hi];
    for x in [xp, xe] {
        if x.norm() == 0.0 {
            continue;
        }
        let t = world.polar(x).theta;
        for c in [t + PI, t - PI] {
            if c > lo && c < hi {
                cuts.push(c);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    let sees = |x: Point2, theta: f64| x.norm() == 0.0 || (theta - world.polar(x).theta).abs() <= PI;

    let mut arcs = Vec::new();
    for cell in cuts.windows(2) {
        let (a, b) = (cell[0], cell[1]);
        let mid = 0.5 * (a + b);
        let curve = match (sees(xp, mid), sees(xe, mid)) {
            (true, true) => ArcCurve::Apollonius { circle: ApolloniusCircle { focus_p: xp, focus_e: xe, alpha: al } },
            (false, true) => ArcCurve::Oval { oval: OvalCurve::new(Point2::ORIGIN, xe, al, -xp.norm())? },
            (true, false) => match OvalCurve::new(xp, Point2::ORIGIN, al, al * xe.norm()) {
                Ok(oval) => ArcCurve::Oval { oval },
                Err(_) => continue,
            },
            (false, false) => {
                let radius = (xp.norm() - al * xe.norm()) / (al - 1.0);
                if radius <= 0.0 {
                    continue;
                }
                ArcCurve::CircleAtVertex { center: Point2::ORIGIN, radius }
            }
        };
        let inside = |p: Point2| {
            if !world.contains_point(p) || p.norm() == 0.0 {
                return false;
            }
            let t = world.polar(p).theta;
            t >= a && t <= b
        };
        arcs.extend(cell_runs(&curve, inside, n));
    }
    if arcs.is_empty() {
        return Err(Error::DegenerateRegion("boundary not found".into()));
    }
    Ok(Boundary { arcs: chain(arcs, |p| world.polar(p).theta) })
}

/// Maximal runs of `curve` (sampled by pole angle) on which `inside` holds.
fn cell_runs<F: Fn(Point2) -> bool>(curve: &ArcCurve, inside: F, n: usize) -> Vec<BoundaryArc> {
    let ts: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let flags: Vec<bool> = ts.iter().map(|&t| inside(curve.point_at(t))).collect();
    let make = |t0: f64, t1: f64| {
        let m = ((n as f64 * (t1 - t0) / TAU).ceil() as usize).max(16);
        let mut points: Vec<Point2> = (0..=m).map(|k| curve.point_at(t0 + (t1 - t0) * k as f64 / m as f64)).collect();
        if t1 - t0 >= TAU {
            let first = points[0];
            *points.last_mut().unwrap() = first;
        }
        BoundaryArc {
            curve: curve.clone(),
            param: [t0, t1],
            endpoints: [points[0], *points.last().unwrap()],
            points,
        }
    };
    if flags.iter().all(|&f| f) {
        return vec![make(0.0, TAU)];
    }
    if !flags.iter().any(|&f| f) {
        return Vec::new();
    }
    // rotate so that sample 0 is outside; runs then never wrap
    let off = flags.iter().position(|&f| !f).unwrap();
    let step = TAU / n as f64;
    let mut out = Vec::new();
    let mut k = 0;
    while k < n {
        let i = (off + k) % n;
        if !flags[i] {
            k += 1;
            continue;
        }
        let start = k;
        while k < n && flags[(off + k) % n] {
            k += 1;
        }
        let t_in0 = ts[off] + step * start as f64;
        let t_in1 = ts[off] + step * (k - 1) as f64;
        let s = bisect_predicate(|t| inside(curve.point_at(t)), t_in0, t_in0 - step, 1e-15);
        let e = bisect_predicate(|t| inside(curve.point_at(t)), t_in1, t_in1 + step, 1e-15);
        out.push(make(s, e));
    }
    out
}

/// Orders arcs into chains by matching endpoints, starting from the free
/// endpoint with the smallest `key`.
fn chain<K: Fn(Point2) -> f64>(mut arcs: Vec<BoundaryArc>, key: K) -> Vec<BoundaryArc> {
    let scale = arcs.iter().flat_map(|a| a.points.iter()).map(|p| p.norm()).fold(1.0, f64::max);
    let tol = 1e-7 * scale;
    let mut out = Vec::new();
    while !arcs.is_empty() {
        let matched = |p: Point2, skip: usize, arcs: &[BoundaryArc]| {
            arcs.iter().enumerate().any(|(j, b)| j != skip && b.endpoints.iter().any(|q| q.dist(p) <= tol))
        };
        let mut best: Option<(usize, bool, f64)> = None;
        for (i, a) in arcs.iter().enumerate() {
            for (end, p) in a.endpoints.iter().enumerate() {
                if a.is_closed() || !matched(*p, i, &arcs) {
                    let k = key(*p);
                    if best.map_or(true, |b| k < b.2) {
                        best = Some((i, end == 1, k));
                    }
                }
            }
        }
        let (i, flip) = best.map_or((0, false), |b| (b.0, b.1));
        let mut cur = arcs.remove(i);
        if flip {
            cur = cur.reversed();
        }
        loop {
            let tail = cur.endpoints[1];
            out.push(cur);
            let next = arcs
                .iter()
                .enumerate()
                .filter_map(|(j, b)| {
                    let d0 = b.endpoints[0].dist(tail);
                    let d1 = b.endpoints[1].dist(tail);
                    let (d, flip) = if d0 <= d1 { (d0, false) } else { (d1, true) };
                    (d <= tol).then_some((j, flip, d))
                })
                .min_by(|x, y| x.2.total_cmp(&y.2));
            match next {
                Some((j, flip, _)) => {
                    let b = arcs.remove(j);
                    cur = if flip { b.reversed() } else { b };
                }
                None => break,
            }
        }
    }
    out
}

fn contour_arcs(region: &DominanceRegion) -> Result<Boundary> {
    let field = region.field();
    let world = &region.world;
    let r = region.outer_bound() * 1.05;
    let c = region.x_e;
    let lines = zero_contour(
        |p| world.contains_point(p).then(|| field.phi(p)),
        c - Point2::new(r, r),
        c + Point2::new(r, r),
        CONTOUR_CELLS,
        CONTOUR_TOL,
    );
    if lines.is_empty() {
        return Err(Error::DegenerateRegion("no boundary found on the contour grid".into()));
    }
    let arcs = lines
        .into_iter()
        .map(|points| BoundaryArc {
            curve: ArcCurve::Untyped,
            param: [0.0, (points.len() - 1) as f64],
            endpoints: [points[0], *points.last().unwrap()],
            points,
        })
        .collect();
    Ok(Boundary { arcs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{Polygon, World};

    #[test]
    fn free_plane_single_circle() {
        let r = DominanceRegion::new(World::free_plane(), Point2::ORIGIN, Point2::new(1.0, 0.0), 2.0, 0.0).unwrap();
        let b = boundary_arcs(&r, 256).unwrap();
        assert_eq!(b.summary(), vec!["apollonius"]);
        assert!(b.arcs[0].is_closed());
        for p in b.polyline() {
            assert!(r.phi(p).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn corner_vertex_outside_is_one_closed_circle() {
        // evader far from the corner, pursuer close: region avoids the vertex
        let w = World::corner(0.2).unwrap();
        let r = DominanceRegion::new(w, Point2::new(-1.0, 0.5), Point2::new(-3.0, 0.5), 2.0, 0.0).unwrap();
        let b = boundary_arcs(&r, 512).unwrap();
        assert_eq!(b.summary(), vec!["apollonius"]);
    }

    #[test]
    fn polygon_contour_residuals() {
        let sq = Polygon::new(vec![
            Point2::new(1.0, -0.5),
            Point2::new(2.0, -0.5),
            Point2::new(2.0, 0.5),
            Point2::new(1.0, 0.5),
        ])
        .unwrap();
        let w = World::polygons(vec![sq]).unwrap();
        let r = DominanceRegion::new(w, Point2::new(3.0, 0.0), Point2::ORIGIN, 1.5, 0.0).unwrap();
        let b = boundary_arcs(&r, 256).unwrap();
        assert!(b.summary().iter().all(|t| *t == "untyped"));
        let field = r.field();
        for p in b.polyline() {
            assert!(field.phi(p).abs() <= CONTOUR_TOL);
        }
    }
}
