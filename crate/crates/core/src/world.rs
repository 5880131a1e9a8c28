//! The playable region `X`: free plane, a single corner wedge, or a set of
//! polygonal obstacles, together with the shortest-path metric on it.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{point_segment_distance, segment_params, wrap_tau, Point2, PolarPoint};

/// Distance below which a point is considered to be on an obstacle edge.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Relative length tolerance for detecting two tied shortest paths.
pub const TIE_TOL: f64 = 1e-9;

/// A simple polygon given by its vertices in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidWorld(format!("polygon needs at least 3 vertices, got {n}")));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidWorld("polygon vertex is not finite".into()));
        }
        let poly = Self { vertices };
        let area = poly.signed_area();
        if area.abs() < 1e-12 {
            return Err(Error::InvalidWorld("polygon has zero area".into()));
        }
        if area < 0.0 {
            return Err(Error::InvalidWorld("polygon vertices must be counterclockwise".into()));
        }
        for i in 0..n {
            let (a, b) = poly.edge(i);
            if a.dist(b) == 0.0 {
                return Err(Error::InvalidWorld("polygon has repeated vertex".into()));
            }
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (c, d) = poly.edge(j);
                if segments_touch(a, b, c, d) {
                    return Err(Error::InvalidWorld("polygon is not simple".into()));
                }
            }
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = self.edge(i);
                a.cross(b)
            })
            .sum::<f64>()
            / 2.0
    }

    pub fn boundary_distance(&self, p: Point2) -> f64 {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                point_segment_distance(p, a, b)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Crossing-number point-in-polygon test, ignoring the boundary band.
    fn winds(&self, p: Point2) -> bool {
        let mut inside = false;
        let n = self.vertices.len();
        let mut j = n - 1;
        for i in 0..n {
            let (vi, vj) = (self.vertices[i], self.vertices[j]);
            if (vi.y > p.y) != (vj.y > p.y) {
                let x = vj.x + (p.y - vj.y) * (vi.x - vj.x) / (vi.y - vj.y);
                if p.x < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// True when `p` lies in the open interior, farther than the boundary
    /// tolerance from every edge.
    pub fn strictly_contains(&self, p: Point2) -> bool {
        self.winds(p) && self.boundary_distance(p) > BOUNDARY_TOL
    }

    /// Vertices at which the polygon is convex; only these can be bend points
    /// of a shortest path in the free space around it.
    fn is_convex_vertex(&self, i: usize) -> bool {
        let n = self.len();
        let prev = self.vertices[(i + n - 1) % n];
        let cur = self.vertices[i];
        let next = self.vertices[(i + 1) % n];
        (cur - prev).cross(next - cur) > 0.0
    }
}

impl TryFrom<Vec<Point2>> for Polygon {
    type Error = Error;
    fn try_from(v: Vec<Point2>) -> Result<Self> {
        Polygon::new(v)
    }
}

impl From<Polygon> for Vec<Point2> {
    fn from(p: Polygon) -> Self {
        p.vertices
    }
}

fn segments_touch(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let scale = a.dist(b).max(c.dist(d));
    let tol = 1e-12 * scale.max(1.0);
    point_segment_distance(a, c, d) <= tol
        || point_segment_distance(b, c, d) <= tol
        || point_segment_distance(c, a, b) <= tol
        || point_segment_distance(d, a, b) <= tol
        || match segment_params(a, b - a, c, d - c) {
            Some((t, u)) => (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u),
            None => false,
        }
}

/// The three supported shapes of `X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WorldKind {
    FreePlane,
    /// `X = {(rho cos t, rho sin t) : t in [theta0, 2pi - theta0]}`; the
    /// obstacle is the open wedge `|t| < theta0` with its vertex at the origin.
    CornerWedge { theta0: f64 },
    Polygons { obstacles: Vec<Polygon> },
}

/// A broken line realizing `d_L` between its first and last waypoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortestPath {
    pub waypoints: Vec<Point2>,
    pub length: f64,
}

impl ShortestPath {
    fn segment(a: Point2, b: Point2) -> Self {
        Self { waypoints: vec![a, b], length: a.dist(b) }
    }

    fn through(points: Vec<Point2>) -> Self {
        let length = points.windows(2).map(|w| w[0].dist(w[1])).sum();
        Self { waypoints: points, length }
    }

    /// Point at arc length `s` from the start, clamped to the path.
    pub fn point_at(&self, s: f64) -> Point2 {
        let mut rem = s.max(0.0);
        for w in self.waypoints.windows(2) {
            let len = w[0].dist(w[1]);
            if rem <= len {
                return if len > 0.0 { w[0].lerp(w[1], rem / len) } else { w[0] };
            }
            rem -= len;
        }
        *self.waypoints.last().unwrap()
    }

    pub fn reversed(mut self) -> Self {
        self.waypoints.reverse();
        self
    }
}

#[derive(Debug)]
struct VisGraph {
    /// Candidate bend points (convex obstacle vertices).
    nodes: Vec<Point2>,
    /// Dense adjacency, `f64::INFINITY` where not visible.
    weights: Vec<f64>,
}

/// The playable region `X` plus a lazily built visibility graph.
pub struct World {
    kind: WorldKind,
    graph: OnceLock<VisGraph>,
}

impl Clone for World {
    fn clone(&self) -> Self {
        Self { kind: self.kind.clone(), graph: OnceLock::new() }
    }
}

impl fmt::Debug for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

impl PartialEq for World {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind
    }
}

impl Serialize for World {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.kind.serialize(s)
    }
}

impl<'de> Deserialize<'de> for World {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let kind = WorldKind::deserialize(d)?;
        World::new(kind).map_err(serde::de::Error::custom)
    }
}

impl World {
    pub fn new(kind: WorldKind) -> Result<Self> {
        match &kind {
            WorldKind::FreePlane => {}
            WorldKind::CornerWedge { theta0 } => {
                if !(*theta0 > 0.0 && *theta0 < PI / 2.0) {
                    return Err(Error::InvalidWorld(format!(
                        "corner half-angle must lie in (0, pi/2), got {theta0}"
                    )));
                }
            }
            WorldKind::Polygons { obstacles } => {
                for (i, a) in obstacles.iter().enumerate() {
                    for b in &obstacles[i + 1..] {
                        let touching = (0..a.len()).any(|k| {
                            let (p, q) = a.edge(k);
                            (0..b.len()).any(|m| {
                                let (r, s) = b.edge(m);
                                segments_touch(p, q, r, s)
                            })
                        });
                        if touching
                            || b.vertices().iter().any(|v| a.winds(*v))
                            || a.vertices().iter().any(|v| b.winds(*v))
                        {
                            return Err(Error::InvalidWorld("obstacles overlap".into()));
                        }
                    }
                }
            }
        }
        Ok(Self { kind, graph: OnceLock::new() })
    }

    pub fn free_plane() -> Self {
        Self { kind: WorldKind::FreePlane, graph: OnceLock::new() }
    }

    pub fn corner(theta0: f64) -> Result<Self> {
        Self::new(WorldKind::CornerWedge { theta0 })
    }

    pub fn polygons(obstacles: Vec<Polygon>) -> Result<Self> {
        Self::new(WorldKind::Polygons { obstacles })
    }

    pub fn kind(&self) -> &WorldKind {
        &self.kind
    }

    pub fn has_obstacles(&self) -> bool {
        !matches!(self.kind, WorldKind::FreePlane)
    }

    pub fn corner_angle(&self) -> Option<f64> {
        match self.kind {
            WorldKind::CornerWedge { theta0 } => Some(theta0),
            _ => None,
        }
    }

    /// Obstacle vertices that can appear as interior waypoints.
    pub fn vertices(&self) -> Vec<Point2> {
        match &self.kind {
            WorldKind::FreePlane => Vec::new(),
            WorldKind::CornerWedge { .. } => vec![Point2::ORIGIN],
            WorldKind::Polygons { obstacles } => {
                obstacles.iter().flat_map(|p| p.vertices().iter().copied()).collect()
            }
        }
    }

    /// True iff `x` is in the closed region `X`.
    pub fn contains_point(&self, x: Point2) -> bool {
        if !x.is_finite() {
            return false;
        }
        match &self.kind {
            WorldKind::FreePlane => true,
            WorldKind::CornerWedge { theta0 } => {
                let (g1, g2) = wedge_margins(*theta0, x);
                !(g1 > BOUNDARY_TOL && g2 > BOUNDARY_TOL)
            }
            WorldKind::Polygons { obstacles } => !obstacles.iter().any(|p| p.strictly_contains(x)),
        }
    }

    fn check(&self, x: Point2) -> Result<()> {
        if self.contains_point(x) {
            Ok(())
        } else {
            Err(Error::OutsideWorld(x))
        }
    }

    /// Polar coordinates with the angle normalized to the world's admissible
    /// range (`[theta0, 2pi - theta0]` for the corner world).
    pub fn polar(&self, x: Point2) -> PolarPoint {
        let mut theta = wrap_tau(x.angle());
        if let WorldKind::CornerWedge { theta0 } = self.kind {
            // boundary points can round to just inside the wedge
            if theta < theta0 {
                theta = if theta < PI / 2.0 { theta0 } else { theta };
            }
            if theta > TAU - theta0 {
                theta = TAU - theta0;
            }
        }
        PolarPoint { rho: x.norm(), theta }
    }

    /// True iff the closed segment `[x1, x2]` lies in `X`.
    pub fn visible(&self, x1: Point2, x2: Point2) -> Result<bool> {
        self.check(x1)?;
        self.check(x2)?;
        Ok(self.segment_clear(x1, x2))
    }

    /// Segment test without the membership precondition.
    pub(crate) fn segment_clear(&self, a: Point2, b: Point2) -> bool {
        self.first_entry(a, b).is_none()
    }

    /// First parameter `t` in `[0, 1]` at which `a + t (b - a)` enters an
    /// obstacle interior, with the unit tangent of the edge entered.
    pub(crate) fn first_entry(&self, a: Point2, b: Point2) -> Option<(f64, Point2)> {
        match &self.kind {
            WorldKind::FreePlane => None,
            WorldKind::CornerWedge { theta0 } => wedge_entry(*theta0, a, b),
            WorldKind::Polygons { obstacles } => obstacles
                .iter()
                .filter_map(|p| polygon_entry(p, a, b))
                .min_by(|x, y| x.0.total_cmp(&y.0)),
        }
    }

    fn graph(&self) -> &VisGraph {
        self.graph.get_or_init(|| {
            let nodes: Vec<Point2> = match &self.kind {
                WorldKind::FreePlane => Vec::new(),
                WorldKind::CornerWedge { .. } => vec![Point2::ORIGIN],
                WorldKind::Polygons { obstacles } => obstacles
                    .iter()
                    .flat_map(|p| {
                        (0..p.len()).filter(|&i| p.is_convex_vertex(i)).map(|i| p.vertices()[i])
                    })
                    .collect(),
            };
            let n = nodes.len();
            let mut weights = vec![f64::INFINITY; n * n];
            for i in 0..n {
                weights[i * n + i] = 0.0;
                for j in i + 1..n {
                    if self.segment_clear(nodes[i], nodes[j]) {
                        let w = nodes[i].dist(nodes[j]);
                        weights[i * n + j] = w;
                        weights[j * n + i] = w;
                    }
                }
            }
            VisGraph { nodes, weights }
        })
    }

    /// Shortest path between two points of `X`.
    pub fn shortest_path(&self, x1: Point2, x2: Point2) -> Result<ShortestPath> {
        self.check(x1)?;
        self.check(x2)?;
        match &self.kind {
            WorldKind::FreePlane => Ok(ShortestPath::segment(x1, x2)),
            WorldKind::CornerWedge { .. } => {
                if self.corner_direct(x1, x2) {
                    Ok(ShortestPath::segment(x1, x2))
                } else {
                    Ok(ShortestPath {
                        waypoints: vec![x1, Point2::ORIGIN, x2],
                        length: x1.norm() + x2.norm(),
                    })
                }
            }
            WorldKind::Polygons { .. } => Ok(self.graph_path(x1, x2)),
        }
    }

    /// `d_L(x1, x2)`.
    pub fn distance(&self, x1: Point2, x2: Point2) -> Result<f64> {
        match &self.kind {
            WorldKind::FreePlane => Ok(x1.dist(x2)),
            WorldKind::CornerWedge { .. } => {
                self.check(x1)?;
                self.check(x2)?;
                Ok(if self.corner_direct(x1, x2) { x1.dist(x2) } else { x1.norm() + x2.norm() })
            }
            WorldKind::Polygons { .. } => Ok(self.shortest_path(x1, x2)?.length),
        }
    }

    /// `|theta1 - theta2| <= pi` in the normalized angle convention.
    fn corner_direct(&self, x1: Point2, x2: Point2) -> bool {
        if x1.norm() == 0.0 || x2.norm() == 0.0 {
            return true;
        }
        let t1 = self.polar(x1).theta;
        let t2 = self.polar(x2).theta;
        (t1 - t2).abs() <= PI
    }

    /// Shortest path computed on the visibility graph of the obstacle
    /// vertices, for any world kind. For the corner world this is an
    /// independent check on the closed form.
    pub fn visibility_graph_path(&self, x1: Point2, x2: Point2) -> Result<ShortestPath> {
        self.check(x1)?;
        self.check(x2)?;
        Ok(self.graph_path(x1, x2))
    }

    fn graph_path(&self, x1: Point2, x2: Point2) -> ShortestPath {
        // canonical order makes d_L(x1, x2) and d_L(x2, x1) bit-identical
        let swap = (x2.x, x2.y) < (x1.x, x1.y);
        let (a, b) = if swap { (x2, x1) } else { (x1, x2) };
        let path = if self.segment_clear(a, b) {
            ShortestPath::segment(a, b)
        } else {
            DistanceField::new(self, a).path_to(b)
        };
        if swap {
            path.reversed()
        } else {
            path
        }
    }

    /// Gradients `(d/dx1, d/dx2)` of `d_L(x1, x2)`.
    pub fn metric_gradients(&self, x1: Point2, x2: Point2) -> Result<(Point2, Point2)> {
        self.check(x1)?;
        self.check(x2)?;
        if x1 == x2 || x1.dist(x2) <= BOUNDARY_TOL {
            return Err(Error::NonDifferentiable(x1, x2));
        }
        match &self.kind {
            WorldKind::FreePlane => {
                let g = (x1 - x2) / x1.dist(x2);
                Ok((g, -g))
            }
            WorldKind::CornerWedge { .. } => {
                if self.corner_direct(x1, x2) {
                    let g = (x1 - x2) / x1.dist(x2);
                    Ok((g, -g))
                } else {
                    let (n1, n2) = (x1.norm(), x2.norm());
                    if n1 <= BOUNDARY_TOL || n2 <= BOUNDARY_TOL {
                        return Err(Error::NonDifferentiable(x1, x2));
                    }
                    Ok((x1 / n1, x2 / n2))
                }
            }
            WorldKind::Polygons { .. } => {
                let g1 = self.end_gradient(x2, x1).ok_or(Error::NonDifferentiable(x1, x2))?;
                let g2 = self.end_gradient(x1, x2).ok_or(Error::NonDifferentiable(x1, x2))?;
                Ok((g1, g2))
            }
        }
    }

    /// Gradient of `d_L(source, .)` at `x`, or `None` at a tie between
    /// arrivals from different directions or at a bend vertex.
    fn end_gradient(&self, source: Point2, x: Point2) -> Option<Point2> {
        let field = DistanceField::new(self, source);
        let hops = field.last_hops(x);
        let best = hops.iter().map(|h| h.1).fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            return None;
        }
        let mut dir: Option<Point2> = None;
        for (w, len) in &hops {
            if *len <= best * (1.0 + TIE_TOL) + 1e-15 {
                let d = x - *w;
                let n = d.norm();
                if n <= BOUNDARY_TOL {
                    return None;
                }
                let d = d / n;
                match dir {
                    None => dir = Some(d),
                    Some(prev) => {
                        if prev.dist(d) > TIE_TOL {
                            return None;
                        }
                    }
                }
            }
        }
        dir
    }

    /// Moves `from` by `disp`, stopping at the first obstacle edge and
    /// sliding along it with the tangential part of the leftover
    /// displacement. Returns the new point and whether a wall was touched.
    pub fn slide(&self, from: Point2, disp: Point2) -> (Point2, bool) {
        let (to, touched) = self.slide_unchecked(from, disp);
        if !self.contains_point(to) && self.contains_point(from) {
            return (from, true);
        }
        (to, touched)
    }

    fn slide_unchecked(&self, from: Point2, disp: Point2) -> (Point2, bool) {
        let mut p = from;
        let mut d = disp;
        let mut touched = false;
        for _ in 0..4 {
            match self.first_entry(p, p + d) {
                None => return (p + d, touched),
                Some((t, tangent)) => {
                    touched = true;
                    let hit = p + d * t;
                    let rest = d * (1.0 - t);
                    let along = tangent * rest.dot(tangent);
                    p = hit;
                    d = along;
                    if d.norm() <= BOUNDARY_TOL {
                        return (p, touched);
                    }
                }
            }
        }
        (p, touched)
    }
}

/// Signed distances of `x` to the two edge lines of the wedge, positive on
/// the obstacle side.
fn wedge_margins(theta0: f64, x: Point2) -> (f64, f64) {
    let u1 = Point2::unit(-theta0);
    let u2 = Point2::unit(theta0);
    (u1.cross(x), x.cross(u2))
}

fn wedge_entry(theta0: f64, a: Point2, b: Point2) -> Option<(f64, Point2)> {
    let u1 = Point2::unit(-theta0);
    let u2 = Point2::unit(theta0);
    let d = b - a;
    // g_i(t) = c_i + t k_i must exceed the tolerance for t in the wedge
    let cons = [(u1.cross(a), u1.cross(d), u1), (a.cross(u2), d.cross(u2), u2)];
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut entering = None;
    for (c, k, tangent) in cons {
        if k == 0.0 {
            if c <= BOUNDARY_TOL {
                return None;
            }
            continue;
        }
        // aim inside the tolerance band so rounding cannot land past it
        let t = (0.5 * BOUNDARY_TOL - c) / k;
        if k > 0.0 {
            if t > lo {
                lo = t;
                entering = Some(tangent);
            }
        } else if t < hi {
            hi = t;
        }
    }
    if lo < hi && lo <= 1.0 {
        // starting inside the band counts as on the boundary, pick nearest edge
        let tangent = entering.unwrap_or_else(|| {
            let (g1, g2) = wedge_margins(theta0, a);
            if g1 <= g2 {
                u1
            } else {
                u2
            }
        });
        Some((lo, tangent))
    } else {
        None
    }
}

fn polygon_entry(poly: &Polygon, a: Point2, b: Point2) -> Option<(f64, Point2)> {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return None;
    }
    // cheap reject: segment far from the polygon's bounding box
    let (mut minx, mut miny, mut maxx, mut maxy) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for v in poly.vertices() {
        minx = minx.min(v.x);
        miny = miny.min(v.y);
        maxx = maxx.max(v.x);
        maxy = maxy.max(v.y);
    }
    if a.x.max(b.x) < minx || a.x.min(b.x) > maxx || a.y.max(b.y) < miny || a.y.min(b.y) > maxy {
        return None;
    }
    let mut cuts: Vec<(f64, usize)> = vec![(0.0, usize::MAX), (1.0, usize::MAX)];
    for i in 0..poly.len() {
        let (p, q) = poly.edge(i);
        let e = q - p;
        match segment_params(a, d, p, e) {
            Some((t, u)) => {
                if (-1e-12..=1.0 + 1e-12).contains(&u) && (0.0..=1.0).contains(&t) {
                    cuts.push((t, i));
                }
            }
            None => {
                // parallel: add edge endpoints that lie on the segment line
                for v in [p, q] {
                    let t = (v - a).dot(d) / (len * len);
                    if (0.0..=1.0).contains(&t) && point_segment_distance(v, a, b) <= 1e-12 * len.max(1.0) {
                        cuts.push((t, i));
                    }
                }
            }
        }
        // vertex touches that the parametric test may miss by rounding
        let t = (p - a).dot(d) / (len * len);
        if (0.0..=1.0).contains(&t) && point_segment_distance(p, a, b) <= 1e-12 * len.max(1.0) {
            cuts.push((t, i));
        }
    }
    cuts.sort_by(|x, y| x.0.total_cmp(&y.0));
    for w in cuts.windows(2) {
        let (t0, t1) = (w[0].0, w[1].0);
        if t1 - t0 <= 1e-15 {
            continue;
        }
        let mid = a + d * (0.5 * (t0 + t1));
        if poly.strictly_contains(mid) {
            // entry edge: the cut at t0 whose inward normal opposes the motion
            let edge = cuts
                .iter()
                .filter(|c| c.1 != usize::MAX && (c.0 - t0).abs() <= 1e-12)
                .map(|c| c.1)
                .min_by(|&i, &j| {
                    let ni = edge_outward(poly, i).dot(d);
                    let nj = edge_outward(poly, j).dot(d);
                    ni.total_cmp(&nj)
                })
                .unwrap_or_else(|| nearest_edge(poly, a + d * t0));
            let (p, q) = poly.edge(edge);
            return Some((t0, (q - p) / p.dist(q)));
        }
    }
    None
}

fn edge_outward(poly: &Polygon, i: usize) -> Point2 {
    let (p, q) = poly.edge(i);
    let e = (q - p) / p.dist(q);
    Point2::new(e.y, -e.x)
}

fn nearest_edge(poly: &Polygon, x: Point2) -> usize {
    (0..poly.len())
        .min_by(|&i, &j| {
            let (a, b) = poly.edge(i);
            let (c, d) = poly.edge(j);
            point_segment_distance(x, a, b).total_cmp(&point_segment_distance(x, c, d))
        })
        .unwrap_or(0)
}

/// Shortest-path distances from a fixed source to every graph node, so that
/// `d_L(source, x)` can be evaluated for many `x` cheaply.
pub struct DistanceField<'w> {
    world: &'w World,
    source: Point2,
    dist: Vec<f64>,
    prev: Vec<Option<usize>>,
}

impl<'w> DistanceField<'w> {
    pub fn new(world: &'w World, source: Point2) -> Self {
        let g = world.graph();
        let n = g.nodes.len();
        let mut dist: Vec<f64> = g
            .nodes
            .iter()
            .map(|v| if world.segment_clear(source, *v) { source.dist(*v) } else { f64::INFINITY })
            .collect();
        let mut prev = vec![None; n];
        let mut done = vec![false; n];
        for _ in 0..n {
            let mut u = None;
            let mut best = f64::INFINITY;
            for i in 0..n {
                if !done[i] && dist[i] < best {
                    best = dist[i];
                    u = Some(i);
                }
            }
            let Some(u) = u else { break };
            done[u] = true;
            for v in 0..n {
                let w = g.weights[u * n + v];
                if !done[v] && w.is_finite() && dist[u] + w < dist[v] {
                    dist[v] = dist[u] + w;
                    prev[v] = Some(u);
                }
            }
        }
        Self { world, source, dist, prev }
    }

    pub fn source(&self) -> Point2 {
        self.source
    }

    /// Candidate final hops `(w, total length)` into `x`: the direct
    /// segment from the source (if clear) and one per visible graph node.
    fn last_hops(&self, x: Point2) -> Vec<(Point2, f64)> {
        let g = self.world.graph();
        let mut out = Vec::new();
        if self.world.segment_clear(self.source, x) {
            out.push((self.source, self.source.dist(x)));
        }
        for (i, v) in g.nodes.iter().enumerate() {
            if self.dist[i].is_finite() && *v != x && self.world.segment_clear(*v, x) {
                out.push((*v, self.dist[i] + v.dist(x)));
            }
        }
        out
    }

    /// `d_L(source, x)`.
    pub fn distance_to(&self, x: Point2) -> f64 {
        match self.world.kind {
            WorldKind::FreePlane => self.source.dist(x),
            WorldKind::CornerWedge { .. } => {
                if self.world.corner_direct(self.source, x) {
                    self.source.dist(x)
                } else {
                    self.source.norm() + x.norm()
                }
            }
            WorldKind::Polygons { .. } => {
                if self.world.segment_clear(self.source, x) {
                    return self.source.dist(x);
                }
                let g = self.world.graph();
                let mut best = f64::INFINITY;
                for (i, v) in g.nodes.iter().enumerate() {
                    let d = self.dist[i] + v.dist(x);
                    if d < best && self.world.segment_clear(*v, x) {
                        best = d;
                    }
                }
                best
            }
        }
    }

    pub fn path_to(&self, x: Point2) -> ShortestPath {
        let g = self.world.graph();
        let hops = self.last_hops(x);
        let Some(&(w, _)) = hops.iter().min_by(|a, b| a.1.total_cmp(&b.1)) else {
            return ShortestPath { waypoints: vec![self.source, x], length: f64::INFINITY };
        };
        if w == self.source {
            return ShortestPath::segment(self.source, x);
        }
        let mut idx = g.nodes.iter().position(|v| *v == w);
        let mut rev = vec![x];
        while let Some(i) = idx {
            rev.push(g.nodes[i]);
            idx = self.prev[i];
        }
        rev.push(self.source);
        rev.reverse();
        ShortestPath::through(rev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    fn square(cx: f64, cy: f64, h: f64) -> Polygon {
        Polygon::new(vec![
            Point2::new(cx - h, cy - h),
            Point2::new(cx + h, cy - h),
            Point2::new(cx + h, cy + h),
            Point2::new(cx - h, cy + h),
        ])
        .unwrap()
    }

    #[test]
    fn corner_membership() {
        let w = World::corner(PI / 4.0).unwrap();
        assert!(w.contains_point(Point2::from_polar(1.0, PI / 2.0)));
        assert!(!w.contains_point(Point2::from_polar(1.0, PI / 8.0)));
        assert!(w.contains_point(Point2::from_polar(1.0, PI / 4.0)));
        assert!(w.contains_point(Point2::ORIGIN));
    }

    #[test]
    fn corner_visibility_and_paths() {
        let w = World::corner(deg(5.0)).unwrap();
        let (a, b) = (Point2::new(2.0, 1.0), Point2::new(2.0, -1.0));
        assert!(!w.visible(a, b).unwrap());
        let p = w.shortest_path(a, b).unwrap();
        assert_eq!(p.waypoints, vec![a, Point2::ORIGIN, b]);
        assert!((p.length - 2.0 * 5f64.sqrt()).abs() < 1e-14);
        assert!(w
            .visible(Point2::from_polar(1.0, deg(30.0)), Point2::from_polar(1.0, deg(150.0)))
            .unwrap());
        let g = w.visibility_graph_path(a, b).unwrap();
        assert!((g.length - p.length).abs() < 1e-12);
    }

    #[test]
    fn rejects_outside_points() {
        let w = World::corner(deg(30.0)).unwrap();
        assert!(matches!(
            w.shortest_path(Point2::new(1.0, 0.0), Point2::new(-1.0, 0.0)),
            Err(Error::OutsideWorld(_))
        ));
    }

    #[test]
    fn corner_gradients_radial() {
        let w = World::corner(deg(5.0)).unwrap();
        let (a, b) = (Point2::new(2.0, 1.0), Point2::new(2.0, -1.0));
        let (g1, g2) = w.metric_gradients(a, b).unwrap();
        assert!((g1 - a / a.norm()).norm() < 1e-15);
        assert!((g2 - b / b.norm()).norm() < 1e-15);
    }

    #[test]
    fn polygon_path_bends_at_vertices() {
        let w = World::polygons(vec![square(0.0, 0.0, 1.0)]).unwrap();
        let (a, b) = (Point2::new(-3.0, 0.0), Point2::new(3.0, 0.0));
        let p = w.shortest_path(a, b).unwrap();
        assert_eq!(p.waypoints.len(), 4);
        let expect = 2.0 * (4.0f64 + 1.0).sqrt() + 2.0;
        assert!((p.length - expect).abs() < 1e-12);
        // symmetric by construction: two tied routes make it non-differentiable
        assert!(matches!(w.metric_gradients(a, b), Err(Error::NonDifferentiable(..))));
        let q = w.shortest_path(b, a).unwrap();
        assert_eq!(p.length, q.length);
    }

    #[test]
    fn polygon_edges_are_walkable() {
        let w = World::polygons(vec![square(0.0, 0.0, 1.0)]).unwrap();
        assert!(w.visible(Point2::new(-1.0, -1.0), Point2::new(1.0, -1.0)).unwrap());
        assert!(!w.visible(Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0)).unwrap());
        assert!(w.contains_point(Point2::new(1.0, 0.0)));
        assert!(!w.contains_point(Point2::new(0.5, 0.0)));
    }

    #[test]
    fn rejects_bad_polygons() {
        let cw = Polygon::new(vec![Point2::new(0.0, 0.0), Point2::new(0.0, 1.0), Point2::new(1.0, 0.0)]);
        assert!(cw.is_err());
        let bow = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ]);
        assert!(bow.is_err());
        assert!(World::polygons(vec![square(0.0, 0.0, 1.0), square(1.5, 0.0, 1.0)]).is_err());
        assert!(World::corner(PI / 2.0).is_err());
    }

    #[test]
    fn slide_along_wedge_edge() {
        let w = World::corner(PI / 4.0).unwrap();
        let from = Point2::from_polar(1.0, PI / 4.0);
        let (to, touched) = w.slide(from, Point2::new(0.0, -0.1));
        assert!(touched);
        assert!(w.contains_point(to));
        assert!(to.dist(from) <= 0.1 + 1e-15);
        // tangential component of (0, -0.1) along the edge direction
        let tangent = Point2::unit(PI / 4.0);
        assert!((to - (from + tangent * (-0.1 * tangent.y))).norm() < 1e-12);
    }

    #[test]
    fn slide_into_polygon() {
        let w = World::polygons(vec![square(0.0, 0.0, 1.0)]).unwrap();
        let (to, touched) = w.slide(Point2::new(-1.5, 0.0), Point2::new(1.0, 0.5));
        assert!(touched);
        assert!((to.x + 1.0).abs() < 1e-12);
        assert!((to.y - 0.5).abs() < 1e-12);
    }
}
