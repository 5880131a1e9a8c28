//! Planar vector type and the handful of segment/angle helpers the rest of
//! the crate is built on.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Point at polar coordinates `(rho, theta)`.
    #[inline]
    pub fn from_polar(rho: f64, theta: f64) -> Self {
        Self::new(rho * theta.cos(), rho * theta.sin())
    }

    /// Unit vector at angle `theta`.
    #[inline]
    pub fn unit(theta: f64) -> Self {
        Self::from_polar(1.0, theta)
    }

    #[inline]
    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product; positive when `o` is
    /// counterclockwise of `self`.
    #[inline]
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    /// Polar angle in `(-pi, pi]`.
    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Rotation by `theta` counterclockwise.
    #[inline]
    pub fn rotate(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Counterclockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    /// Reflection across the x-axis.
    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.x, -self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn lerp(self, o: Self, t: f64) -> Self {
        self + (o - self) * t
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(a: [f64; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Point2 {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    #[inline]
    fn mul(self, p: Point2) -> Point2 {
        p * self
    }
}

impl Div<f64> for Point2 {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.x / s, self.y / s)
    }
}

impl Neg for Point2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Polar coordinates relative to the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarPoint {
    pub rho: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub fn to_point(self) -> Point2 {
        Point2::from_polar(self.rho, self.theta)
    }
}

/// Maps an angle into `[0, 2pi)`.
#[inline]
pub fn wrap_tau(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can return TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Maps an angle into `(-pi, pi]`.
#[inline]
pub fn wrap_pi(theta: f64) -> f64 {
    let r = wrap_tau(theta);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Unsigned angle between two nonzero vectors, in `[0, pi]`.
pub fn angle_between(a: Point2, b: Point2) -> f64 {
    a.cross(b).atan2(a.dot(b)).abs()
}

/// Signed counterclockwise angle from `a` to `b`, in `(-pi, pi]`.
pub fn signed_angle(a: Point2, b: Point2) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Parameters `(t, u)` at which segments `p + t r` and `q + u s` cross, when
/// they are not parallel.
pub fn segment_params(p: Point2, r: Point2, q: Point2, s: Point2) -> Option<(f64, f64)> {
    let denom = r.cross(s);
    let scale = r.norm() * s.norm();
    if denom.abs() <= 1e-14 * scale {
        return None;
    }
    let qp = q - p;
    Some((qp.cross(s) / denom, qp.cross(r) / denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraps_angles() {
        assert_eq!(wrap_tau(-0.5 * PI), 1.5 * PI);
        assert!((wrap_pi(1.5 * PI) + 0.5 * PI).abs() < 1e-15);
        assert_eq!(wrap_pi(PI), PI);
        assert_eq!(wrap_tau(TAU), 0.0);
    }

    #[test]
    fn angle_helpers() {
        let a = Point2::new(1.0, 0.0);
        let b = Point2::new(0.0, 2.0);
        assert!((angle_between(a, b) - PI / 2.0).abs() < 1e-15);
        assert!((signed_angle(b, a) + PI / 2.0).abs() < 1e-15);
        assert!((a.rotate(PI / 2.0) - Point2::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn segment_distance() {
        let d = point_segment_distance(Point2::new(0.5, 1.0), Point2::ORIGIN, Point2::new(1.0, 0.0));
        assert_eq!(d, 1.0);
        let d = point_segment_distance(Point2::new(2.0, 0.0), Point2::ORIGIN, Point2::new(1.0, 0.0));
        assert_eq!(d, 1.0);
    }

    #[test]
    fn crossing_params() {
        let (t, u) = segment_params(
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(1.0, -1.0),
            Point2::new(0.0, 2.0),
        )
        .unwrap();
        assert!((t - 0.5).abs() < 1e-15 && (u - 0.5).abs() < 1e-15);
    }
}
