//! Evader dominance regions `{x : d_L(x, x_p) - alpha d_L(x, x_e) > l}` and
//! the corner-world auxiliary set `F`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_pi, wrap_tau, Point2};
use crate::roots::{bracketed_root_with, ROOT_RESIDUAL};
use crate::world::{DistanceField, World, WorldKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceRegion {
    pub world: World,
    pub x_p: Point2,
    pub x_e: Point2,
    pub alpha: f64,
    pub capture_radius: f64,
}

impl DominanceRegion {
    pub fn new(world: World, x_p: Point2, x_e: Point2, alpha: f64, capture_radius: f64) -> Result<Self> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(Error::InvalidConfig(format!("speed ratio must exceed 1, got {alpha}")));
        }
        if !(capture_radius >= 0.0) {
            return Err(Error::InvalidConfig(format!("capture radius must be >= 0, got {capture_radius}")));
        }
        if world.has_obstacles() && capture_radius != 0.0 {
            return Err(Error::InvalidConfig("capture radius must be 0 when obstacles are present".into()));
        }
        let d = world.distance(x_p, x_e)?;
        if d <= capture_radius {
            return Err(Error::DegenerateRegion(format!(
                "initial separation {d} does not exceed capture radius {capture_radius}"
            )));
        }
        Ok(Self { world, x_p, x_e, alpha, capture_radius })
    }

    /// `phi(x) = d_L(x, x_p) - alpha d_L(x, x_e) - l`.
    pub fn phi(&self, x: Point2) -> Result<f64> {
        let dp = self.world.distance(x, self.x_p)?;
        let de = self.world.distance(x, self.x_e)?;
        Ok(dp - self.alpha * de - self.capture_radius)
    }

    pub fn classify(&self, x: Point2, tol: f64) -> Result<Membership> {
        let v = self.phi(x)?;
        Ok(if v.abs() <= tol {
            Membership::Boundary
        } else if v > 0.0 {
            Membership::Inside
        } else {
            Membership::Outside
        })
    }

    /// Evaluator with the shortest-path trees from both players cached.
    pub fn field(&self) -> PhiField<'_> {
        PhiField {
            from_p: DistanceField::new(&self.world, self.x_p),
            from_e: DistanceField::new(&self.world, self.x_e),
            alpha: self.alpha,
            l: self.capture_radius,
            world: &self.world,
        }
    }

    /// `d_L(x_p, x_e)`.
    pub fn separation(&self) -> f64 {
        self.world.distance(self.x_p, self.x_e).unwrap_or(f64::INFINITY)
    }

    /// Radius about `x_e` beyond which `phi < 0`.
    pub fn outer_bound(&self) -> f64 {
        (self.separation() + self.capture_radius) / (self.alpha - 1.0)
    }

    /// The boundary point hit by the ray from `x_e` along `direction`.
    ///
    /// In the corner world this is the intersection with `dF`, which
    /// contains `dD` and meets every such ray once.
    pub fn ray_boundary_intersection(&self, direction: Point2) -> Result<Point2> {
        let u = direction
            .normalized()
            .ok_or_else(|| Error::Domain("ray direction must be nonzero".into()))?;
        match self.world.kind() {
            WorldKind::FreePlane => free_ray_intersection(self.x_p, self.x_e, self.alpha, self.capture_radius, u),
            WorldKind::CornerWedge { .. } => {
                let fset = FSet::new(self.x_p, self.x_e, self.alpha)?;
                Ok(fset.ray_intersection(u)?.0)
            }
            WorldKind::Polygons { .. } => {
                let field = self.field();
                let upper = self.outer_bound() + 1.0;
                let n = 1024;
                let mut prev: Option<(f64, f64)> = None;
                for k in 0..=n {
                    let s = upper * k as f64 / n as f64;
                    let x = self.x_e + u * s;
                    if !self.world.contains_point(x) {
                        prev = None;
                        continue;
                    }
                    let v = field.phi(x);
                    if let Some((s0, v0)) = prev {
                        if v0 > 0.0 && v <= 0.0 {
                            let r = bracketed_root_with(|s| field.phi(self.x_e + u * s), s0, v0, s, v)?;
                            return Ok(self.x_e + u * r);
                        }
                    }
                    prev = Some((s, v));
                }
                Err(Error::BracketFailure { upper })
            }
        }
    }
}

/// Free-plane boundary point on the ray `x_e + s u`, `s > 0`, for unit `u`.
pub fn free_ray_intersection(x_p: Point2, x_e: Point2, alpha: f64, l: f64, u: Point2) -> Result<Point2> {
    let g = |s: f64| (x_e + u * s).dist(x_p) - alpha * s - l;
    // beyond this the triangle inequality forces phi < 0
    let upper = (x_p.dist(x_e) + l) / (alpha - 1.0) + 1.0;
    let s = bracketed_root_with(g, 0.0, g(0.0), upper, g(upper))?;
    Ok(x_e + u * s)
}

/// `phi` with cached shortest-path trees, for bulk evaluation.
pub struct PhiField<'w> {
    world: &'w World,
    from_p: DistanceField<'w>,
    from_e: DistanceField<'w>,
    alpha: f64,
    l: f64,
}

impl PhiField<'_> {
    /// `phi(x)`; callers must ensure `x` lies in `X`.
    pub fn phi(&self, x: Point2) -> f64 {
        self.from_p.distance_to(x) - self.alpha * self.from_e.distance_to(x) - self.l
    }

    pub fn world(&self) -> &World {
        self.world
    }

    pub fn d_p(&self, x: Point2) -> f64 {
        self.from_p.distance_to(x)
    }

    pub fn d_e(&self, x: Point2) -> f64 {
        self.from_e.distance_to(x)
    }
}

/// Half-angle of the sector, seen from the corner vertex, that contains the
/// oval `|x| + |x_p| = alpha |x - x_e|`.
pub fn eta_m(x_p: Point2, x_e: Point2, alpha: f64) -> Result<f64> {
    let (rp, re) = (x_p.norm(), x_e.norm());
    if re == 0.0 {
        return Err(Error::Domain("evader at the corner vertex".into()));
    }
    let a2 = alpha * alpha;
    let rad = a2 * re * re - rp * rp;
    if rad < -1e-12 * a2 * re * re {
        return Err(Error::Domain(format!("|x_p| = {rp} exceeds alpha |x_e| = {}", alpha * re)));
    }
    let c = (((a2 - 1.0) * rad.max(0.0)).sqrt() - rp) / (a2 * re);
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// Which defining curve of `dF` a point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FBranch {
    /// `|x - x_p| = alpha |x - x_e|`: the pursuer sees the point directly.
    Apollonius,
    /// `|x| + |x_p| = alpha |x - x_e|`: the pursuer's path bends at the vertex.
    Oval,
}

/// The corner-world set `F(x_p, x_e)`, stored in a frame where `x_p` lies in
/// the closed upper half plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FSet {
    pub x_p: Point2,
    pub x_e: Point2,
    pub alpha: f64,
    pub eta_m: f64,
    reflect: bool,
    theta_p: f64,
    theta_e: f64,
}

impl FSet {
    pub fn new(x_p: Point2, x_e: Point2, alpha: f64) -> Result<Self> {
        if !(x_p.norm() < alpha * x_e.norm()) {
            return Err(Error::Domain(format!(
                "F is defined only for |x_p| < alpha |x_e| (got {} vs {})",
                x_p.norm(),
                alpha * x_e.norm()
            )));
        }
        let eta = eta_m(x_p, x_e, alpha)?;
        let reflect = x_p.y < 0.0;
        let (p, e) = if reflect { (x_p.conj(), x_e.conj()) } else { (x_p, x_e) };
        let theta_p = if p.norm() == 0.0 { f64::NAN } else { wrap_tau(p.angle()) };
        let theta_e = wrap_tau(e.angle());
        Ok(Self { x_p, x_e, alpha, eta_m: eta, reflect, theta_p, theta_e })
    }

    fn frame(&self, x: Point2) -> Point2 {
        if self.reflect {
            x.conj()
        } else {
            x
        }
    }

    /// Angle of `x` in the continuous representation centered on `theta_e`.
    fn rel_angle(&self, x: Point2) -> f64 {
        let x = self.frame(x);
        if x.norm() == 0.0 {
            return self.theta_e;
        }
        self.theta_e + wrap_pi(x.angle() - self.theta_e)
    }

    pub fn in_sector(&self, x: Point2) -> bool {
        (self.rel_angle(x) - self.theta_e).abs() <= self.eta_m + 1e-12
    }

    /// Branch of `f` used at `x`.
    pub fn branch(&self, x: Point2) -> FBranch {
        if self.theta_p.is_nan() || self.rel_angle(x) <= self.theta_p + PI {
            FBranch::Apollonius
        } else {
            FBranch::Oval
        }
    }

    fn f_unchecked(&self, x: Point2) -> f64 {
        let head = match self.branch(x) {
            FBranch::Apollonius => x.dist(self.x_p),
            FBranch::Oval => x.norm() + self.x_p.norm(),
        };
        head - self.alpha * x.dist(self.x_e)
    }

    /// `f(x; x_p, x_e)` on the sector `G([theta_e - eta_m, theta_e + eta_m])`.
    pub fn f(&self, x: Point2) -> Result<f64> {
        if !self.in_sector(x) {
            return Err(Error::Domain(format!("{x} lies outside the sector of F")));
        }
        Ok(self.f_unchecked(x))
    }

    /// Unique crossing of the ray from `x_e` along unit `u` with `dF`.
    pub fn ray_intersection(&self, u: Point2) -> Result<(Point2, FBranch)> {
        let (xp, xe, al) = (self.x_p, self.x_e, self.alpha);
        // the ray leaves the oval region C first; C's closure lies in the sector
        let h = |s: f64| {
            let x = xe + u * s;
            x.norm() + xp.norm() - al * x.dist(xe)
        };
        let upper = (xe.norm() + xp.norm()) / (al - 1.0) * (1.0 + 1e-9) + 1e-9;
        let s0 = bracketed_root_with(h, 0.0, h(0.0), upper, h(upper))?;
        let f = |s: f64| self.f_unchecked(xe + u * s);
        let f0 = f(s0);
        let s = if f0.abs() <= ROOT_RESIDUAL { s0 } else { bracketed_root_with(f, 0.0, f(0.0), s0, f0)? };
        let x = xe + u * s;
        Ok((x, self.branch(x)))
    }
}

/// `f(x; x_p, x_e)` as a free function.
pub fn f_value(x_p: Point2, x_e: Point2, alpha: f64, x: Point2) -> Result<f64> {
    FSet::new(x_p, x_e, alpha)?.f(x)
}
