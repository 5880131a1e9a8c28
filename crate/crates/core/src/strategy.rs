//! Pursuer feedback maps. Each takes the current state and the evader's
//! current input only, so the strategies they generate are non-anticipative
//! by construction.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_tau, Point2};
use crate::region::{free_ray_intersection, DominanceRegion, FBranch, FSet};
use crate::world::{ShortestPath, World};

/// A control direction. Players' admissible inputs have norm at most one;
/// the auxiliary corner strategy may exceed it by `epsilon`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ControlInput {
    pub direction: Point2,
}

impl ControlInput {
    pub const ZERO: ControlInput = ControlInput { direction: Point2::ORIGIN };

    pub fn new(direction: Point2) -> Self {
        Self { direction }
    }

    pub fn norm(&self) -> f64 {
        self.direction.norm()
    }

    pub fn is_admissible(&self) -> bool {
        self.norm() <= 1.0 + 1e-12
    }
}

fn unit_toward(from: Point2, to: Point2) -> Result<ControlInput> {
    (to - from)
        .normalized()
        .map(ControlInput::new)
        .ok_or_else(|| Error::Domain(format!("no direction from {from} to itself")))
}

/// Free-plane map: head for the point where the evader's velocity ray
/// leaves the current dominance region.
///
/// A stationary evader (zero input) is approached along the straight line.
pub fn gamma_free(x_p: Point2, x_e: Point2, u_e: Point2, alpha: f64, l: f64) -> Result<ControlInput> {
    let sep = x_p.dist(x_e);
    if sep <= l {
        return Err(Error::CaptureOccurred(sep));
    }
    match u_e.normalized() {
        None => unit_toward(x_p, x_e),
        Some(u) => {
            let x_c = free_ray_intersection(x_p, x_e, alpha, l, u)?;
            unit_toward(x_p, x_c)
        }
    }
}

fn corner_check(x_p: Point2, x_e: Point2, alpha: f64) -> Result<()> {
    if x_p.norm() >= alpha * x_e.norm() {
        return Err(Error::StrategyInapplicable(format!(
            "corner vertex lies in the closed dominance region (|x_p| = {} >= alpha |x_e| = {})",
            x_p.norm(),
            alpha * x_e.norm()
        )));
    }
    if x_p == x_e {
        return Err(Error::CaptureOccurred(0.0));
    }
    Ok(())
}

/// Corner-world map: intersect the evader's velocity ray with `dF`; head
/// for the hit point when it is on the Apollonius branch, for the corner
/// vertex when it is on the oval branch.
pub fn gamma_star_corner(x_p: Point2, x_e: Point2, u_e: Point2, alpha: f64) -> Result<ControlInput> {
    corner_check(x_p, x_e, alpha)?;
    let Some(u) = u_e.normalized() else {
        return Ok(ControlInput::new(corner_pursuit_direction(x_p, x_e)));
    };
    let fset = FSet::new(x_p, x_e, alpha)?;
    let (x_c, branch) = fset.ray_intersection(u)?;
    match branch {
        FBranch::Apollonius => unit_toward(x_p, x_c),
        FBranch::Oval => Ok(ControlInput::new(-x_p / x_p.norm())),
    }
}

/// The hit point and branch used by [`gamma_star_corner`].
pub fn corner_target(x_p: Point2, x_e: Point2, u_e: Point2, alpha: f64) -> Result<(Point2, FBranch)> {
    corner_check(x_p, x_e, alpha)?;
    let u = u_e.normalized().ok_or_else(|| Error::Domain("zero evader input".into()))?;
    FSet::new(x_p, x_e, alpha)?.ray_intersection(u)
}

/// `-d/dx_p d_L(x_p, x_e)` in the corner world, from the polar test
/// `|theta_p - theta_e| <= pi` (angles in `[0, 2pi)`).
fn corner_pursuit_direction(x_p: Point2, x_e: Point2) -> Point2 {
    let (a, b) = (wrap_tau(x_p.angle()), wrap_tau(x_e.angle()));
    if x_p.norm() == 0.0 || x_e.norm() == 0.0 || (a - b).abs() <= PI {
        (x_e - x_p).normalized().unwrap_or(Point2::ORIGIN)
    } else {
        -x_p / x_p.norm()
    }
}

/// `gamma* - epsilon * d/dx_p d_L(x_p, x_e)`; norm up to `1 + epsilon`.
pub fn gamma_eps_corner(
    world: &World,
    x_p: Point2,
    x_e: Point2,
    u_e: Point2,
    alpha: f64,
    epsilon: f64,
) -> Result<ControlInput> {
    let star = pursue_corner(world, x_p, x_e, u_e, alpha)?;
    let (g1, _) = world.metric_gradients(x_p, x_e)?;
    Ok(ControlInput::new(star.direction - g1 * epsilon))
}

/// [`gamma_star_corner`] with a stationary evader handled through the
/// world's shortest path.
pub fn pursue_corner(world: &World, x_p: Point2, x_e: Point2, u_e: Point2, alpha: f64) -> Result<ControlInput> {
    if u_e.normalized().is_none() {
        corner_check(x_p, x_e, alpha)?;
        return pursue_shortest(world, x_p, x_e);
    }
    gamma_star_corner(x_p, x_e, u_e, alpha)
}

/// Unit step along the shortest path from `x_p` toward `x_e`.
pub fn pursue_shortest(world: &World, x_p: Point2, x_e: Point2) -> Result<ControlInput> {
    let path = world.shortest_path(x_p, x_e)?;
    unit_toward(x_p, path.waypoints[1])
}

/// Pursuer policy selector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StrategyKind {
    FreeDeltaStar,
    CornerGammaStar,
    CornerGammaEps { epsilon: f64 },
    /// Go to a committed boundary point, wait, then chase along the
    /// evader's recorded track. Without a target, the point is predicted
    /// from the evader's first observed heading.
    Retrace {
        #[serde(default)]
        target: Option<Point2>,
    },
    /// Negative control: runs directly away from the evader.
    Flee,
}

impl StrategyKind {
    pub fn tag(&self) -> &'static str {
        match self {
            StrategyKind::FreeDeltaStar => "free-delta-star",
            StrategyKind::CornerGammaStar => "corner-gamma-star",
            StrategyKind::CornerGammaEps { .. } => "corner-gamma-eps",
            StrategyKind::Retrace { .. } => "retrace",
            StrategyKind::Flee => "flee",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum RetracePhase {
    Approach,
    Hold,
    /// Chasing along the recorded track from record `idx`.
    Replay { idx: usize },
}

/// The interceptor from the reachability argument: reach the committed
/// boundary point no later than the evader can, then follow the evader's
/// own track at full speed. Uses only the history observed so far.
#[derive(Clone, Debug)]
pub struct RetraceInterceptor {
    target: Point2,
    path: ShortestPath,
    leg: usize,
    phase: RetracePhase,
    history: Vec<Point2>,
    closest: (usize, f64),
}

impl RetraceInterceptor {
    /// Commits to `target`, which must lie on the boundary of `region`.
    pub fn new(region: &DominanceRegion, target: Point2, tol: f64) -> Result<Self> {
        let v = region.phi(target)?;
        if v.abs() > tol {
            return Err(Error::Domain(format!("committed point {target} is off the boundary (phi = {v})")));
        }
        let path = region.world.shortest_path(region.x_p, target)?;
        Ok(Self {
            target,
            path,
            leg: 1,
            phase: RetracePhase::Approach,
            history: Vec::new(),
            closest: (0, f64::INFINITY),
        })
    }

    pub fn target(&self) -> Point2 {
        self.target
    }

    /// First point where the evader's shortest path toward `probe` leaves
    /// the region; `None` if it never does.
    pub fn commit_from_probe(region: &DominanceRegion, probe: Point2) -> Result<Option<Point2>> {
        let path = region.world.shortest_path(region.x_e, probe)?;
        let field = region.field();
        let n = 4096;
        let mut prev = (0.0, field.phi(region.x_e));
        for k in 1..=n {
            let s = path.length * k as f64 / n as f64;
            let v = field.phi(path.point_at(s));
            if prev.1 > 0.0 && v <= 0.0 {
                let s = crate::roots::bracketed_root_with(|s| field.phi(path.point_at(s)), prev.0, prev.1, s, v)?;
                return Ok(Some(path.point_at(s)));
            }
            prev = (s, v);
        }
        Ok(None)
    }

    /// Input for this tick given the pursuer position, the evader position
    /// and the step length.
    pub fn input(&mut self, x_p: Point2, x_e: Point2, alpha: f64, dt: f64) -> ControlInput {
        self.history.push(x_e);
        let k = self.history.len() - 1;
        let d = x_e.dist(self.target);
        if d < self.closest.1 {
            self.closest = (k, d);
        }
        let reach = alpha * dt;
        // the evader has come within a step of the point and is moving off
        let passed = self.closest.1 <= (1.0 + alpha) * dt && d > self.closest.1;
        if self.phase == RetracePhase::Hold && passed {
            self.phase = RetracePhase::Replay { idx: self.closest.0 };
        }
        match self.phase.clone() {
            RetracePhase::Approach => {
                while self.leg + 1 < self.path.waypoints.len() && x_p.dist(self.path.waypoints[self.leg]) <= 1e-12 {
                    self.leg += 1;
                }
                let aim = self.path.waypoints[self.leg];
                let gap = x_p.dist(aim);
                if self.leg + 1 == self.path.waypoints.len() && gap <= reach {
                    self.phase = if passed { RetracePhase::Replay { idx: self.closest.0 } } else { RetracePhase::Hold };
                    return ControlInput::new((aim - x_p) / reach);
                }
                if gap <= reach {
                    // land on the bend vertex exactly, continue next tick
                    self.leg += 1;
                    return ControlInput::new((aim - x_p) / reach);
                }
                ControlInput::new((aim - x_p) / gap)
            }
            RetracePhase::Hold => ControlInput::ZERO,
            RetracePhase::Replay { idx } => {
                // walk the recorded track ahead of the pursuer by one step
                let mut budget = reach;
                let mut cur = x_p;
                let mut i = idx;
                while i < self.history.len() {
                    let next = self.history[i];
                    let seg = cur.dist(next);
                    if seg >= budget {
                        let aim = cur + (next - cur) * (budget / seg);
                        self.phase = RetracePhase::Replay { idx: i };
                        return ControlInput::new((aim - x_p) / reach);
                    }
                    budget -= seg;
                    cur = next;
                    i += 1;
                }
                self.phase = RetracePhase::Replay { idx: self.history.len() - 1 };
                ControlInput::new((cur - x_p) / reach)
            }
        }
    }
}

/// Runtime pursuer: a strategy plus whatever per-episode state it keeps.
#[derive(Clone, Debug)]
pub struct Pursuer {
    kind: StrategyKind,
    world: World,
    alpha: f64,
    capture_radius: f64,
    retrace: Option<RetraceInterceptor>,
}

impl Pursuer {
    pub fn new(kind: StrategyKind, world: World, alpha: f64, capture_radius: f64) -> Self {
        Self { kind, world, alpha, capture_radius, retrace: None }
    }

    pub fn kind(&self) -> &StrategyKind {
        &self.kind
    }

    /// Installs a committed interceptor (retrace strategy only).
    pub fn set_interceptor(&mut self, r: RetraceInterceptor) {
        self.retrace = Some(r);
    }

    pub fn interceptor(&self) -> Option<&RetraceInterceptor> {
        self.retrace.as_ref()
    }

    /// Control for this tick, given the evader input the pursuer observes.
    pub fn input(&mut self, x_p: Point2, x_e: Point2, u_e: Point2, dt: f64) -> Result<ControlInput> {
        match &self.kind {
            StrategyKind::FreeDeltaStar => gamma_free(x_p, x_e, u_e, self.alpha, self.capture_radius),
            StrategyKind::CornerGammaStar => pursue_corner(&self.world, x_p, x_e, u_e, self.alpha),
            StrategyKind::CornerGammaEps { epsilon } => {
                gamma_eps_corner(&self.world, x_p, x_e, u_e, self.alpha, *epsilon)
            }
            StrategyKind::Retrace { target } => {
                if self.retrace.is_none() && target.is_none() && u_e.normalized().is_none() {
                    // nothing to commit to yet
                    return pursue_shortest(&self.world, x_p, x_e);
                }
                if self.retrace.is_none() {
                    let region = DominanceRegion::new(self.world.clone(), x_p, x_e, self.alpha, self.capture_radius)?;
                    let point = match target {
                        Some(p) => *p,
                        None => {
                            // follow the heading as the evader would, sliding on walls
                            let u = u_e.normalized().unwrap_or_default();
                            let n = 512;
                            let h = (2.0 * region.outer_bound() + 1.0) / n as f64;
                            let far = (0..n).fold(x_e, |x, _| self.world.slide(x, u * h).0);
                            match RetraceInterceptor::commit_from_probe(&region, far)? {
                                Some(p) => p,
                                // this heading predicts no exit; wait for one that does
                                None => return pursue_shortest(&self.world, x_p, x_e),
                            }
                        }
                    };
                    self.retrace = Some(RetraceInterceptor::new(&region, point, 1e-8)?);
                }
                Ok(self.retrace.as_mut().unwrap().input(x_p, x_e, self.alpha, dt))
            }
            StrategyKind::Flee => {
                let (g1, _) = self.world.metric_gradients(x_p, x_e)?;
                Ok(ControlInput::new(g1))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_chase_and_head_on() {
        let u = gamma_free(Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(1.0, 0.0), 2.0, 0.0).unwrap();
        assert!((u.direction - Point2::new(1.0, 0.0)).norm() < 1e-12);
        let u = gamma_free(Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(-1.0, 0.0), 2.0, 0.0).unwrap();
        assert!((u.direction - Point2::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn capture_reported() {
        let e = gamma_free(Point2::ORIGIN, Point2::new(0.05, 0.0), Point2::new(1.0, 0.0), 2.0, 0.1);
        assert!(matches!(e, Err(Error::CaptureOccurred(_))));
    }

    #[test]
    fn corner_branches() {
        let xp = Point2::from_polar(1.0, 1.0);
        let xe = Point2::from_polar(2.0, 4.0);
        let mut seen = [false, false];
        for k in 0..720 {
            let u = Point2::unit(k as f64 * std::f64::consts::TAU / 720.0);
            let (x_c, branch) = corner_target(xp, xe, u, 1.5).unwrap();
            let g = gamma_star_corner(xp, xe, u, 1.5).unwrap();
            assert!((g.norm() - 1.0).abs() < 1e-12);
            match branch {
                FBranch::Apollonius => {
                    seen[0] = true;
                    assert!((g.direction - (x_c - xp) / x_c.dist(xp)).norm() < 1e-12);
                }
                FBranch::Oval => {
                    seen[1] = true;
                    assert_eq!(g.direction, -xp / xp.norm());
                }
            }
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn corner_inapplicable_when_vertex_inside() {
        let e = gamma_star_corner(Point2::new(4.0, 5.0), Point2::new(2.0, -1.0), Point2::new(0.0, 1.0), 1.5);
        assert!(matches!(e, Err(Error::StrategyInapplicable(_))));
    }

    #[test]
    fn eps_zero_matches_star() {
        let w = World::corner(0.2).unwrap();
        let xp = Point2::from_polar(1.0, 1.0);
        let xe = Point2::from_polar(2.0, 4.0);
        let u = Point2::unit(0.3);
        let a = gamma_eps_corner(&w, xp, xe, u, 1.5, 0.0).unwrap();
        let b = gamma_star_corner(xp, xe, u, 1.5).unwrap();
        assert_eq!(a, b);
        let c = gamma_eps_corner(&w, xp, xe, u, 1.5, 0.1).unwrap();
        assert!(c.norm() <= 1.1 + 1e-12);
    }
}
