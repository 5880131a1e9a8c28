//! Scripted evader policies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::world::World;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AfterLast {
    #[default]
    Hold,
    Continue,
}

/// Evader policy description, as written in scenario files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EvaderPolicy {
    StraightLine {
        direction: Point2,
    },
    Waypoints {
        points: Vec<Point2>,
        #[serde(default)]
        then: AfterLast,
    },
    /// Follow the shortest path toward `target` and stop there.
    BoundaryProbe {
        target: Point2,
    },
    Hold,
    /// Heading `heading0 + omega t`.
    Turning {
        heading0: f64,
        omega: f64,
    },
    /// Heading `headings[i]` (radians) from `switch_times[i]` on; the first
    /// switch time is the start.
    Piecewise {
        switch_times: Vec<f64>,
        headings: Vec<f64>,
    },
    /// Fed externally; the last heading is held between updates.
    HumanLive,
}

impl EvaderPolicy {
    pub fn tag(&self) -> &'static str {
        match self {
            EvaderPolicy::StraightLine { .. } => "straight-line",
            EvaderPolicy::Waypoints { .. } => "waypoints",
            EvaderPolicy::BoundaryProbe { .. } => "boundary-probe",
            EvaderPolicy::Hold => "hold",
            EvaderPolicy::Turning { .. } => "turning",
            EvaderPolicy::Piecewise { .. } => "piecewise",
            EvaderPolicy::HumanLive => "human-live",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EvaderPolicy::StraightLine { direction } if direction.normalized().is_none() => {
                Err(Error::InvalidConfig("straight-line direction must be nonzero".into()))
            }
            EvaderPolicy::Waypoints { points, .. } if points.is_empty() => {
                Err(Error::InvalidConfig("waypoint list is empty".into()))
            }
            EvaderPolicy::Piecewise { switch_times, headings } => {
                if switch_times.is_empty() || switch_times.len() != headings.len() {
                    return Err(Error::InvalidConfig("piecewise policy needs matching, non-empty lists".into()));
                }
                if switch_times.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidConfig("switch times must increase".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Running state of an evader policy within one episode.
#[derive(Clone, Debug)]
pub struct EvaderDriver {
    policy: EvaderPolicy,
    route: Vec<Point2>,
    next: usize,
    then: AfterLast,
    last: Point2,
    human: Option<Point2>,
}

impl EvaderDriver {
    pub fn new(policy: EvaderPolicy, world: &World, x_e0: Point2) -> Result<Self> {
        policy.validate()?;
        let (route, then) = match &policy {
            EvaderPolicy::Waypoints { points, then } => (points.clone(), *then),
            EvaderPolicy::BoundaryProbe { target } => {
                let path = world.shortest_path(x_e0, *target)?;
                (path.waypoints[1..].to_vec(), AfterLast::Hold)
            }
            _ => (Vec::new(), AfterLast::Hold),
        };
        Ok(Self { policy, route, next: 0, then, last: Point2::ORIGIN, human: None })
    }

    pub fn policy(&self) -> &EvaderPolicy {
        &self.policy
    }

    /// Sets the held human heading; returns whether it had to be normalized.
    pub fn set_heading(&mut self, heading: Point2) -> Result<bool> {
        let u = heading
            .normalized()
            .ok_or_else(|| Error::InvalidConfig("heading must be nonzero".into()))?;
        let renormalized = (heading.norm() - 1.0).abs() > 1e-9;
        self.human = Some(u);
        Ok(renormalized)
    }

    pub fn heading(&self) -> Option<Point2> {
        self.human
    }

    /// Input for the step starting at time `t` from position `x_e`.
    pub fn input(&mut self, x_e: Point2, t: f64, dt: f64) -> Point2 {
        let u = match &self.policy {
            EvaderPolicy::StraightLine { direction } => direction.normalized().unwrap_or_default(),
            EvaderPolicy::Hold => Point2::ORIGIN,
            EvaderPolicy::Turning { heading0, omega } => Point2::unit(heading0 + omega * t),
            EvaderPolicy::Piecewise { switch_times, headings } => {
                let i = switch_times.iter().rposition(|&s| s <= t + 1e-12).unwrap_or(0);
                Point2::unit(headings[i])
            }
            EvaderPolicy::HumanLive => self.human.unwrap_or_default(),
            EvaderPolicy::Waypoints { .. } | EvaderPolicy::BoundaryProbe { .. } => self.route_input(x_e, dt),
        };
        self.last = u;
        u
    }

    fn route_input(&mut self, x_e: Point2, dt: f64) -> Point2 {
        while self.next < self.route.len() && x_e.dist(self.route[self.next]) <= 1e-12 {
            self.next += 1;
        }
        match self.route.get(self.next) {
            // land on a waypoint within reach rather than cut the bend
            Some(w) if dt > 0.0 && x_e.dist(*w) <= dt => {
                let u = (*w - x_e) / dt;
                self.next += 1;
                u
            }
            Some(w) => (*w - x_e).normalized().unwrap_or_default(),
            None => match self.then {
                AfterLast::Hold => Point2::ORIGIN,
                AfterLast::Continue => self.last,
            },
        }
    }
}
