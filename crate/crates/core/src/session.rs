//! Live game sessions: an episode advanced one tick at a time with the
//! evader input taken from a held human heading (or a scripted policy),
//! emitting one frame per tick.

use serde::{Deserialize, Serialize};

use crate::boundary::boundary_arcs;
use crate::engine::{flags, Episode, SimConfig, SimOutcome, Trajectory};
use crate::error::{Error, Result};
use crate::evader::{EvaderDriver, EvaderPolicy};
use crate::export::BoundaryRecord;
use crate::geometry::Point2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionStatus {
    Running,
    Captured,
    TimedOut,
    /// The episode stopped on a monitor or strategy failure.
    Halted,
}

impl From<&SimOutcome> for SessionStatus {
    fn from(o: &SimOutcome) -> Self {
        match o {
            SimOutcome::Captured { .. } => SessionStatus::Captured,
            SimOutcome::TimedOut { .. } => SessionStatus::TimedOut,
            SimOutcome::MonitorViolation { .. } => SessionStatus::Halted,
        }
    }
}

/// Server-to-client message, one per tick.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameMessage {
    pub t: f64,
    pub x_p: Point2,
    pub x_e: Point2,
    pub u_p: Point2,
    pub u_e: Point2,
    pub separation: f64,
    /// `d_L(c, x_p) - alpha d_L(c, x_e)` at the client's cursor `c`, for
    /// the current positions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_cursor: Option<f64>,
    pub boundary_version: u64,
    /// Sent only when `boundary_version` changes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<Point2>>,
    pub status: SessionStatus,
    pub flags: u32,
    /// Present on the final frame of a captured episode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_f: Option<f64>,
    /// `(d_0 - l) / (alpha - 1)`.
    pub capture_bound: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Client-to-server heading update.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeadingUpdate {
    pub session_id: String,
    pub heading: Point2,
    #[serde(default)]
    pub client_ts: f64,
    #[serde(default)]
    pub cursor: Option<Point2>,
}

/// Snapshot of a session for request/response queries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub id: String,
    pub t: f64,
    pub x_p: Point2,
    pub x_e: Point2,
    pub separation: f64,
    pub status: SessionStatus,
    pub ticks: u64,
    pub last_heading: Option<Point2>,
    pub last_heading_ts: Option<f64>,
}

pub struct Session {
    id: String,
    episode: Episode,
    driver: EvaderDriver,
    inputs: Vec<Point2>,
    boundary: BoundaryRecord,
    boundary_sent: bool,
    cursor: Option<Point2>,
    last_heading_ts: Option<f64>,
    pending_warnings: Vec<String>,
    done: bool,
}

impl Session {
    pub fn new(id: impl Into<String>, config: SimConfig) -> Result<Self> {
        let region = config.initial_region()?;
        let boundary = BoundaryRecord::new(&region, &boundary_arcs(&region, 512)?);
        let driver = EvaderDriver::new(config.evader.clone(), &config.world, config.x_e0)?;
        Ok(Self {
            id: id.into(),
            episode: Episode::new(config)?,
            driver,
            inputs: Vec::new(),
            boundary,
            boundary_sent: false,
            cursor: None,
            last_heading_ts: None,
            pending_warnings: Vec::new(),
            done: false,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn config(&self) -> &SimConfig {
        self.episode.config()
    }

    pub fn status(&self) -> SessionStatus {
        self.episode.outcome().map(SessionStatus::from).unwrap_or(SessionStatus::Running)
    }

    pub fn is_finished(&self) -> bool {
        self.done
    }

    /// Boundary of the initial dominance region with typed arcs.
    pub fn boundary(&self) -> &BoundaryRecord {
        &self.boundary
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.episode.trajectory
    }

    /// Evader inputs applied so far, one per completed tick.
    pub fn inputs(&self) -> &[Point2] {
        &self.inputs
    }

    pub fn state(&self) -> SessionState {
        let s = self.episode.state();
        SessionState {
            id: self.id.clone(),
            t: s.t,
            x_p: s.x_p,
            x_e: s.x_e,
            separation: self.episode.separation(),
            status: self.status(),
            ticks: self.inputs.len() as u64,
            last_heading: self.driver.heading(),
            last_heading_ts: self.last_heading_ts,
        }
    }

    /// Applies a heading update; only human-driven sessions accept them.
    /// Non-unit headings are normalized with a warning on the next frame.
    pub fn set_heading(&mut self, update: &HeadingUpdate) -> Result<()> {
        if update.session_id != self.id {
            return Err(Error::InvalidConfig(format!("heading for session {} sent to {}", update.session_id, self.id)));
        }
        if !matches!(self.driver.policy(), EvaderPolicy::HumanLive) {
            return Err(Error::InvalidConfig("session evader is scripted".into()));
        }
        if let Some(c) = update.cursor {
            self.cursor = Some(c);
        }
        if self.driver.set_heading(update.heading)? {
            self.pending_warnings.push(format!("heading {} normalized", update.heading));
        }
        self.last_heading_ts = Some(update.client_ts);
        Ok(())
    }

    /// Advances one tick and returns its frame; `None` once the final frame
    /// has been produced.
    pub fn tick(&mut self) -> Option<FrameMessage> {
        if self.done {
            return None;
        }
        let before = self.episode.trajectory.len();
        let s = self.episode.state();
        let finished = match self.episode.check_terminal() {
            Some(o) => Some(o),
            None => {
                let dt = self.episode.config().dt;
                let u_e = self.driver.input(s.x_e, s.t, dt);
                self.inputs.push(u_e);
                self.episode.advance(u_e)
            }
        };
        // the first record added this tick carries its inputs
        let applied = self.episode.trajectory.records.get(before).copied();
        let now = self.episode.state();
        let mut frame = FrameMessage {
            t: now.t,
            x_p: now.x_p,
            x_e: now.x_e,
            u_p: applied.map(|r| r.u_p).unwrap_or_default(),
            u_e: applied.map(|r| r.u_e).unwrap_or_default(),
            separation: self.episode.separation(),
            phi_cursor: self.cursor.and_then(|c| self.phi_now(c)),
            boundary_version: 1,
            boundary: None,
            status: SessionStatus::Running,
            flags: applied.map(|r| r.flags).unwrap_or(0),
            t_f: None,
            capture_bound: self.config().capture_bound(),
            warnings: std::mem::take(&mut self.pending_warnings),
        };
        if frame.flags & flags::EVADER_SLID != 0 {
            frame.warnings.push("evader heading projected onto obstacle edge".into());
        }
        if !self.boundary_sent {
            self.boundary_sent = true;
            frame.boundary = Some(self.boundary.arcs.iter().flat_map(|a| a.points.iter().map(|p| Point2::new(p[0], p[1]))).collect());
        }
        if let Some(o) = finished {
            frame.status = SessionStatus::from(&o);
            frame.t_f = o.capture_time();
            if let SimOutcome::MonitorViolation { which, .. } = &o {
                frame.warnings.push(which.clone());
            }
            self.done = true;
        }
        Some(frame)
    }

    fn phi_now(&self, c: Point2) -> Option<f64> {
        let cfg = self.config();
        let s = self.episode.state();
        let dp = cfg.world.distance(c, s.x_p).ok()?;
        let de = cfg.world.distance(c, s.x_e).ok()?;
        let v = dp - cfg.alpha * de - cfg.capture_radius;
        v.is_finite().then_some(v)
    }
}

/// Re-runs an episode from a recorded evader input stream.
pub fn replay(config: SimConfig, inputs: &[Point2]) -> Result<(Trajectory, Option<SimOutcome>)> {
    let mut ep = Episode::new(config)?;
    let mut outcome = ep.check_terminal();
    for &u in inputs {
        if outcome.is_some() {
            break;
        }
        outcome = ep.advance(u);
    }
    Ok((ep.trajectory, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::StrategyKind;
    use crate::world::World;

    fn human() -> SimConfig {
        let mut c = SimConfig::new(
            World::free_plane(),
            Point2::ORIGIN,
            Point2::new(1.0, 0.0),
            2.0,
            StrategyKind::FreeDeltaStar,
            EvaderPolicy::HumanLive,
        );
        c.dt = 0.01;
        c
    }

    #[test]
    fn held_heading_and_replay() {
        let mut s = Session::new("a", human()).unwrap();
        let f0 = s.tick().unwrap();
        assert!(f0.boundary.is_some());
        assert_eq!(f0.u_e, Point2::ORIGIN);
        s.set_heading(&HeadingUpdate { session_id: "a".into(), heading: Point2::new(0.0, 2.0), client_ts: 1.0, cursor: None })
            .unwrap();
        let mut last = f0;
        while let Some(f) = s.tick() {
            assert!(f.boundary.is_none());
            last = f;
        }
        assert_eq!(last.status, SessionStatus::Captured);
        assert!(last.t_f.unwrap() <= last.capture_bound * 1.01 + 0.02);
        let (traj, out) = replay(human(), s.inputs()).unwrap();
        assert_eq!(&traj, s.trajectory());
        assert_eq!(out.unwrap().capture_time(), last.t_f);
    }

    #[test]
    fn frame_times_step_by_dt() {
        let mut s = Session::new("b", human()).unwrap();
        let ts: Vec<f64> = (0..5).map(|_| s.tick().unwrap().t).collect();
        for (k, t) in ts.iter().enumerate() {
            assert_eq!(*t, (k + 1) as f64 * 0.01);
        }
    }
}
