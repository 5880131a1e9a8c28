//! Discrete-time simulation of simple-motion dynamics
//! `x_p' = alpha u_p`, `x_e' = u_e` with explicit Euler steps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evader::{EvaderDriver, EvaderPolicy};
use crate::geometry::Point2;
use crate::monitor::{
    closing_rate_tolerance, monitor_closing_rate, monitor_containment, monitor_obstacles, MonitorReport,
};
use crate::region::DominanceRegion;
use crate::strategy::{Pursuer, RetraceInterceptor, StrategyKind};
use crate::world::World;

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_CAPTURE_EPS: f64 = 1e-3;

/// Per-record event bits.
pub mod flags {
    pub const PURSUER_SLID: u32 = 1;
    pub const EVADER_SLID: u32 = 2;
    pub const CONTAINMENT: u32 = 4;
    pub const CLOSING_RATE: u32 = 8;
    pub const OUTSIDE_WORLD: u32 = 16;
    /// Pursuer input norm above one (auxiliary strategy).
    pub const NON_ADMISSIBLE: u32 = 32;
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub t: f64,
    pub x_p: Point2,
    pub x_e: Point2,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepEvents {
    pub pursuer_slid: bool,
    pub evader_slid: bool,
}

/// One Euler step; each player's displacement slides along any obstacle
/// edge it would cross.
pub fn step(state: GameState, u_p: Point2, u_e: Point2, dt: f64, world: &World, alpha: f64) -> (GameState, StepEvents) {
    if dt == 0.0 {
        return (state, StepEvents::default());
    }
    let (x_p, pursuer_slid) = world.slide(state.x_p, u_p * (alpha * dt));
    let (x_e, evader_slid) = world.slide(state.x_e, u_e * dt);
    (GameState { t: state.t + dt, x_p, x_e }, StepEvents { pursuer_slid, evader_slid })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MonitorConfig {
    pub containment: bool,
    pub closing_rate: bool,
    pub obstacle: bool,
    /// Stop the episode at the first flagged tick.
    pub halt_on_violation: bool,
    /// Containment tolerance is `containment_factor (alpha + 1) dt`.
    pub containment_factor: f64,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        Self { containment: true, closing_rate: true, obstacle: true, halt_on_violation: false, containment_factor: 10.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub world: World,
    pub alpha: f64,
    pub capture_radius: f64,
    pub capture_eps: f64,
    pub dt: f64,
    pub t_max: f64,
    pub x_p0: Point2,
    pub x_e0: Point2,
    pub pursuer: StrategyKind,
    pub evader: EvaderPolicy,
    pub monitors: MonitorConfig,
    /// The pursuer sees the evader input from this many ticks earlier.
    /// Carries no guarantee.
    pub input_delay_ticks: usize,
}

impl SimConfig {
    pub fn new(world: World, x_p0: Point2, x_e0: Point2, alpha: f64, pursuer: StrategyKind, evader: EvaderPolicy) -> Self {
        Self {
            world,
            alpha,
            capture_radius: 0.0,
            capture_eps: DEFAULT_CAPTURE_EPS,
            dt: DEFAULT_DT,
            t_max: 100.0,
            x_p0,
            x_e0,
            pursuer,
            evader,
            monitors: MonitorConfig::default(),
            input_delay_ticks: 0,
        }
    }

    /// Separation at or below which the game ends.
    pub fn capture_threshold(&self) -> f64 {
        if self.capture_radius > 0.0 {
            self.capture_radius
        } else {
            self.capture_eps
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max >= 0.0) {
            return Err(Error::InvalidConfig(format!("t_max must be >= 0, got {}", self.t_max)));
        }
        if !(self.capture_eps > 0.0) {
            return Err(Error::InvalidConfig("capture_eps must be positive".into()));
        }
        self.evader.validate()?;
        let region = self.initial_region()?;
        if region.separation() <= self.capture_threshold() {
            return Err(Error::InvalidConfig("players start within capture distance".into()));
        }
        Ok(())
    }

    pub fn initial_region(&self) -> Result<DominanceRegion> {
        DominanceRegion::new(self.world.clone(), self.x_p0, self.x_e0, self.alpha, self.capture_radius)
    }

    /// `(d_0 - l) / (alpha - 1)`.
    pub fn capture_bound(&self) -> f64 {
        let d0 = self.world.distance(self.x_p0, self.x_e0).unwrap_or(f64::NAN);
        (d0 - self.capture_radius) / (self.alpha - 1.0)
    }
}

/// One row per tick: the state at `t` and the inputs applied on
/// `[t, t + dt)`. The terminal row carries zero inputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub t: f64,
    pub x_p: Point2,
    pub x_e: Point2,
    pub u_p: Point2,
    pub u_e: Point2,
    pub separation: f64,
    pub phi0_evader: f64,
    pub flags: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub records: Vec<Record>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&Record> {
        self.records.last()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SimOutcome {
    Captured { t_f: f64 },
    TimedOut { t: f64 },
    MonitorViolation { which: String, t: f64, magnitude: f64 },
}

impl SimOutcome {
    pub fn capture_time(&self) -> Option<f64> {
        match self {
            SimOutcome::Captured { t_f } => Some(*t_f),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub trajectory: Trajectory,
    pub outcome: SimOutcome,
    pub monitors: Vec<MonitorReport>,
    /// `(d_0 - l) / (alpha - 1)`.
    pub capture_bound: f64,
    pub wall_contacts: usize,
}

impl SimResult {
    pub fn monitors_pass(&self) -> bool {
        self.monitors.iter().all(|m| m.pass) && !matches!(self.outcome, SimOutcome::MonitorViolation { .. })
    }

    pub fn monitor(&self, name: &str) -> Option<&MonitorReport> {
        self.monitors.iter().find(|m| m.name == name)
    }
}

/// Builds the pursuer for a config, committing a retrace target from a
/// declared probe when needed.
pub fn make_pursuer(config: &SimConfig) -> Result<Pursuer> {
    let mut pursuer = Pursuer::new(config.pursuer.clone(), config.world.clone(), config.alpha, config.capture_radius);
    if let (StrategyKind::Retrace { target: None }, EvaderPolicy::BoundaryProbe { target }) = (&config.pursuer, &config.evader) {
        let region = config.initial_region()?;
        if let Some(x) = RetraceInterceptor::commit_from_probe(&region, *target)? {
            pursuer.set_interceptor(RetraceInterceptor::new(&region, x, 1e-8)?);
        }
    }
    Ok(pursuer)
}

/// Smallest `s` in `[0, 1]` with `|r0 + s (r1 - r0)| <= thr`.
fn first_within(r0: Point2, r1: Point2, thr: f64) -> Option<f64> {
    if r0.norm() <= thr {
        return Some(0.0);
    }
    let d = r1 - r0;
    let a = d.norm_sq();
    if a == 0.0 {
        return None;
    }
    let b = 2.0 * r0.dot(d);
    let c = r0.norm_sq() - thr * thr;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (s1, s2) = (q / a, c / q);
    let s = s1.min(s2);
    (0.0..=1.0).contains(&s).then_some(s)
}

/// Fraction of `disp` at which the segment from `from` passes through an
/// obstacle vertex, if it does.
fn vertex_crossing(world: &World, from: Point2, disp: Point2) -> Option<f64> {
    let len_sq = disp.norm_sq();
    if len_sq == 0.0 {
        return None;
    }
    world
        .vertices()
        .into_iter()
        .filter_map(|v| {
            let s = (v - from).dot(disp) / len_sq;
            let off = (from + disp * s).dist(v);
            (s > 1e-9 && s < 1.0 - 1e-9 && off <= 1e-9 * (1.0 + v.norm())).then_some(s)
        })
        .min_by(f64::total_cmp)
}

/// Simulation loop with externally supplied evader inputs; used by both
/// [`run`] and live sessions.
pub struct Episode {
    config: SimConfig,
    region: DominanceRegion,
    pursuer: Pursuer,
    state: GameState,
    tick: u64,
    separation: f64,
    threshold: f64,
    contain_tol: f64,
    seen: Vec<Point2>,
    pub trajectory: Trajectory,
    pub wall_contacts: usize,
    outcome: Option<SimOutcome>,
}

impl Episode {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let region = config.initial_region()?;
        let separation = region.separation();
        Ok(Self {
            pursuer: make_pursuer(&config)?,
            state: GameState { t: 0.0, x_p: config.x_p0, x_e: config.x_e0 },
            tick: 0,
            separation,
            threshold: config.capture_threshold(),
            contain_tol: config.monitors.containment_factor * (config.alpha + 1.0) * config.dt,
            region,
            seen: Vec::new(),
            trajectory: Trajectory::default(),
            wall_contacts: 0,
            outcome: None,
            config,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn state(&self) -> GameState {
        self.state
    }

    pub fn outcome(&self) -> Option<&SimOutcome> {
        self.outcome.as_ref()
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn initial_region(&self) -> &DominanceRegion {
        &self.region
    }

    fn phi0(&self, x: Point2) -> f64 {
        self.region.phi(x).unwrap_or(f64::NAN)
    }

    fn finish(&mut self, outcome: SimOutcome) -> Option<SimOutcome> {
        let terminal = Record {
            t: self.state.t,
            x_p: self.state.x_p,
            x_e: self.state.x_e,
            u_p: Point2::ORIGIN,
            u_e: Point2::ORIGIN,
            separation: self.separation,
            phi0_evader: self.phi0(self.state.x_e),
            flags: self.record_flags(self.state.x_e, self.state.x_p),
        };
        self.trajectory.records.push(terminal);
        self.outcome = Some(outcome.clone());
        Some(outcome)
    }

    fn record_flags(&self, x_e: Point2, x_p: Point2) -> u32 {
        let mut f = 0;
        if self.config.monitors.containment && -self.phi0(x_e) > self.contain_tol {
            f |= flags::CONTAINMENT;
        }
        if self.config.monitors.obstacle && (!self.config.world.contains_point(x_e) || !self.config.world.contains_point(x_p)) {
            f |= flags::OUTSIDE_WORLD;
        }
        f
    }

    /// Checks the terminal conditions at the current state; returns the
    /// outcome if the episode is over.
    pub fn check_terminal(&mut self) -> Option<SimOutcome> {
        if let Some(o) = &self.outcome {
            return Some(o.clone());
        }
        if self.separation <= self.threshold {
            return self.finish(SimOutcome::Captured { t_f: self.state.t });
        }
        if self.state.t >= self.config.t_max - 1e-12 * self.config.dt {
            return self.finish(SimOutcome::TimedOut { t: self.state.t });
        }
        None
    }

    /// Advances one tick with the given evader input. Returns the outcome
    /// when the episode ends during or at the end of this tick.
    pub fn advance(&mut self, u_e: Point2) -> Option<SimOutcome> {
        if let Some(o) = self.check_terminal() {
            return Some(o);
        }
        let cfg = &self.config;
        let dt = cfg.dt;
        self.seen.push(u_e);
        let k = self.seen.len() - 1;
        let observed = if k >= cfg.input_delay_ticks { self.seen[k - cfg.input_delay_ticks] } else { Point2::ORIGIN };
        let u_p = match self.pursuer.input(self.state.x_p, self.state.x_e, observed, dt) {
            Ok(u) => u.direction,
            Err(Error::CaptureOccurred(_)) => {
                return self.finish(SimOutcome::Captured { t_f: self.state.t });
            }
            Err(e) => {
                return self.finish(SimOutcome::MonitorViolation {
                    which: format!("strategy: {e}"),
                    t: self.state.t,
                    magnitude: f64::NAN,
                });
            }
        };
        let mut knots = vec![(0.0, self.state)];
        let (next, mut ev) = step(self.state, u_p, u_e, dt, &cfg.world, cfg.alpha);
        // A path-following pursuer that reaches an obstacle vertex mid-tick
        // turns there instead of overshooting along the old heading.
        let mut next = next;
        let restartable = !matches!(cfg.pursuer, StrategyKind::Retrace { .. });
        if let Some(frac) = restartable.then(|| vertex_crossing(&cfg.world, self.state.x_p, u_p * (cfg.alpha * dt))).flatten() {
            let (mid, ev1) = step(self.state, u_p, u_e, frac * dt, &cfg.world, cfg.alpha);
            if let Ok(u2) = self.pursuer.input(mid.x_p, mid.x_e, observed, (1.0 - frac) * dt) {
                let (end, ev2) = step(mid, u2.direction, u_e, (1.0 - frac) * dt, &cfg.world, cfg.alpha);
                knots.push((frac, mid));
                next = end;
                ev = StepEvents {
                    pursuer_slid: ev1.pursuer_slid || ev2.pursuer_slid,
                    evader_slid: ev1.evader_slid || ev2.evader_slid,
                };
            }
        }
        knots.push((1.0, next));
        let mut f = 0;
        if ev.pursuer_slid {
            f |= flags::PURSUER_SLID;
        }
        if ev.evader_slid {
            f |= flags::EVADER_SLID;
        }
        if ev.pursuer_slid || ev.evader_slid {
            self.wall_contacts += 1;
        }
        if u_p.norm() > 1.0 + 1e-12 {
            f |= flags::NON_ADMISSIBLE;
        }
        f |= self.record_flags(self.state.x_e, self.state.x_p);
        let mut rec = Record {
            t: self.state.t,
            x_p: self.state.x_p,
            x_e: self.state.x_e,
            u_p,
            u_e,
            separation: self.separation,
            phi0_evader: self.phi0(self.state.x_e),
            flags: f,
        };

        for w in knots.windows(2) {
            let ((fa, a), (fb, b)) = (w[0], w[1]);
            if let Some(s) = first_within(a.x_e - a.x_p, b.x_e - b.x_p, self.threshold) {
                self.trajectory.records.push(rec);
                let t_f = self.state.t + (fa + s * (fb - fa)) * dt;
                self.state = GameState { t: t_f, x_p: a.x_p.lerp(b.x_p, s), x_e: a.x_e.lerp(b.x_e, s) };
                self.separation = self.state.x_p.dist(self.state.x_e);
                return self.finish(SimOutcome::Captured { t_f });
            }
        }

        let sep_next = cfg.world.distance(next.x_p, next.x_e).unwrap_or(f64::INFINITY);
        if cfg.monitors.closing_rate {
            let rate = (sep_next - self.separation) / dt;
            if rate > 1.0 - cfg.alpha + closing_rate_tolerance(cfg.alpha, dt, self.separation) {
                rec.flags |= flags::CLOSING_RATE;
            }
        }
        self.trajectory.records.push(rec);
        self.tick += 1;
        self.state = GameState { t: self.tick as f64 * dt, x_p: next.x_p, x_e: next.x_e };
        self.separation = sep_next;
        if cfg.monitors.halt_on_violation && rec.flags & (flags::CONTAINMENT | flags::CLOSING_RATE | flags::OUTSIDE_WORLD) != 0 {
            let which = if rec.flags & flags::CONTAINMENT != 0 {
                "containment"
            } else if rec.flags & flags::CLOSING_RATE != 0 {
                "closing_rate"
            } else {
                "obstacle"
            };
            return self.finish(SimOutcome::MonitorViolation { which: which.into(), t: rec.t, magnitude: -rec.phi0_evader });
        }
        self.check_terminal()
    }

    /// Monitor reports over the trajectory so far.
    pub fn reports(&self) -> Vec<MonitorReport> {
        let cfg = &self.config;
        let mut out = Vec::new();
        if cfg.monitors.containment {
            out.push(monitor_containment(&self.trajectory, &self.region, self.contain_tol));
        }
        if cfg.monitors.closing_rate {
            out.push(monitor_closing_rate(&self.trajectory, cfg.alpha, cfg.dt));
        }
        if cfg.monitors.obstacle {
            out.push(monitor_obstacles(&self.trajectory, &cfg.world));
        }
        out
    }
}

/// Runs an episode to capture, timeout, or a halting monitor violation.
pub fn run(config: &SimConfig) -> Result<SimResult> {
    let mut ep = Episode::new(config.clone())?;
    let mut evader = EvaderDriver::new(config.evader.clone(), &config.world, config.x_e0)?;
    let outcome = loop {
        if let Some(o) = ep.check_terminal() {
            break o;
        }
        let s = ep.state();
        let u_e = evader.input(s.x_e, s.t, config.dt);
        if let Some(o) = ep.advance(u_e) {
            break o;
        }
    };
    let monitors = ep.reports();
    Ok(SimResult {
        capture_bound: config.capture_bound(),
        wall_contacts: ep.wall_contacts,
        trajectory: ep.trajectory,
        outcome,
        monitors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chase(evader: EvaderPolicy) -> SimConfig {
        SimConfig::new(World::free_plane(), Point2::ORIGIN, Point2::new(1.0, 0.0), 2.0, StrategyKind::FreeDeltaStar, evader)
    }

    #[test]
    fn euler_step() {
        let s = GameState { t: 0.0, x_p: Point2::ORIGIN, x_e: Point2::new(1.0, 0.0) };
        let (n, _) = step(s, Point2::new(1.0, 0.0), Point2::new(1.0, 0.0), 0.1, &World::free_plane(), 2.0);
        assert!((n.x_p - Point2::new(0.2, 0.0)).norm() < 1e-15);
        assert!((n.x_e - Point2::new(1.1, 0.0)).norm() < 1e-15);
        let (z, _) = step(s, Point2::new(1.0, 0.0), Point2::new(1.0, 0.0), 0.0, &World::free_plane(), 2.0);
        assert_eq!(z, s);
    }

    #[test]
    fn collinear_tail_chase() {
        let cfg = chase(EvaderPolicy::StraightLine { direction: Point2::new(1.0, 0.0) });
        let r = run(&cfg).unwrap();
        let t_f = r.outcome.capture_time().unwrap();
        assert!((t_f - 1.0).abs() < 5e-3);
        assert_eq!(r.trajectory.len(), (t_f / cfg.dt - 1e-9).ceil() as usize + 1);
        assert!(r.monitors_pass(), "{:?}", r.monitors);
    }

    #[test]
    fn stationary_evader() {
        let cfg = chase(EvaderPolicy::Hold);
        let r = run(&cfg).unwrap();
        let t_f = r.outcome.capture_time().unwrap();
        assert!((t_f - 0.5).abs() < 2e-3);
    }

    #[test]
    fn zero_horizon_times_out() {
        let mut cfg = chase(EvaderPolicy::Hold);
        cfg.t_max = 0.0;
        let r = run(&cfg).unwrap();
        assert_eq!(r.outcome, SimOutcome::TimedOut { t: 0.0 });
        assert_eq!(r.trajectory.len(), 1);
    }

    #[test]
    fn fleeing_pursuer_trips_monitors() {
        let mut cfg = chase(EvaderPolicy::StraightLine { direction: Point2::new(0.0, 1.0) });
        cfg.pursuer = StrategyKind::Flee;
        cfg.t_max = 1.0;
        let r = run(&cfg).unwrap();
        assert!(!r.monitors_pass());
    }

    #[test]
    fn pursuer_turns_at_the_vertex_mid_tick() {
        let world = World::corner(20f64.to_radians()).unwrap();
        let (x_p, x_e) = (Point2::new(-0.5, 1.5), Point2::new(1.5, -2.0));
        let cfg = SimConfig::new(world, x_p, x_e, 1.6, StrategyKind::CornerGammaStar, EvaderPolicy::Hold);
        let r = run(&cfg).unwrap();
        // path length around the vertex, covered at full speed
        let expected = (x_p.norm() + x_e.norm() - cfg.capture_eps) / 1.6;
        assert!((r.outcome.capture_time().unwrap() - expected).abs() < 1e-9);
        assert!(r.monitors_pass(), "{:?}", r.monitors);
    }
}
