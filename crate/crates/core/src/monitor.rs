//! Invariant monitors evaluated over recorded trajectories.

use serde::{Deserialize, Serialize};

use crate::engine::Trajectory;
use crate::geometry::Point2;
use crate::region::DominanceRegion;
use crate::world::World;

/// Outcome of one monitor. `worst` is the largest excess over the bound
/// (negative or zero when the invariant held everywhere).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonitorReport {
    pub name: String,
    pub samples: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub t_worst: f64,
    pub pass: bool,
}

impl MonitorReport {
    fn new(name: &str) -> Self {
        Self { name: name.into(), samples: 0, worst: f64::NEG_INFINITY, tolerance: 0.0, t_worst: 0.0, pass: true }
    }

    fn observe(&mut self, t: f64, value: f64) {
        self.samples += 1;
        if value > self.worst {
            self.worst = value;
            self.t_worst = t;
        }
    }
}

/// Default containment tolerance `C (alpha + 1) dt` with `C = 10`.
pub fn containment_tolerance(alpha: f64, dt: f64) -> f64 {
    10.0 * (alpha + 1.0) * dt
}

/// Allowed excess of the per-tick closing rate over `1 - alpha`: a fixed
/// slack plus the second-order Euler term `|v|^2 dt / (2 sep)`.
pub fn closing_rate_tolerance(alpha: f64, dt: f64, separation: f64) -> f64 {
    1e-2 + (alpha + 1.0).powi(2) * dt / (2.0 * separation.max(1e-12))
}

/// Largest `-phi_0(x_e(t))` over the records; passes when within `tol`.
pub fn monitor_containment(traj: &Trajectory, initial: &DominanceRegion, tol: f64) -> MonitorReport {
    let field = initial.field();
    let mut r = MonitorReport::new("containment");
    r.tolerance = tol;
    r.worst = 0.0;
    for rec in &traj.records {
        r.observe(rec.t, -field.phi(rec.x_e));
    }
    r.pass = r.worst <= tol;
    r
}

/// Per-tick finite-difference rate of `d_L(x_p, x_e)` against `1 - alpha`.
/// The final partial step (capture) is skipped. `worst` is the largest
/// `rate - (1 - alpha) - tolerance(sep)`, so the monitor passes when it is
/// not positive; `tolerance` reports the fixed part.
pub fn monitor_closing_rate(traj: &Trajectory, alpha: f64, dt: f64) -> MonitorReport {
    let mut r = MonitorReport::new("closing_rate");
    r.tolerance = 1e-2;
    let recs = &traj.records;
    for w in recs.windows(2) {
        let h = w[1].t - w[0].t;
        if (h - dt).abs() > 1e-9 * dt.max(1.0) {
            continue;
        }
        let rate = (w[1].separation - w[0].separation) / h;
        let excess = rate - (1.0 - alpha) - closing_rate_tolerance(alpha, dt, w[0].separation);
        r.observe(w[0].t, excess);
    }
    if r.samples == 0 {
        r.worst = 0.0;
    }
    r.pass = r.worst <= 0.0;
    r
}

/// Counts records where a player is outside `X`.
pub fn monitor_obstacles(traj: &Trajectory, world: &World) -> MonitorReport {
    let mut r = MonitorReport::new("obstacle");
    r.worst = 0.0;
    let mut bad = 0usize;
    for rec in &traj.records {
        r.samples += 1;
        if !world.contains_point(rec.x_p) || !world.contains_point(rec.x_e) {
            bad += 1;
            if bad == 1 {
                r.t_worst = rec.t;
            }
        }
    }
    r.worst = bad as f64;
    r.pass = bad == 0;
    r
}

/// Minimum of `phi_{t1}` over the given boundary points of a later region:
/// nesting holds when it is not below `-tol`.
pub fn nesting_margin(earlier: &DominanceRegion, later_boundary: &[Point2]) -> f64 {
    let field = earlier.field();
    later_boundary
        .iter()
        .filter(|p| earlier.world.contains_point(**p))
        .map(|p| field.phi(*p))
        .fold(f64::INFINITY, f64::min)
}
