//! Simulation-backed checks: capture bound, containment and closing rate
//! over randomized configurations, and first-order convergence in `dt`.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use super::{boundary_point_on_ray, random_unit, rng, CheckReport};
use crate::engine::{run, SimConfig, SimResult};
use crate::error::Result;
use crate::evader::EvaderPolicy;
use crate::geometry::Point2;
use crate::region::DominanceRegion;
use crate::strategy::StrategyKind;
use crate::world::World;

/// Free-plane start: `alpha` in `[1.1, 3]`, `d0` in `[0.5, 10]`,
/// `l` in `{0, 0.1}`.
pub fn random_free_config(rng: &mut impl Rng) -> (Point2, Point2, f64, f64) {
    let alpha = rng.random_range(1.1..3.0);
    let d0 = rng.random_range(0.5..10.0);
    let l = if rng.random_bool(0.5) { 0.0 } else { 0.1 };
    let x_p = Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    (x_p, x_p + random_unit(rng) * d0, alpha, l)
}

/// Corner start with the vertex outside the closed region
/// (`|x_p| < alpha |x_e|`). About half the draws put the players out of
/// each other's sight.
pub fn random_corner_config(rng: &mut impl Rng) -> (World, Point2, Point2, f64) {
    loop {
        let theta0 = rng.random_range(2f64..60.0).to_radians();
        let alpha = rng.random_range(1.1..3.0);
        let x_e = Point2::from_polar(rng.random_range(0.5..5.0), rng.random_range(theta0..2.0 * PI - theta0));
        let x_p = Point2::from_polar(rng.random_range(0.3..6.0), rng.random_range(theta0..2.0 * PI - theta0));
        let d = x_p.dist(x_e);
        if x_p.norm() < alpha * x_e.norm() * 0.98 && d > 0.3 && d < 10.0 {
            return (World::corner(theta0).unwrap(), x_p, x_e, alpha);
        }
    }
}

/// Piecewise-constant headings switching at random times.
pub fn random_piecewise_policy(rng: &mut impl Rng, horizon: f64) -> EvaderPolicy {
    let mut switch_times = vec![0.0];
    let mut headings = vec![rng.random_range(0.0..2.0 * PI)];
    let mut t = 0.0;
    loop {
        t += rng.random_range(0.05..1.0) * horizon.max(0.1) / 3.0;
        if t >= horizon {
            break;
        }
        switch_times.push(t);
        headings.push(rng.random_range(0.0..2.0 * PI));
    }
    EvaderPolicy::Piecewise { switch_times, headings }
}

/// Folds one episode into the capture-bound, containment and closing-rate
/// reports. The bound gets `1%` plus two steps of slack.
fn fold(reports: &mut [CheckReport; 3], cfg: &SimConfig, r: &SimResult) {
    let label = || format!("x_p0={} x_e0={} alpha={} l={} evader={}", cfg.x_p0, cfg.x_e0, cfg.alpha, cfg.capture_radius, cfg.evader.tag());
    let bound = r.capture_bound * 1.01 + 2.0 * cfg.dt;
    let t_f = r.outcome.capture_time().unwrap_or(f64::INFINITY);
    reports[0].observe(bound - t_f, || format!("{} t_f={t_f} bound={}", label(), r.capture_bound));
    if let Some(m) = r.monitor("containment") {
        reports[1].observe(m.tolerance - m.worst, || format!("{} worst={} t={}", label(), m.worst, m.t_worst));
    }
    if let Some(m) = r.monitor("closing_rate") {
        reports[2].observe(-m.worst, || format!("{} worst={} t={}", label(), m.worst, m.t_worst));
    }
}

fn reports(prefix: &str) -> [CheckReport; 3] {
    [
        CheckReport::new(format!("{prefix}.capture_bound"), 0.0),
        CheckReport::new(format!("{prefix}.containment"), 0.0),
        CheckReport::new(format!("{prefix}.closing_rate"), 0.0),
    ]
}

fn run_all(configs: Vec<SimConfig>, prefix: &str) -> Result<Vec<CheckReport>> {
    let results: Vec<Result<SimResult>> = configs.par_iter().map(run).collect();
    let mut reps = reports(prefix);
    for (cfg, r) in configs.iter().zip(results) {
        fold(&mut reps, cfg, &r?);
    }
    Ok(reps.into_iter().map(CheckReport::finish).collect())
}

/// Free-plane pursuit with random piecewise-constant evaders.
pub fn check_free_plane_capture(n_configs: usize, n_policies: usize, dt: f64, seed: u64) -> Result<Vec<CheckReport>> {
    let mut rng = rng(seed);
    let mut configs = Vec::new();
    for _ in 0..n_configs {
        let (x_p, x_e, alpha, l) = random_free_config(&mut rng);
        let bound = (x_p.dist(x_e) - l) / (alpha - 1.0);
        for _ in 0..n_policies {
            let evader = random_piecewise_policy(&mut rng, bound);
            let mut cfg = SimConfig::new(World::free_plane(), x_p, x_e, alpha, StrategyKind::FreeDeltaStar, evader);
            cfg.capture_radius = l;
            cfg.dt = dt;
            cfg.t_max = bound * 1.5 + 1.0;
            configs.push(cfg);
        }
    }
    run_all(configs, "free_plane")
}

/// Corner pursuit against evaders probing toward points beyond the
/// boundary (and toward the vertex).
pub fn check_corner_guarantee(n_configs: usize, n_probes: usize, dt: f64, seed: u64) -> Result<Vec<CheckReport>> {
    let mut rng = rng(seed);
    let mut configs = Vec::new();
    for _ in 0..n_configs {
        let (world, x_p, x_e, alpha) = random_corner_config(&mut rng);
        let region = DominanceRegion::new(world.clone(), x_p, x_e, alpha, 0.0)?;
        let bound = region.separation() / (alpha - 1.0);
        let mut targets = vec![Point2::from_polar(1e-3, world.corner_angle().unwrap() + PI)];
        while targets.len() < n_probes {
            let u = random_unit(&mut rng);
            let Some(b) = boundary_point_on_ray(&region, u) else { continue };
            let t = x_e + (b - x_e) * rng.random_range(1.1..2.0);
            if world.contains_point(t) {
                targets.push(t);
            }
        }
        for target in targets {
            let mut cfg = SimConfig::new(world.clone(), x_p, x_e, alpha, StrategyKind::CornerGammaStar, EvaderPolicy::BoundaryProbe { target });
            cfg.dt = dt;
            cfg.t_max = bound * 1.5 + 1.0;
            configs.push(cfg);
        }
    }
    run_all(configs, "corner")
}

/// `t_f` differences under successive halvings of `dt` for a turning
/// evader; the fitted log-log slope should be close to one. The margin is
/// `0.3 - |slope - 1|`.
pub fn check_dt_convergence(base_dt: f64, halvings: usize) -> Result<CheckReport> {
    let mut times = Vec::new();
    for k in 0..=halvings {
        let mut cfg = SimConfig::new(
            World::free_plane(),
            Point2::new(-1.0, -1.0),
            Point2::new(1.0, 0.5),
            1.5,
            StrategyKind::FreeDeltaStar,
            EvaderPolicy::Turning { heading0: 0.3, omega: 1.0 },
        );
        cfg.dt = base_dt / 2f64.powi(k as i32);
        cfg.t_max = 20.0;
        cfg.monitors.closing_rate = false;
        let r = run(&cfg)?;
        times.push((cfg.dt, r.outcome.capture_time().unwrap_or(f64::NAN)));
    }
    // successive differences shrink like dt for a first-order scheme
    let pts: Vec<(f64, f64)> = times.windows(2).map(|w| (w[1].0.ln(), (w[0].1 - w[1].1).abs().ln())).collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    let slope = num / den;
    let mut rep = CheckReport::new("dt_convergence", 0.0);
    rep.observe(0.3 - (slope - 1.0).abs(), || format!("slope={slope} t_f={times:?}"));
    Ok(rep.finish())
}
