//! Two half-plane targets tangent to the evader's region at A1 and A2.
//! Against a pursuer that sees the evader's input at once, running for a
//! tangent point ends in capture right on the target line. When the
//! pursuer only sees the input after a delay, the evader gets into the
//! target. Nothing here is asserted; compare the depths. Played live, the
//! evader can feint toward A1 and commit to A2 at the last moment.
//!
//! `cargo run --release --example dispersal_dilemma`
//! The same setup is playable through `scenarios/dispersal.toml`.

use dominance::engine::run;
use dominance::evader::{AfterLast, EvaderPolicy};
use dominance::lab::TargetRegion;
use dominance::scenario::Scenario;
use dominance::Point2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = Scenario::load(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/dispersal.toml"))?;
    let region = scenario.region()?;
    // open plane: the region is the Apollonius disk
    let a2 = region.alpha * region.alpha;
    let center = (region.x_e * a2 - region.x_p) / (a2 - 1.0);
    let radius = region.alpha * region.x_e.dist(region.x_p) / (a2 - 1.0);
    let mut lines = Vec::new();
    for t in &scenario.targets {
        if let TargetRegion::HalfPlane { normal, offset } = t {
            let n = normal.normalized().unwrap_or_default();
            let p = center + n * radius;
            println!("target {normal}.x >= {offset}: touches the region at {p}, phi there {:.1e}", region.phi(p)?);
            lines.push((n, *offset, p));
        }
    }
    let depth = |x: Point2| lines.iter().map(|(n, o, _)| n.dot(x) - o).fold(f64::NEG_INFINITY, f64::max);
    let a1 = lines[0].2;
    let through = EvaderPolicy::Waypoints { points: vec![a1, a1 + (a1 - region.x_e)], then: AfterLast::Hold };

    for delay in [0, 5, 10, 20, 40] {
        let mut cfg = scenario.sim_config()?;
        cfg.dt = 1e-3;
        cfg.input_delay_ticks = delay;
        cfg.evader = through.clone();
        let res = run(&cfg)?;
        let deepest = res.trajectory.records.iter().map(|r| depth(r.x_e)).fold(f64::NEG_INFINITY, f64::max);
        println!(
            "delay {:.3}s: t_f={:.4} deepest into a target {deepest:+.4}",
            delay as f64 * cfg.dt,
            res.outcome.capture_time().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
