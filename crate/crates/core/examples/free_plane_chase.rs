//! Open-plane pursuit with the target-point strategy against a few scripted
//! evaders. Prints the capture time next to the `(d0 - l) / (alpha - 1)` bound.
//!
//! `cargo run --release --example free_plane_chase -- [trajectory.csv]`

use dominance::engine::{run, SimConfig};
use dominance::evader::EvaderPolicy;
use dominance::export::write_trajectory_csv;
use dominance::strategy::StrategyKind;
use dominance::{Point2, World};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let evaders = [
        ("hold", EvaderPolicy::Hold),
        ("straight away", EvaderPolicy::StraightLine { direction: Point2::new(1.0, 0.2) }),
        ("straight across", EvaderPolicy::StraightLine { direction: Point2::new(0.0, 1.0) }),
        ("turning", EvaderPolicy::Turning { heading0: 0.5, omega: 1.2 }),
        ("zigzag", EvaderPolicy::Piecewise { switch_times: vec![0.0, 0.4, 0.8, 1.2], headings: vec![1.0, -1.0, 1.0, -1.0] }),
    ];
    let mut last = None;
    for (name, evader) in evaders {
        let mut cfg =
            SimConfig::new(World::free_plane(), Point2::new(-2.0, 0.5), Point2::new(1.0, 0.0), 2.0, StrategyKind::FreeDeltaStar, evader);
        cfg.capture_radius = 0.1;
        let res = run(&cfg)?;
        let t_f = res.outcome.capture_time().unwrap_or(f64::NAN);
        println!(
            "{name:<16} t_f={t_f:.4} bound={:.4} monitors={}",
            res.capture_bound,
            if res.monitors_pass() { "pass" } else { "FAIL" }
        );
        last = Some(res.trajectory);
    }
    if let (Some(path), Some(traj)) = (std::env::args().nth(1), last) {
        write_trajectory_csv(&traj, std::fs::File::create(&path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
