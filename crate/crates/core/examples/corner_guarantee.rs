//! Corner world with the vertex outside the evader's region: the corner
//! strategy keeps the evader inside its initial region and captures within
//! the open-plane bound, against several probing evaders.
//!
//! `cargo run --release --example corner_guarantee`

use dominance::boundary::boundary_arcs;
use dominance::engine::run;
use dominance::evader::EvaderPolicy;
use dominance::scenario::Scenario;
use dominance::Point2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = Scenario::load(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/corner_guarantee.toml"))?;
    let region = scenario.region()?;
    println!("|x_p| = {:.3} < alpha |x_e| = {:.3}", region.x_p.norm(), region.alpha * region.x_e.norm());
    println!("arcs: {}", boundary_arcs(&region, 256)?.summary().join(", "));

    let probes = [Point2::new(3.5, -3.5), Point2::new(-3.0, -1.0), Point2::new(4.0, 2.0), Point2::ORIGIN];
    for target in probes {
        let mut cfg = scenario.sim_config()?;
        cfg.evader = EvaderPolicy::BoundaryProbe { target };
        let res = run(&cfg)?;
        let worst_phi = res.trajectory.records.iter().map(|r| r.phi0_evader).fold(f64::INFINITY, f64::min);
        println!(
            "probe {target:<14} {:?} bound={:.3} min phi0(x_e)={worst_phi:.2e}",
            res.outcome, res.capture_bound
        );
        for m in &res.monitors {
            println!("    {} {} worst={:.2e} tol={:.2e}", if m.pass { "PASS" } else { "FAIL" }, m.name, m.worst, m.tolerance);
        }
    }
    Ok(())
}
