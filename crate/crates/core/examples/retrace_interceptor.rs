//! Behind the 5 degree wedge the corner strategy does not apply. The
//! retrace pursuer commits to the point where the evader leaves its region,
//! waits there, then chases along the evader's own track.
//!
//! `cargo run --release --example retrace_interceptor`

use dominance::engine::run;
use dominance::scenario::Scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = Scenario::load(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/example5.toml"))?;
    let res = run(&scenario.sim_config()?)?;
    let recs = &res.trajectory.records;
    let stride = (recs.len() / 12).max(1);
    println!("{:>7} {:>22} {:>22} {:>8}", "t", "x_p", "x_e", "sep");
    for r in recs.iter().step_by(stride).chain(recs.last()) {
        println!("{:7.3} {:>22} {:>22} {:8.4}", r.t, r.x_p.to_string(), r.x_e.to_string(), r.separation);
    }
    println!("{:?}", res.outcome);
    for m in &res.monitors {
        println!("{} {} worst={:.2e} tol={:.2e}", if m.pass { "PASS" } else { "FAIL" }, m.name, m.worst, m.tolerance);
    }
    Ok(())
}
