//! Two rectangular blocks: shortest paths, the obstacle metric, and a chase
//! where the region boundary has no closed form.
//!
//! `cargo run --release --example polygon_world`

use dominance::boundary::boundary_arcs;
use dominance::engine::run;
use dominance::scenario::Scenario;
use dominance::Point2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = Scenario::load(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/two_blocks.toml"))?;
    let world = scenario.build_world()?;
    // from the evader's start to where it is heading, around the upper block
    let (a, b) = (scenario.players.x_e, Point2::new(3.0, 3.2));
    let path = world.shortest_path(a, b)?;
    println!("shortest path {a} -> {b}: length {:.4} (straight {:.4})", path.length, a.dist(b));
    for w in &path.waypoints {
        println!("  {w}");
    }
    println!("visible: {}", world.visible(a, b)?);

    let region = scenario.region()?;
    let boundary = boundary_arcs(&region, 256)?;
    let field = region.field();
    let pts = boundary.polyline();
    let resid = pts.iter().map(|p| field.phi(*p).abs()).fold(0.0, f64::max);
    println!("boundary: {} ({} points, max |phi| {resid:.1e})", boundary.summary().join(", "), pts.len());
    println!("phi at origin: {:.4}", region.phi(Point2::ORIGIN)?);

    let res = run(&scenario.sim_config()?)?;
    println!("{:?} after {} rows, {} wall contacts", res.outcome, res.trajectory.len(), res.wall_contacts);
    Ok(())
}
