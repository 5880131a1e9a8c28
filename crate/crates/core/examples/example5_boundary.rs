//! Boundary of the evader's region behind a 5 degree wedge, split into
//! typed arcs, with the junctions and the value of phi at the vertex.
//!
//! `cargo run --example example5_boundary -- [out.json]`

use dominance::boundary::boundary_arcs;
use dominance::export::{to_json_pretty, BoundaryRecord};
use dominance::lab::example5;
use dominance::Point2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let region = example5();
    let boundary = boundary_arcs(&region, 512)?;
    println!("arcs: {}", boundary.summary().join(", "));
    for (i, arc) in boundary.arcs.iter().enumerate() {
        let [a, b] = arc.endpoints;
        println!("  {i} {:<10} {a} -> {b} ({} samples)", arc.curve.tag(), arc.points.len());
    }
    for j in boundary.junctions() {
        println!("junction {j}");
    }
    // the vertex is inside the region, so the corner strategy does not apply
    println!("phi(vertex) = {:.12}", region.phi(Point2::ORIGIN)?);
    println!("sqrt(41) - 1.5 sqrt(5) = {:.12}", 41f64.sqrt() - 1.5 * 5f64.sqrt());

    let record = BoundaryRecord::new(&region, &boundary);
    println!("max |phi| on samples = {:.2e}", record.max_residual());
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, to_json_pretty(&record)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
