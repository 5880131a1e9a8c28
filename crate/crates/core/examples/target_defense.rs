//! Target defense: can the pursuer stop the evader reaching a target set?
//! The answer comes from where the target sits relative to the evader's
//! region.
//!
//! `cargo run --release --example target_defense`

use dominance::lab::{defense_decision, example5, max_phi_over, TargetRegion};
use dominance::region::DominanceRegion;
use dominance::world::Polygon;
use dominance::{Point2, World};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // |x_p| < alpha |x_e|, so the wedge vertex lies outside the evader's region
    let (x_p, x_e, alpha) = (Point2::new(-1.0, 2.0), Point2::new(1.0, -2.0), 2.0);
    let targets = [
        ("disk far right", TargetRegion::Disk { center: Point2::new(8.0, 3.0), radius: 1.0 }),
        ("disk near evader", TargetRegion::Disk { center: Point2::new(1.5, -3.0), radius: 0.5 }),
        ("half-plane x <= -3", TargetRegion::HalfPlane { normal: Point2::new(-1.0, 0.0), offset: 3.0 }),
        (
            "square behind pursuer",
            TargetRegion::Polygon {
                vertices: Polygon::new(vec![
                    Point2::new(-3.0, 2.0),
                    Point2::new(-1.5, 2.0),
                    Point2::new(-1.5, 4.0),
                    Point2::new(-3.0, 4.0),
                ])?,
            },
        ),
    ];
    let worlds = [("open plane", World::free_plane()), ("20 deg wedge", World::corner(20f64.to_radians())?)];
    for (wname, world) in &worlds {
        println!("{wname}:");
        let region = DominanceRegion::new(world.clone(), x_p, x_e, alpha, 0.0)?;
        for (tname, target) in &targets {
            let verdict = defense_decision(world, x_p, x_e, alpha, target)?;
            let best = max_phi_over(&region, target).map(|(p, v)| format!("max phi {v:.3} at {p}"));
            println!("  {tname:<22} {verdict:?} {}", best.unwrap_or_else(|| "outside reach".into()));
        }
    }
    let ex5 = example5();
    let v = defense_decision(&ex5.world, ex5.x_p, ex5.x_e, ex5.alpha, &TargetRegion::PursuerDominated)?;
    println!("5 deg wedge, vertex inside the region: {v:?}");
    Ok(())
}
