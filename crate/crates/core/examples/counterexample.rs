//! With the wedge vertex inside the evader's region no strategy can keep
//! the evader there. The necessary condition on pairs of boundary points
//! fails on the upper oval arc, while it holds on open-plane regions.
//!
//! `cargo run --release --example counterexample`

use dominance::lab::{check_counterexample_divergence, check_necessary_condition, example5, example5_arc_ab_pairs};
use dominance::region::DominanceRegion;
use dominance::{Point2, World};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let region = example5();
    let pairs = example5_arc_ab_pairs(&region, 400, 7)?;
    let ex5 = check_necessary_condition(&region.world, region.x_p, region.x_e, region.alpha, &pairs)?;
    println!("wedge:      min over {} pairs = {:.4}  ({})", ex5.samples, ex5.worst_margin, ex5.witness);

    let free = DominanceRegion::new(World::free_plane(), region.x_p, region.x_e, region.alpha, 0.0)?;
    let ray = |a: f64| free.ray_boundary_intersection(Point2::unit(a));
    let pairs = (0..400)
        .map(|k| Ok((ray(k as f64 * 0.7)?, ray(k as f64 * 1.3 + 0.2)?)))
        .collect::<dominance::Result<Vec<_>>>()?;
    let open = check_necessary_condition(&free.world, free.x_p, free.x_e, free.alpha, &pairs)?;
    println!("open plane: min over {} pairs = {:.3e}", open.samples, open.worst_margin);

    // the same players in a wider wedge, run against the evader's best reply
    println!("{}", check_counterexample_divergence(&region, 10f64.to_radians(), 1e-3)?.line());
    Ok(())
}
