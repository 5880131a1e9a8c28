//! Compares the sign of phi with a grid shortest-path race on five worlds.
//!
//! `cargo run --release --example reachability_oracle -- [cells]`

use dominance::lab::{check_reachability_oracle, oracle_worlds, GridSpec};
use dominance::Point2;

fn main() {
    let cells = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let spec = GridSpec { min: Point2::new(-8.0, -8.0), max: Point2::new(8.0, 8.0), cells };
    for (name, region) in oracle_worlds(7) {
        println!("{}", check_reachability_oracle(&region, spec, 0.995, &name).line());
    }
}
