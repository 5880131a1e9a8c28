//! Runs a verification suite and prints one line per check.
//!
//! `cargo run --release --example theorem_suite -- corner 7`

use std::time::Instant;

use dominance::lab::{run_suite, Suite};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("all").parse()?;
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);
    let start = Instant::now();
    let report = run_suite(suite, seed)?;
    for line in report.lines() {
        println!("{line}");
    }
    println!(
        "suite {suite} seed {seed}: {} ({:.1}s)",
        if report.all_pass() { "all pass" } else { "FAILURES" },
        start.elapsed().as_secs_f64()
    );
    Ok(())
}
