//! In-process live session: heading updates in, one JSON frame per tick out,
//! and a bit-exact replay from the recorded inputs.
//!
//! `cargo run --example live_session`
//! For the networked version run `dominance serve` and POST a scenario.

use dominance::scenario::Scenario;
use dominance::session::{replay, HeadingUpdate, Session};
use dominance::Point2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = Scenario::load(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/free_live.toml"))?;
    let mut session = Session::new("demo", scenario.sim_config()?)?;
    let mut k = 0;
    while let Some(frame) = session.tick() {
        if k % 10 == 0 {
            // a client steering in a slow circle, not normalized
            let a = 0.05 * k as f64;
            let heading = Point2::new(2.0 * a.cos(), 2.0 * a.sin());
            session.set_heading(&HeadingUpdate { session_id: "demo".into(), heading, client_ts: frame.t, cursor: None })?;
        }
        if k < 3 || frame.t_f.is_some() {
            let mut shown = frame.clone();
            shown.boundary = shown.boundary.map(|b| b.into_iter().take(2).collect());
            println!("{}", serde_json::to_string(&shown)?);
        }
        k += 1;
    }
    println!("{:?} after {k} frames", session.status());
    let (traj, _) = replay(session.config().clone(), session.inputs())?;
    println!("replay identical: {}", traj == *session.trajectory());
    Ok(())
}
