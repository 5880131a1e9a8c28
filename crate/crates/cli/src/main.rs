//! `dominance`: boundary geometry, simulation, verification suites and the
//! session service from one binary.
//!
//! Exit status: 0 on success, 1 when a check or a strict monitor fails,
//! 2 on unreadable or invalid input.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dominance::boundary::boundary_arcs;
use dominance::engine::{run, SimOutcome};
use dominance::export::{to_json_pretty, write_trajectory_csv, BoundaryRecord};
use dominance::lab::{run_suite, Suite};
use dominance::scenario::Scenario;
use dominance_service::{ServiceConfig, DEFAULT_BIND};

#[derive(Parser)]
#[command(name = "dominance", version, about = "Dominance regions for pursuit-evasion with obstacles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the typed boundary of the initial dominance region.
    Dominance {
        #[arg(long)]
        scenario: PathBuf,
        /// Boundary JSON output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Samples per arc.
        #[arg(long, default_value_t = 256, env = "DOMINANCE_SAMPLES")]
        samples: usize,
    },
    /// Run one episode and write its trajectory.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        /// Trajectory CSV output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the scenario time step.
        #[arg(long, env = "DOMINANCE_DT")]
        dt: Option<f64>,
        /// Exit nonzero when a monitor fires.
        #[arg(long, env = "DOMINANCE_STRICT")]
        strict: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all", env = "DOMINANCE_SUITE")]
        suite: String,
        #[arg(long, default_value_t = 7, env = "DOMINANCE_SEED")]
        seed: u64,
        /// Check-report JSON output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve live sessions over HTTP and WebSocket.
    Serve {
        #[arg(long, default_value = DEFAULT_BIND, env = "DOMINANCE_BIND")]
        bind: String,
        #[arg(long, default_value_t = dominance_service::DEFAULT_TICK_HZ, env = "DOMINANCE_TICK_HZ")]
        tick_hz: f64,
    },
}

/// An error with its exit status.
struct Failure(u8, String);

impl From<dominance::Error> for Failure {
    fn from(e: dominance::Error) -> Self {
        Failure(2, e.to_string())
    }
}

/// `println!` that stops quietly when stdout has gone away, as with `| head`.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        writeln!(std::io::stdout(), $($arg)*).map_err(|e| match e.kind() {
            std::io::ErrorKind::BrokenPipe => Failure(0, String::new()),
            _ => Failure(1, format!("stdout: {e}")),
        })?
    }};
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure(2, format!("cannot write {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure(2, format!("cannot write {}: {e}", path.display())))
}

fn dominance_cmd(scenario: &Path, out: Option<&Path>, samples: usize) -> Result<(), Failure> {
    let sc = Scenario::load(scenario)?;
    let region = sc.region()?;
    let boundary = boundary_arcs(&region, samples)?;
    let record = BoundaryRecord::new(&region, &boundary);
    say!("arcs: {}", record.summary.join(", "));
    for (i, j) in record.junctions.iter().enumerate() {
        say!("junction {i}: {j}");
    }
    say!("max |phi| on samples: {:.3e}", record.max_residual());
    if let Some(path) = out {
        write_text(path, &to_json_pretty(&record)?)?;
        say!("wrote {}", path.display());
    }
    Ok(())
}

fn simulate_cmd(scenario: &Path, out: Option<&Path>, dt: Option<f64>, strict: bool) -> Result<(), Failure> {
    let sc = Scenario::load(scenario)?;
    let mut cfg = sc.sim_config()?;
    if let Some(dt) = dt {
        cfg.dt = dt;
        cfg.validate()?;
    }
    let result = run(&cfg)?;
    match &result.outcome {
        SimOutcome::Captured { t_f } => say!("outcome: captured t_f={t_f:.6}"),
        SimOutcome::TimedOut { t } => say!("outcome: timed out t={t:.6}"),
        SimOutcome::MonitorViolation { which, t, magnitude } => {
            say!("outcome: halted by {which} at t={t:.6} magnitude={magnitude:.3e}")
        }
    }
    say!("bound: {:.6}", result.capture_bound);
    say!("rows: {}", result.trajectory.len());
    if result.wall_contacts > 0 {
        say!("wall contacts: {}", result.wall_contacts);
    }
    for m in &result.monitors {
        let verdict = if m.pass { "PASS" } else { "FAIL" };
        say!("monitor {verdict} {} worst={:.3e} tol={:.1e} t={:.4} n={}", m.name, m.worst, m.tolerance, m.t_worst, m.samples);
    }
    if let Some(path) = out {
        write_trajectory_csv(&result.trajectory, create(path)?)?;
        say!("wrote {}", path.display());
    }
    if strict && !result.monitors_pass() {
        return Err(Failure(1, "monitor violation".into()));
    }
    Ok(())
}

fn verify_cmd(suite: &str, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, seed)?;
    for line in report.lines() {
        say!("{line}");
    }
    let failed = report.reports.iter().filter(|r| !r.pass).count();
    say!("{} checks, {failed} failed", report.reports.len());
    if let Some(path) = out {
        write_text(path, &to_json_pretty(&report)?)?;
    }
    if failed > 0 {
        return Err(Failure(1, format!("{failed} checks failed")));
    }
    Ok(())
}

fn serve_cmd(bind: &str, tick_hz: f64) -> Result<(), Failure> {
    if !(tick_hz > 0.0 && tick_hz.is_finite()) {
        return Err(Failure(2, format!("tick rate must be positive, got {tick_hz}")));
    }
    let rt = tokio::runtime::Runtime::new().map_err(|e| Failure(1, e.to_string()))?;
    eprintln!("listening on {bind} at {tick_hz} ticks/s");
    rt.block_on(dominance_service::serve(bind, ServiceConfig { tick_hz }))
        .map_err(|e| Failure(1, format!("serve {bind}: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Dominance { scenario, out, samples } => dominance_cmd(scenario, out.as_deref(), *samples),
        Command::Simulate { scenario, out, dt, strict } => simulate_cmd(scenario, out.as_deref(), *dt, *strict),
        Command::Verify { suite, seed, out } => verify_cmd(suite, *seed, out.as_deref()),
        Command::Serve { bind, tick_hz } => serve_cmd(bind, *tick_hz),
    };
    match result {
        Ok(()) | Err(Failure(0, _)) => ExitCode::SUCCESS,
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
