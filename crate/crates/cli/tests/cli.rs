use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dominance"));
    for var in ["DOMINANCE_DT", "DOMINANCE_SEED", "DOMINANCE_SUITE", "DOMINANCE_BIND", "DOMINANCE_STRICT"] {
        c.env_remove(var);
    }
    c
}

fn scenario(name: &str) -> String {
    format!("{}/../core/scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dominance-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(c: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = c.output().unwrap();
    (status.code().unwrap_or(-1), String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

fn value(stdout: &str, key: &str) -> f64 {
    let at = stdout.find(key).unwrap_or_else(|| panic!("{key} missing in {stdout}")) + key.len();
    stdout[at..].split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn dominance_example5_lists_three_arcs() {
    let out = tmp("e5.json");
    let (code, stdout, _) = run(bin().args(["dominance", "--scenario", &scenario("example5"), "--out"]).arg(&out));
    assert_eq!(code, 0);
    assert!(stdout.contains("arcs: oval, apollonius, oval"), "{stdout}");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let kinds: Vec<&str> = json["arcs"].as_array().unwrap().iter().map(|a| a["type"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["oval", "apollonius", "oval"]);
}

#[test]
fn dominance_free_plane_is_one_apollonius_arc() {
    let (code, stdout, _) = run(bin().args(["dominance", "--scenario", &scenario("free_plane")]));
    assert_eq!(code, 0);
    assert!(stdout.contains("arcs: apollonius\n"), "{stdout}");
}

#[test]
fn missing_file_exits_2() {
    for sub in ["dominance", "simulate"] {
        let (code, _, stderr) = run(bin().args([sub, "--scenario", "/nonexistent/none.toml"]));
        assert_eq!(code, 2);
        assert!(stderr.contains("cannot read /nonexistent/none.toml"), "{stderr}");
    }
}

#[test]
fn invalid_scenario_exits_nonzero_with_message() {
    let bad = tmp("bad.toml");
    std::fs::write(&bad, std::fs::read_to_string(scenario("chase")).unwrap().replace("alpha = 2.0", "alpha = 1.0")).unwrap();
    let (code, _, stderr) = run(bin().args(["simulate", "--scenario"]).arg(&bad));
    assert_eq!(code, 2);
    assert!(stderr.contains("speed ratio must exceed 1"), "{stderr}");
}

#[test]
fn simulate_collinear_chase() {
    let out = tmp("chase.csv");
    let (code, stdout, _) = run(bin().args(["simulate", "--scenario", &scenario("chase"), "--strict", "--out"]).arg(&out));
    assert_eq!(code, 0, "{stdout}");
    let t_f = value(&stdout, "t_f=");
    // capture at separation 1e-3: t_f = (1 - 1e-3) / (2 - 1)
    assert!((t_f - 0.999).abs() < 1e-9, "{t_f}");
    assert_eq!(value(&stdout, "bound: "), 1.0);
    let rows = std::fs::read_to_string(&out).unwrap().lines().count() - 1;
    assert_eq!(rows, (t_f / 1e-3 - 1e-9).ceil() as usize + 1);
}

#[test]
fn dt_flag_and_env_override() {
    let (_, by_flag, _) = run(bin().args(["simulate", "--scenario", &scenario("chase"), "--dt", "0.01"]));
    let (_, by_env, _) = run(bin().args(["simulate", "--scenario", &scenario("chase")]).env("DOMINANCE_DT", "0.01"));
    assert_eq!(value(&by_flag, "rows: "), 101.0);
    assert_eq!(by_flag, by_env);
}

#[test]
fn fleeing_pursuer_fails_strict() {
    let (code, stdout, _) = run(bin().args(["simulate", "--scenario", &scenario("flee")]));
    assert_eq!(code, 0);
    assert!(stdout.contains("monitor FAIL closing_rate"), "{stdout}");
    let (code, _, stderr) = run(bin().args(["simulate", "--scenario", &scenario("flee"), "--strict"]));
    assert_eq!(code, 1);
    assert!(stderr.contains("monitor violation"));
}

#[test]
fn verify_free_plane_passes() {
    let out = tmp("fp.json");
    let (code, stdout, _) = run(bin().args(["verify", "--suite", "free-plane", "--seed", "7", "--out"]).arg(&out));
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.lines().filter(|l| l.starts_with("PASS")).count() >= 3);
    assert!(!stdout.contains("FAIL"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(json["reports"].as_array().unwrap().iter().all(|r| r["pass"] == true));
}

#[test]
fn verify_counterexample_reports_negative_minimum() {
    let (code, stdout, _) = run(bin().args(["verify", "--suite", "counterexample"]).env("DOMINANCE_SEED", "7"));
    assert_eq!(code, 0, "{stdout}");
    let line = stdout.lines().find(|l| l.contains("necessary_condition.example5")).unwrap();
    assert!(value(line, "margin=") < 0.0, "{line}");
    assert!(line.contains("expect=violation"));
}

#[test]
fn verify_is_deterministic() {
    let a = run(bin().args(["verify", "--suite", "all", "--seed", "11"]));
    let b = run(bin().args(["verify", "--suite", "all", "--seed", "11"]));
    assert_eq!(a.0, 0, "{}", a.1);
    assert_eq!(a, b);
}

#[test]
fn unknown_suite_is_an_error() {
    let (code, _, stderr) = run(bin().args(["verify", "--suite", "bogus"]));
    assert_eq!(code, 2);
    assert!(stderr.contains("bogus"), "{stderr}");
}

#[test]
fn serve_answers_http() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let addr = format!("127.0.0.1:{port}");
    let mut child = bin().args(["serve"]).env("DOMINANCE_BIND", &addr).stderr(Stdio::null()).spawn().unwrap();
    let deadline = Instant::now() + Duration::from_secs(10);
    let mut stream = loop {
        match TcpStream::connect(&addr) {
            Ok(s) => break s,
            Err(_) if Instant::now() < deadline => std::thread::sleep(Duration::from_millis(50)),
            Err(e) => panic!("server did not start: {e}"),
        }
    };
    write!(stream, "GET /sessions/none/state HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n").unwrap();
    let mut resp = String::new();
    stream.read_to_string(&mut resp).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(resp.starts_with("HTTP/1.1 404"), "{resp}");
    assert!(resp.contains("unknown session none"));
}

#[test]
fn serve_rejects_bad_tick_rate() {
    let (code, _, stderr) = run(bin().args(["serve", "--tick-hz", "0"]));
    assert_eq!(code, 2);
    assert!(stderr.contains("tick rate"));
}
