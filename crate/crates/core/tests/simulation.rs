use std::f64::consts::TAU;

use dominance::boundary::boundary_arcs;
use dominance::engine::{run, Episode, SimConfig, SimOutcome};
use dominance::evader::EvaderPolicy;
use dominance::lab::random_corner_config;
use dominance::monitor::nesting_margin;
use dominance::region::DominanceRegion;
use dominance::strategy::StrategyKind;
use dominance::{Point2, World};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn live(world: World, x_p: Point2, x_e: Point2, alpha: f64, pursuer: StrategyKind) -> SimConfig {
    let mut cfg = SimConfig::new(world, x_p, x_e, alpha, pursuer, EvaderPolicy::HumanLive);
    cfg.dt = 0.01;
    cfg.t_max = 30.0;
    cfg
}

/// Feeds `inputs` tick by tick and returns the pursuer positions seen.
fn pursuer_track(cfg: &SimConfig, inputs: &[Point2]) -> Vec<Point2> {
    let mut ep = Episode::new(cfg.clone()).unwrap();
    let mut out = vec![ep.state().x_p];
    for u in inputs {
        if ep.advance(*u).is_some() {
            break;
        }
        out.push(ep.state().x_p);
    }
    out
}

#[test]
fn pursuer_does_not_anticipate() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let theta0 = 20f64.to_radians();
    let cases = [
        (World::free_plane(), StrategyKind::FreeDeltaStar),
        (World::corner(theta0).unwrap(), StrategyKind::CornerGammaStar),
        (World::corner(theta0).unwrap(), StrategyKind::CornerGammaEps { epsilon: 0.05 }),
        (World::corner(theta0).unwrap(), StrategyKind::Retrace { target: None }),
    ];
    for (world, kind) in cases {
        let cfg = live(world, Point2::new(-1.0, 2.5), Point2::new(2.0, -2.0), 1.6, kind.clone());
        for _ in 0..10 {
            let split = rng.random_range(1..60);
            let shared: Vec<Point2> = (0..split).map(|_| Point2::unit(rng.random_range(0.0..TAU))).collect();
            let tail = |rng: &mut ChaCha8Rng| -> Vec<Point2> {
                (0..40).map(|_| Point2::unit(rng.random_range(0.0..TAU))).collect()
            };
            let a = pursuer_track(&cfg, &[shared.clone(), tail(&mut rng)].concat());
            let b = pursuer_track(&cfg, &[shared.clone(), tail(&mut rng)].concat());
            // positions through the start of the first differing tick agree bit for bit
            let n = split + 1;
            assert!(a.len() >= n && b.len() >= n, "{kind:?} ended early");
            assert_eq!(a[..n], b[..n], "{kind:?} split={split}");
        }
    }
}

#[test]
fn gamma_eps_regions_shrink() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut worst = f64::INFINITY;
    for _ in 0..8 {
        let (world, x_p, x_e, alpha) = random_corner_config(&mut rng);
        let evader = EvaderPolicy::Turning { heading0: rng.random_range(0.0..TAU), omega: rng.random_range(-1.0..1.0) };
        let mut cfg = SimConfig::new(world.clone(), x_p, x_e, alpha, StrategyKind::CornerGammaEps { epsilon: 0.05 }, evader);
        cfg.dt = 1e-3;
        let res = run(&cfg).unwrap();
        let recs = &res.trajectory.records;
        let picks: Vec<_> = (0..5).map(|i| &recs[i * (recs.len() - 1) / 8]).collect();
        for w in picks.windows(2) {
            let earlier = DominanceRegion::new(world.clone(), w[0].x_p, w[0].x_e, alpha, 0.0).unwrap();
            let later = DominanceRegion::new(world.clone(), w[1].x_p, w[1].x_e, alpha, 0.0).unwrap();
            let pts = boundary_arcs(&later, 256).unwrap().polyline();
            worst = worst.min(nesting_margin(&earlier, &pts));
        }
    }
    // one Euler step of slack per comparison
    assert!(worst >= -1e-2, "nesting margin {worst}");
}

#[test]
fn straight_runner_is_caught_in_time() {
    let x_p = Point2::new(-2.0, 1.0);
    let x_e = Point2::new(1.0, 0.5);
    for k in 0..12 {
        let heading = k as f64 * TAU / 12.0;
        let mut cfg = SimConfig::new(
            World::free_plane(),
            x_p,
            x_e,
            2.0,
            StrategyKind::FreeDeltaStar,
            EvaderPolicy::StraightLine { direction: Point2::unit(heading) },
        );
        cfg.dt = 1e-3;
        let res = run(&cfg).unwrap();
        let SimOutcome::Captured { t_f } = res.outcome else { panic!("{:?}", res.outcome) };
        assert!(t_f <= res.capture_bound * 1.01 + 2.0 * cfg.dt, "heading {heading}: {t_f} > {}", res.capture_bound);
        assert!(res.monitors_pass());
    }
}

#[test]
fn delayed_pursuer_still_captures() {
    let mut cfg = SimConfig::new(
        World::free_plane(),
        Point2::new(-2.0, 0.0),
        Point2::new(1.0, 0.0),
        2.0,
        StrategyKind::FreeDeltaStar,
        EvaderPolicy::Turning { heading0: 1.0, omega: 0.5 },
    );
    cfg.dt = 1e-3;
    cfg.input_delay_ticks = 5;
    let res = run(&cfg).unwrap();
    assert!(matches!(res.outcome, SimOutcome::Captured { .. }), "{:?}", res.outcome);
}
