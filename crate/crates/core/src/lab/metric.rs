//! Metric, gradient and sector-angle checks.

use std::f64::consts::PI;

use rand::Rng;

use super::{random_unit, rng, CheckReport};
use crate::curves::OvalCurve;
use crate::error::Result;
use crate::geometry::{wrap_pi, Point2};
use crate::region::eta_m;
use crate::roots::golden_max;
use crate::world::World;

fn random_corner_point(rng: &mut impl Rng, theta0: f64, r: (f64, f64)) -> Point2 {
    Point2::from_polar(rng.random_range(r.0..r.1), rng.random_range(theta0..2.0 * PI - theta0))
}

fn random_corner_world(rng: &mut impl Rng) -> World {
    World::corner(rng.random_range(1f64..80.0).to_radians()).expect("valid wedge")
}

/// Closed-form corner `d_L` against the visibility-graph path length.
pub fn check_corner_metric_agreement(n: usize, seed: u64) -> CheckReport {
    let mut rng = rng(seed);
    let mut rep = CheckReport::new("corner_metric_agreement", 1e-12);
    for _ in 0..n {
        let w = random_corner_world(&mut rng);
        let th = w.corner_angle().unwrap();
        let a = random_corner_point(&mut rng, th, (0.01, 10.0));
        let b = random_corner_point(&mut rng, th, (0.01, 10.0));
        let closed = w.distance(a, b).unwrap();
        let graph = w.visibility_graph_path(a, b).unwrap().length;
        // relative to the scale of the lengths involved
        let err = (closed - graph).abs() / closed.max(1.0);
        rep.observe(-err, || format!("theta0={th} a={a} b={b} closed={closed} graph={graph}"));
    }
    rep.finish()
}

fn sample_world(rng: &mut impl Rng, k: usize) -> World {
    match k % 3 {
        0 => World::free_plane(),
        1 => random_corner_world(rng),
        _ => super::oracle::two_blocks(),
    }
}

fn sample_pair(rng: &mut impl Rng, w: &World) -> (Point2, Point2) {
    loop {
        let a = Point2::new(rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0));
        let b = Point2::new(rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0));
        if w.contains_point(a) && w.contains_point(b) && a.dist(b) > 0.1 && a.norm() > 0.05 && b.norm() > 0.05 {
            return (a, b);
        }
    }
}

/// `|d1 d_L| = |d2 d_L| = 1` wherever `d_L` is differentiable.
pub fn check_gradient_norms(n: usize, seed: u64) -> CheckReport {
    let mut rng = rng(seed);
    let mut rep = CheckReport::new("gradient_unit_norm", 1e-9);
    for k in 0..n {
        let w = sample_world(&mut rng, k);
        let (a, b) = sample_pair(&mut rng, &w);
        match w.metric_gradients(a, b) {
            Ok((g1, g2)) => {
                let e = (g1.norm() - 1.0).abs().max((g2.norm() - 1.0).abs());
                rep.observe(-e, || format!("{:?} a={a} b={b}", w.kind()));
            }
            Err(_) => rep.reject(),
        }
    }
    rep.finish()
}

/// Gradients against central differences of `d_L`, step `1e-6`.
pub fn check_gradient_fd(n: usize, seed: u64) -> CheckReport {
    let mut rng = rng(seed);
    let mut rep = CheckReport::new("gradient_finite_difference", 1e-5);
    let h = 1e-6;
    for k in 0..n {
        let w = sample_world(&mut rng, k);
        let (a, b) = sample_pair(&mut rng, &w);
        let Ok((g1, g2)) = w.metric_gradients(a, b) else {
            rep.reject();
            continue;
        };
        let d = |x: Point2, y: Point2| w.distance(x, y);
        let fd = |f: &dyn Fn(Point2) -> Result<f64>, x: Point2| -> Result<Point2> {
            let ex = Point2::new(h, 0.0);
            let ey = Point2::new(0.0, h);
            Ok(Point2::new((f(x + ex)? - f(x - ex)?) / (2.0 * h), (f(x + ey)? - f(x - ey)?) / (2.0 * h)))
        };
        let n1 = fd(&|x| d(x, b), a);
        let n2 = fd(&|y| d(a, y), b);
        match (n1, n2) {
            (Ok(n1), Ok(n2)) => {
                let e = (n1 - g1).norm().max((n2 - g2).norm());
                // a stencil straddling a kink of d_L is not a smooth sample
                if e > 1e-2 {
                    rep.reject();
                    continue;
                }
                rep.observe(-e, || format!("{:?} a={a} b={b} g1={g1} fd1={n1} g2={g2} fd2={n2}", w.kind()));
            }
            _ => rep.reject(),
        }
    }
    rep.finish()
}

/// Closed-form `eta_m` against the largest angular deviation, seen from the
/// vertex, of the oval `|x| + |x_p| = alpha |x - x_e|` from `x_e`'s
/// direction, found by maximizing along the curve.
pub fn check_eta_m_tangents(n: usize, seed: u64) -> CheckReport {
    let mut rng = rng(seed);
    let mut rep = CheckReport::new("eta_m_tangent", 1e-8);
    let mut done = 0;
    while done < n {
        let alpha = rng.random_range(1.1..3.0);
        let x_e = random_unit(&mut rng) * rng.random_range(0.5..5.0);
        let x_p = random_unit(&mut rng) * rng.random_range(0.0..alpha * x_e.norm() * 0.99);
        let Ok(oval) = OvalCurve::new(Point2::ORIGIN, x_e, alpha, -x_p.norm()) else {
            continue;
        };
        done += 1;
        let closed = eta_m(x_p, x_e, alpha).unwrap();
        let te = x_e.angle();
        let dev = |t: f64| wrap_pi(oval.point_at(t).angle() - te);
        // coarse scan, then golden refinement on each side
        let m = 720;
        let mut best = [(0.0f64, f64::NEG_INFINITY); 2];
        for k in 0..m {
            let t = 2.0 * PI * k as f64 / m as f64;
            let v = dev(t);
            for (s, b) in [1.0, -1.0].iter().zip(best.iter_mut()) {
                if s * v > b.1 {
                    *b = (t, s * v);
                }
            }
        }
        let step = 2.0 * PI / m as f64;
        let mut err: f64 = 0.0;
        for (s, b) in [1.0, -1.0].iter().zip(best.iter()) {
            let (_, v) = golden_max(|t| s * dev(t), b.0 - step, b.0 + step, 1e-13);
            err = err.max((v - closed).abs());
        }
        rep.observe(-err, || format!("x_p={x_p} x_e={x_e} alpha={alpha} eta_m={closed}"));
    }
    rep.finish()
}
