//! Checks of the angle, cosine, increment and necessary-condition
//! inequalities, the counter-example, and the boundary-evolution identity.

use rand::Rng;

use super::{boundary_point_on_ray, random_unit, rng, CheckReport};
use crate::boundary::{boundary_arcs, ArcCurve};
use crate::engine::{flags, Trajectory};
use crate::error::{Error, Result};
use crate::evader::{EvaderDriver, EvaderPolicy};
use crate::geometry::{angle_between, signed_angle, wrap_pi, Point2};
use crate::region::DominanceRegion;
use crate::strategy::gamma_star_corner;
use crate::world::World;

fn cos_at(apex: Point2, a: Point2, b: Point2) -> f64 {
    let (u, v) = (a - apex, b - apex);
    u.dot(v) / (u.norm() * v.norm())
}

/// Free-plane boundary point at angle `chi` from `x_p - x_e`, seen from `x_e`.
fn point_at_chi(x_p: Point2, x_e: Point2, alpha: f64, l: f64, chi: f64) -> Result<Point2> {
    let base = (x_p - x_e).normalized().ok_or(Error::CoincidentFoci(x_p))?;
    crate::region::free_ray_intersection(x_p, x_e, alpha, l, base.rotate(chi))
}

/// Angle inequality between pursuer- and evader-centered views of pairs of
/// free-plane boundary points, plus the derivative bound `|dpsi/dchi| <= 1`.
/// Returns `(inequality, derivative)` reports.
pub fn check_oval_angle_inequality(
    x_p: Point2,
    x_e: Point2,
    alpha: f64,
    l: f64,
    n: usize,
    seed: u64,
) -> Result<(CheckReport, CheckReport)> {
    DominanceRegion::new(World::free_plane(), x_p, x_e, alpha, l)?;
    let mut rng = rng(seed);
    let mut ineq = CheckReport::new("oval_angle_inequality", 1e-9);
    let mut deriv = CheckReport::new("oval_angle_derivative", 1e-6);
    let base = x_p - x_e;
    let psi = |x: Point2| signed_angle(base, x - x_p);
    let h = 1e-5;
    for _ in 0..n {
        let c1: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let c2: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let x1 = point_at_chi(x_p, x_e, alpha, l, c1)?;
        let x2 = point_at_chi(x_p, x_e, alpha, l, c2)?;
        let m = cos_at(x_p, x1, x2) - cos_at(x_e, x1, x2);
        ineq.observe(m, || format!("x_p={x_p} x_e={x_e} alpha={alpha} l={l} x1={x1} x2={x2}"));

        let a = point_at_chi(x_p, x_e, alpha, l, c1 - h)?;
        let b = point_at_chi(x_p, x_e, alpha, l, c1 + h)?;
        let d = wrap_pi(psi(b) - psi(a)) / (2.0 * h);
        deriv.observe(1.0 - d.abs(), || format!("x_p={x_p} x_e={x_e} alpha={alpha} l={l} chi={c1} dpsi/dchi={d}"));
    }
    Ok((ineq.finish(), deriv.finish()))
}

fn corner_precondition(world: &World, x_p: Point2, x_e: Point2, alpha: f64) -> Result<DominanceRegion> {
    if world.corner_angle().is_none() {
        return Err(Error::InvalidConfig("check needs the corner world".into()));
    }
    if !(x_p.norm() < alpha * x_e.norm()) {
        return Err(Error::Domain(format!("needs |x_p| < alpha |x_e| (got {} vs {})", x_p.norm(), alpha * x_e.norm())));
    }
    DominanceRegion::new(world.clone(), x_p, x_e, alpha, 0.0)
}

/// `d2 d_L(x, x_e) . u_e - d2 d_L(x, x_p) . gamma*(x_p, x_e, u_e) >= 0` for
/// boundary points `x` and unit evader inputs.
pub fn check_gamma_star_cosine(world: &World, x_p: Point2, x_e: Point2, alpha: f64, n: usize, seed: u64) -> Result<CheckReport> {
    let region = corner_precondition(world, x_p, x_e, alpha)?;
    let mut rng = rng(seed);
    let mut rep = CheckReport::new("gamma_star_cosine", 1e-9);
    for _ in 0..n {
        let Some(x) = boundary_point_on_ray(&region, random_unit(&mut rng)) else {
            rep.reject();
            continue;
        };
        let u_e = random_unit(&mut rng);
        match gamma_star_value(world, x_p, x_e, alpha, x, u_e) {
            Ok(v) => rep.observe(v, || format!("x_p={x_p} x_e={x_e} alpha={alpha} x={x} u_e={u_e}")),
            Err(_) => rep.reject(),
        }
    }
    Ok(rep.finish())
}

/// The expression checked by [`check_gamma_star_cosine`] at one sample.
pub fn gamma_star_value(world: &World, x_p: Point2, x_e: Point2, alpha: f64, x: Point2, u_e: Point2) -> Result<f64> {
    let (_, ge) = world.metric_gradients(x, x_e)?;
    let (_, gp) = world.metric_gradients(x, x_p)?;
    let g = gamma_star_corner(x_p, x_e, u_e, alpha)?;
    Ok(ge.dot(u_e) - gp.dot(g.direction))
}

/// `d1 d_L(x_p, x_e) . d2 d_L(x, x_p) > 0` on boundary points, counted by
/// player visibility and by whether the pursuer sees `x` directly.
pub fn check_increment_positive(world: &World, x_p: Point2, x_e: Point2, alpha: f64, n: usize, seed: u64) -> Result<CheckReport> {
    let region = corner_precondition(world, x_p, x_e, alpha)?;
    let mut rng = rng(seed);
    // strict: margin is the product less a floor
    let mut rep = CheckReport::new("increment_positive", 0.0);
    let (g1, _) = world.metric_gradients(x_p, x_e)?;
    let mutual = world.visible(x_p, x_e)?;
    for _ in 0..n {
        let Some(x) = boundary_point_on_ray(&region, random_unit(&mut rng)) else {
            rep.reject();
            continue;
        };
        let Ok((_, g2)) = world.metric_gradients(x, x_p) else {
            rep.reject();
            continue;
        };
        let direct = world.shortest_path(x, x_p)?.waypoints.len() == 2;
        let case = match (mutual, direct) {
            (true, true) => "case1",
            (true, false) => "case2",
            (false, true) => "case3",
            (false, false) => "case4",
        };
        rep.count(case);
        let v = g1.dot(g2);
        rep.observe(v - 1e-9, || format!("{case} x_p={x_p} x_e={x_e} alpha={alpha} x={x} product={v}"));
    }
    Ok(rep.finish())
}

/// `d2 d_L(c1, x_p) . d2 d_L(c2, x_p) - d2 d_L(c1, x_e) . d2 d_L(c2, x_e)`.
pub fn necessary_condition_value(world: &World, x_p: Point2, x_e: Point2, c1: Point2, c2: Point2) -> Result<f64> {
    let (_, p1) = world.metric_gradients(c1, x_p)?;
    let (_, p2) = world.metric_gradients(c2, x_p)?;
    let (_, e1) = world.metric_gradients(c1, x_e)?;
    let (_, e2) = world.metric_gradients(c2, x_e)?;
    Ok(p1.dot(p2) - e1.dot(e2))
}

/// Minimum of [`necessary_condition_value`] over boundary pairs. A negative
/// minimum certifies that no strategy keeps the evader in its initial
/// region. Non-differentiable pairs are rejected.
pub fn check_necessary_condition(
    world: &World,
    x_p: Point2,
    x_e: Point2,
    alpha: f64,
    pairs: &[(Point2, Point2)],
) -> Result<CheckReport> {
    let region = DominanceRegion::new(world.clone(), x_p, x_e, alpha, 0.0)?;
    let mut rep = CheckReport::new("necessary_condition", 1e-9);
    for &(c1, c2) in pairs {
        let on = |c: Point2| region.phi(c).map(|v| v.abs() <= 1e-7).unwrap_or(false);
        if !on(c1) || !on(c2) {
            rep.reject();
            continue;
        }
        match necessary_condition_value(world, x_p, x_e, c1, c2) {
            Ok(v) => rep.observe(v, || format!("x_p={x_p} x_e={x_e} alpha={alpha} c1={c1} c2={c2}")),
            Err(_) => rep.reject(),
        }
    }
    Ok(rep.finish())
}

fn first_oval_arc(region: &DominanceRegion) -> Result<(ArcCurve, [f64; 2])> {
    let b = boundary_arcs(region, 2048)?;
    if b.summary() != ["oval", "apollonius", "oval"] {
        return Err(Error::DegenerateRegion(format!("expected oval/apollonius/oval arcs, got {:?}", b.summary())));
    }
    Ok((b.arcs[0].curve.clone(), b.arcs[0].param))
}

/// `n` random point pairs on the first oval arc of a three-arc corner
/// boundary.
pub fn example5_arc_ab_pairs(region: &DominanceRegion, n: usize, seed: u64) -> Result<Vec<(Point2, Point2)>> {
    let (curve, [t0, t1]) = first_oval_arc(region)?;
    let mut rng = rng(seed);
    let (lo, hi) = (t0.min(t1), t0.max(t1));
    Ok((0..n)
        .map(|_| {
            let a = curve.point_at(rng.random_range(lo..=hi));
            let b = curve.point_at(rng.random_range(lo..=hi));
            (a, b)
        })
        .collect())
}

/// Two probes toward points of the first oval arc, `separation` radians of
/// arc parameter apart, share their first-leg evader input while the
/// pursuer headings needed to intercept them differ by more than a degree.
pub fn check_counterexample_divergence(region: &DominanceRegion, separation: f64, dt: f64) -> Result<CheckReport> {
    let (curve, [t0, t1]) = first_oval_arc(region)?;
    let mid = 0.5 * (t0 + t1);
    let half = 0.5 * separation.min((t1 - t0).abs());
    let c1 = curve.point_at(mid - half);
    let c2 = curve.point_at(mid + half);
    let mut rep = CheckReport::new("counterexample_divergence", 0.0);
    let world = &region.world;
    let first = |c: Point2| -> Result<Point2> {
        let mut d = EvaderDriver::new(EvaderPolicy::BoundaryProbe { target: c }, world, region.x_e)?;
        Ok(d.input(region.x_e, 0.0, dt))
    };
    let (u1, u2) = (first(c1)?, first(c2)?);
    let toward_vertex = -region.x_e / region.x_e.norm();
    let legs = u1.dist(u2).max(u1.dist(toward_vertex));
    let direct = world.visible(region.x_p, c1)? && world.visible(region.x_p, c2)?;
    let heading_gap = angle_between(c1 - region.x_p, c2 - region.x_p).to_degrees();
    let margin = if legs <= 1e-12 && direct { heading_gap - 1.0 } else { f64::NEG_INFINITY };
    rep.observe(margin, || {
        format!("c1={c1} c2={c2} first_leg_gap={legs:e} pursuer_heading_gap_deg={heading_gap}")
    });
    Ok(rep.finish())
}

/// Finite difference of `phi(x, t)` along a recorded trajectory against
/// `d2 d_L(x, x_p) . alpha u_p - alpha d2 d_L(x, x_e) . u_e`, at points on
/// the current boundary. Ticks with wall contact are skipped.
pub fn check_boundary_evolution_identity(
    world: &World,
    alpha: f64,
    dt: f64,
    trajectory: &Trajectory,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    let recs = &trajectory.records;
    let mut rep = CheckReport::new("boundary_evolution_identity", 1e-3);
    if recs.len() < 2 {
        return Ok(rep.finish());
    }
    let mut rng = rng(seed);
    let slid = flags::PURSUER_SLID | flags::EVADER_SLID;
    for _ in 0..samples {
        let k = rng.random_range(0..recs.len() - 1);
        let (a, b) = (&recs[k], &recs[k + 1]);
        if (b.t - a.t - dt).abs() > 1e-9 * dt || a.flags & slid != 0 {
            rep.reject();
            continue;
        }
        let Ok(region) = DominanceRegion::new(world.clone(), a.x_p, a.x_e, alpha, 0.0) else {
            rep.reject();
            continue;
        };
        let Some(x) = boundary_point_on_ray(&region, random_unit(&mut rng)) else {
            rep.reject();
            continue;
        };
        let phi = |xp: Point2, xe: Point2| -> Result<f64> { Ok(world.distance(x, xp)? - alpha * world.distance(x, xe)?) };
        let grads = world.metric_gradients(x, a.x_p).and_then(|(_, gp)| Ok((gp, world.metric_gradients(x, a.x_e)?.1)));
        let (Ok(p0), Ok(p1), Ok((gp, ge))) = (phi(a.x_p, a.x_e), phi(b.x_p, b.x_e), grads) else {
            rep.reject();
            continue;
        };
        let fd = (p1 - p0) / dt;
        let rhs = gp.dot(a.u_p * alpha) - alpha * ge.dot(a.u_e);
        rep.observe(-(fd - rhs).abs(), || format!("t={} x={x} fd={fd} rhs={rhs}", a.t));
    }
    Ok(rep.finish())
}
