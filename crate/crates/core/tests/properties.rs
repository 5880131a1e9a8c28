use std::f64::consts::TAU;

use dominance::boundary::boundary_arcs;
use dominance::curves::{OvalCurve, OvalKind};
use dominance::lab::{random_corner_config, two_blocks};
use dominance::region::{f_value, free_ray_intersection, DominanceRegion, FSet};
use dominance::strategy::gamma_free;
use dominance::{Point2, World};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pt() -> impl Strategy<Value = Point2> {
    (-8.0..8.0f64, -8.0..8.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

fn random_free_point(world: &World, rng: &mut impl Rng) -> Point2 {
    loop {
        let p = Point2::new(rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0));
        if world.contains_point(p) {
            return p;
        }
    }
}

#[test]
fn metric_axioms_on_sampled_triples() {
    let worlds = [World::free_plane(), World::corner(20f64.to_radians()).unwrap(), two_blocks()];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for world in &worlds {
        for _ in 0..10_000 {
            let [a, b, c] = [0; 3].map(|_| random_free_point(world, &mut rng));
            let ab = world.distance(a, b).unwrap();
            assert_eq!(ab, world.distance(b, a).unwrap(), "symmetry {a} {b}");
            let slack = world.distance(a, c).unwrap() + world.distance(c, b).unwrap() - ab;
            assert!(slack >= -1e-9, "triangle {a} {b} {c}: {slack}");
            assert!(ab >= a.dist(b) - 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn free_target_is_isometry_equivariant(
        x_p in pt(), x_e in pt(), alpha in 1.1..3.0f64, heading in 0.0..TAU,
        rot in 0.0..TAU, shift in pt(), l in prop::sample::select(vec![0.0, 0.1]),
    ) {
        prop_assume!(x_p.dist(x_e) > l + 0.05);
        let u = Point2::unit(heading);
        let g = |p: Point2| p.rotate(rot) + shift;
        let xc = free_ray_intersection(x_p, x_e, alpha, l, u).unwrap();
        let moved = free_ray_intersection(g(x_p), g(x_e), alpha, l, u.rotate(rot)).unwrap();
        prop_assert!(moved.dist(g(xc)) <= 1e-9 * (1.0 + xc.norm()), "{moved} vs {}", g(xc));
        // mirror image across the x-axis
        let mirrored = free_ray_intersection(x_p.conj(), x_e.conj(), alpha, l, u.conj()).unwrap();
        prop_assert!(mirrored.dist(xc.conj()) <= 1e-9 * (1.0 + xc.norm()));
    }

    #[test]
    fn delta_star_heads_for_the_boundary(
        x_p in pt(), x_e in pt(), alpha in 1.1..3.0f64, heading in 0.0..TAU,
    ) {
        prop_assume!(x_p.dist(x_e) > 0.05);
        let u = Point2::unit(heading);
        let dir = gamma_free(x_p, x_e, u, alpha, 0.0).unwrap().direction;
        prop_assert!((dir.norm() - 1.0).abs() <= 1e-12);
        let region = DominanceRegion::new(World::free_plane(), x_p, x_e, alpha, 0.0).unwrap();
        let xc = region.ray_boundary_intersection(u).unwrap();
        let phi = region.phi(xc).unwrap();
        prop_assert!(phi.abs() <= 1e-10 * (1.0 + xc.norm()), "phi(x_c) = {}", phi);
        let along = (xc - x_p).normalized().unwrap();
        prop_assert!(along.dist(dir) <= 1e-12);
    }

    #[test]
    fn slide_never_enters_the_wedge(
        r in 0.0..4.0f64, side in prop::bool::ANY, heading in 0.0..TAU, dt in 1e-4..0.1f64,
    ) {
        let theta0 = 15f64.to_radians();
        let world = World::corner(theta0).unwrap();
        let edge = Point2::unit(if side { theta0 } else { -theta0 });
        let from = edge * r;
        let disp = Point2::unit(heading) * dt;
        let (to, _) = world.slide(from, disp);
        prop_assert!(world.contains_point(to));
        prop_assert!(to.dist(from) <= dt * (1.0 + 1e-12));
    }
}

#[test]
fn slide_projects_onto_the_edge() {
    let theta0 = 15f64.to_radians();
    let world = World::corner(theta0).unwrap();
    let edge = Point2::unit(theta0);
    let from = edge * 2.0;
    // straight into the wedge: the inward normal of the upper edge
    let disp = Point2::new(theta0.sin(), -theta0.cos()) * 0.01 + edge * 0.005;
    let (to, touched) = world.slide(from, disp);
    assert!(touched);
    assert!(edge.cross(to).abs() < 1e-9, "{to} left the edge");
    assert!(((to - from).dot(edge) - 0.005).abs() < 1e-9);
}

#[test]
fn corner_ray_intersection_is_on_f_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let (_, x_p, x_e, alpha) = random_corner_config(&mut rng);
        let u = Point2::unit(rng.random_range(0.0..TAU));
        let (xc, _) = FSet::new(x_p, x_e, alpha).unwrap().ray_intersection(u).unwrap();
        let f = f_value(x_p, x_e, alpha, xc).unwrap();
        assert!(f.abs() <= 1e-10 * (1.0 + xc.norm()), "f = {f} at {xc}");
    }
}

#[test]
fn f_matches_phi_where_evader_sees_the_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 10_000 {
        let (world, x_p, x_e, alpha) = random_corner_config(&mut rng);
        let region = DominanceRegion::new(world.clone(), x_p, x_e, alpha, 0.0).unwrap();
        let fset = FSet::new(x_p, x_e, alpha).unwrap();
        for _ in 0..100 {
            let x = random_free_point(&world, &mut rng);
            if !fset.in_sector(x) || !world.visible(x_e, x).unwrap() {
                continue;
            }
            let (f, phi) = (fset.f(x).unwrap(), region.phi(x).unwrap());
            assert!((f - phi).abs() <= 1e-12 * (1.0 + phi.abs()), "{x}: f={f} phi={phi}");
            checked += 1;
        }
    }
}

#[test]
fn corner_boundary_lies_on_f_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let (world, x_p, x_e, alpha) = random_corner_config(&mut rng);
        let region = DominanceRegion::new(world, x_p, x_e, alpha, 0.0).unwrap();
        for arc in boundary_arcs(&region, 256).unwrap().arcs {
            for p in arc.points {
                let f = f_value(x_p, x_e, alpha, p).unwrap();
                assert!(f.abs() <= 1e-8, "f = {f} at {p}");
            }
        }
    }
}

#[test]
fn contour_vertices_are_on_phi_zero() {
    let region = DominanceRegion::new(two_blocks(), Point2::new(3.5, 3.0), Point2::new(0.0, 0.0), 1.8, 0.0).unwrap();
    let b = boundary_arcs(&region, 256).unwrap();
    assert_eq!(b.summary(), ["untyped"]);
    let field = region.field();
    let pts = b.polyline();
    assert!(pts.len() > 100);
    for p in pts {
        assert!(field.phi(p).abs() <= 1e-8, "{p}");
    }
}

#[test]
fn first_type_ovals_are_convex() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut chords = 0;
    while chords < 1000 {
        let alpha = rng.random_range(1.1..3.0);
        let pq = rng.random_range(0.5..5.0);
        let q = Point2::unit(rng.random_range(0.0..TAU)) * pq;
        let offset = rng.random_range(0.05..0.95) * pq;
        let oval = OvalCurve::new(Point2::ORIGIN, q, alpha, offset).unwrap();
        assert_eq!(oval.kind, OvalKind::FirstType);
        let a = oval.point_at(rng.random_range(0.0..TAU));
        let b = oval.point_at(rng.random_range(0.0..TAU));
        if a.dist(b) < 1e-3 {
            continue;
        }
        // inside means |x - P| - alpha |x - Q| > offset
        assert!(oval.residual(a.lerp(b, 0.5)) > 0.0, "chord {a} {b}");
        chords += 1;
    }
}

#[test]
fn example5_vertex_is_inside() {
    let region = dominance::lab::example5();
    let phi = region.phi(Point2::ORIGIN).unwrap();
    assert!((phi - (41f64.sqrt() - 1.5 * 5f64.sqrt())).abs() < 1e-12);
    // both players see the vertex, so phi there is plain Euclidean
    assert!((phi - (Point2::new(4.0, 5.0).norm() - 1.5 * Point2::new(2.0, -1.0).norm())).abs() < 1e-15);
}
