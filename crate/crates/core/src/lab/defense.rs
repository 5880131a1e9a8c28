//! Target-defense decision from the dominance region.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::region::DominanceRegion;
use crate::roots::golden_max;
use crate::world::{Polygon, World, WorldKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum TargetRegion {
    /// `{x : normal . x >= offset}`.
    HalfPlane { normal: Point2, offset: f64 },
    Disk { center: Point2, radius: f64 },
    Polygon { vertices: Polygon },
    /// Points the pursuer reaches first: the complement of the closed
    /// initial dominance region.
    PursuerDominated,
}

impl TargetRegion {
    fn contains(&self, x: Point2, region: &DominanceRegion) -> bool {
        match self {
            TargetRegion::HalfPlane { normal, offset } => normal.dot(x) >= *offset,
            TargetRegion::Disk { center, radius } => x.dist(*center) <= *radius,
            TargetRegion::Polygon { vertices } => {
                vertices.strictly_contains(x) || vertices.boundary_distance(x) <= 1e-12
            }
            TargetRegion::PursuerDominated => region.phi(x).map(|v| v < 0.0).unwrap_or(false),
        }
    }

    fn bounds(&self) -> Option<(Point2, Point2)> {
        match self {
            TargetRegion::Disk { center, radius } => {
                let r = Point2::new(*radius, *radius);
                Some((*center - r, *center + r))
            }
            TargetRegion::Polygon { vertices } => {
                let v = vertices.vertices();
                let lo = v.iter().fold(Point2::new(f64::INFINITY, f64::INFINITY), |a, p| Point2::new(a.x.min(p.x), a.y.min(p.y)));
                let hi = v.iter().fold(Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| Point2::new(a.x.max(p.x), a.y.max(p.y)));
                Some((lo, hi))
            }
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            TargetRegion::HalfPlane { normal, .. } if normal.normalized().is_none() => {
                Err(Error::InvalidConfig("half-plane normal must be nonzero".into()))
            }
            TargetRegion::Disk { radius, .. } if !(*radius > 0.0) => Err(Error::InvalidConfig("disk radius must be positive".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefenseVerdict {
    /// The region misses `T` and a strategy keeping the evader inside its
    /// initial region is available in this world.
    GuaranteedDefense,
    /// No conclusion: the region criterion is only sufficient here, or no
    /// region-keeping strategy is available.
    NotCertified,
    /// Free plane and the region meets `T`: the evader can reach `T` first.
    GuaranteedBreachFreePlane,
}

const GRID: usize = 128;

/// Largest `phi` over `T` within the disk where `phi` can be positive, with
/// the maximizing point. `None` when that part of `T` is empty.
pub fn max_phi_over(region: &DominanceRegion, target: &TargetRegion) -> Option<(Point2, f64)> {
    let r = region.outer_bound();
    let c = region.x_e;
    let (mut lo, mut hi) = (c - Point2::new(r, r), c + Point2::new(r, r));
    if let Some((a, b)) = target.bounds() {
        lo = Point2::new(lo.x.max(a.x), lo.y.max(a.y));
        hi = Point2::new(hi.x.min(b.x), hi.y.min(b.y));
    }
    if lo.x > hi.x || lo.y > hi.y {
        return None;
    }
    let field = region.field();
    let world: &World = &region.world;
    let value = |x: Point2| -> Option<f64> {
        (world.contains_point(x) && target.contains(x, region)).then(|| field.phi(x))
    };
    let h = Point2::new((hi.x - lo.x) / GRID as f64, (hi.y - lo.y) / GRID as f64);
    let mut best: Option<(Point2, f64)> = None;
    for i in 0..=GRID {
        for j in 0..=GRID {
            let x = Point2::new(lo.x + h.x * i as f64, lo.y + h.y * j as f64);
            if let Some(v) = value(x) {
                if best.is_none_or(|b| v > b.1) {
                    best = Some((x, v));
                }
            }
        }
    }
    let (mut x, mut v) = best?;
    // coordinate-wise golden refinement within the best cell
    let score = |p: Point2| value(p).unwrap_or(f64::NEG_INFINITY);
    for _ in 0..8 {
        let (tx, _) = golden_max(|t| score(Point2::new(t, x.y)), x.x - h.x, x.x + h.x, 1e-12);
        let (ty, _) = golden_max(|t| score(Point2::new(tx, t)), x.y - h.y, x.y + h.y, 1e-12);
        let cand = Point2::new(tx, ty);
        let cv = score(cand);
        if cv > v {
            x = cand;
            v = cv;
        }
    }
    Some((x, v))
}

/// Whether the pursuer can guarantee the evader never reaches `T`, from
/// whether `T` meets the initial dominance region.
pub fn defense_decision(world: &World, x_p0: Point2, x_e0: Point2, alpha: f64, target: &TargetRegion) -> Result<DefenseVerdict> {
    target.validate()?;
    let region = DominanceRegion::new(world.clone(), x_p0, x_e0, alpha, 0.0)?;
    if target.contains(x_e0, &region) {
        return Err(Error::InvalidConfig(format!("evader starts inside the target at {x_e0}")));
    }
    let meets = max_phi_over(&region, target).is_some_and(|(_, v)| v > 0.0);
    Ok(match (world.kind(), meets) {
        (WorldKind::FreePlane, false) => DefenseVerdict::GuaranteedDefense,
        (WorldKind::FreePlane, true) => DefenseVerdict::GuaranteedBreachFreePlane,
        // the region-keeping strategy is only available with the vertex outside
        (WorldKind::CornerWedge { .. }, false) if x_p0.norm() < alpha * x_e0.norm() => DefenseVerdict::GuaranteedDefense,
        _ => DefenseVerdict::NotCertified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn far_disk_is_defended() {
        let w = World::free_plane();
        let t = TargetRegion::Disk { center: Point2::new(-20.0, 0.0), radius: 1.0 };
        let v = defense_decision(&w, Point2::ORIGIN, Point2::new(1.0, 0.0), 2.0, &t).unwrap();
        assert_eq!(v, DefenseVerdict::GuaranteedDefense);
    }

    #[test]
    fn near_half_plane_is_breached() {
        let w = World::free_plane();
        let t = TargetRegion::HalfPlane { normal: Point2::new(1.0, 0.0), offset: 1.5 };
        let v = defense_decision(&w, Point2::ORIGIN, Point2::new(1.0, 0.0), 2.0, &t).unwrap();
        assert_eq!(v, DefenseVerdict::GuaranteedBreachFreePlane);
    }

    #[test]
    fn evader_in_target_is_an_error() {
        let w = World::free_plane();
        let t = TargetRegion::Disk { center: Point2::new(1.0, 0.0), radius: 0.5 };
        assert!(defense_decision(&w, Point2::ORIGIN, Point2::new(1.0, 0.0), 2.0, &t).is_err());
    }
}
