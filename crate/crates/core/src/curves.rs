//! Apollonius circles and Cartesian ovals `|x - P| - alpha |x - Q| = a`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Locus `|x - focus_p| = alpha |x - focus_e|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApolloniusCircle {
    pub focus_p: Point2,
    pub focus_e: Point2,
    pub alpha: f64,
}

impl ApolloniusCircle {
    pub fn center(&self) -> Point2 {
        let a2 = self.alpha * self.alpha;
        (self.focus_e * a2 - self.focus_p) / (a2 - 1.0)
    }

    pub fn radius(&self) -> f64 {
        self.alpha * self.focus_p.dist(self.focus_e) / (self.alpha * self.alpha - 1.0)
    }

    /// Point at angle `t` about the center.
    pub fn point_at(&self, t: f64) -> Point2 {
        self.center() + Point2::unit(t) * self.radius()
    }

    /// `|x - focus_p| - alpha |x - focus_e|`.
    pub fn residual(&self, x: Point2) -> f64 {
        x.dist(self.focus_p) - self.alpha * x.dist(self.focus_e)
    }

    pub fn as_oval(&self) -> OvalCurve {
        OvalCurve {
            kind: OvalKind::FirstType,
            outer_focus: self.focus_p,
            inner_focus: self.focus_e,
            alpha: self.alpha,
            offset: 0.0,
        }
    }
}

/// The Apollonius circle of a pursuer at `x_p` and an evader at `x_e`.
pub fn apollonius_of(x_p: Point2, x_e: Point2, alpha: f64) -> Result<ApolloniusCircle> {
    if x_p == x_e {
        return Err(Error::CoincidentFoci(x_p));
    }
    if !(alpha > 1.0) {
        return Err(Error::Domain(format!("speed ratio must exceed 1, got {alpha}")));
    }
    Ok(ApolloniusCircle { focus_p: x_p, focus_e: x_e, alpha })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OvalKind {
    /// `a` in `[0, |PQ|)`: convex, encloses the inner focus only.
    FirstType,
    /// `a` in `(-alpha |PQ|, 0)`: non-convex, encloses the inner focus only.
    SecondType,
    /// `a <= -alpha |PQ|`: the curve encloses both foci.
    Enclosing,
}

/// Cartesian oval `|x - outer_focus| - alpha |x - inner_focus| = offset`.
///
/// Every such curve with `offset < |PQ|` meets each ray from the inner
/// focus exactly once, so it is parameterized by the ray angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OvalCurve {
    pub kind: OvalKind,
    pub outer_focus: Point2,
    pub inner_focus: Point2,
    pub alpha: f64,
    pub offset: f64,
}

impl OvalCurve {
    pub fn new(outer_focus: Point2, inner_focus: Point2, alpha: f64, offset: f64) -> Result<Self> {
        if !(alpha > 1.0) {
            return Err(Error::Domain(format!("speed ratio must exceed 1, got {alpha}")));
        }
        let pq = outer_focus.dist(inner_focus);
        if !(offset < pq) {
            return Err(Error::DegenerateRegion(format!("oval offset {offset} not below focal distance {pq}")));
        }
        let kind = if offset >= 0.0 {
            OvalKind::FirstType
        } else if offset > -alpha * pq {
            OvalKind::SecondType
        } else {
            OvalKind::Enclosing
        };
        Ok(Self { kind, outer_focus, inner_focus, alpha, offset })
    }

    pub fn residual(&self, x: Point2) -> f64 {
        x.dist(self.outer_focus) - self.alpha * x.dist(self.inner_focus) - self.offset
    }

    /// Distance from the inner focus to the curve along direction angle `t`.
    pub fn radius_at(&self, t: f64) -> f64 {
        let u = Point2::unit(t);
        let w = self.inner_focus - self.outer_focus;
        let (al, a) = (self.alpha, self.offset);
        // |w + s u|^2 = (al s + a)^2, genuine root is the larger one
        let qa = al * al - 1.0;
        let qb = 2.0 * (al * a - u.dot(w));
        let qc = a * a - w.norm_sq();
        let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
        let sq = disc.sqrt();
        let mut s = if qb < 0.0 { (-qb + sq) / (2.0 * qa) } else { 2.0 * qc / (-qb - sq) };
        // one Newton step on the unsquared residual
        let g = (w + u * s).norm() - al * s - a;
        let dg = (w + u * s).normalized().map_or(0.0, |n| n.dot(u)) - al;
        if dg != 0.0 {
            let s1 = s - g / dg;
            if s1.is_finite() && s1 >= 0.0 {
                let g1 = (w + u * s1).norm() - al * s1 - a;
                if g1.abs() < g.abs() {
                    s = s1;
                }
            }
        }
        s
    }

    /// Point on the curve along direction angle `t` from the inner focus.
    pub fn point_at(&self, t: f64) -> Point2 {
        self.inner_focus + Point2::unit(t) * self.radius_at(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn unit_apollonius() {
        let c = apollonius_of(Point2::ORIGIN, Point2::new(1.0, 0.0), 2.0).unwrap();
        assert!((c.center() - Point2::new(4.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((c.radius() - 2.0 / 3.0).abs() < 1e-15);
        for k in 0..10 {
            assert!(c.residual(c.point_at(k as f64 * TAU / 10.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn oval_parameterization_agrees_with_circle() {
        let c = apollonius_of(Point2::new(0.3, -1.0), Point2::new(1.0, 2.0), 1.7).unwrap();
        let o = c.as_oval();
        for k in 0..64 {
            let p = o.point_at(k as f64 * TAU / 64.0);
            assert!(c.residual(p).abs() < 1e-12);
            assert!((p.dist(c.center()) - c.radius()).abs() < 1e-12);
        }
    }

    #[test]
    fn oval_kinds() {
        let p = Point2::ORIGIN;
        let q = Point2::new(2.0, 0.0);
        assert_eq!(OvalCurve::new(p, q, 1.5, 0.5).unwrap().kind, OvalKind::FirstType);
        assert_eq!(OvalCurve::new(p, q, 1.5, -1.0).unwrap().kind, OvalKind::SecondType);
        assert_eq!(OvalCurve::new(p, q, 1.5, -3.0).unwrap().kind, OvalKind::Enclosing);
        assert!(OvalCurve::new(p, q, 1.5, 2.0).is_err());
        for off in [0.5, -1.0, -3.0, -10.0] {
            let o = OvalCurve::new(p, q, 1.5, off).unwrap();
            for k in 0..200 {
                let x = o.point_at(k as f64 * TAU / 200.0);
                assert!(o.residual(x).abs() < 1e-12 * (1.0 + x.norm()), "offset {off}");
            }
        }
    }

    #[test]
    fn large_alpha_shrinks_circle() {
        let c = apollonius_of(Point2::ORIGIN, Point2::new(1.0, 0.0), 100.0).unwrap();
        assert!(c.radius() < 0.011);
    }

    #[test]
    fn coincident_foci_rejected() {
        assert_eq!(
            apollonius_of(Point2::new(1.0, 1.0), Point2::new(1.0, 1.0), 2.0),
            Err(Error::CoincidentFoci(Point2::new(1.0, 1.0)))
        );
    }
}
