//! Numerical verification harness. Each check samples a configuration,
//! evaluates one inequality or identity, and reports the worst margin.

mod defense;
mod lemmas;
mod metric;
mod oracle;
mod sims;
mod suite;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::region::DominanceRegion;
use crate::roots::bracketed_root_with;
use crate::world::{World, WorldKind};

pub use defense::{defense_decision, max_phi_over, DefenseVerdict, TargetRegion};
pub use lemmas::{
    check_boundary_evolution_identity, check_counterexample_divergence, check_gamma_star_cosine,
    check_increment_positive, check_necessary_condition, check_oval_angle_inequality, example5_arc_ab_pairs,
    gamma_star_value, necessary_condition_value,
};
pub use metric::{check_corner_metric_agreement, check_eta_m_tangents, check_gradient_fd, check_gradient_norms};
pub use oracle::{check_reachability_oracle, race_oracle_distances, two_blocks, GridSpec, OracleGrid};
pub use sims::{
    check_corner_guarantee, check_dt_convergence, check_free_plane_capture, random_corner_config,
    random_free_config, random_piecewise_policy,
};
pub use suite::{oracle_worlds, run_suite, Suite, SuiteReport};

/// Result of one check. The check fails exactly when `worst_margin` is
/// below `-tolerance`, unless `expected_violation` is set, in which case it
/// passes exactly then.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub samples: usize,
    pub worst_margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub expected_violation: bool,
    /// Inputs that produced the worst margin.
    pub witness: String,
    /// Samples rejected (non-differentiable points, failed preconditions).
    pub rejected: usize,
    /// Per-stratum sample counts where the check is stratified.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub counts: BTreeMap<String, usize>,
    /// Set when a required stratum received no samples.
    #[serde(default)]
    pub inconclusive: bool,
}

impl CheckReport {
    pub fn new(id: impl Into<String>, tolerance: f64) -> Self {
        Self {
            id: id.into(),
            samples: 0,
            worst_margin: f64::INFINITY,
            tolerance,
            pass: true,
            expected_violation: false,
            witness: String::new(),
            rejected: 0,
            counts: BTreeMap::new(),
            inconclusive: false,
        }
    }

    pub fn expecting_violation(mut self) -> Self {
        self.expected_violation = true;
        self
    }

    /// Records a margin; `witness` is only formatted when it is the new worst.
    pub fn observe(&mut self, margin: f64, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if margin < self.worst_margin || margin.is_nan() {
            self.worst_margin = margin;
            self.witness = witness();
        }
    }

    pub fn reject(&mut self) {
        self.rejected += 1;
    }

    pub fn count(&mut self, stratum: &str) {
        *self.counts.entry(stratum.to_string()).or_default() += 1;
    }

    /// Folds another report for the same check into this one.
    pub fn merge(&mut self, other: CheckReport) {
        self.samples += other.samples;
        self.rejected += other.rejected;
        if other.worst_margin < self.worst_margin || other.worst_margin.is_nan() {
            self.worst_margin = other.worst_margin;
            self.witness = other.witness;
        }
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
    }

    /// Fixes `pass` from the margin; call once all samples are in.
    pub fn finish(mut self) -> Self {
        let violated = !(self.worst_margin >= -self.tolerance);
        self.pass = self.samples > 0 && violated == self.expected_violation;
        self
    }

    /// One line: id, verdict, margin, tolerance, sample count, witness.
    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{verdict} {} margin={:.6e} tol={:.1e} n={}",
            self.id, self.worst_margin, self.tolerance, self.samples
        );
        if self.expected_violation {
            s.push_str(" expect=violation");
        }
        if self.rejected > 0 {
            s.push_str(&format!(" rejected={}", self.rejected));
        }
        for (k, v) in &self.counts {
            s.push_str(&format!(" {k}={v}"));
        }
        if self.inconclusive {
            s.push_str(" inconclusive");
        }
        if !self.witness.is_empty() {
            s.push_str(&format!(" witness[{}]", self.witness));
        }
        s
    }
}

/// The wedge of half-angle 5 degrees with `x_p = (4, 5)`, `x_e = (2, -1)`,
/// `alpha = 1.5`: the vertex lies inside the region and the boundary splits
/// into oval, Apollonius and oval arcs.
pub fn example5() -> DominanceRegion {
    let world = World::corner(5f64.to_radians()).expect("valid wedge");
    DominanceRegion::new(world, Point2::new(4.0, 5.0), Point2::new(2.0, -1.0), 1.5, 0.0).expect("valid region")
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn random_unit(rng: &mut impl Rng) -> Point2 {
    Point2::unit(rng.random_range(0.0..2.0 * PI))
}

/// Point where the ray from `x_e` along unit `u` first leaves the region
/// through `phi = 0`. `None` if the ray meets an obstacle first.
pub fn boundary_point_on_ray(region: &DominanceRegion, u: Point2) -> Option<Point2> {
    if matches!(region.world.kind(), WorldKind::FreePlane) {
        return region.ray_boundary_intersection(u).ok();
    }
    scan_ray(region, u, 512)
}

fn scan_ray(region: &DominanceRegion, u: Point2, n: usize) -> Option<Point2> {
    let world: &World = &region.world;
    let upper = region.outer_bound() * (1.0 + 1e-9) + 1e-9;
    let phi = |s: f64| region.phi(region.x_e + u * s).ok();
    let mut prev = (0.0, phi(0.0)?);
    for k in 1..=n {
        let s = upper * k as f64 / n as f64;
        let x = region.x_e + u * s;
        if !world.contains_point(x) || !world.segment_clear(region.x_e, x) {
            return None;
        }
        let v = phi(s)?;
        if prev.1 > 0.0 && v <= 0.0 {
            let r = bracketed_root_with(|s| phi(s).unwrap_or(f64::NAN), prev.0, prev.1, s, v).ok()?;
            return Some(region.x_e + u * r);
        }
        prev = (s, v);
    }
    None
}
