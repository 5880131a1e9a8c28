//! Named check suites.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::*;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    FreePlane,
    Corner,
    Counterexample,
    Metric,
    Oracle,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["free-plane", "corner", "counterexample", "metric", "oracle", "all"];

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::FreePlane, Suite::Corner, Suite::Counterexample, Suite::Metric, Suite::Oracle],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free-plane" => Ok(Suite::FreePlane),
            "corner" => Ok(Suite::Corner),
            "counterexample" => Ok(Suite::Counterexample),
            "metric" => Ok(Suite::Metric),
            "oracle" => Ok(Suite::Oracle),
            "all" => Ok(Suite::All),
            other => Err(Error::UnknownCheck(other.to_string())),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Suite::FreePlane, Suite::Corner, Suite::Counterexample, Suite::Metric, Suite::Oracle, Suite::All]
            .iter()
            .position(|s| s == self)
            .unwrap();
        f.write_str(Suite::NAMES[i])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub reports: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn lines(&self) -> Vec<String> {
        self.reports.iter().map(CheckReport::line).collect()
    }
}

fn sub_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k)
}

fn free_plane(seed: u64) -> Result<Vec<CheckReport>> {
    let mut rng = rng(seed);
    let mut ineq = CheckReport::new("oval_angle_inequality", 1e-9);
    let mut deriv = CheckReport::new("oval_angle_derivative", 1e-6);
    let mut nec = CheckReport::new("necessary_condition.free_plane", 1e-9);
    for k in 0..100 {
        let (x_p, x_e, alpha, l) = random_free_config(&mut rng);
        let (a, b) = check_oval_angle_inequality(x_p, x_e, alpha, l, 100, sub_seed(seed, k))?;
        ineq.merge(a);
        deriv.merge(b);
        if k < 20 {
            let region = DominanceRegion::new(World::free_plane(), x_p, x_e, alpha, 0.0)?;
            let pairs: Vec<_> = (0..50)
                .map(|_| {
                    let a = region.ray_boundary_intersection(random_unit(&mut rng)).unwrap();
                    let b = region.ray_boundary_intersection(random_unit(&mut rng)).unwrap();
                    (a, b)
                })
                .collect();
            nec.merge(check_necessary_condition(&World::free_plane(), x_p, x_e, alpha, &pairs)?);
        }
    }
    let mut out = vec![ineq.finish(), deriv.finish(), nec.finish()];
    out.extend(check_free_plane_capture(10, 4, 1e-3, sub_seed(seed, 1000))?);
    Ok(out)
}

fn corner(seed: u64) -> Result<Vec<CheckReport>> {
    let mut rng = rng(seed);
    let mut cos = CheckReport::new("gamma_star_cosine", 1e-9);
    let mut inc = CheckReport::new("increment_positive", 0.0);
    for k in 0..50 {
        let (world, x_p, x_e, alpha) = random_corner_config(&mut rng);
        cos.merge(check_gamma_star_cosine(&world, x_p, x_e, alpha, 200, sub_seed(seed, 2 * k))?);
        inc.merge(check_increment_positive(&world, x_p, x_e, alpha, 200, sub_seed(seed, 2 * k + 1))?);
    }
    inc.inconclusive = ["case1", "case2", "case3", "case4"].iter().any(|c| !inc.counts.contains_key(*c));
    let mut out = vec![cos.finish(), inc.finish()];
    out.extend(check_corner_guarantee(6, 3, 1e-3, sub_seed(seed, 999))?);
    Ok(out)
}

fn counterexample(seed: u64) -> Result<Vec<CheckReport>> {
    let region = example5();
    let mut typing = CheckReport::new("example5_boundary_typing", 0.0);
    let b = crate::boundary::boundary_arcs(&region, 2048)?;
    let ok = b.summary() == ["oval", "apollonius", "oval"];
    typing.observe(if ok { 0.0 } else { -1.0 }, || format!("arcs={:?}", b.summary()));
    let pairs = example5_arc_ab_pairs(&region, 200, seed)?;
    let mut nec = check_necessary_condition(&region.world, region.x_p, region.x_e, region.alpha, &pairs)?;
    nec.id = "necessary_condition.example5".into();
    nec.expected_violation = true;
    let mut defense = CheckReport::new("defense_decision.example5", 0.0);
    let v = defense_decision(&region.world, region.x_p, region.x_e, region.alpha, &TargetRegion::PursuerDominated)?;
    defense.observe(if v == DefenseVerdict::NotCertified { 0.0 } else { -1.0 }, || format!("verdict={v:?}"));
    Ok(vec![
        typing.finish(),
        nec.finish(),
        check_counterexample_divergence(&region, 10f64.to_radians(), 1e-3)?,
        defense.finish(),
    ])
}

fn metric(seed: u64) -> Result<Vec<CheckReport>> {
    Ok(vec![
        check_corner_metric_agreement(1000, sub_seed(seed, 1)),
        check_gradient_norms(1000, sub_seed(seed, 2)),
        check_gradient_fd(1000, sub_seed(seed, 3)),
        check_eta_m_tangents(100, sub_seed(seed, 4)),
        check_dt_convergence(1e-2, 3)?,
    ])
}

/// Five worlds used by the oracle comparison, each with a player pair.
pub fn oracle_worlds(seed: u64) -> Vec<(String, DominanceRegion)> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    let free = DominanceRegion::new(World::free_plane(), Point2::new(-2.0, 1.0), Point2::new(1.5, -0.5), 1.6, 0.1).unwrap();
    out.push(("free_plane".to_string(), free));
    out.push(("example5".to_string(), example5()));
    let (w, p, e, a) = random_corner_config(&mut rng);
    out.push(("corner_random".to_string(), DominanceRegion::new(w, p, e, a, 0.0).unwrap()));
    let blocks = oracle::two_blocks();
    out.push((
        "two_blocks".to_string(),
        DominanceRegion::new(blocks.clone(), Point2::new(3.5, 3.0), Point2::new(0.0, 0.0), 1.8, 0.0).unwrap(),
    ));
    let y: f64 = rng.random_range(-0.5..0.5);
    out.push((
        "two_blocks_hidden".to_string(),
        DominanceRegion::new(blocks, Point2::new(-3.5, -1.0 + y), Point2::new(1.5, 3.0), 1.4, 0.0).unwrap(),
    ));
    out
}

fn oracle_suite(seed: u64) -> Vec<CheckReport> {
    let spec = GridSpec { min: Point2::new(-8.0, -8.0), max: Point2::new(8.0, 8.0), cells: 200 };
    oracle_worlds(seed)
        .iter()
        .map(|(name, r)| check_reachability_oracle(r, spec, 0.995, name))
        .collect()
}

/// Runs a suite; reports are sorted by check id.
pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let mut reports = Vec::new();
    for part in suite.parts() {
        let s = sub_seed(seed, part as u64);
        match part {
            Suite::FreePlane => reports.extend(free_plane(s)?),
            Suite::Corner => reports.extend(corner(s)?),
            Suite::Counterexample => reports.extend(counterexample(s)?),
            Suite::Metric => reports.extend(metric(s)?),
            Suite::Oracle => reports.extend(oracle_suite(s)),
            Suite::All => unreachable!(),
        }
    }
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(SuiteReport { suite, seed, reports })
}
