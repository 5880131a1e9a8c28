//! Scenario files: world, players, strategy tags, timing and monitors in
//! one TOML document. See `docs/scenario.md` for the schema.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::{MonitorConfig, SimConfig, DEFAULT_CAPTURE_EPS, DEFAULT_DT};
use crate::error::{Error, Result};
use crate::evader::EvaderPolicy;
use crate::geometry::Point2;
use crate::lab::TargetRegion;
use crate::region::DominanceRegion;
use crate::strategy::StrategyKind;
use crate::world::{Polygon, World, WorldKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WorldSpec {
    FreePlane,
    CornerWedge { theta0_deg: f64 },
    /// Counterclockwise vertex lists.
    Polygons { obstacles: Vec<Vec<Point2>> },
}

impl WorldSpec {
    pub fn build(&self) -> Result<World> {
        match self {
            WorldSpec::FreePlane => Ok(World::free_plane()),
            WorldSpec::CornerWedge { theta0_deg } => World::corner(theta0_deg.to_radians()),
            WorldSpec::Polygons { obstacles } => {
                let polys = obstacles.iter().map(|v| Polygon::new(v.clone())).collect::<Result<Vec<_>>>()?;
                World::new(WorldKind::Polygons { obstacles: polys })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Players {
    pub x_p: Point2,
    pub x_e: Point2,
    pub alpha: f64,
    #[serde(default)]
    pub capture_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSpec {
    pub dt: f64,
    pub t_max: f64,
    pub capture_eps: f64,
    pub input_delay_ticks: usize,
}

impl Default for SimSpec {
    fn default() -> Self {
        Self { dt: DEFAULT_DT, t_max: 100.0, capture_eps: DEFAULT_CAPTURE_EPS, input_delay_ticks: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub world: WorldSpec,
    pub players: Players,
    pub pursuer: StrategyKind,
    pub evader: EvaderPolicy,
    #[serde(default)]
    pub sim: SimSpec,
    #[serde(default)]
    pub monitors: MonitorConfig,
    /// Target sets for defense queries.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<TargetRegion>,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        s.sim_config()?.validate()?;
        Ok(s)
    }

    /// Same schema as the TOML form, for request bodies.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        s.sim_config()?.validate()?;
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build_world(&self) -> Result<World> {
        self.world.build()
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let p = &self.players;
        let mut cfg = SimConfig::new(self.build_world()?, p.x_p, p.x_e, p.alpha, self.pursuer.clone(), self.evader.clone());
        cfg.capture_radius = p.capture_radius;
        cfg.dt = self.sim.dt;
        cfg.t_max = self.sim.t_max;
        cfg.capture_eps = self.sim.capture_eps;
        cfg.input_delay_ticks = self.sim.input_delay_ticks;
        cfg.monitors = self.monitors.clone();
        Ok(cfg)
    }

    pub fn region(&self) -> Result<DominanceRegion> {
        let p = &self.players;
        DominanceRegion::new(self.build_world()?, p.x_p, p.x_e, p.alpha, p.capture_radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE5: &str = r#"
name = "example5"
[world]
kind = "corner_wedge"
theta0_deg = 5.0
[players]
x_p = [4.0, 5.0]
x_e = [2.0, -1.0]
alpha = 1.5
[pursuer]
kind = "retrace"
[evader]
kind = "boundary-probe"
target = [0.3, 1.2]
"#;

    #[test]
    fn parses_and_round_trips() {
        let s = Scenario::from_toml_str(EXAMPLE5).unwrap();
        assert_eq!(s.sim.dt, DEFAULT_DT);
        assert_eq!(s.build_world().unwrap().corner_angle(), Some(5f64.to_radians()));
        let again = Scenario::from_toml_str(&s.to_toml_string().unwrap()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(Scenario::from_toml_str("world = 3"), Err(Error::Parse(_))));
        let bad = EXAMPLE5.replace("alpha = 1.5", "alpha = 0.5");
        assert!(Scenario::from_toml_str(&bad).is_err());
        let unknown = EXAMPLE5.replace("[players]", "[players]\nspeed = 2");
        assert!(matches!(Scenario::from_toml_str(&unknown), Err(Error::Parse(_))));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(Scenario::load("/nonexistent/x.toml"), Err(Error::Io { .. })));
    }
}
