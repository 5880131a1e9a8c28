//! Output files: trajectory CSV, boundary JSON, check-report JSON. Floats
//! are written in shortest round-trip form.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::boundary::{ArcCurve, Boundary};
use crate::engine::{Record, Trajectory};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::region::DominanceRegion;

pub const TRAJECTORY_COLUMNS: [&str; 12] =
    ["t", "xp_x", "xp_y", "xe_x", "xe_y", "up_x", "up_y", "ue_x", "ue_y", "separation", "phi0_evader", "flags"];

#[derive(Serialize, Deserialize)]
struct Row {
    t: f64,
    xp_x: f64,
    xp_y: f64,
    xe_x: f64,
    xe_y: f64,
    up_x: f64,
    up_y: f64,
    ue_x: f64,
    ue_y: f64,
    separation: f64,
    phi0_evader: f64,
    flags: u32,
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io { path: "<stream>".into(), message: e.to_string() }
}

pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    // header written explicitly so an empty trajectory still has one
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(TRAJECTORY_COLUMNS).map_err(io)?;
    for r in &traj.records {
        w.serialize(Row {
            t: r.t,
            xp_x: r.x_p.x,
            xp_y: r.x_p.y,
            xe_x: r.x_e.x,
            xe_y: r.x_e.y,
            up_x: r.u_p.x,
            up_y: r.u_p.y,
            ue_x: r.u_e.x,
            ue_y: r.u_e.y,
            separation: r.separation,
            phi0_evader: r.phi0_evader,
            flags: r.flags,
        })
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_trajectory_csv<R: Read>(input: R) -> Result<Trajectory> {
    let mut rd = csv::Reader::from_reader(input);
    let headers = rd.headers().map_err(io)?.clone();
    if headers.iter().ne(TRAJECTORY_COLUMNS.iter().copied()) {
        return Err(Error::Parse(format!("unexpected trajectory columns: {headers:?}")));
    }
    let mut records = Vec::new();
    for row in rd.deserialize::<Row>() {
        let r = row.map_err(|e| Error::Parse(e.to_string()))?;
        records.push(Record {
            t: r.t,
            x_p: Point2::new(r.xp_x, r.xp_y),
            x_e: Point2::new(r.xe_x, r.xe_y),
            u_p: Point2::new(r.up_x, r.up_y),
            u_e: Point2::new(r.ue_x, r.ue_y),
            separation: r.separation,
            phi0_evader: r.phi0_evader,
            flags: r.flags,
        });
    }
    Ok(Trajectory { records })
}

/// One boundary arc with `(x, y, phi)` samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcRecord {
    #[serde(rename = "type")]
    pub kind: String,
    pub curve: ArcCurve,
    pub param: [f64; 2],
    pub endpoints: [Point2; 2],
    pub points: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRecord {
    pub x_p: Point2,
    pub x_e: Point2,
    pub alpha: f64,
    pub capture_radius: f64,
    pub summary: Vec<String>,
    pub junctions: Vec<Point2>,
    pub arcs: Vec<ArcRecord>,
}

impl BoundaryRecord {
    pub fn new(region: &DominanceRegion, boundary: &Boundary) -> Self {
        let field = region.field();
        Self {
            x_p: region.x_p,
            x_e: region.x_e,
            alpha: region.alpha,
            capture_radius: region.capture_radius,
            summary: boundary.summary().into_iter().map(String::from).collect(),
            junctions: boundary.junctions(),
            arcs: boundary
                .arcs
                .iter()
                .map(|a| ArcRecord {
                    kind: a.curve.tag().to_string(),
                    curve: a.curve.clone(),
                    param: a.param,
                    endpoints: a.endpoints,
                    points: a.points.iter().map(|p| [p.x, p.y, field.phi(*p)]).collect(),
                })
                .collect(),
        }
    }

    /// Largest `|phi|` over all samples.
    pub fn max_residual(&self) -> f64 {
        self.arcs.iter().flat_map(|a| a.points.iter()).map(|p| p[2].abs()).fold(0.0, f64::max)
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))
}
