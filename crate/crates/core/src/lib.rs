pub mod boundary;
pub mod contour;
pub mod curves;
pub mod engine;
pub mod error;
pub mod evader;
pub mod export;
pub mod geometry;
pub mod lab;
pub mod monitor;
pub mod region;
pub mod roots;
pub mod scenario;
pub mod session;
pub mod strategy;
pub mod world;

pub use error::{Error, Result};
pub use geometry::Point2;
pub use world::{Polygon, ShortestPath, World, WorldKind};
