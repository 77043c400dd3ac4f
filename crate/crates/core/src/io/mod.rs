//! Reading footprint files and writing solutions, drawings and metrics.

mod export;
mod ingest;
mod metrics;

pub use export::{polygons_to_geojson, solution_to_geojson, solution_to_svg};
pub use ingest::{ingest, ingest_str, ingest_with_epsilon, parse, parse_geojson, parse_wkt, split_instances, InputFormat, Rings, SubInstance};
pub use metrics::{write_metrics, MetricsRow, METRICS_HEADER};

use crate::geom::GeomError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error("i/o error: {0}")]
    Io(String),
}
