//! Polygon aggregation: cover a set of interior-disjoint polygons with
//! disjoint regions minimizing area + α·perimeter.

pub mod approx;
pub mod cli;
pub mod arrangement;
pub mod candidates;
pub mod feasibility;
pub mod geom;
pub mod ilp;
pub mod io;
pub mod mincut;
