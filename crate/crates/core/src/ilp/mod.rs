//! Vertex-restricted aggregation as a binary program over triangulations of
//! conv(B) \ B, with an LP-format exporter, an optional CBC adapter and an
//! exhaustive solver for small instances.

mod brute;
mod cbc;
mod lp;
mod model;
mod universe;


pub use brute::{
    brute_force_vertex_detailed, brute_force_vertex_optimal, pockets, realize, Pocket, VertexOptimum, MAX_POCKET_TRIANGLES,
    MAX_TRIANGULATIONS,
};
pub use cbc::{find_cbc, solve_with_cbc, IlpOutcome};
pub use lp::write_lp_file;
pub use model::{build_ilp, Constraint, Family, IlpModel, Sense, Var};
pub use universe::{
    enumerate_universe, enumerate_universe_capped, EdgeClass, EdgeUniverse, UniverseEdge, UniverseTriangle, DEFAULT_VERTEX_CAP,
};

use crate::arrangement::ArrangementError;
use crate::geom::PolygonSet;
use crate::mincut::Solution;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IlpError {
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("alpha must be finite and non-negative, got {0}")]
    InvalidAlpha(f64),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("no external solver found")]
    SolverUnavailable,
    #[error("external solver failed: {0}")]
    Solver(String),
    #[error("assignment is not feasible for the model")]
    Infeasible,
    #[error("{0}")]
    Internal(String),
}

/// Triangulation and active triangles encoded by a model assignment.
pub fn decode_assignment(u: &EdgeUniverse, m: &IlpModel, values: &[f64]) -> Result<(Vec<usize>, Vec<usize>), IlpError> {
    let value = |v: Var| m.var_index(v).map_or(0.0, |i| values[i]);
    if !m.is_feasible(value) {
        return Err(IlpError::Infeasible);
    }
    let on = |v: Var| value(v) > 0.5;
    let tris: Vec<usize> = (0..u.triangles.len()).filter(|&t| on(Var::TriangleActive(t)) || on(Var::TriangleInactive(t))).collect();
    let active: Vec<usize> = (0..u.triangles.len()).filter(|&t| on(Var::TriangleActive(t))).collect();
    Ok((tris, active))
}

/// Builds the model, solves it with CBC and traces the resulting regions.
pub fn solve_ilp_external(b: &PolygonSet, alpha: f64, time_limit: Option<f64>) -> Result<(Solution, IlpOutcome), IlpError> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(IlpError::InvalidAlpha(alpha));
    }
    let u = enumerate_universe(b)?;
    let m = build_ilp(&u, alpha);
    let outcome = solve_with_cbc(&m, time_limit)?;
    let (tris, active) = decode_assignment(&u, &m, &outcome.values)?;
    Ok((realize(b, &u, &tris, &active, alpha)?, outcome))
}
