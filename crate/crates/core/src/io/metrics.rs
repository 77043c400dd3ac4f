use super::IoError;

pub const METRICS_HEADER: [&str; 14] = [
    "instance",
    "alpha",
    "solver",
    "status",
    "area",
    "perimeter",
    "objective",
    "cells",
    "arcs",
    "runtime_ms",
    "a_l_over_o_f",
    "a_v_over_o_f",
    "o_v_over_o_f",
    "message",
];

/// One (instance, α, solver) run. Ratio columns repeat on every row of the
/// same instance and α.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MetricsRow {
    pub instance: usize,
    pub alpha: f64,
    pub solver: String,
    /// `ok`, `error`, `skipped` or `timeout`.
    pub status: String,
    pub area: Option<f64>,
    pub perimeter: Option<f64>,
    pub objective: Option<f64>,
    pub cells: Option<usize>,
    pub arcs: Option<usize>,
    pub runtime_ms: Option<f64>,
    pub line_ratio: Option<f64>,
    pub vertex_ratio: Option<f64>,
    pub vertex_optimum_ratio: Option<f64>,
    pub message: String,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl MetricsRow {
    pub fn record(&self) -> Vec<String> {
        vec![
            self.instance.to_string(),
            self.alpha.to_string(),
            self.solver.clone(),
            self.status.clone(),
            opt(self.area),
            opt(self.perimeter),
            opt(self.objective),
            opt(self.cells),
            opt(self.arcs),
            self.runtime_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
            opt(self.line_ratio),
            opt(self.vertex_ratio),
            opt(self.vertex_optimum_ratio),
            self.message.clone(),
        ]
    }
}

pub fn write_metrics<W: std::io::Write>(w: W, rows: &[MetricsRow]) -> Result<(), IoError> {
    let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    let err = |e: csv::Error| IoError::Io(e.to_string());
    wr.write_record(METRICS_HEADER).map_err(err)?;
    for r in rows {
        wr.write_record(r.record()).map_err(err)?;
    }
    wr.flush().map_err(|e| IoError::Io(e.to_string()))
}
