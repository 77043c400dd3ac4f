use super::lp::write_lp_file;
use super::model::IlpModel;
use super::IlpError;
use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

/// Path of the CBC binary: `POLYAGG_CBC` if set, else `cbc` on `PATH`.
pub fn find_cbc() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("POLYAGG_CBC") {
        let p = PathBuf::from(p);
        return p.is_file().then_some(p);
    }
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path).map(|d| d.join("cbc")).find(|p| p.is_file())
}

#[derive(Clone, Debug, PartialEq)]
pub struct IlpOutcome {
    /// Indexed like `IlpModel::variables`.
    pub values: Vec<f64>,
    /// Objective including the constant offset.
    pub objective: f64,
}

static RUN: AtomicUsize = AtomicUsize::new(0);

/// Solves `m` to optimality with CBC.
pub fn solve_with_cbc(m: &IlpModel, time_limit: Option<f64>) -> Result<IlpOutcome, IlpError> {
    let cbc = find_cbc().ok_or(IlpError::SolverUnavailable)?;
    let dir = std::env::temp_dir().join(format!("polyagg-cbc-{}-{}", std::process::id(), RUN.fetch_add(1, Ordering::Relaxed)));
    std::fs::create_dir_all(&dir).map_err(|e| IlpError::Solver(e.to_string()))?;
    let result = run_in(&cbc, &dir, m, time_limit);
    let _ = std::fs::remove_dir_all(&dir);
    result
}

fn run_in(cbc: &PathBuf, dir: &std::path::Path, m: &IlpModel, time_limit: Option<f64>) -> Result<IlpOutcome, IlpError> {
    let (lp, sol) = (dir.join("model.lp"), dir.join("model.sol"));
    std::fs::write(&lp, write_lp_file(m)).map_err(|e| IlpError::Solver(e.to_string()))?;
    let mut cmd = Command::new(cbc);
    cmd.arg(&lp);
    if let Some(t) = time_limit {
        cmd.args(["sec", &t.to_string()]);
    }
    cmd.args(["solve", "solu"]).arg(&sol);
    let out = cmd.output().map_err(|e| IlpError::Solver(e.to_string()))?;
    if !out.status.success() {
        return Err(IlpError::Solver(String::from_utf8_lossy(&out.stderr).into_owned()));
    }
    let text = std::fs::read_to_string(&sol).map_err(|e| IlpError::Solver(e.to_string()))?;
    let mut lines = text.lines();
    let status = lines.next().unwrap_or_default();
    if !status.starts_with("Optimal") {
        return Err(IlpError::Solver(status.trim().to_string()));
    }
    let names: std::collections::HashMap<String, usize> =
        m.variables.iter().enumerate().map(|(i, v)| (v.to_string(), i)).collect();
    let mut values = vec![0.0; m.variables.len()];
    for line in lines {
        let f: Vec<&str> = line.split_whitespace().filter(|t| *t != "**").collect();
        if f.len() < 3 {
            continue;
        }
        let (Some(&i), Ok(x)) = (names.get(f[1]), f[2].parse::<f64>()) else { continue };
        values[i] = x.round();
    }
    let objective = m.objective_value(|v| m.var_index(v).map_or(0.0, |i| values[i]));
    Ok(IlpOutcome { values, objective })
}
