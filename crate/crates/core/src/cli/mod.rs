//! Batch runner behind the `polyagg` binary: ingest, solve over a set of α
//! values, write geometry and a metrics table.

use crate::approx::{approx_line_from, approx_vertex_from};
use crate::arrangement::triangulate;
use crate::geom::{PolygonSet, EPS};
use crate::ilp::{brute_force_vertex_detailed, build_ilp, enumerate_universe, find_cbc, solve_ilp_external, write_lp_file};
use crate::io::{ingest_with_epsilon, solution_to_geojson, solution_to_svg, write_metrics, InputFormat, IoError, MetricsRow};
use crate::mincut::{solve_subdivision, solve_unrestricted_detailed, Solution};
use clap::Parser;
use serde_json::{json, Map};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{mpsc, Arc, Mutex};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] IoError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Solver {
    Unrestricted,
    SubdivisionDt,
    ApproxLine,
    ApproxVertex,
    IlpExport,
    BruteForce,
}

impl Solver {
    pub const ALL: [Solver; 6] =
        [Solver::Unrestricted, Solver::SubdivisionDt, Solver::ApproxLine, Solver::ApproxVertex, Solver::IlpExport, Solver::BruteForce];

    pub fn name(self) -> &'static str {
        match self {
            Solver::Unrestricted => "unrestricted",
            Solver::SubdivisionDt => "subdivision-dt",
            Solver::ApproxLine => "approx-line",
            Solver::ApproxVertex => "approx-vertex",
            Solver::IlpExport => "ilp-export",
            Solver::BruteForce => "brute-force",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Solver::ALL
            .into_iter()
            .find(|v| v.name() == s.trim())
            .ok_or_else(|| CliError::Config(format!("unknown solver {s:?}")))
    }
}

/// Step 1 on [0, 20), step 10 on [20, 200].
pub fn default_sweep() -> Vec<f64> {
    (0..20).map(f64::from).chain((2..=20).map(|k| f64::from(k) * 10.0)).collect()
}

/// Parses `start:stop:step` segments separated by commas; `stop` is
/// included when it falls on the grid. `default` gives [`default_sweep`].
pub fn parse_sweep(text: &str) -> Result<Vec<f64>, CliError> {
    if text.trim() == "default" {
        return Ok(default_sweep());
    }
    let mut out = Vec::new();
    for seg in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<f64> = seg
            .split(':')
            .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Config(format!("bad sweep segment {seg:?}"))))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(CliError::Config(format!("sweep segment {seg:?} is not start:stop:step")));
        };
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(CliError::Config(format!("bad sweep segment {seg:?}")));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        out.extend((0..=n).map(|k| start + k as f64 * step));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: InputFormat,
    pub alphas: Vec<f64>,
    pub solvers: Vec<Solver>,
    pub out: PathBuf,
    /// Chord sagitta for discretized arcs; 1e-3 of the instance diameter
    /// when unset.
    pub sagitta: Option<f64>,
    /// Seconds per solve.
    pub time_limit: Option<f64>,
    pub threads: usize,
    /// Relative tolerance, as a fraction of the instance diameter.
    pub epsilon: f64,
    pub svg: bool,
}

impl RunConfig {
    /// Sorts and deduplicates α values and solvers, then checks ranges.
    pub fn normalize(mut self) -> Result<Self, CliError> {
        if let Some(a) = self.alphas.iter().find(|a| !a.is_finite() || **a < 0.0) {
            return Err(CliError::Config(format!("alpha must be finite and non-negative, got {a}")));
        }
        if self.alphas.is_empty() {
            return Err(CliError::Config("no alpha values".into()));
        }
        self.alphas.sort_by(f64::total_cmp);
        self.alphas.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
        self.solvers.sort();
        self.solvers.dedup();
        if self.solvers.is_empty() {
            return Err(CliError::Config("no solvers".into()));
        }
        if let Some(s) = self.sagitta {
            if !(s > 0.0 && s.is_finite()) {
                return Err(CliError::Config(format!("sagitta must be positive, got {s}")));
            }
        }
        if let Some(t) = self.time_limit {
            if !(t > 0.0) {
                return Err(CliError::Config(format!("time limit must be positive, got {t}")));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1e-2) {
            return Err(CliError::Config(format!("epsilon must lie in (0, 0.01), got {}", self.epsilon)));
        }
        self.threads = self.threads.max(1);
        Ok(self)
    }
}

#[derive(Parser, Debug)]
#[command(name = "polyagg", version, about = "Aggregate polygons by minimizing area plus alpha times perimeter")]
pub struct Args {
    #[arg(long)]
    pub input: PathBuf,
    /// geojson or wkt; inferred from the file extension when omitted.
    #[arg(long)]
    pub format: Option<String>,
    /// Comma-separated α values.
    #[arg(long, value_delimiter = ',', conflicts_with = "sweep")]
    pub alphas: Option<Vec<f64>>,
    /// `start:stop:step[,...]`, or `default` for the standard 39-value sweep.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "unrestricted")]
    pub solvers: Vec<String>,
    #[arg(long, default_value = "polyagg-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub sagitta: Option<f64>,
    /// Seconds per solve.
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, default_value_t = EPS)]
    pub epsilon: f64,
    /// Also write an SVG per run.
    #[arg(long)]
    pub svg: bool,
}

impl Args {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let format = match &self.format {
            Some(f) => f.parse()?,
            None => match self.input.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
                Some("wkt" | "txt") => InputFormat::Wkt,
                _ => InputFormat::GeoJson,
            },
        };
        let alphas = match (self.alphas, &self.sweep) {
            (Some(a), _) => a,
            (None, Some(s)) => parse_sweep(s)?,
            (None, None) => default_sweep(),
        };
        let solvers = self.solvers.iter().map(|s| s.parse()).collect::<Result<Vec<Solver>, _>>()?;
        RunConfig {
            input: self.input,
            format,
            alphas,
            solvers,
            out: self.out,
            sagitta: self.sagitta,
            time_limit: self.time_limit,
            threads: self.threads,
            epsilon: self.epsilon,
            svg: self.svg,
        }
        .normalize()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunSummary {
    /// Sorted by instance, α, solver.
    pub rows: Vec<MetricsRow>,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.status != "ok").count()
    }
}

enum Outcome<T> {
    Done(T, f64),
    TimedOut,
}

/// Runs `f` with a wall-clock limit. A timed-out computation is abandoned
/// on its own thread.
fn timed<T: Send + 'static>(limit: Option<f64>, f: impl FnOnce() -> T + Send + 'static) -> Outcome<T> {
    let t0 = Instant::now();
    let Some(secs) = limit else {
        let v = f();
        return Outcome::Done(v, t0.elapsed().as_secs_f64() * 1e3);
    };
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(f());
    });
    match rx.recv_timeout(std::time::Duration::from_secs_f64(secs)) {
        Ok(v) => Outcome::Done(v, t0.elapsed().as_secs_f64() * 1e3),
        Err(_) => Outcome::TimedOut,
    }
}

/// One finished run before it is written.
struct RunResult {
    row: MetricsRow,
    solution: Option<Solution>,
    lp: Option<String>,
}

impl RunResult {
    fn new(instance: usize, alpha: f64, solver: Solver) -> Self {
        let row = MetricsRow { instance, alpha, solver: solver.name().into(), status: "ok".into(), ..Default::default() };
        RunResult { row, solution: None, lp: None }
    }

    fn fail(mut self, status: &str, message: impl ToString) -> Self {
        self.row.status = status.into();
        self.row.message = message.to_string();
        self
    }

    fn solved(mut self, s: Solution, cells: Option<usize>, ms: f64) -> Self {
        self.row.area = Some(s.objective.area);
        self.row.perimeter = Some(s.objective.perimeter);
        self.row.objective = Some(s.objective.value);
        self.row.arcs = Some(s.arc_count());
        self.row.cells = cells;
        self.row.runtime_ms = Some(ms);
        self.solution = Some(s);
        self
    }
}

type SkipMap = Mutex<BTreeMap<(usize, Solver), f64>>;

fn skipped(skip: &SkipMap, inst: usize, solver: Solver, alpha: f64) -> bool {
    skip.lock().map(|m| m.get(&(inst, solver)).is_some_and(|&a| alpha > a)).unwrap_or(false)
}

fn note_timeout(skip: &SkipMap, inst: usize, solver: Solver, alpha: f64) {
    if let Ok(mut m) = skip.lock() {
        let e = m.entry((inst, solver)).or_insert(alpha);
        *e = e.min(alpha);
    }
}

/// All requested solvers for one instance and α.
fn run_alpha(b: &Arc<PolygonSet>, inst: usize, alpha: f64, cfg: &RunConfig, skip: &SkipMap) -> Vec<RunResult> {
    let want = |s: Solver| cfg.solvers.contains(&s) && !skipped(skip, inst, s, alpha);
    let mut out = Vec::new();
    let exact = [Solver::Unrestricted, Solver::ApproxLine, Solver::ApproxVertex];
    let optimum = if exact.iter().any(|&s| want(s)) {
        let bb = Arc::clone(b);
        Some(timed(cfg.time_limit, move || solve_unrestricted_detailed(&bb, alpha)))
    } else {
        None
    };
    for solver in cfg.solvers.iter().copied() {
        let r = RunResult::new(inst, alpha, solver);
        if !want(solver) {
            out.push(r.fail("skipped", "an earlier alpha timed out"));
            continue;
        }
        let limit = cfg.time_limit;
        let result = match (solver, &optimum) {
            (Solver::Unrestricted | Solver::ApproxLine | Solver::ApproxVertex, Some(Outcome::TimedOut)) => {
                r.fail("timeout", "exact solve exceeded the time limit")
            }
            (Solver::Unrestricted | Solver::ApproxLine | Solver::ApproxVertex, Some(Outcome::Done(Err(e), _))) => r.fail("error", e),
            (Solver::Unrestricted, Some(Outcome::Done(Ok(run), ms))) => {
                r.solved(run.solution.clone(), Some(run.subdivision.free_faces().len()), *ms)
            }
            (Solver::ApproxLine | Solver::ApproxVertex, Some(Outcome::Done(Ok(run), ms))) => {
                let (bb, opt) = (Arc::clone(b), run.solution.clone());
                let cells = run.subdivision.free_faces().len();
                let line = solver == Solver::ApproxLine;
                match timed(limit, move || if line { approx_line_from(&bb, opt) } else { approx_vertex_from(&bb, opt) }) {
                    Outcome::Done(Ok(a), t) => r.solved(a.solution, Some(cells), ms + t),
                    Outcome::Done(Err(e), _) => r.fail("error", e),
                    Outcome::TimedOut => r.fail("timeout", "approximation exceeded the time limit"),
                }
            }
            (Solver::SubdivisionDt, _) => {
                let bb = Arc::clone(b);
                let job = move || {
                    let d = triangulate(&bb)?;
                    let cells = d.free_faces().len();
                    solve_subdivision(&bb, &d, alpha).map(|s| (s, cells))
                };
                match timed(limit, job) {
                    Outcome::Done(Ok((s, cells)), t) => r.solved(s, Some(cells), t),
                    Outcome::Done(Err(e), _) => r.fail("error", e),
                    Outcome::TimedOut => r.fail("timeout", "exceeded the time limit"),
                }
            }
            (Solver::BruteForce, _) => {
                let bb = Arc::clone(b);
                match timed(limit, move || brute_force_vertex_detailed(&bb, alpha)) {
                    Outcome::Done(Ok(v), t) => {
                        let cells = v.universe.triangles.len();
                        let mut res = r.solved(v.solution, Some(cells), t);
                        res.row.message = format!("{} triangulations", v.triangulations);
                        res
                    }
                    Outcome::Done(Err(e), _) => r.fail("error", e),
                    Outcome::TimedOut => r.fail("timeout", "exceeded the time limit"),
                }
            }
            (Solver::IlpExport, _) => ilp_export(b, r, alpha, limit),
            _ => r.fail("error", "internal: missing exact solve"),
        };
        if result.row.status == "timeout" {
            note_timeout(skip, inst, solver, alpha);
        }
        out.push(result);
    }
    out
}

fn ilp_export(b: &Arc<PolygonSet>, mut r: RunResult, alpha: f64, limit: Option<f64>) -> RunResult {
    let t0 = Instant::now();
    let u = match enumerate_universe(b) {
        Ok(u) => u,
        Err(e) => return r.fail("error", e),
    };
    let m = build_ilp(&u, alpha);
    r.lp = Some(write_lp_file(&m));
    r.row.cells = Some(u.triangles.len());
    if find_cbc().is_none() {
        r.row.runtime_ms = Some(t0.elapsed().as_secs_f64() * 1e3);
        r.row.message = "model written; no MIP solver found".into();
        return r;
    }
    let lp = r.lp.take();
    let bb = Arc::clone(b);
    let mut res = match timed(limit.map(|t| t + 5.0), move || solve_ilp_external(&bb, alpha, limit)) {
        Outcome::Done(Ok((s, _)), _) => {
            let cells = r.row.cells;
            r.solved(s, cells, t0.elapsed().as_secs_f64() * 1e3)
        }
        Outcome::Done(Err(e), _) => r.fail("error", e),
        Outcome::TimedOut => r.fail("timeout", "MIP solver exceeded the time limit"),
    };
    res.lp = lp;
    res
}

fn alpha_tag(alpha: f64) -> String {
    format!("{alpha}")
}

fn write_file(path: &Path, text: &str, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| IoError::Io(format!("{}: {e}", path.display())))?;
    files.push(path.to_path_buf());
    Ok(())
}

/// Ratio columns for each (instance, α) from the exact, approximate and
/// vertex-restricted objectives that are available.
fn fill_ratios(rows: &mut [MetricsRow]) {
    let mut groups: BTreeMap<(usize, u64), [Option<f64>; 4]> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.status == "ok") {
        let g = groups.entry((r.instance, r.alpha.to_bits())).or_default();
        let slot = match r.solver.as_str() {
            "unrestricted" => 0,
            "approx-line" => 1,
            "approx-vertex" => 2,
            "brute-force" => 3,
            "ilp-export" if g[3].is_none() => 3,
            _ => continue,
        };
        if r.objective.is_some() {
            g[slot] = r.objective;
        }
    }
    for r in rows.iter_mut() {
        let Some([Some(f), line, vertex, vopt]) = groups.get(&(r.instance, r.alpha.to_bits())).copied() else { continue };
        let ratio = |x: Option<f64>| x.map(|x| if f > 0.0 { x / f } else { 1.0 });
        r.line_ratio = ratio(line);
        r.vertex_ratio = ratio(vertex);
        r.vertex_optimum_ratio = ratio(vopt);
    }
}

/// Runs every (instance, α, solver) combination of `cfg` and writes the
/// results under `cfg.out`. Individual run failures are recorded in the
/// metrics table and do not abort the batch.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let instances = ingest_with_epsilon(&cfg.input, cfg.format, cfg.epsilon)?;
    std::fs::create_dir_all(&cfg.out).map_err(|e| IoError::Io(format!("{}: {e}", cfg.out.display())))?;
    let sets: Vec<Arc<PolygonSet>> = instances.iter().map(|i| Arc::new(i.polygons.clone())).collect();
    let jobs: Vec<(usize, f64)> = (0..sets.len()).flat_map(|i| cfg.alphas.iter().map(move |&a| (i, a))).collect();
    let skip: SkipMap = Mutex::new(BTreeMap::new());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;

    let (tx, rx) = mpsc::channel::<(usize, usize, Vec<RunResult>)>();
    let mut collected: Vec<(usize, usize, Vec<RunResult>)> = Vec::new();
    pool.in_place_scope(|scope| {
        for (j, &(inst, alpha)) in jobs.iter().enumerate() {
            let (tx, b, skip) = (tx.clone(), &sets[inst], &skip);
            scope.spawn(move |_| {
                let _ = tx.send((inst, j, run_alpha(b, inst, alpha, cfg, skip)));
            });
        }
        drop(tx);
        collected.extend(rx.iter());
    });
    collected.sort_by_key(|&(i, j, _)| (i, j));

    // Skip rule applied after the fact so that the outcome does not depend
    // on the order in which workers finished.
    let first_timeout = skip.into_inner().unwrap_or_default();
    let mut summary = RunSummary::default();
    let mut results: Vec<RunResult> = collected.into_iter().flat_map(|(_, _, r)| r).collect();
    for r in &mut results {
        let solver: Solver = r.row.solver.parse()?;
        if let Some(&a) = first_timeout.get(&(r.row.instance, solver)) {
            if r.row.alpha > a && r.row.status != "skipped" {
                let (inst, alpha) = (r.row.instance, r.row.alpha);
                *r = RunResult::new(inst, alpha, solver).fail("skipped", "an earlier alpha timed out");
            }
        }
    }
    for r in &results {
        let (inst, b) = (r.row.instance, &sets[r.row.instance]);
        let stem = format!("inst{}_alpha{}_{}", inst, alpha_tag(r.row.alpha), r.row.solver);
        if let Some(s) = &r.solution {
            let sagitta = cfg.sagitta.unwrap_or(1e-3 * b.diameter());
            let mut props = Map::new();
            props.insert("instance".into(), json!(inst));
            props.insert("alpha".into(), json!(r.row.alpha));
            props.insert("solver".into(), json!(r.row.solver));
            props.insert("source_polygons".into(), json!(instances[inst].source));
            write_file(&cfg.out.join(format!("{stem}.geojson")), &solution_to_geojson(s, sagitta, &props), &mut summary.files)?;
            if cfg.svg {
                write_file(&cfg.out.join(format!("{stem}.svg")), &solution_to_svg(b, s), &mut summary.files)?;
            }
        }
        if let Some(lp) = &r.lp {
            write_file(&cfg.out.join(format!("{stem}.lp")), lp, &mut summary.files)?;
        }
    }
    summary.rows = results.into_iter().map(|r| r.row).collect();
    fill_ratios(&mut summary.rows);
    let csv_path = cfg.out.join("metrics.csv");
    let file = std::fs::File::create(&csv_path).map_err(|e| IoError::Io(format!("{}: {e}", csv_path.display())))?;
    write_metrics(std::io::BufWriter::new(file), &summary.rows)?;
    summary.files.push(csv_path);
    Ok(summary)
}

#[cfg(test)]
mod tests;
