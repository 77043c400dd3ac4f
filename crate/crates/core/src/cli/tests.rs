use super::*;
use std::fs;

const TWO_SQUARES: &str = "POLYGON ((0 0, 1 0, 1 1, 0 1, 0 0))\nPOLYGON ((1.5 0, 2.5 0, 2.5 1, 1.5 1, 1.5 0))\n";

fn config(dir: &Path, input: &str, alphas: Vec<f64>, solvers: &[Solver]) -> RunConfig {
    let path = dir.join("input.wkt");
    fs::write(&path, input).unwrap();
    RunConfig {
        input: path,
        format: InputFormat::Wkt,
        alphas,
        solvers: solvers.to_vec(),
        out: dir.join("out"),
        sagitta: None,
        time_limit: None,
        threads: 1,
        epsilon: EPS,
        svg: true,
    }
    .normalize()
    .unwrap()
}

fn csv_without_runtime(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    let col = METRICS_RUNTIME;
    text.lines()
        .map(|l| l.split(',').enumerate().filter(|&(i, _)| i != col).map(|(_, x)| x).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
}

const METRICS_RUNTIME: usize = 9;

#[test]
fn default_sweep_has_39_values() {
    let s = default_sweep();
    assert_eq!(s.len(), 39);
    assert_eq!(s[..3], [0.0, 1.0, 2.0]);
    assert_eq!(s[19], 19.0);
    assert_eq!(s[20], 20.0);
    assert_eq!(*s.last().unwrap(), 200.0);
    assert!(s.windows(2).all(|w| w[0] < w[1]));
    let mut parsed = parse_sweep("0:19:1, 20:200:10").unwrap();
    parsed.dedup();
    assert_eq!(parsed, s);
}

#[test]
fn sweep_parse_errors() {
    assert!(parse_sweep("0:10").is_err());
    assert!(parse_sweep("0:10:0").is_err());
    assert!(parse_sweep("5:1:1").is_err());
    assert!(parse_sweep("a:b:c").is_err());
    assert_eq!(parse_sweep("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
}

#[test]
fn config_is_normalized_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), TWO_SQUARES, vec![3.0, 1.0, 3.0, 0.0], &[Solver::ApproxLine, Solver::Unrestricted]);
    assert_eq!(cfg.alphas, vec![0.0, 1.0, 3.0]);
    assert_eq!(cfg.solvers, vec![Solver::Unrestricted, Solver::ApproxLine]);
    let bad = |f: &dyn Fn(&mut RunConfig)| {
        let mut c = cfg.clone();
        f(&mut c);
        c.normalize().is_err()
    };
    assert!(bad(&|c| c.alphas = vec![-1.0]));
    assert!(bad(&|c| c.alphas = vec![f64::NAN]));
    assert!(bad(&|c| c.alphas.clear()));
    assert!(bad(&|c| c.sagitta = Some(0.0)));
    assert!(bad(&|c| c.time_limit = Some(-1.0)));
    assert!(bad(&|c| c.epsilon = 0.0));
    assert!(bad(&|c| c.solvers.clear()));
    assert!("simplex".parse::<Solver>().is_err());
}

#[test]
fn args_parse_into_config() {
    let a = Args::try_parse_from(["polyagg", "--input", "x.wkt", "--alphas", "2,0.5", "--solvers", "unrestricted,brute-force"]).unwrap();
    let c = a.into_config().unwrap();
    assert_eq!(c.format, InputFormat::Wkt);
    assert_eq!(c.alphas, vec![0.5, 2.0]);
    assert_eq!(c.solvers, vec![Solver::Unrestricted, Solver::BruteForce]);
    let a = Args::try_parse_from(["polyagg", "--input", "x.json", "--sweep", "default"]).unwrap();
    let c = a.into_config().unwrap();
    assert_eq!(c.format, InputFormat::GeoJson);
    assert_eq!(c.alphas.len(), 39);
    assert!(Args::try_parse_from(["polyagg", "--input", "x", "--alphas", "1", "--sweep", "default"]).is_err());
}

#[test]
fn alpha_zero_reproduces_input_with_unit_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), TWO_SQUARES, vec![0.0], &Solver::ALL);
    let s = run(&cfg).unwrap();
    assert_eq!(s.failures(), 0, "{:?}", s.rows);
    for r in &s.rows {
        if r.solver == "ilp-export" && r.objective.is_none() {
            continue;
        }
        assert!((r.area.unwrap() - 2.0).abs() < 1e-9, "{r:?}");
        assert!((r.perimeter.unwrap() - 8.0).abs() < 1e-9, "{r:?}");
        assert_eq!(r.line_ratio, Some(1.0));
        assert_eq!(r.vertex_ratio, Some(1.0));
        assert_eq!(r.vertex_optimum_ratio, Some(1.0));
    }
    assert!(dir.path().join("out/inst0_alpha0_unrestricted.geojson").exists());
    assert!(dir.path().join("out/inst0_alpha0_unrestricted.svg").exists());
    assert!(dir.path().join("out/inst0_alpha0_ilp-export.lp").exists());
    let csv = fs::read_to_string(dir.path().join("out/metrics.csv")).unwrap();
    assert!(csv.starts_with("instance,alpha,solver,status,"));
    assert!(!csv.contains('\r'));
}

#[test]
fn two_squares_sweep_merges_at_threshold() {
    // Gap 0.5 between unit squares: the merge happens once the four
    // boundary pieces save more than the gap area costs.
    let dir = tempfile::tempdir().unwrap();
    let alphas: Vec<f64> = parse_sweep("0:4:0.25").unwrap();
    let cfg = config(dir.path(), TWO_SQUARES, alphas, &[Solver::Unrestricted, Solver::SubdivisionDt]);
    let s = run(&cfg).unwrap();
    assert_eq!(s.failures(), 0);
    let series = |name: &str| -> Vec<&MetricsRow> { s.rows.iter().filter(|r| r.solver == name).collect() };
    for name in ["unrestricted", "subdivision-dt"] {
        let rows = series(name);
        for w in rows.windows(2) {
            assert!(w[1].area.unwrap() >= w[0].area.unwrap() - 1e-9, "{name}: area decreased");
            assert!(w[1].perimeter.unwrap() <= w[0].perimeter.unwrap() + 1e-9, "{name}: perimeter increased");
        }
        assert!((rows[0].area.unwrap() - 2.0).abs() < 1e-9);
        assert!(rows.last().unwrap().area.unwrap() > 2.0, "{name} never merged");
    }
    // The vertex-restricted threshold for this gap is 2α/(1+2α) = 0.5, i.e. α = 0.5.
    let dt = series("subdivision-dt");
    let merged = |r: &MetricsRow| r.area.unwrap() > 2.0 + 1e-9;
    assert!(!merged(dt.iter().find(|r| r.alpha == 0.25).unwrap()));
    assert!(merged(dt.iter().find(|r| r.alpha == 0.75).unwrap()));
    let cells: Vec<usize> = series("unrestricted").iter().map(|r| r.cells.unwrap()).collect();
    let last = *cells.last().unwrap();
    assert!(cells.iter().rev().take(4).all(|&c| c == last), "cell count should plateau: {cells:?}");
}

#[test]
fn reruns_are_byte_identical_except_runtime() {
    let dir = tempfile::tempdir().unwrap();
    let input = "POLYGON ((0 0, 2 0, 2 1, 0 1, 0 0))\nPOLYGON ((0 1.4, 1 1.4, 1 3, 0 3, 0 1.4))\nPOLYGON ((1.6 1.5, 3 1.5, 3 2.5, 1.6 2.5, 1.6 1.5))\n";
    let solvers = [Solver::Unrestricted, Solver::ApproxLine, Solver::ApproxVertex, Solver::SubdivisionDt];
    let mut cfg = config(dir.path(), input, vec![0.5, 1.0, 2.0], &solvers);
    cfg.threads = 2;
    let first = run(&cfg).unwrap();
    let snapshot: Vec<(PathBuf, Vec<u8>)> = first.files.iter().map(|p| (p.clone(), fs::read(p).unwrap())).collect();
    let csv1 = csv_without_runtime(&cfg.out.join("metrics.csv"));
    fs::remove_dir_all(&cfg.out).unwrap();
    cfg.threads = 1;
    let second = run(&cfg).unwrap();
    assert_eq!(first.files, second.files);
    for (p, bytes) in snapshot {
        if p.ends_with("metrics.csv") {
            continue;
        }
        assert_eq!(fs::read(&p).unwrap(), bytes, "{} differs", p.display());
    }
    assert_eq!(csv_without_runtime(&cfg.out.join("metrics.csv")), csv1);
}

#[test]
fn timeout_skips_larger_alphas() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), TWO_SQUARES, vec![1.0, 2.0, 3.0], &[Solver::Unrestricted]);
    cfg.time_limit = Some(1e-9);
    let s = run(&cfg).unwrap();
    let status: Vec<&str> = s.rows.iter().map(|r| r.status.as_str()).collect();
    assert_eq!(status[0], "timeout");
    assert!(status[1..].iter().all(|&x| x == "skipped"), "{status:?}");
    assert_eq!(s.failures(), 3);
}

#[test]
fn holes_become_separate_instances() {
    let dir = tempfile::tempdir().unwrap();
    let input = "POLYGON ((0 0, 10 0, 10 10, 0 10, 0 0), (2 2, 8 2, 8 8, 2 8, 2 2))\nPOLYGON ((4 4, 5 4, 5 5, 4 5, 4 4))\n";
    let cfg = config(dir.path(), input, vec![1.0], &[Solver::Unrestricted]);
    let s = run(&cfg).unwrap();
    assert_eq!(s.rows.len(), 2);
    assert!((s.rows[0].area.unwrap() - 100.0).abs() < 1e-9);
    assert!((s.rows[1].area.unwrap() - 1.0).abs() < 1e-9);
}
