use std::path::{Path, PathBuf};
use std::process::Command;

use proptest::prelude::*;
use stagdg::io::{self, discretize, write_fields, Options, RunConfig, SEISMOGRAM_HEADER};
use stagdg::scenarios::{CustomParams, MeshSpec, PlaneWaveParams, Receiver, ScenarioSpec, SliverParams};
use stagdg::scheme::{BoundaryCondition, Mode};
use stagdg::solver::PreconditionerKind;

fn square(n: usize) -> MeshSpec {
    MeshSpec::PeriodicSquare {
        n,
        lo: -1.5,
        hi: 1.5,
        alternate: false,
        jitter: 0.0,
        seed: 0,
    }
}

fn small_run(p: usize, dt: f64, t_end: f64) -> RunConfig {
    let mut cfg = RunConfig::new(ScenarioSpec::PsConvergence(PlaneWaveParams::default()), p, 1, dt, t_end);
    cfg.mesh = Some(square(4));
    cfg
}

fn opts(dir: &Path) -> Options {
    Options {
        reproducible: true,
        output_dir: Some(dir.to_path_buf()),
    }
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn header_and_rows(path: &Path) -> (Vec<String>, usize) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let h = r.headers().unwrap().iter().map(str::to_string).collect();
    (h, r.records().count())
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn shipped_configs_are_valid() {
    let mut n = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let cfg = RunConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(RunConfig::parse(&cfg.to_toml().unwrap()).unwrap(), cfg);
            n += 1;
        }
    }
    assert!(n >= 5);
}

#[test]
fn cn_with_linear_time_basis_is_rejected() {
    let text = "p = 2\np_time = 1\nmode = \"cn\"\ndt = 0.1\nt_end = 1.0\n[scenario]\nkind = \"ps_convergence\"\n";
    let err = RunConfig::parse(text).unwrap_err();
    assert!(matches!(err, stagdg::Error::Config(_)), "{err}");
}

#[test]
fn run_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_run(1, 0.05, 0.5);
    cfg.output.field_every = 5;
    cfg.output.level = 1;
    cfg.receivers = Some(vec![Receiver::new("a", [0.1, 0.2]), Receiver::new("b", [-1.0, 0.7])]);
    let s = io::run(&cfg, Path::new("."), &opts(dir.path())).unwrap();
    assert_eq!(s.steps, 10);
    let (h, rows) = read_csv(&dir.path().join("energy.csv"));
    assert_eq!(h, ["t", "kinetic", "elastic", "total"]);
    assert_eq!(rows.len(), 11);
    for r in &rows {
        assert!((r[1] + r[2] - r[3]).abs() <= 1e-14 * r[3]);
    }
    let (h, rows) = read_csv(&dir.path().join("stats.csv"));
    assert_eq!(h, ["step", "t", "iterations", "residual"]);
    assert_eq!(rows.len(), 10);
    for id in ["a", "b"] {
        let (h, rows) = read_csv(&dir.path().join(format!("receiver_{id}.csv")));
        assert_eq!(h, SEISMOGRAM_HEADER);
        assert_eq!(rows.len(), 11);
    }
    for step in [0, 5, 10] {
        assert!(dir.path().join(format!("fields_{step:06}.vtk")).is_file());
    }
}

#[test]
fn seismogram_rows_follow_floor_of_step_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_run(1, 0.05, 0.52);
    cfg.receivers = Some(vec![Receiver::new("r", [0.3, -0.4])]);
    io::run(&cfg, Path::new("."), &opts(dir.path())).unwrap();
    let (_, rows) = read_csv(&dir.path().join("receiver_r.csv"));
    assert_eq!(rows.len(), (0.52f64 / 0.05).floor() as usize + 1);
    assert!((rows[10][0] - 0.5).abs() < 1e-12);
}

#[test]
fn zero_run_records_zero_columns() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = ScenarioSpec::Custom(CustomParams {
        bc: BoundaryCondition::Periodic,
        receivers: vec![Receiver::new("z", [0.2, 0.1])],
        ..CustomParams::default()
    });
    let mut cfg = RunConfig::new(scenario, 2, 1, 0.1, 0.3);
    cfg.mesh = Some(square(3));
    io::run(&cfg, Path::new("."), &opts(dir.path())).unwrap();
    let (_, rows) = read_csv(&dir.path().join("receiver_z.csv"));
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[1..].iter().all(|&v| v == 0.0)));
}

#[test]
fn seismogram_at_a_node_matches_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_run(3, 0.05, 0.1);
    let mesh = cfg.mesh_spec().build(Path::new(".")).unwrap();
    let e = 5;
    let x = mesh.barycenter(e);
    cfg.receivers = Some(vec![Receiver::new("n", x)]);
    io::run(&cfg, Path::new("."), &opts(dir.path())).unwrap();
    let (_, rows) = read_csv(&dir.path().join("receiver_n.csv"));

    let disc = discretize(&cfg, mesh.clone(), cfg.dt).unwrap();
    let node = disc.basis.primal.nodes().iter().position(|n| (n[0] - 1.0 / 3.0).abs() < 1e-14 && (n[1] - 1.0 / 3.0).abs() < 1e-14);
    let node = node.expect("cubic basis has a barycentric node");
    let nphi = disc.basis.n_phi();
    let mut sim = io::simulation(&cfg, mesh, cfg.dt, cfg.solver.preconditioner, &Options { reproducible: true, output_dir: None }).unwrap();
    for row in &rows {
        if row[0] > 0.0 {
            sim.step().unwrap();
        }
        let trace = sim.disc.velocity_trace(&sim.state.velocity, 1.0);
        let u = trace[2 * e * nphi + node];
        let v = trace[(2 * e + 1) * nphi + node];
        assert!((row[1] - u).abs() <= 1e-12, "{} vs {u}", row[1]);
        assert!((row[2] - v).abs() <= 1e-12, "{} vs {v}", row[2]);
    }
}

/// Minimal legacy-VTK reader: point count, cell count and named point scalars.
struct Vtk {
    points: Vec<[f64; 2]>,
    cells: usize,
    scalars: Vec<(String, Vec<f64>)>,
}

fn parse_vtk(text: &str) -> Vtk {
    let mut lines = text.lines();
    let mut points = Vec::new();
    let mut cells = 0;
    let mut scalars = Vec::new();
    let mut n_point_data = 0;
    while let Some(line) = lines.next() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("POINTS") => {
                let n: usize = it.next().unwrap().parse().unwrap();
                for _ in 0..n {
                    let v: Vec<f64> = lines.next().unwrap().split_whitespace().map(|s| s.parse().unwrap()).collect();
                    points.push([v[0], v[1]]);
                }
            }
            Some("CELLS") => cells = it.next().unwrap().parse().unwrap(),
            Some("POINT_DATA") => n_point_data = it.next().unwrap().parse().unwrap(),
            Some("SCALARS") if n_point_data > 0 => {
                let name = it.next().unwrap().to_string();
                lines.next();
                let vals = (0..n_point_data).map(|_| lines.next().unwrap().trim().parse().unwrap()).collect();
                scalars.push((name, vals));
            }
            _ => {}
        }
    }
    Vtk { points, cells, scalars }
}

#[test]
fn vtk_of_constant_state() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_run(2, 0.1, 0.1);
    cfg.mode = Mode::CrankNicolson;
    cfg.p_time = 0;
    let mesh = cfg.mesh_spec().build(Path::new(".")).unwrap();
    let n = mesh.n_elements();
    let disc = discretize(&cfg, mesh, cfg.dt).unwrap();
    let state = disc.project(|_| [0.25, -1.5], |_| [3.0, 0.5, -0.125]).unwrap();
    let path = dir.path().join("c.vtk");
    write_fields(&disc, &state, 1, &path).unwrap();
    let vtk = parse_vtk(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(vtk.points.len(), 3 * n);
    assert_eq!(vtk.cells, n);
    let want = [("u", 0.25), ("v", -1.5), ("sxx", 3.0), ("syy", 0.5), ("sxy", -0.125)];
    assert_eq!(vtk.scalars.len(), 5);
    for ((name, vals), (wname, w)) in vtk.scalars.iter().zip(want) {
        assert_eq!(name, wname);
        assert!(vals.iter().all(|&v| (v - w).abs() <= 1e-8 * w.abs()), "{name}");
    }
}

#[test]
fn vtk_round_trip_to_nine_digits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_run(2, 0.05, 0.1);
    let mesh = cfg.mesh_spec().build(Path::new(".")).unwrap();
    let disc = discretize(&cfg, mesh, cfg.dt).unwrap();
    let state = cfg.scenario.init_state(&disc).unwrap();
    let path = dir.path().join("f.vtk");
    write_fields(&disc, &state, 3, &path).unwrap();
    let vtk = parse_vtk(&std::fs::read_to_string(&path).unwrap());
    let samples = io::sample_fields(&disc, &state, 3);
    assert_eq!(vtk.points.len(), samples.len());
    assert_eq!(vtk.cells, 9 * disc.n_elements());
    let close = |a: f64, b: f64| (a - b).abs() <= 5e-9 * b.abs() + 1e-300;
    for (k, s) in samples.iter().enumerate() {
        assert!(close(vtk.points[k][0], s[0]) && close(vtk.points[k][1], s[1]));
        for c in 0..5 {
            assert!(close(vtk.scalars[c].1[k], s[2 + c]), "{} {} {}", vtk.scalars[c].0, vtk.scalars[c].1[k], s[2 + c]);
        }
    }
}

#[test]
fn identical_meshes_give_undefined_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_run(1, 0.05, 0.1);
    let meshes = vec!["square:3".to_string(), "square:3".to_string()];
    let r = io::convergence(&cfg, Path::new("."), &meshes, &opts(dir.path())).unwrap();
    assert_eq!(r.rows.len(), 2);
    assert!(r.rows[1].orders.iter().all(|o| o.is_nan()));
    assert_eq!(r.warnings.len(), 1);
    let (h, n) = header_and_rows(&dir.path().join("convergence.csv"));
    assert_eq!(h, io::CONVERGENCE_HEADER);
    assert_eq!(n, 2);
}

#[test]
fn convergence_needs_two_meshes() {
    let cfg = small_run(1, 0.05, 0.1);
    let dir = tempfile::tempdir().unwrap();
    assert!(io::convergence(&cfg, Path::new("."), &["square:3".to_string()], &opts(dir.path())).is_err());
}

#[test]
fn sliver_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::new(ScenarioSpec::SliverStudy(SliverParams::default()), 1, 1, 0.014, 0.014);
    let r = io::slivers(&cfg, Path::new("."), &opts(dir.path())).unwrap();
    assert_eq!(r.rows.len(), 3);
    assert_eq!(r.steps, 1);
    let ratio = r.min_incircle[0] / r.min_incircle[1];
    assert!((50.0..=90.0).contains(&ratio));
    for row in &r.rows {
        assert!((row.ratio - row.iterations[1] / row.iterations[0]).abs() < 1e-15);
    }
    assert!(r.row(PreconditionerKind::Pre2).is_some());
    let (h, n) = header_and_rows(&dir.path().join("slivers.csv"));
    assert_eq!(h, io::SLIVER_HEADER);
    assert_eq!(n, 3);
    let (h, n) = header_and_rows(&dir.path().join("slivers_history.csv"));
    assert_eq!(h, io::SLIVER_HISTORY_HEADER);
    assert_eq!(n, 6);
    let other = small_run(1, 0.05, 0.1);
    assert!(io::slivers(&other, Path::new("."), &opts(dir.path())).is_err());
}

#[test]
fn cli_runs_a_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_run(1, 0.05, 0.2);
    let path = dir.path().join("run.toml");
    cfg.save(&path).unwrap();
    let out = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_stagdg"))
        .args(["--threads", "2", "--reproducible", "--output-dir"])
        .arg(&out)
        .arg("run")
        .arg(&path)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let stdout = String::from_utf8_lossy(&status.stdout);
    assert!(stdout.contains("steps            4"), "{stdout}");
    assert!(out.join("energy.csv").is_file());

    let conv = Command::new(env!("CARGO_BIN_EXE_stagdg"))
        .args(["convergence", "--meshes", "square:2,square:4", "--output-dir"])
        .arg(&out)
        .arg(&path)
        .output()
        .unwrap();
    assert!(conv.status.success(), "{}", String::from_utf8_lossy(&conv.stderr));
    assert!(out.join("convergence.csv").is_file());

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "p = 0\ndt = 0.1\nt_end = 1.0\n[scenario]\nkind = \"ps_convergence\"\n").unwrap();
    let fail = Command::new(env!("CARGO_BIN_EXE_stagdg")).arg("run").arg(&bad).output().unwrap();
    assert!(!fail.status.success());
    assert!(String::from_utf8_lossy(&fail.stderr).contains("error"));
}

fn config_strategy() -> impl Strategy<Value = RunConfig> {
    let scenarios = ScenarioSpec::builtins();
    (
        0..scenarios.len(),
        1usize..=4,
        0usize..=3,
        prop::bool::ANY,
        1e-4f64..1.0,
        1.0f64..20.0,
        1e-12f64..1e-3,
        0usize..3,
        prop::option::of(2usize..20),
    )
        .prop_map(move |(s, p, pt, cn, dt, factor, tol, pre, mesh)| {
            let mut cfg = RunConfig::new(scenarios[s].clone(), p, pt, dt, dt * factor);
            if cn {
                cfg.mode = Mode::CrankNicolson;
                cfg.p_time = 0;
            }
            cfg.solver.tol = tol;
            cfg.solver.preconditioner = [PreconditionerKind::None, PreconditionerKind::Pre1, PreconditionerKind::Pre2][pre];
            cfg.mesh = mesh.map(square);
            cfg
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trip(cfg in config_strategy()) {
        let text = cfg.to_toml().unwrap();
        let back = RunConfig::parse(&text).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
