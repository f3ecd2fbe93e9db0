mod common;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use common::{discretize, inf_norm, jittered_square};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stagdg::assembly::Operators;
use stagdg::basis::{DualBasis, PrimalBasis, SpaceTimeBasis, TimeBasis};
use stagdg::io::{self, Options, RunConfig};
use stagdg::mesh::{generate, PeriodicBox, StaggeredMesh};
use stagdg::scenarios::{PlaneWaveParams, ScenarioSpec};
use stagdg::scheme::{Discretization, Mode, SchurOperator, Simulation, State};
use stagdg::solver::{materialize, KrylovConfig, Method, PreconditionerKind};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn solver(mode: Mode, tol: f64) -> KrylovConfig {
    KrylovConfig {
        method: if mode == Mode::CrankNicolson { Method::Cg } else { Method::Gmres },
        tol,
        ..KrylovConfig::default()
    }
}

fn simulation(disc: Discretization, state: State, tol: f64) -> Simulation {
    let mode = disc.mode;
    Simulation::new(disc, state, &[], solver(mode, tol), PreconditionerKind::None).unwrap()
}

fn plane_wave() -> ScenarioSpec {
    ScenarioSpec::PsConvergence(PlaneWaveParams::default())
}

fn configs() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn convergence() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for p in 1..=2 {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::load(configs().join("ps_convergence.toml")).unwrap();
        cfg.p = p;
        cfg.p_time = p;
        let start = Instant::now();
        let meshes = ["square:14".to_string(), "square:28".to_string()];
        let r = io::convergence(&cfg, Path::new("."), &meshes, &Options { reproducible: false, output_dir: Some(dir.path().into()) })
            .unwrap();
        let wall = start.elapsed().as_secs_f64();
        let orders = r.rows[1].orders;
        let lo = p as f64 + 0.7;
        let hi = p as f64 + 1.5;
        let ok = orders.iter().all(|o| (lo..=hi).contains(o)) && wall < 600.0;
        pass &= ok;
        lines.push(format!(
            "p={p} ({} -> {} triangles) orders u {:.2} v {:.2} sxx {:.2} syy {:.2} sxy {:.2} in [{lo:.1}, {hi:.1}], {wall:.0} s",
            r.rows[0].elements, r.rows[1].elements, orders[0], orders[1], orders[2], orders[3], orders[4]
        ));
    }
    outcome(pass, lines.join("; "))
}

fn cn_energy() -> Outcome {
    let disc = discretize(generate::periodic_square(8, -1.5, 1.5, false), 2, 0, 0.1, Mode::CrankNicolson);
    let state = plane_wave().init_state(&disc).unwrap();
    let mut sim = simulation(disc, state, 1e-12);
    let e0 = sim.energy().total();
    sim.run(100).unwrap();
    let drift = (sim.energy().total() - e0).abs() / e0;
    outcome(drift <= 1e-8, format!("relative drift {drift:.2e} after 100 steps"))
}

fn random_smooth_state(disc: &Discretization, seed: u64) -> State {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<([f64; 2], f64, [f64; 5])> = (0..4)
        .map(|_| {
            let k = [rng.random_range(-2i32..=2) as f64, rng.random_range(-2i32..=2) as f64];
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            let amp = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            (k, phase, amp)
        })
        .collect();
    let field = move |x: [f64; 2]| {
        let mut u = [0.0; 5];
        for (k, ph, a) in &modes {
            let s = (std::f64::consts::TAU / 3.0 * (k[0] * x[0] + k[1] * x[1]) + ph).sin();
            for i in 0..5 {
                u[i] += a[i] * s;
            }
        }
        u
    };
    let g = field.clone();
    disc.project(
        move |x| {
            let u = field(x);
            [u[3], u[4]]
        },
        move |x| {
            let u = g(x);
            [u[0], u[1], u[2]]
        },
    )
    .unwrap()
}

fn energy_stability() -> Outcome {
    let disc = discretize(jittered_square(5, 8), 2, 1, 0.1, Mode::SpaceTime);
    let state = random_smooth_state(&disc, 43);
    let tol = 1e-12;
    let mut sim = simulation(disc, state, tol);
    let e0 = sim.energy().total();
    let mut prev = e0;
    let (mut worst_rise, mut worst_identity) = (f64::NEG_INFINITY, 0.0f64);
    for _ in 0..100 {
        let r = sim.step().unwrap();
        let e = r.energy.total();
        worst_rise = worst_rise.max((e - prev) / e0);
        worst_identity = worst_identity.max((e - prev + r.jump.total()).abs() / prev);
        prev = e;
    }
    outcome(
        worst_rise <= 10.0 * tol && worst_identity <= 1e-9,
        format!("max (E_n+1 - E_n)/E0 {worst_rise:.2e}, jump identity {worst_identity:.2e}, E100/E0 {:.6}", prev / e0),
    )
}

fn symmetry() -> Outcome {
    let mesh = generate::structured_rect(4, 2, [0.0, 2.0], [0.0, 1.0], true).with_periodic(Some(PeriodicBox {
        xmin: 0.0,
        xmax: 2.0,
        ymin: 0.0,
        ymax: 1.0,
    }));
    let mut pass = true;
    let mut lines = Vec::new();
    for p in 1..=2 {
        let disc = discretize(mesh.clone(), p, 0, 0.1, Mode::CrankNicolson);
        let a = materialize(&SchurOperator::new(&disc), 20000).unwrap();
        let defect = inf_norm(&(&a - a.transpose())) / inf_norm(&a);
        let chol = a.clone().cholesky().is_some();
        pass &= defect <= 1e-12 && chol;
        lines.push(format!("p={p} n={} asymmetry {defect:.1e} cholesky {chol}", a.nrows()));
    }
    outcome(pass, format!("{} triangles: {}", mesh.n_elements(), lines.join(", ")))
}

fn adjointness() -> Outcome {
    let mesh = generate::jitter(&generate::structured_rect(8, 4, [0.0, 2.0], [0.0, 1.0], true), 0.25, 0.2, 3).unwrap();
    let m = StaggeredMesh::new(mesh).unwrap();
    let mut worst = 0.0f64;
    for p in 1..=3 {
        for pt in 0..=2 {
            let basis = SpaceTimeBasis::new(p, pt).unwrap();
            let ops = Operators::assemble(&m, &basis, 0.07).unwrap();
            for i in 0..m.n_elements() {
                for k in 0..3 {
                    for b in 0..2 {
                        let d = ops.flux_d(i, k, b);
                        let q = ops.flux_q(i, k, b);
                        let scale = d.amax().max(q.amax());
                        worst = worst.max((&q + d.transpose()).amax() / scale);
                    }
                }
            }
        }
    }
    outcome(worst <= 1e-12, format!("{} triangles, max |Q + D^T| / max |D| = {worst:.1e}", m.n_elements()))
}

fn slivers() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::load(configs().join("slivers.toml")).unwrap();
    let r = io::slivers(&cfg, Path::new("."), &Options { reproducible: false, output_dir: Some(dir.path().into()) }).unwrap();
    let none = r.row(PreconditionerKind::None).unwrap();
    let pre1 = r.row(PreconditionerKind::Pre1).unwrap();
    let pre2 = r.row(PreconditionerKind::Pre2).unwrap();
    let checks = [
        ("None ratio >= 3", none.ratio >= 3.0),
        ("Pre1 ratio <= 2", pre1.ratio <= 2.0),
        ("Pre2 ratio <= 1.2", pre2.ratio <= 1.2),
        (
            "None > Pre1 > Pre2 on mesh2",
            none.iterations[1] > pre1.iterations[1] && pre1.iterations[1] > pre2.iterations[1],
        ),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let rows = [("None", none), ("Pre1", pre1), ("Pre2", pre2)]
        .iter()
        .map(|(n, row)| format!("{n} {:.2}/{:.2} = {:.2}", row.iterations[0], row.iterations[1], row.ratio))
        .collect::<Vec<_>>()
        .join(", ");
    let failed = if failed.is_empty() { String::new() } else { format!("; failed: {}", failed.join(", ")) };
    outcome(
        checks.iter().all(|c| c.1),
        format!(
            "{} triangles, incircle ratio {:.1}; {rows}{failed}",
            r.elements,
            r.min_incircle[0] / r.min_incircle[1]
        ),
    )
}

fn unconditional_stability() -> Outcome {
    let n = 6;
    let h = 3.0 / n as f64;
    let p = 2;
    let cp = 2.0;
    let dt = 50.0 * h / (cp * (2 * p + 1) as f64);
    let disc = discretize(generate::periodic_square(n, -1.5, 1.5, false), p, 1, dt, Mode::SpaceTime);
    let state = plane_wave().init_state(&disc).unwrap();
    let sup = |s: &State| s.velocity.iter().chain(&s.stress).fold(0.0f64, |m, v| m.max(v.abs()));
    let s0 = sup(&state);
    let mut sim = simulation(disc, state, 1e-10);
    let e0 = sim.energy().total();
    let (mut worst_sup, mut worst_e) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        sim.step().unwrap();
        worst_sup = worst_sup.max(sup(&sim.state) / s0);
        worst_e = worst_e.max(sim.energy().total() / e0);
    }
    outcome(
        worst_sup <= 10.0 && worst_e <= 1.0 + 1e-6,
        format!("dt = {dt:.3}, max sup ratio {worst_sup:.3}, max E/E0 {worst_e:.6}"),
    )
}

fn rigid_motion() -> Outcome {
    let mut pass = true;
    let mut worst = 0.0f64;
    for (mode, pt) in [(Mode::CrankNicolson, 0), (Mode::SpaceTime, 1), (Mode::SpaceTime, 2)] {
        let disc = discretize(jittered_square(4, 7), 2, pt, 0.2, mode);
        let state = disc.project(|_| [0.3, -0.7], |_| [0.0; 3]).unwrap();
        let mut sim = simulation(disc, state.clone(), 1e-12);
        sim.run(10).unwrap();
        let dv = sim.state.velocity.iter().zip(&state.velocity).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max);
        let s = sim.state.stress.iter().map(|v| v.abs()).fold(0.0, f64::max);
        worst = worst.max(dv).max(s);
        pass &= dv <= 1e-10 && s <= 1e-10;
    }
    outcome(pass, format!("max deviation after 10 steps {worst:.1e}"))
}

/// Five-point Gauss–Legendre rule on [-1, 1].
const GL5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

fn basis() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut nodal, mut unity, mut grad, mut ortho) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in 1..=6 {
        let pb = PrimalBasis::new(p).unwrap();
        let db = DualBasis::new(p).unwrap();
        let mut v = vec![0.0; pb.len()];
        for (m, &x) in pb.nodes().iter().enumerate() {
            pb.eval(x, &mut v);
            for (k, &vk) in v.iter().enumerate() {
                nodal = nodal.max((vk - if k == m { 1.0 } else { 0.0 }).abs());
            }
        }
        let mut w = vec![0.0; db.len()];
        for (m, x) in db.nodes().into_iter().enumerate() {
            db.eval(x, &mut w);
            for (k, &wk) in w.iter().enumerate() {
                nodal = nodal.max((wk - if k == m { 1.0 } else { 0.0 }).abs());
            }
        }
        let mut g = vec![[0.0; 2]; pb.len()];
        let (mut vp, mut vm) = (vec![0.0; pb.len()], vec![0.0; pb.len()]);
        for _ in 0..100 {
            let (a, b): (f64, f64) = (rng.random(), rng.random());
            let x = if a + b > 1.0 { [1.0 - a, 1.0 - b] } else { [a, b] };
            pb.eval(x, &mut v);
            unity = unity.max((v.iter().sum::<f64>() - 1.0).abs());
            db.eval([a, b], &mut w);
            unity = unity.max((w.iter().sum::<f64>() - 1.0).abs());
            let x = [0.05 + 0.8 * x[0], 0.05 + 0.8 * x[1]];
            pb.grad(x, &mut g);
            let step = 1e-6;
            for d in 0..2 {
                let (mut xp, mut xm) = (x, x);
                xp[d] += step;
                xm[d] -= step;
                pb.eval(xp, &mut vp);
                pb.eval(xm, &mut vm);
                for k in 0..pb.len() {
                    let fd = (vp[k] - vm[k]) / (2.0 * step);
                    grad = grad.max((fd - g[k][d]).abs() / g[k][d].abs().max(1.0));
                }
            }
        }
    }
    for pt in 0..=4 {
        let t = TimeBasis::new(pt).unwrap();
        let n = t.len();
        let mut gv = vec![0.0; n];
        let mut gram = DMatrix::<f64>::zeros(n, n);
        for &(x, wt) in &GL5 {
            t.eval(0.5 * (x + 1.0), &mut gv);
            for a in 0..n {
                for b in 0..n {
                    gram[(a, b)] += 0.5 * wt * gv[a] * gv[b];
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let want = if a == b { t.weights()[a] } else { 0.0 };
                ortho = ortho.max((gram[(a, b)] - want).abs());
            }
        }
    }
    outcome(
        nodal <= 1e-12 && unity <= 1e-12 && grad <= 1e-6 && ortho <= 1e-13,
        format!("nodal {nodal:.1e}, partition of unity {unity:.1e}, gradient {grad:.1e}, time orthogonality {ortho:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("convergence orders", convergence),
        ("Crank-Nicolson energy conservation", cn_energy),
        ("space-time energy stability", energy_stability),
        ("symmetric positive definite CN operator", symmetry),
        ("gradient/divergence adjointness", adjointness),
        ("sliver iteration study", slivers),
        ("unconditional stability", unconditional_stability),
        ("rigid motion", rigid_motion),
        ("basis and quadrature", basis),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|w| name.contains(w.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} [{}] {name}: {} ({:.1} s)", k + 1, o.detail, start.elapsed().as_secs_f64());
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
