mod common;

use common::discretize;
use stagdg::io::{simulation, Options, RunConfig};
use stagdg::mesh::generate;
use stagdg::scenarios::{l2_error, sliver_meshes, PlaneWaveParams, ScenarioSpec, SliverParams};
use stagdg::scheme::{Discretization, Mode, State};
use stagdg::solver::PreconditionerKind;

fn ps(params: PlaneWaveParams) -> ScenarioSpec {
    ScenarioSpec::PsConvergence(params)
}

fn sample(disc: &Discretization, state: &State, x: [f64; 2]) -> [f64; 5] {
    let e = disc.mesh.primal.locate_closed(x).unwrap();
    let k = disc.covering_edge(e, x);
    let v = disc.velocity_at(state, e, x, 1.0);
    let s = disc.stress_at(state, e, k, x, 1.0);
    [s[0], s[1], s[2], v[0], v[1]]
}

#[test]
fn p_eigenvector_for_unit_material() {
    let w = PlaneWaveParams { alpha: 1.0, s_weight: 0.0, ..PlaneWaveParams::default() }.wave().unwrap();
    assert_eq!(w.profile, [4.0, 4.0, 2.0, -2.0, -2.0]);
    let s = PlaneWaveParams { alpha: 1.0, p_weight: 0.0, ..PlaneWaveParams::default() }.wave().unwrap();
    assert_eq!(s.profile, [-2.0, 2.0, 0.0, 1.0, -1.0]);
}

#[test]
fn zero_amplitude_gives_zero_state() {
    let disc = discretize(common::jittered_square(4, 3), 2, 1, 0.05, Mode::SpaceTime);
    let spec = ps(PlaneWaveParams { alpha: 0.0, ..PlaneWaveParams::default() });
    let s = spec.init_state(&disc).unwrap();
    assert!(s.velocity.iter().chain(&s.stress).all(|&v| v == 0.0));
}

#[test]
fn projection_reproduces_linear_fields() {
    let vel = |x: [f64; 2]| [0.3 + x[0] - 2.0 * x[1], -1.0 + 0.5 * x[0]];
    let str_ = |x: [f64; 2]| [x[1], 2.0 - x[0], 0.25 * x[0] + x[1]];
    for p in 1..=3 {
        let mesh = generate::jitter(&generate::structured_rect(4, 3, [0.0, 2.0], [0.0, 1.5], true), 0.5, 0.2, 9).unwrap();
        let disc = discretize(mesh, p, 1, 0.05, Mode::SpaceTime);
        let s = disc.project(vel, str_).unwrap();
        let e = l2_error(&disc, &s, |x| {
            let v = vel(x);
            let t = str_(x);
            [t[0], t[1], t[2], v[0], v[1]]
        });
        assert!(e.iter().all(|&v| v < 1e-12), "p={p} {e:?}");
    }
}

#[test]
fn projection_is_idempotent() {
    let disc = discretize(common::jittered_square(4, 2), 2, 0, 0.05, Mode::CrankNicolson);
    let spec = ps(PlaneWaveParams::default());
    let first = spec.init_state(&disc).unwrap();
    let again = disc
        .project(
            |x| {
                let u = sample(&disc, &first, x);
                [u[3], u[4]]
            },
            |x| {
                let u = sample(&disc, &first, x);
                [u[0], u[1], u[2]]
            },
        )
        .unwrap();
    let scale = first.velocity.iter().chain(&first.stress).fold(0.0f64, |a, b| a.max(b.abs()));
    for (a, b) in first.velocity.iter().chain(&first.stress).zip(again.velocity.iter().chain(&again.stress)) {
        assert!((a - b).abs() <= 1e-12 * scale, "{a} {b}");
    }
}

#[test]
fn exact_solution_at_start_and_end() {
    let w = PlaneWaveParams::default().wave().unwrap();
    let t_end = 3.0 * 2f64.sqrt();
    for i in 0..40 {
        let x = [-1.5 + 0.071 * i as f64, 1.3 - 0.057 * i as f64];
        let u0 = w.initial(x);
        let a = w.exact(x, 0.0);
        let b = w.exact(x, t_end);
        for c in 0..5 {
            assert!((a[c] - u0[c]).abs() < 1e-14, "{a:?} {u0:?}");
            assert!((b[c] - u0[c]).abs() < 1e-12, "{b:?} {u0:?}");
        }
    }
}

#[test]
fn p_wave_flips_sign_after_half_period() {
    let w = PlaneWaveParams {
        direction: [1.0, 0.0],
        s_weight: 0.0,
        ..PlaneWaveParams::default()
    }
    .wave()
    .unwrap();
    // wavelength 1, c_p = 2
    for i in 0..20 {
        let x = [-1.4 + 0.13 * i as f64, 0.2 * i as f64];
        let a = w.exact(x, 0.0);
        let b = w.exact(x, 0.25);
        for c in 0..5 {
            assert!((a[c] + b[c]).abs() < 1e-14, "{a:?} {b:?}");
        }
    }
}

#[test]
fn exact_numerical_error_is_zero() {
    let disc = discretize(common::jittered_square(3, 5), 2, 0, 0.05, Mode::CrankNicolson);
    let s = disc.zero_state();
    assert_eq!(l2_error(&disc, &s, |_| [0.0; 5]), [0.0; 5]);
}

#[test]
fn constant_offset_on_unit_square() {
    let mesh = generate::jitter(&generate::periodic_square(4, 0.0, 1.0, true), 0.25, 0.2, 4).unwrap();
    let disc = discretize(mesh, 2, 1, 0.05, Mode::SpaceTime);
    let eps = 0.0375;
    let s = disc.project(|_| [eps, 0.0], |_| [0.0; 3]).unwrap();
    let e = l2_error(&disc, &s, |_| [0.0; 5]);
    assert!((e[0] - eps).abs() < 1e-14, "{e:?}");
    assert!(e[1..].iter().all(|&v| v < 1e-15));
}

#[test]
fn initial_energy_matches_profile() {
    // ∫ sin²(2π(x + y)) over [-1.5, 1.5]² is 4.5
    let params = PlaneWaveParams::default();
    let w = params.wave().unwrap();
    let m = stagdg::material::IsotropicMaterial::new(params.lambda, params.mu, params.rho).unwrap();
    let a = w.profile;
    let kinetic = 0.5 * params.rho * (a[3] * a[3] + a[4] * a[4]) * 4.5;
    let elastic = 0.5 * stagdg::material::strain_energy_density([a[0], a[1], a[2]], &m.stiffness()) * 4.5;
    let exact = kinetic + elastic;
    let mut gaps = Vec::new();
    for n in [6, 12] {
        let disc = discretize(generate::periodic_square(n, -1.5, 1.5, false), 4, 0, 0.05, Mode::CrankNicolson);
        let s = ps(params.clone()).init_state(&disc).unwrap();
        let e = disc.total_energy(&s);
        assert!(e.total() > 0.0);
        assert!(e.total() <= exact * (1.0 + 1e-12), "{} > {exact}", e.total());
        gaps.push((exact - e.total()) / exact);
    }
    assert!(gaps[1] < 1e-6 && gaps[1] < gaps[0] / 16.0, "{gaps:?}");
}

#[test]
fn sliver_meshes_shrink_incircle_only() {
    let p = SliverParams::default();
    let (a, b) = sliver_meshes(p.n, p.jitter, p.seed, p.factor, &p.targets).unwrap();
    assert_eq!(a.n_elements(), b.n_elements());
    assert_eq!(a.triangles, b.triangles);
    let ratio = generate::min_incircle(&a) / generate::min_incircle(&b);
    assert!((50.0..=90.0).contains(&ratio), "{ratio}");
    assert!((0..b.n_elements()).all(|i| b.area(i) > 0.0));
}

#[test]
fn slivers_keep_solution_quality() {
    let p = SliverParams::default();
    let cfg = RunConfig::new(ScenarioSpec::SliverStudy(p.clone()), 2, 1, 0.014, 0.07);
    let (m1, m2) = sliver_meshes(p.n, p.jitter, p.seed, p.factor, &p.targets).unwrap();
    let exact = cfg.scenario.exact().unwrap();
    let run = |mesh| {
        let mut sim = simulation(&cfg, mesh, cfg.dt, PreconditionerKind::Pre1, &Options::default()).unwrap();
        sim.run(5).unwrap();
        sim
    };
    let (s1, s2) = (run(m1), run(m2));
    let t = s1.time();
    let err = l2_error(&s1.disc, &s1.state, |x| exact.exact(x, t));
    let diff = l2_error(&s1.disc, &s1.state, |x| sample(&s2.disc, &s2.state, x));
    let norm = |e: [f64; 5]| e.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!(norm(diff) <= 5.0 * norm(err), "difference {} error {}", norm(diff), norm(err));
}
