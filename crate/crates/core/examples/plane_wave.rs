//! Plane p-wave on the periodic square for one period, with energy and error.
//!
//! `cargo run --release --example plane_wave -- [n] [p]`

use stagdg::material::MaterialField;
use stagdg::mesh::{generate, StaggeredMesh};
use stagdg::scenarios::{l2_error, PlaneWaveParams, ScenarioSpec};
use stagdg::scheme::{Discretization, Mode, Simulation};
use stagdg::solver::{KrylovConfig, PreconditionerKind};

fn main() -> stagdg::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(12);
    let p = args.next().unwrap_or(2);

    let spec = ScenarioSpec::PsConvergence(PlaneWaveParams {
        direction: [1.0, 0.0],
        s_weight: 0.0,
        ..PlaneWaveParams::default()
    });
    let mesh = StaggeredMesh::new(generate::periodic_square(n, -1.5, 1.5, false))?;
    let material = MaterialField::from_specs(&mesh, &spec.materials()?)?;
    let steps = 20;
    let dt = 0.5 / steps as f64;
    let disc = Discretization::new(mesh, p, p, dt, Mode::SpaceTime, material, spec.boundary())?;
    let state = spec.init_state(&disc)?;
    let solver = KrylovConfig {
        tol: 1e-10,
        ..KrylovConfig::default()
    };
    let mut sim = Simulation::new(disc, state, &[], solver, PreconditionerKind::Pre2)?;

    let e0 = sim.energy().total();
    println!("{} triangles, p = p_time = {p}, dt = {dt}", sim.disc.n_elements());
    for r in sim.run(steps)? {
        println!("step {:3} t {:.3} iterations {:3} energy {:.10e}", r.step, r.time, r.iterations, r.energy.total());
    }
    let exact = spec.exact()?;
    let t = sim.time();
    let e = l2_error(&sim.disc, &sim.state, |x| exact.exact(x, t));
    println!("energy ratio {:.8}", sim.energy().total() / e0);
    println!("L2 errors u {:.3e} v {:.3e} sxx {:.3e} syy {:.3e} sxy {:.3e}", e[0], e[1], e[2], e[3], e[4]);
    Ok(())
}
