use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use super::config::{steps_for, RunConfig};
use super::records::{num, EnergyLog, Seismograms, StatsLog};
use super::vtk::write_fields;
use crate::error::{Error, Result};
use crate::material::MaterialField;
use crate::mesh::{generate, read_mesh, PrimalMesh, StaggeredMesh};
use crate::scenarios::{l2_error, sliver_meshes, ScenarioSpec};
use crate::scheme::{Discretization, Energy, Simulation};
use crate::solver::PreconditionerKind;

/// Command-line overrides shared by all drivers.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub reproducible: bool,
    pub output_dir: Option<PathBuf>,
}

impl Options {
    pub fn output_dir(&self, cfg: &RunConfig, base: &Path) -> PathBuf {
        match &self.output_dir {
            Some(d) => d.clone(),
            None if cfg.output.dir.is_absolute() => cfg.output.dir.clone(),
            None => base.join(&cfg.output.dir),
        }
    }
}

/// Discretization of `mesh` with the degrees, mode, materials and boundary
/// condition of `cfg` and time step `dt`.
pub fn discretize(cfg: &RunConfig, mesh: PrimalMesh, dt: f64) -> Result<Discretization> {
    let mesh = StaggeredMesh::new(mesh)?;
    let material = MaterialField::from_specs(&mesh, &cfg.material_specs()?)?;
    Discretization::new(mesh, cfg.p, cfg.p_time, dt, cfg.mode, material, cfg.boundary())
}

/// Simulation of `cfg` on `mesh` with step `dt`, starting from the projected
/// initial data.
pub fn simulation(cfg: &RunConfig, mesh: PrimalMesh, dt: f64, precond: PreconditionerKind, opts: &Options) -> Result<Simulation> {
    let disc = discretize(cfg, mesh, dt)?;
    let state = cfg.scenario.init_state(&disc)?;
    Simulation::new(
        disc,
        state,
        &cfg.scenario.sources(),
        cfg.solver.krylov(cfg.mode, opts.reproducible),
        precond,
    )
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub steps: usize,
    pub mean_iterations: f64,
    pub max_iterations: usize,
    pub initial_energy: Energy,
    pub final_energy: Energy,
    pub wall: Duration,
    pub output_dir: PathBuf,
}

/// Time loop with field, seismogram, energy and statistics output.
pub fn run(cfg: &RunConfig, base: &Path, opts: &Options) -> Result<RunSummary> {
    cfg.validate()?;
    let start = Instant::now();
    let out = opts.output_dir(cfg, base);
    std::fs::create_dir_all(&out)?;
    let mesh = cfg.mesh_spec().build(base)?;
    let mut sim = simulation(cfg, mesh, cfg.dt, cfg.solver.preconditioner, opts)?;
    let steps = cfg.n_steps();
    let mut energy = EnergyLog::create(out.join("energy.csv"))?;
    let mut stats = StatsLog::create(out.join("stats.csv"))?;
    let mut seis = Seismograms::create(&sim.disc, &cfg.receiver_list(), &out)?;
    let initial_energy = sim.energy();
    energy.record(sim.time(), initial_energy)?;
    seis.record(&sim.disc, &sim.state)?;
    let every = cfg.output.field_every;
    let dump = |sim: &Simulation| -> Result<()> {
        let path = out.join(format!("fields_{:06}.vtk", sim.state.step));
        write_fields(&sim.disc, &sim.state, cfg.output.level, path)
    };
    if every > 0 {
        dump(&sim)?;
    }
    let (mut total, mut max_it) = (0usize, 0usize);
    for k in 1..=steps {
        let r = sim.step()?;
        total += r.iterations;
        max_it = max_it.max(r.iterations);
        energy.record(r.time, r.energy)?;
        stats.record(&r)?;
        seis.record(&sim.disc, &sim.state)?;
        if every > 0 && (k % every == 0 || k == steps) {
            dump(&sim)?;
        }
        log::debug!("step {k}/{steps} t = {:.6} iterations {}", r.time, r.iterations);
    }
    energy.finish()?;
    stats.finish()?;
    seis.finish()?;
    Ok(RunSummary {
        steps,
        mean_iterations: if steps > 0 { total as f64 / steps as f64 } else { 0.0 },
        max_iterations: max_it,
        initial_energy,
        final_energy: sim.energy(),
        wall: start.elapsed(),
        output_dir: out,
    })
}

pub const CONVERGENCE_HEADER: [&str; 17] = [
    "mesh", "elements", "h", "dt", "steps", "err_u", "err_v", "err_sxx", "err_syy", "err_sxy", "order_u", "order_v",
    "order_sxx", "order_syy", "order_sxy", "mean_iterations", "wall_s",
];

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub mesh: String,
    pub elements: usize,
    pub h: f64,
    pub dt: f64,
    pub steps: usize,
    /// `(u, v, sxx, syy, sxy)`.
    pub errors: [f64; 5],
    /// Observed orders against the previous row; NaN on the first row.
    pub orders: [f64; 5],
    pub mean_iterations: f64,
    pub wall: Duration,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub warnings: Vec<String>,
    pub output_dir: PathBuf,
}

/// Mesh argument of the convergence command: a mesh file, or `square:N` for
/// the periodic `[-1.5, 1.5]²` square with `N × N` cells.
pub fn mesh_argument(arg: &str, base: &Path) -> Result<PrimalMesh> {
    if let Some(n) = arg.strip_prefix("square:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Config(format!("invalid mesh argument `{arg}`")))?;
        if n == 0 {
            return Err(Error::Config("square mesh needs at least one cell".into()));
        }
        return Ok(generate::periodic_square(n, -1.5, 1.5, false));
    }
    let p = Path::new(arg);
    read_mesh(if p.is_absolute() { p.to_path_buf() } else { base.join(p) })
}

/// Characteristic mesh size `sqrt(2 |Ω| / N)`.
pub fn mesh_size(mesh: &PrimalMesh) -> f64 {
    (2.0 * mesh.total_area() / mesh.n_elements() as f64).sqrt()
}

/// `log(e₁/e₂) / log(h₁/h₂)`, or NaN when the mesh sizes coincide.
pub fn observed_order(e1: f64, e2: f64, h1: f64, h2: f64) -> f64 {
    let dh = (h1 / h2).ln();
    if dh.abs() < 1e-12 {
        f64::NAN
    } else {
        (e1 / e2).ln() / dh
    }
}

/// Runs the analytic scenario of `cfg` to `t_end` on each mesh with
/// `Δt = dt_per_h · h` and reports L2 errors and observed orders.
pub fn convergence(cfg: &RunConfig, base: &Path, meshes: &[String], opts: &Options) -> Result<ConvergenceReport> {
    cfg.validate()?;
    if meshes.len() < 2 {
        return Err(Error::Config("the convergence study needs at least two meshes".into()));
    }
    let exact = cfg.scenario.exact()?;
    let out = opts.output_dir(cfg, base);
    std::fs::create_dir_all(&out)?;
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    let mut warnings = Vec::new();
    for arg in meshes {
        let start = Instant::now();
        let mesh = mesh_argument(arg, base)?;
        let elements = mesh.n_elements();
        let h = mesh_size(&mesh);
        let target = cfg.convergence.dt_per_h * h;
        let steps = (cfg.t_end / target).ceil().max(1.0) as usize;
        let dt = cfg.t_end / steps as f64;
        let mut sim = simulation(cfg, mesh, dt, cfg.solver.preconditioner, opts)?;
        let mut its = 0;
        for _ in 0..steps {
            its += sim.step()?.iterations;
        }
        let t = sim.time();
        let errors = l2_error(&sim.disc, &sim.state, |x| exact.exact(x, t));
        let orders = match rows.last() {
            Some(prev) => {
                let o: [f64; 5] = std::array::from_fn(|c| observed_order(prev.errors[c], errors[c], prev.h, h));
                if o.iter().any(|v| v.is_nan()) {
                    let w = format!("meshes `{}` and `{arg}` have the same size; order is undefined", prev.mesh);
                    log::warn!("{w}");
                    warnings.push(w);
                }
                o
            }
            None => [f64::NAN; 5],
        };
        rows.push(ConvergenceRow {
            mesh: arg.clone(),
            elements,
            h,
            dt,
            steps,
            errors,
            orders,
            mean_iterations: its as f64 / steps as f64,
            wall: start.elapsed(),
        });
    }
    let mut w = csv::Writer::from_path(out.join("convergence.csv"))?;
    w.write_record(CONVERGENCE_HEADER)?;
    for r in &rows {
        let mut rec = vec![r.mesh.clone(), r.elements.to_string(), num(r.h), num(r.dt), r.steps.to_string()];
        rec.extend(r.errors.iter().chain(&r.orders).map(|&x| num(x)));
        rec.push(num(r.mean_iterations));
        rec.push(num(r.wall.as_secs_f64()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(ConvergenceReport {
        rows,
        warnings,
        output_dir: out,
    })
}

pub const SLIVER_HEADER: [&str; 6] = [
    "preconditioner",
    "iterations_mesh1",
    "iterations_mesh2",
    "ratio",
    "error_mesh1",
    "error_mesh2",
];

pub const SLIVER_HISTORY_HEADER: [&str; 4] = ["preconditioner", "mesh", "step", "iterations"];

#[derive(Debug, Clone)]
pub struct SliverRow {
    pub preconditioner: PreconditionerKind,
    /// Mean iterations on the regular mesh and on the mesh with slivers.
    pub iterations: [f64; 2],
    pub ratio: f64,
    /// L2 error norm over all components at `t_end` on both meshes.
    pub errors: [f64; 2],
    /// Iterations per step on both meshes.
    pub history: [Vec<usize>; 2],
}

#[derive(Debug, Clone)]
pub struct SliverReport {
    pub rows: Vec<SliverRow>,
    /// Smallest incircle radius of both meshes.
    pub min_incircle: [f64; 2],
    pub elements: usize,
    pub steps: usize,
    pub output_dir: PathBuf,
}

impl SliverReport {
    pub fn row(&self, kind: PreconditionerKind) -> Option<&SliverRow> {
        self.rows.iter().find(|r| r.preconditioner == kind)
    }
}

fn kind_name(k: PreconditionerKind) -> &'static str {
    match k {
        PreconditionerKind::None => "none",
        PreconditionerKind::Pre1 => "pre1",
        PreconditionerKind::Pre2 => "pre2",
    }
}

/// Iteration counts of the sliver study for every preconditioner on the
/// regular mesh and on the mesh with sliver elements.
pub fn slivers(cfg: &RunConfig, base: &Path, opts: &Options) -> Result<SliverReport> {
    cfg.validate()?;
    let ScenarioSpec::SliverStudy(sp) = &cfg.scenario else {
        return Err(Error::Config(format!(
            "the sliver study needs scenario kind `sliver_study`, got `{}`",
            cfg.scenario.name()
        )));
    };
    let exact = cfg.scenario.exact()?;
    let out = opts.output_dir(cfg, base);
    std::fs::create_dir_all(&out)?;
    let (m1, m2) = sliver_meshes(sp.n, sp.jitter, sp.seed, sp.factor, &sp.targets)?;
    let min_incircle = [generate::min_incircle(&m1), generate::min_incircle(&m2)];
    let steps = steps_for(cfg.t_end, cfg.dt);
    let mut rows = Vec::new();
    for kind in [PreconditionerKind::None, PreconditionerKind::Pre1, PreconditionerKind::Pre2] {
        let mut iterations = [0.0; 2];
        let mut errors = [0.0; 2];
        let mut history: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (m, mesh) in [&m1, &m2].into_iter().enumerate() {
            let mut sim = simulation(cfg, mesh.clone(), cfg.dt, kind, opts)?;
            for _ in 0..steps {
                history[m].push(sim.step()?.iterations);
            }
            iterations[m] = history[m].iter().sum::<usize>() as f64 / steps.max(1) as f64;
            let t = sim.time();
            let e = l2_error(&sim.disc, &sim.state, |x| exact.exact(x, t));
            errors[m] = e.iter().map(|v| v * v).sum::<f64>().sqrt();
            log::info!("{} mesh{}: mean iterations {:.2}", kind_name(kind), m + 1, iterations[m]);
        }
        rows.push(SliverRow {
            preconditioner: kind,
            iterations,
            ratio: iterations[1] / iterations[0],
            errors,
            history,
        });
    }
    let mut w = csv::Writer::from_path(out.join("slivers.csv"))?;
    w.write_record(SLIVER_HEADER)?;
    for r in &rows {
        w.write_record([
            kind_name(r.preconditioner).to_string(),
            num(r.iterations[0]),
            num(r.iterations[1]),
            num(r.ratio),
            num(r.errors[0]),
            num(r.errors[1]),
        ])?;
    }
    w.flush()?;
    let mut w = csv::Writer::from_path(out.join("slivers_history.csv"))?;
    w.write_record(SLIVER_HISTORY_HEADER)?;
    for r in &rows {
        for (m, h) in r.history.iter().enumerate() {
            for (k, it) in h.iter().enumerate() {
                w.write_record([
                    kind_name(r.preconditioner).to_string(),
                    format!("mesh{}", m + 1),
                    (k + 1).to_string(),
                    it.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(SliverReport {
        rows,
        min_incircle,
        elements: m1.n_elements(),
        steps,
        output_dir: out,
    })
}
