//! Python bindings: meshes, simulations and the command-line drivers.

use std::path::{Path, PathBuf};

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use stagdg::io::{self, Options, Probe, RunConfig};
use stagdg::mesh::{generate, read_mesh, PrimalMesh};
use stagdg::scenarios::{l2_error, Receiver};
use stagdg::scheme::{Energy, StepReport};

fn err(e: stagdg::Error) -> PyErr {
    match e {
        stagdg::Error::NotConverged { .. } | stagdg::Error::Diverged { .. } | stagdg::Error::Io(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

fn options(output_dir: Option<PathBuf>, reproducible: bool) -> Options {
    Options {
        reproducible,
        output_dir,
    }
}

fn load(path: &Path) -> PyResult<(RunConfig, PathBuf)> {
    let cfg = RunConfig::load(path).map_err(err)?;
    Ok((cfg, path.parent().map(Path::to_path_buf).unwrap_or_default()))
}

fn energy_dict<'py>(py: Python<'py>, e: Energy) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kinetic", e.kinetic)?;
    d.set_item("elastic", e.elastic)?;
    d.set_item("total", e.total())?;
    Ok(d)
}

fn report_dict<'py>(py: Python<'py>, r: &StepReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("step", r.step)?;
    d.set_item("time", r.time)?;
    d.set_item("iterations", r.iterations)?;
    d.set_item("residual", r.residual)?;
    d.set_item("energy", r.energy.total())?;
    d.set_item("jump", r.jump.total())?;
    Ok(d)
}

/// Conforming triangulation with optional periodic box.
#[pyclass(name = "Mesh", module = "stagdg", from_py_object)]
#[derive(Clone)]
struct PyMesh {
    inner: PrimalMesh,
}

#[pymethods]
impl PyMesh {
    /// Periodic square `[lo, hi]²` with `n × n` cells of two triangles.
    #[staticmethod]
    #[pyo3(signature = (n, lo = -1.5, hi = 1.5))]
    fn periodic_square(n: usize, lo: f64, hi: f64) -> PyResult<Self> {
        if n == 0 || !(hi > lo) {
            return Err(PyValueError::new_err("periodic_square needs n ≥ 1 and hi > lo"));
        }
        Ok(Self {
            inner: generate::periodic_square(n, lo, hi, false),
        })
    }

    /// Native or Gmsh mesh file.
    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: read_mesh(path).map_err(err)?,
        })
    }

    #[getter]
    fn n_elements(&self) -> usize {
        self.inner.n_elements()
    }

    #[getter]
    fn n_nodes(&self) -> usize {
        self.inner.nodes.len()
    }

    #[getter]
    fn total_area(&self) -> f64 {
        self.inner.total_area()
    }

    #[getter]
    fn min_incircle(&self) -> f64 {
        generate::min_incircle(&self.inner)
    }

    #[getter]
    fn is_periodic(&self) -> bool {
        self.inner.periodic.is_some()
    }

    fn __repr__(&self) -> String {
        format!("Mesh({} triangles, {} nodes)", self.inner.n_elements(), self.inner.nodes.len())
    }
}

/// Time loop of a run configuration.
#[pyclass(name = "Simulation", module = "stagdg", unsendable)]
struct PySimulation {
    cfg: RunConfig,
    sim: stagdg::scheme::Simulation,
}

#[pymethods]
impl PySimulation {
    /// Builds the simulation from TOML text. Relative mesh paths are resolved
    /// against `base_dir`; `mesh` replaces the configured mesh.
    #[new]
    #[pyo3(signature = (config, base_dir = None, mesh = None, reproducible = false))]
    fn new(config: &str, base_dir: Option<PathBuf>, mesh: Option<PyMesh>, reproducible: bool) -> PyResult<Self> {
        let cfg = RunConfig::parse(config).map_err(err)?;
        let base = base_dir.unwrap_or_else(|| PathBuf::from("."));
        let mesh = match mesh {
            Some(m) => m.inner,
            None => cfg.mesh_spec().build(&base).map_err(err)?,
        };
        let sim = io::simulation(&cfg, mesh, cfg.dt, cfg.solver.preconditioner, &options(None, reproducible)).map_err(err)?;
        Ok(Self { cfg, sim })
    }

    /// Reads the configuration file at `path`.
    #[staticmethod]
    #[pyo3(signature = (path, reproducible = false))]
    fn from_file(path: PathBuf, reproducible: bool) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        let base = path.parent().map(Path::to_path_buf);
        Self::new(&text, base, None, reproducible)
    }

    /// Advances one slab and returns its statistics.
    fn step<'py>(&mut self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = self.sim.step().map_err(err)?;
        report_dict(py, &r)
    }

    /// Advances `n` slabs and returns the statistics of each.
    fn run<'py>(&mut self, py: Python<'py>, n: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let reports = self.sim.run(n).map_err(err)?;
        reports.iter().map(|r| report_dict(py, r)).collect()
    }

    /// Slabs needed to reach `t_end`.
    #[getter]
    fn n_steps(&self) -> usize {
        self.cfg.n_steps()
    }

    #[getter]
    fn time(&self) -> f64 {
        self.sim.time()
    }

    #[getter]
    fn step_index(&self) -> usize {
        self.sim.state.step
    }

    #[getter]
    fn n_elements(&self) -> usize {
        self.sim.disc.n_elements()
    }

    #[getter]
    fn n_unknowns(&self) -> usize {
        self.sim.disc.velocity_len() + self.sim.disc.stress_len()
    }

    /// Kinetic, elastic and total energy at the end of the current slab.
    fn energy<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        energy_dict(py, self.sim.energy())
    }

    /// `(u, v, sxx, syy, sxy)` at `(x, y)`.
    fn sample(&self, x: f64, y: f64) -> PyResult<(f64, f64, f64, f64, f64)> {
        let probe = Probe::resolve(&self.sim.disc, &Receiver::new("probe", [x, y])).map_err(err)?;
        let s = probe.sample(&self.sim.disc, &self.sim.state);
        Ok((s[0], s[1], s[2], s[3], s[4]))
    }

    /// L2 errors `(u, v, sxx, syy, sxy)` against the exact solution of the
    /// plane-wave scenarios.
    fn l2_error(&self) -> PyResult<(f64, f64, f64, f64, f64)> {
        let exact = self.cfg.scenario.exact().map_err(err)?;
        let t = self.sim.time();
        let e = l2_error(&self.sim.disc, &self.sim.state, |x| exact.exact(x, t));
        Ok((e[0], e[1], e[2], e[3], e[4]))
    }

    /// Velocity coefficients in block order.
    fn velocity(&self) -> Vec<f64> {
        self.sim.state.velocity.clone()
    }

    /// Stress coefficients in block order.
    fn stress(&self) -> Vec<f64> {
        self.sim.state.stress.clone()
    }

    /// Legacy VTK file of the current fields.
    #[pyo3(signature = (path, level = 2))]
    fn write_vtk(&self, path: PathBuf, level: usize) -> PyResult<()> {
        io::write_fields(&self.sim.disc, &self.sim.state, level, path).map_err(err)
    }
}

/// Runs a configuration file and writes all outputs.
#[pyfunction]
#[pyo3(signature = (config, output_dir = None, reproducible = false))]
fn run<'py>(py: Python<'py>, config: PathBuf, output_dir: Option<PathBuf>, reproducible: bool) -> PyResult<Bound<'py, PyDict>> {
    let (cfg, base) = load(&config)?;
    let s = io::run(&cfg, &base, &options(output_dir, reproducible)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("steps", s.steps)?;
    d.set_item("mean_iterations", s.mean_iterations)?;
    d.set_item("max_iterations", s.max_iterations)?;
    d.set_item("initial_energy", s.initial_energy.total())?;
    d.set_item("final_energy", s.final_energy.total())?;
    d.set_item("wall_s", s.wall.as_secs_f64())?;
    d.set_item("output_dir", s.output_dir)?;
    Ok(d)
}

/// Convergence study over `meshes` (files or `square:N`).
#[pyfunction]
#[pyo3(signature = (config, meshes, output_dir = None, reproducible = false))]
fn convergence<'py>(
    py: Python<'py>,
    config: PathBuf,
    meshes: Vec<String>,
    output_dir: Option<PathBuf>,
    reproducible: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let (cfg, base) = load(&config)?;
    let r = io::convergence(&cfg, &base, &meshes, &options(output_dir, reproducible)).map_err(err)?;
    r.rows
        .iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("mesh", &row.mesh)?;
            d.set_item("elements", row.elements)?;
            d.set_item("h", row.h)?;
            d.set_item("dt", row.dt)?;
            d.set_item("steps", row.steps)?;
            d.set_item("errors", row.errors.to_vec())?;
            d.set_item("orders", row.orders.to_vec())?;
            d.set_item("mean_iterations", row.mean_iterations)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "stagdg")]
fn stagdg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMesh>()?;
    m.add_class::<PySimulation>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(convergence, m)?)?;
    Ok(())
}
