use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::basis::spatial::{MAX_DEGREE, MIN_DEGREE};
use crate::error::{Error, Result};
use crate::material::MaterialSpec;
use crate::scenarios::{MeshSpec, Receiver, ScenarioSpec};
use crate::scheme::{BoundaryCondition, Mode};
use crate::solver::{KrylovConfig, Method, PreconditionerKind, PreconditionerSide};

/// Linear solver section of a run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    /// Krylov method; CG for Crank–Nicolson and GMRES otherwise when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    pub tol: f64,
    pub abs_tol: f64,
    pub max_iter: usize,
    pub restart: usize,
    pub side: PreconditionerSide,
    pub preconditioner: PreconditionerKind,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let k = KrylovConfig::default();
        Self {
            method: None,
            tol: k.tol,
            abs_tol: k.abs_tol,
            max_iter: k.max_iter,
            restart: k.restart,
            side: k.side,
            preconditioner: PreconditionerKind::None,
        }
    }
}

impl SolverSettings {
    pub fn krylov(&self, mode: Mode, reproducible: bool) -> KrylovConfig {
        let method = self.method.unwrap_or(match mode {
            Mode::CrankNicolson => Method::Cg,
            Mode::SpaceTime => Method::Gmres,
        });
        KrylovConfig {
            method,
            tol: self.tol,
            abs_tol: self.abs_tol,
            max_iter: self.max_iter,
            restart: self.restart,
            side: self.side,
            reproducible,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSettings {
    /// Relative to the configuration file unless absolute.
    pub dir: PathBuf,
    /// Field dump every this many steps; 0 disables field output.
    pub field_every: usize,
    /// Each triangle is sampled on `level²` sub-triangles.
    pub level: usize,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("output"),
            field_every: 0,
            level: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceSettings {
    /// Time step per unit mesh size.
    pub dt_per_h: f64,
}

impl Default for ConvergenceSettings {
    fn default() -> Self {
        Self { dt_per_h: 0.112 }
    }
}

/// Complete description of a run, read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub p: usize,
    #[serde(default)]
    pub p_time: usize,
    #[serde(default)]
    pub mode: Mode,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bc: Option<BoundaryCondition>,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub output: OutputSettings,
    #[serde(default)]
    pub convergence: ConvergenceSettings,
    pub scenario: ScenarioSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<MeshSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub materials: Option<Vec<MaterialSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub receivers: Option<Vec<Receiver>>,
}

impl RunConfig {
    /// Defaults for `scenario` with the given degrees and time stepping.
    pub fn new(scenario: ScenarioSpec, p: usize, p_time: usize, dt: f64, t_end: f64) -> Self {
        Self {
            p,
            p_time,
            mode: Mode::SpaceTime,
            dt,
            t_end,
            bc: None,
            solver: SolverSettings::default(),
            output: OutputSettings::default(),
            convergence: ConvergenceSettings::default(),
            scenario,
            mesh: None,
            materials: None,
            receivers: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_toml()?)?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&self.p) {
            return fail(format!("p = {} outside {MIN_DEGREE}..={MAX_DEGREE}", self.p));
        }
        if self.mode == Mode::CrankNicolson && self.p_time != 0 {
            return fail(format!("mode = \"cn\" requires p_time = 0, got {}", self.p_time));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return fail(format!("dt = {} must be positive", self.dt));
        }
        if !(self.t_end >= self.dt) || !self.t_end.is_finite() {
            return fail(format!("t_end = {} must be at least dt = {}", self.t_end, self.dt));
        }
        if self.output.level < 1 {
            return fail("output.level must be at least 1".into());
        }
        if !(self.convergence.dt_per_h > 0.0) {
            return fail("convergence.dt_per_h must be positive".into());
        }
        let k = self.solver.krylov(self.mode, false);
        if k.method == Method::Cg && self.mode == Mode::SpaceTime {
            return fail("CG needs the symmetric Crank-Nicolson system; use gmres for mode = \"spacetime\"".into());
        }
        k.validate()?;
        if let Some(r) = &self.receivers {
            let mut ids: Vec<&str> = r.iter().map(|r| r.id.as_str()).collect();
            ids.sort_unstable();
            if ids.windows(2).any(|w| w[0] == w[1]) {
                return fail("receiver ids must be unique".into());
            }
        }
        Ok(())
    }

    /// Number of slabs: `floor(t_end / dt)`, tolerant to rounding in the
    /// ratio.
    pub fn n_steps(&self) -> usize {
        steps_for(self.t_end, self.dt)
    }

    pub fn mesh_spec(&self) -> MeshSpec {
        self.mesh.clone().unwrap_or_else(|| self.scenario.default_mesh())
    }

    pub fn material_specs(&self) -> Result<Vec<MaterialSpec>> {
        match &self.materials {
            Some(m) => Ok(m.clone()),
            None => self.scenario.materials(),
        }
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.bc.unwrap_or_else(|| self.scenario.boundary())
    }

    pub fn receiver_list(&self) -> Vec<Receiver> {
        self.receivers.clone().unwrap_or_else(|| self.scenario.receivers())
    }
}

pub(crate) fn steps_for(t_end: f64, dt: f64) -> usize {
    let r = t_end / dt;
    let n = r.round();
    if (r - n).abs() <= 1e-9 * n.max(1.0) {
        n as usize
    } else {
        r.floor() as usize
    }
}
