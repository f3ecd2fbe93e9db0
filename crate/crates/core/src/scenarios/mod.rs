//! Built-in experiment definitions: meshes, materials, initial data, sources
//! and receivers.

mod error;
mod plane_wave;

pub use error::l2_error;
pub use plane_wave::PlaneWave;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::assembly::{SourceTerm, Wavelet};
use crate::error::{Error, Result};
use crate::material::MaterialSpec;
use crate::mesh::{generate, read_mesh, PrimalMesh};
use crate::scheme::{BoundaryCondition, Discretization, State};

/// Named sampling point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Receiver {
    pub id: String,
    pub position: [f64; 2],
}

impl Receiver {
    pub fn new(id: &str, position: [f64; 2]) -> Self {
        Self {
            id: id.to_string(),
            position,
        }
    }
}

/// Mesh source of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeshSpec {
    /// Native or Gmsh file, relative to the configuration file.
    File { path: PathBuf },
    /// Periodic `[lo, hi]²` with `n × n` cells, optionally jittered by a
    /// fraction of the spacing.
    PeriodicSquare {
        n: usize,
        #[serde(default = "default_lo")]
        lo: f64,
        #[serde(default = "default_hi")]
        hi: f64,
        #[serde(default)]
        alternate: bool,
        #[serde(default)]
        jitter: f64,
        #[serde(default)]
        seed: u64,
    },
    /// Periodic square with a circular free-surface hole.
    Cavity {
        n: usize,
        m: usize,
        layers: usize,
        half: f64,
        radius: f64,
    },
    /// `0 ≤ x ≤ 4000`, `0 ≤ y ≤ 2000 + x tan θ`.
    Lamb { nx: usize, ny: usize, theta_deg: f64 },
    /// `0 ≤ x ≤ 4000`, `0 ≤ y ≤ f(x)`, two regions split by `y = 1500 − x/2`.
    Layered { nx: usize, ny: usize },
    /// Jittered periodic square and, with `distorted`, the same mesh with
    /// sliver elements near `targets`.
    SliverPair {
        n: usize,
        jitter: f64,
        seed: u64,
        factor: f64,
        targets: Vec<[f64; 2]>,
        distorted: bool,
    },
}

fn default_lo() -> f64 {
    -1.5
}

fn default_hi() -> f64 {
    1.5
}

/// Upper boundary of the layered domain.
pub fn layered_surface(x: f64) -> f64 {
    2000.0 + 100.0 * ((3.0 * x / 200.0).sin() + (2.0 * x / 200.0).sin())
}

impl MeshSpec {
    pub fn build(&self, base: &Path) -> Result<PrimalMesh> {
        match self {
            MeshSpec::File { path } => {
                let p = if path.is_absolute() { path.clone() } else { base.join(path) };
                read_mesh(&p)
            }
            &MeshSpec::PeriodicSquare {
                n,
                lo,
                hi,
                alternate,
                jitter,
                seed,
            } => {
                let m = generate::periodic_square(n, lo, hi, alternate);
                if jitter > 0.0 {
                    generate::jitter(&m, (hi - lo) / n as f64, jitter, seed)
                } else {
                    Ok(m)
                }
            }
            &MeshSpec::Cavity {
                n,
                m,
                layers,
                half,
                radius,
            } => {
                if n % 2 == 0 || m % 2 == 0 || m >= n || layers == 0 {
                    return Err(Error::Config("cavity mesh needs odd m < odd n and layers ≥ 1".into()));
                }
                generate::cavity(n, m, layers, half, radius)
            }
            &MeshSpec::Lamb { nx, ny, theta_deg } => {
                let tan = theta_deg.to_radians().tan();
                Ok(generate::mapped_grid(nx, ny, true, |s, t| {
                    let x = 4000.0 * s;
                    [x, t * (2000.0 + x * tan)]
                }))
            }
            &MeshSpec::Layered { nx, ny } => {
                let m = generate::mapped_grid(nx, ny, true, |s, t| {
                    let x = 4000.0 * s;
                    [x, t * layered_surface(x)]
                });
                let regions = (0..m.n_elements())
                    .map(|i| {
                        let b = m.barycenter(i);
                        if b[1] > 1500.0 - b[0] / 2.0 {
                            1
                        } else {
                            2
                        }
                    })
                    .collect();
                PrimalMesh::new(m.nodes, m.triangles, regions)
            }
            MeshSpec::SliverPair {
                n,
                jitter,
                seed,
                factor,
                targets,
                distorted,
            } => {
                let (a, b) = sliver_meshes(*n, *jitter, *seed, *factor, targets)?;
                Ok(if *distorted { b } else { a })
            }
        }
    }
}

/// Almost uniform periodic mesh of `[-1.5, 1.5]²` and a copy whose smallest
/// incircle radius is reduced by `factor` through vertex displacement.
pub fn sliver_meshes(
    n: usize,
    jitter: f64,
    seed: u64,
    factor: f64,
    targets: &[[f64; 2]],
) -> Result<(PrimalMesh, PrimalMesh)> {
    let base = generate::periodic_square(n, -1.5, 1.5, true);
    let regular = generate::jitter(&base, 3.0 / n as f64, jitter, seed)?;
    let slivered = generate::with_slivers(&regular, targets, factor)?;
    Ok((regular, slivered))
}

/// Combined p- and s-wave on a periodic square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlaneWaveParams {
    pub lambda: f64,
    pub mu: f64,
    pub rho: f64,
    pub alpha: f64,
    pub direction: [f64; 2],
    /// Weights of the p- and s-wave eigenvectors.
    pub p_weight: f64,
    pub s_weight: f64,
}

impl Default for PlaneWaveParams {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            mu: 1.0,
            rho: 1.0,
            alpha: 0.1,
            direction: [1.0, 1.0],
            p_weight: 1.0,
            s_weight: 1.0,
        }
    }
}

impl PlaneWaveParams {
    pub fn wave(&self) -> Result<PlaneWave> {
        PlaneWave::new(
            self.lambda,
            self.mu,
            self.rho,
            self.alpha,
            self.direction,
            [self.p_weight, self.s_weight],
        )
    }
}

/// Plane p-wave in `x` hitting a circular cavity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CavityParams {
    pub amplitude: f64,
    pub lambda: f64,
    pub mu: f64,
    pub rho: f64,
    pub receivers: Vec<Receiver>,
}

impl Default for CavityParams {
    fn default() -> Self {
        Self {
            amplitude: 0.1,
            lambda: 2.0,
            mu: 1.0,
            rho: 1.0,
            receivers: vec![Receiver::new("x1", [0.5, 0.5]), Receiver::new("x2", [1.0, 0.0])],
        }
    }
}

/// Directional Ricker point source below a tilted free surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LambParams {
    pub theta_deg: f64,
    pub rho: f64,
    pub cp: f64,
    pub cs: f64,
    pub source: [f64; 2],
    pub wavelet: Wavelet,
    pub receivers: Vec<Receiver>,
}

fn ricker() -> Wavelet {
    Wavelet::Ricker {
        a1: -2000.0,
        fc: 14.5,
        t_delay: 0.08,
    }
}

impl Default for LambParams {
    fn default() -> Self {
        Self {
            theta_deg: 10.0,
            rho: 2200.0,
            cp: 3200.0,
            cs: 1847.5,
            source: [1720.0, 2303.18],
            wavelet: ricker(),
            receivers: vec![Receiver::new("xp", [2694.96, 2475.08])],
        }
    }
}

/// Two-layer medium under a curved free surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LayeredParams {
    pub theta_deg: f64,
    pub rho: f64,
    /// `(c_p, c_s)` above and below the interface.
    pub upper: [f64; 2],
    pub lower: [f64; 2],
    pub source: [f64; 2],
    pub wavelet: Wavelet,
    pub receivers: Vec<Receiver>,
}

impl Default for LayeredParams {
    fn default() -> Self {
        Self {
            theta_deg: 10.0,
            rho: 2200.0,
            upper: [3200.0, 1847.5],
            lower: [2262.74, 1306.38],
            source: [3000.0, 1500.18],
            wavelet: ricker(),
            receivers: vec![
                Receiver::new("x1", [893.80, 1994.83]),
                Receiver::new("x2", [1790.0, 880.0]),
                Receiver::new("x3", [1000.0, 500.0]),
            ],
        }
    }
}

/// Iteration study on a regular mesh and a copy containing slivers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SliverParams {
    pub wave: PlaneWaveParams,
    pub n: usize,
    pub jitter: f64,
    pub seed: u64,
    pub factor: f64,
    pub targets: Vec<[f64; 2]>,
}

impl Default for SliverParams {
    fn default() -> Self {
        Self {
            wave: PlaneWaveParams {
                direction: [1.0, 0.0],
                s_weight: 0.0,
                ..PlaneWaveParams::default()
            },
            n: 16,
            jitter: 0.15,
            seed: 7,
            factor: 70.53,
            targets: vec![[-0.5, 0.25], [0.5, -0.25]],
        }
    }
}

impl SliverParams {
    pub fn mesh(&self, distorted: bool) -> MeshSpec {
        MeshSpec::SliverPair {
            n: self.n,
            jitter: self.jitter,
            seed: self.seed,
            factor: self.factor,
            targets: self.targets.clone(),
            distorted,
        }
    }
}

/// Point source of a custom scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSource {
    pub position: [f64; 2],
    pub direction: [f64; 2],
    pub wavelet: Wavelet,
}

/// Constant initial state, arbitrary materials and point sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CustomParams {
    pub materials: Vec<MaterialSpec>,
    pub bc: BoundaryCondition,
    pub velocity: [f64; 2],
    pub stress: [f64; 3],
    pub sources: Vec<PointSource>,
    pub receivers: Vec<Receiver>,
}

impl Default for CustomParams {
    fn default() -> Self {
        Self {
            materials: vec![MaterialSpec::Lame {
                region_id: 0,
                lambda: 2.0,
                mu: 1.0,
                rho: 1.0,
            }],
            bc: BoundaryCondition::FreeSurface,
            velocity: [0.0; 2],
            stress: [0.0; 3],
            sources: Vec::new(),
            receivers: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioSpec {
    PlaneWaveCavity(CavityParams),
    PsConvergence(PlaneWaveParams),
    LambTilted(LambParams),
    LayeredComplex(LayeredParams),
    SliverStudy(SliverParams),
    Custom(CustomParams),
}

impl ScenarioSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioSpec::PlaneWaveCavity(_) => "plane_wave_cavity",
            ScenarioSpec::PsConvergence(_) => "ps_convergence",
            ScenarioSpec::LambTilted(_) => "lamb_tilted",
            ScenarioSpec::LayeredComplex(_) => "layered_complex",
            ScenarioSpec::SliverStudy(_) => "sliver_study",
            ScenarioSpec::Custom(_) => "custom",
        }
    }

    /// Every built-in scenario with default parameters.
    pub fn builtins() -> Vec<ScenarioSpec> {
        vec![
            ScenarioSpec::PlaneWaveCavity(CavityParams::default()),
            ScenarioSpec::PsConvergence(PlaneWaveParams::default()),
            ScenarioSpec::LambTilted(LambParams::default()),
            ScenarioSpec::LayeredComplex(LayeredParams::default()),
            ScenarioSpec::SliverStudy(SliverParams::default()),
            ScenarioSpec::Custom(CustomParams::default()),
        ]
    }

    pub fn default_mesh(&self) -> MeshSpec {
        match self {
            ScenarioSpec::PlaneWaveCavity(_) => MeshSpec::Cavity {
                n: 25,
                m: 3,
                layers: 3,
                half: 2.5,
                radius: 0.25,
            },
            ScenarioSpec::PsConvergence(_) | ScenarioSpec::Custom(_) => MeshSpec::PeriodicSquare {
                n: 14,
                lo: -1.5,
                hi: 1.5,
                alternate: false,
                jitter: 0.0,
                seed: 0,
            },
            ScenarioSpec::LambTilted(p) => MeshSpec::Lamb {
                nx: 70,
                ny: 40,
                theta_deg: p.theta_deg,
            },
            ScenarioSpec::LayeredComplex(_) => MeshSpec::Layered { nx: 70, ny: 36 },
            ScenarioSpec::SliverStudy(p) => p.mesh(false),
        }
    }

    pub fn boundary(&self) -> BoundaryCondition {
        match self {
            ScenarioSpec::PsConvergence(_) | ScenarioSpec::SliverStudy(_) => BoundaryCondition::Periodic,
            ScenarioSpec::Custom(c) => c.bc,
            _ => BoundaryCondition::FreeSurface,
        }
    }

    pub fn materials(&self) -> Result<Vec<MaterialSpec>> {
        let lame = |lambda, mu, rho| MaterialSpec::Lame {
            region_id: 0,
            lambda,
            mu,
            rho,
        };
        Ok(match self {
            ScenarioSpec::PlaneWaveCavity(p) => vec![lame(p.lambda, p.mu, p.rho)],
            ScenarioSpec::PsConvergence(p) => vec![lame(p.lambda, p.mu, p.rho)],
            ScenarioSpec::SliverStudy(p) => vec![lame(p.wave.lambda, p.wave.mu, p.wave.rho)],
            ScenarioSpec::LambTilted(p) => vec![MaterialSpec::Speeds {
                region_id: 0,
                cp: p.cp,
                cs: p.cs,
                rho: p.rho,
            }],
            ScenarioSpec::LayeredComplex(p) => vec![
                MaterialSpec::Speeds {
                    region_id: 1,
                    cp: p.upper[0],
                    cs: p.upper[1],
                    rho: p.rho,
                },
                MaterialSpec::Speeds {
                    region_id: 2,
                    cp: p.lower[0],
                    cs: p.lower[1],
                    rho: p.rho,
                },
            ],
            ScenarioSpec::Custom(c) => {
                if c.materials.is_empty() {
                    return Err(Error::Config("custom scenario needs at least one material".into()));
                }
                c.materials.clone()
            }
        })
    }

    /// Exact solution of the plane-wave scenarios.
    pub fn exact(&self) -> Result<PlaneWave> {
        match self {
            ScenarioSpec::PsConvergence(p) => p.wave(),
            ScenarioSpec::SliverStudy(p) => p.wave.wave(),
            other => Err(Error::NoExactSolution(other.name().to_string())),
        }
    }

    /// Initial state `(σxx, σyy, σxy, u, v)` at `x`.
    pub fn initial(&self) -> Result<Box<dyn Fn([f64; 2]) -> [f64; 5] + Sync>> {
        Ok(match self {
            ScenarioSpec::PsConvergence(_) | ScenarioSpec::SliverStudy(_) => {
                let w = self.exact()?;
                Box::new(move |x| w.initial(x))
            }
            ScenarioSpec::PlaneWaveCavity(p) => {
                let a = p.amplitude;
                let r = [-2.0, 0.0, 4.0, 2.0, 0.0];
                Box::new(move |x: [f64; 2]| {
                    let s = (2.0 * std::f64::consts::PI * x[0]).sin();
                    r.map(|c| a * c * s)
                })
            }
            ScenarioSpec::Custom(c) => {
                let u = [c.stress[0], c.stress[1], c.stress[2], c.velocity[0], c.velocity[1]];
                Box::new(move |_| u)
            }
            ScenarioSpec::LambTilted(_) | ScenarioSpec::LayeredComplex(_) => Box::new(|_| [0.0; 5]),
        })
    }

    pub fn sources(&self) -> Vec<SourceTerm> {
        let directional = |theta_deg: f64, position, wavelet| {
            let t = theta_deg.to_radians();
            vec![SourceTerm::Point {
                position,
                direction: [-t.sin(), t.cos()],
                wavelet,
            }]
        };
        match self {
            ScenarioSpec::LambTilted(p) => directional(p.theta_deg, p.source, p.wavelet),
            ScenarioSpec::LayeredComplex(p) => directional(p.theta_deg, p.source, p.wavelet),
            ScenarioSpec::Custom(c) => c
                .sources
                .iter()
                .map(|s| SourceTerm::Point {
                    position: s.position,
                    direction: s.direction,
                    wavelet: s.wavelet,
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn receivers(&self) -> Vec<Receiver> {
        match self {
            ScenarioSpec::PlaneWaveCavity(p) => p.receivers.clone(),
            ScenarioSpec::LambTilted(p) => p.receivers.clone(),
            ScenarioSpec::LayeredComplex(p) => p.receivers.clone(),
            ScenarioSpec::Custom(c) => c.receivers.clone(),
            _ => Vec::new(),
        }
    }

    /// L2 projection of the initial data, constant in the first slab.
    pub fn init_state(&self, disc: &Discretization) -> Result<State> {
        let f = self.initial()?;
        disc.project(
            |x| {
                let u = f(x);
                [u[3], u[4]]
            },
            |x| {
                let u = f(x);
                [u[0], u[1], u[2]]
            },
        )
    }
}
