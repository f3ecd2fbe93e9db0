use rayon::prelude::*;

use super::{Discretization, Energy, Mode, SchurOperator, State};
use crate::assembly::sources::{resolve, Resolved, SourceTerm, SourceVectors};
use crate::assembly::source_moments;
use crate::error::{Error, Result};
use crate::solver::{cg_solve, gmres_solve, KrylovConfig, Method, Preconditioner, PreconditionerKind, SolveStats};

/// Outcome of one slab.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub step: usize,
    /// Time at the end of the slab.
    pub time: f64,
    pub iterations: usize,
    pub residual: f64,
    pub history: Vec<f64>,
    /// Energy at the end of the slab.
    pub energy: Energy,
    /// Energy of the jump at the start of the slab.
    pub jump: Energy,
}

/// Discretization, current state, sources and solver settings.
pub struct Simulation {
    pub disc: Discretization,
    pub state: State,
    pub solver: KrylovConfig,
    precond: Preconditioner,
    sources: Vec<Resolved>,
}

impl Simulation {
    pub fn new(
        disc: Discretization,
        state: State,
        sources: &[SourceTerm],
        solver: KrylovConfig,
        precond: PreconditionerKind,
    ) -> Result<Self> {
        solver.validate()?;
        if state.velocity.len() != disc.velocity_len() || state.stress.len() != disc.stress_len() {
            return Err(Error::Config("state does not match the discretization".into()));
        }
        let sources = resolve(&disc.mesh, sources)?;
        let precond = Preconditioner::build(precond, &SchurOperator::new(&disc))?;
        Ok(Self {
            disc,
            state,
            solver,
            precond,
            sources,
        })
    }

    pub fn preconditioner(&self) -> &Preconditioner {
        &self.precond
    }

    pub fn time(&self) -> f64 {
        self.state.time
    }

    pub fn energy(&self) -> Energy {
        self.disc.total_energy(&self.state)
    }

    /// Source moments of the next slab.
    pub fn next_sources(&self) -> SourceVectors {
        let d = &self.disc;
        source_moments(&d.mesh, &d.basis, &d.ops, &d.material, &self.sources, self.state.time)
    }

    /// Right-hand side and stress offset `z` of the next slab.
    pub fn rhs(&self, src: &SourceVectors) -> (Vec<f64>, Vec<f64>) {
        let d = &self.disc;
        let tf = &d.ops.temporal;
        let old = &self.state;
        let mut z = vec![0.0; d.stress_len()];
        let mut b = vec![0.0; d.velocity_len()];
        match d.mode {
            Mode::SpaceTime => {
                z.par_chunks_mut(d.nbs).enumerate().for_each(|(j, zj)| {
                    let sj = &src.stress[j * d.nbs..(j + 1) * d.nbs];
                    zj.copy_from_slice(sj);
                    d.cell_mass_inv_apply(j, zj);
                    let old_j = &old.stress[j * d.nbs..(j + 1) * d.nbs];
                    let n = d.nbs / 3;
                    let mut tmp = vec![0.0; n];
                    for c in 0..3 {
                        d.time_apply(&tf.carry, &old_j[c * n..(c + 1) * n], &mut tmp);
                        for (zi, t) in zj[c * n..(c + 1) * n].iter_mut().zip(&tmp) {
                            *zi += t;
                        }
                    }
                });
                b.par_chunks_mut(d.nbv).enumerate().for_each(|(e, be)| {
                    be.copy_from_slice(&src.velocity[e * d.nbv..(e + 1) * d.nbv]);
                    d.elem_mass_add(e, &tf.minus, &old.velocity[e * d.nbv..(e + 1) * d.nbv], be, 1.0);
                });
                d.div_field_add(&z, &mut b, 1.0);
            }
            Mode::CrankNicolson => {
                let strain = d.compliance_field(&old.velocity);
                let mut y = vec![0.0; d.stress_len()];
                y.par_chunks_mut(d.nbs).enumerate().for_each(|(j, yj)| {
                    let sj = &src.stress[j * d.nbs..(j + 1) * d.nbs];
                    yj.copy_from_slice(sj);
                    d.cell_mass_inv_apply(j, yj);
                    let r = j * d.nbs..(j + 1) * d.nbs;
                    for ((yi, s), c) in yj.iter_mut().zip(&old.stress[r.clone()]).zip(&strain[r]) {
                        *yi = s + 0.5 * *yi + 0.25 * c;
                    }
                });
                // z carries σⁿ + M⁻¹𝒮 + ½ M⁻¹ Ẽ 𝒬̃ vⁿ
                z.par_iter_mut().enumerate().for_each(|(i, zi)| {
                    *zi = 2.0 * y[i] - old.stress[i];
                });
                b.par_chunks_mut(d.nbv).enumerate().for_each(|(e, be)| {
                    be.copy_from_slice(&src.velocity[e * d.nbv..(e + 1) * d.nbv]);
                    d.elem_mass_add(e, &tf.t, &old.velocity[e * d.nbv..(e + 1) * d.nbv], be, 1.0);
                });
                d.div_field_add(&y, &mut b, 1.0);
            }
        }
        (b, z)
    }

    fn initial_guess(&self) -> Vec<f64> {
        let d = &self.disc;
        let ng = d.basis.n_gamma();
        let nphi = d.basis.n_phi();
        let trace = d.velocity_trace(&self.state.velocity, 1.0);
        let mut x = vec![0.0; d.velocity_len()];
        x.par_chunks_mut(d.nbv).enumerate().for_each(|(e, xe)| {
            for c in 0..2 {
                let src = &trace[(2 * e + c) * nphi..(2 * e + c + 1) * nphi];
                for a in 0..ng {
                    xe[(c * ng + a) * nphi..(c * ng + a + 1) * nphi].copy_from_slice(src);
                }
            }
        });
        x
    }

    /// Solves `A x = b` with the configured method and preconditioner.
    pub fn solve(&self, b: &[f64], x: &mut [f64]) -> Result<SolveStats> {
        let a = SchurOperator::new(&self.disc);
        match self.solver.method {
            Method::Cg => cg_solve(&a, b, x, &self.solver, &self.precond),
            Method::Gmres => gmres_solve(&a, b, x, &self.solver, &self.precond),
        }
    }

    /// Advances one slab.
    pub fn step(&mut self) -> Result<StepReport> {
        let slice = self.state.step;
        self.advance().map_err(|e| Error::AtSlice {
            slice,
            source: Box::new(e),
        })
    }

    fn advance(&mut self) -> Result<StepReport> {
        let src = self.next_sources();
        let (b, z) = self.rhs(&src);
        let mut v = self.initial_guess();
        let stats = self.solve(&b, &mut v)?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Diverged {
                iterations: stats.iterations,
            });
        }
        let d = &self.disc;
        let c = d.compliance_field(&v);
        let stress: Vec<f64> = match d.mode {
            Mode::SpaceTime => z.iter().zip(&c).map(|(a, b)| a + b).collect(),
            Mode::CrankNicolson => z.iter().zip(&c).map(|(a, b)| a + 0.5 * b).collect(),
        };
        let new = State {
            velocity: v,
            stress,
            step: self.state.step + 1,
            time: self.state.time + d.dt(),
        };
        let jump = match d.mode {
            Mode::SpaceTime => d.jump_energy(&self.state, &new),
            Mode::CrankNicolson => Energy::default(),
        };
        self.state = new;
        Ok(StepReport {
            step: self.state.step,
            time: self.state.time,
            iterations: stats.iterations,
            residual: stats.residual,
            history: stats.history,
            energy: self.energy(),
            jump,
        })
    }

    /// Advances `n` slabs.
    pub fn run(&mut self, n: usize) -> Result<Vec<StepReport>> {
        (0..n).map(|_| self.step()).collect()
    }
}
