//! Discrete operators: space-time mass matrices, divergence and gradient
//! blocks, and source moments.

pub mod dense;
pub(crate) mod sources;
mod spatial;
mod temporal;

use nalgebra::DMatrix;

pub use sources::{SourceTerm, SourceVectors, Wavelet};
pub(crate) use sources::{resolve, time_moments, Resolved};
pub use spatial::{SpatialOperators, SubOperators};
pub use temporal::TemporalFactors;

use crate::basis::SpaceTimeBasis;
use crate::error::Result;
use crate::material::MaterialField;
use crate::mesh::StaggeredMesh;

/// All operators of one mesh, basis and time step.
///
/// Spatial blocks are stored once; the space-time matrices are Kronecker
/// products with the temporal factors. Within one velocity or stress
/// component the space-time index is `ks + N_space · kt`.
#[derive(Debug, Clone)]
pub struct Operators {
    pub spatial: SpatialOperators,
    pub temporal: TemporalFactors,
    pub dt: f64,
}

/// Which temporal factor a space-time mass matrix uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassKind {
    Plus,
    Minus,
    Circ,
    Full,
}

impl Operators {
    pub fn assemble(mesh: &StaggeredMesh, basis: &SpaceTimeBasis, dt: f64) -> Result<Self> {
        assert!(dt > 0.0, "time step must be positive");
        Ok(Self {
            spatial: SpatialOperators::assemble(mesh, basis)?,
            temporal: TemporalFactors::new(&basis.time)?,
            dt,
        })
    }

    /// Rebuilds only the time-step dependent scaling.
    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    fn temporal(&self, kind: MassKind) -> &DMatrix<f64> {
        match kind {
            MassKind::Plus => &self.temporal.plus,
            MassKind::Minus => &self.temporal.minus,
            MassKind::Circ => &self.temporal.circ,
            MassKind::Full => &self.temporal.t,
        }
    }

    /// `M̄_i` variants for one velocity component.
    pub fn element_mass(&self, i: usize, kind: MassKind) -> DMatrix<f64> {
        self.temporal(kind).kronecker(&self.spatial.elem_mass[i])
    }

    /// `M_j` variants for one stress component.
    pub fn cell_mass(&self, j: usize, kind: MassKind) -> DMatrix<f64> {
        self.temporal(kind).kronecker(&self.spatial.cell_mass[j])
    }

    pub fn cell_mass_inverse(&self, j: usize) -> DMatrix<f64> {
        self.temporal.t_inv.kronecker(&self.spatial.cell_mass_inv[j])
    }

    fn slab_weights(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.temporal.len(),
            self.temporal.weights.iter().map(|w| w * self.dt),
        ))
    }

    /// Space-time `𝒟_{i,j}` component `b` for local edge `k` of element `i`.
    pub fn flux_d(&self, i: usize, k: usize, b: usize) -> DMatrix<f64> {
        self.slab_weights().kronecker(&self.spatial.subs[i][k].d[b])
    }

    /// Space-time `𝒬̃_{i,j}` component `b` for local edge `k` of element `i`.
    pub fn flux_q(&self, i: usize, k: usize, b: usize) -> DMatrix<f64> {
        self.slab_weights().kronecker(&self.spatial.subs[i][k].q[b])
    }
}

/// Source moments of the slab `[t0, t0 + dt]`.
pub fn assemble_sources(
    mesh: &StaggeredMesh,
    basis: &SpaceTimeBasis,
    ops: &Operators,
    material: &MaterialField,
    sources: &[SourceTerm],
    t0: f64,
) -> Result<SourceVectors> {
    let resolved = resolve(mesh, sources)?;
    Ok(source_moments(mesh, basis, ops, material, &resolved, t0))
}

pub(crate) fn source_moments(
    mesh: &StaggeredMesh,
    basis: &SpaceTimeBasis,
    ops: &Operators,
    material: &MaterialField,
    sources: &[Resolved],
    t0: f64,
) -> SourceVectors {
    let nphi = basis.n_phi();
    let npsi = basis.n_psi();
    let ng = basis.n_gamma();
    let nbv = 2 * nphi * ng;
    let nbs = 3 * npsi * ng;
    let mut velocity = vec![0.0; mesh.n_elements() * nbv];
    let mut stress = vec![0.0; mesh.n_cells() * nbs];
    let dt = ops.dt;
    let w = &ops.temporal.weights;
    for s in sources {
        match s {
            Resolved::Point {
                element,
                xi,
                direction,
                wavelet,
            } => {
                let mut phi = vec![0.0; nphi];
                basis.primal.eval(*xi, &mut phi);
                let tm = time_moments(&basis.time, wavelet, t0, dt);
                let blk = &mut velocity[element * nbv..(element + 1) * nbv];
                for c in 0..2 {
                    for a in 0..ng {
                        for k in 0..nphi {
                            blk[(c * ng + a) * nphi + k] += direction[c] * phi[k] * dt * tm[a];
                        }
                    }
                }
            }
            Resolved::ElementVelocity { element, value } => {
                let rho = material.elements[*element].rho;
                let m = &ops.spatial.elem_mass[*element];
                let blk = &mut velocity[element * nbv..(element + 1) * nbv];
                for c in 0..2 {
                    for a in 0..ng {
                        for k in 0..nphi {
                            let int_phi: f64 = m.row(k).sum();
                            blk[(c * ng + a) * nphi + k] += rho * value[c] * int_phi * dt * w[a];
                        }
                    }
                }
            }
            Resolved::CellStress { cell, value } => {
                let m = &ops.spatial.cell_mass[*cell];
                let blk = &mut stress[cell * nbs..(cell + 1) * nbs];
                for c in 0..3 {
                    for a in 0..ng {
                        for k in 0..npsi {
                            let int_psi: f64 = m.row(k).sum();
                            blk[(c * ng + a) * npsi + k] += value[c] * int_psi * dt * w[a];
                        }
                    }
                }
            }
        }
    }
    SourceVectors { velocity, stress }
}
