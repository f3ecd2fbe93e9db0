use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::dense::gemv;
use crate::assembly::Operators;
use crate::basis::SpaceTimeBasis;
use crate::error::{Error, Result};
use crate::material::MaterialField;
use crate::mesh::StaggeredMesh;

/// Time integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Mode {
    /// Space-time DG with temporal degree `p_γ`.
    #[default]
    #[serde(rename = "spacetime")]
    SpaceTime,
    /// `p_γ = 0` with midpoint averaging of both updates.
    #[serde(rename = "cn")]
    CrankNicolson,
}

/// Treatment of boundary edges that are not periodically paired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// Traction-free: `σ · n = 0`.
    #[default]
    FreeSurface,
    /// Every boundary edge must be periodically paired.
    Periodic,
}

impl BoundaryCondition {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "free_surface" | "free-surface" => Ok(Self::FreeSurface),
            "periodic" => Ok(Self::Periodic),
            other => Err(Error::UnsupportedBoundary(other.to_string())),
        }
    }
}

/// Mesh, bases, operators and material of one run.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: StaggeredMesh,
    pub basis: SpaceTimeBasis,
    pub ops: Operators,
    pub material: MaterialField,
    pub mode: Mode,
    pub bc: BoundaryCondition,
    /// `(element, local edge)` pairs covering each dual cell.
    pub parts: Vec<Vec<(usize, usize)>>,
    pub nbv: usize,
    pub nbs: usize,
}

impl Discretization {
    pub fn new(
        mesh: StaggeredMesh,
        p: usize,
        p_time: usize,
        dt: f64,
        mode: Mode,
        material: MaterialField,
        bc: BoundaryCondition,
    ) -> Result<Self> {
        if mode == Mode::CrankNicolson && p_time != 0 {
            return Err(Error::Config(format!(
                "Crank-Nicolson mode requires p_time = 0, got {p_time}"
            )));
        }
        if !(dt > 0.0) {
            return Err(Error::Config(format!("time step {dt} must be positive")));
        }
        let basis = SpaceTimeBasis::new(p, p_time)?;
        let mut ops = Operators::assemble(&mesh, &basis, dt)?;
        let has_boundary = mesh.dual.cells.iter().any(|c| c.is_boundary());
        match bc {
            BoundaryCondition::FreeSurface => ops.spatial.apply_free_surface(),
            BoundaryCondition::Periodic if has_boundary => {
                return Err(Error::UnsupportedBoundary(
                    "periodic condition on a mesh with unpaired boundary edges".into(),
                ))
            }
            BoundaryCondition::Periodic => {}
        }
        let mut parts = vec![Vec::with_capacity(2); mesh.n_cells()];
        for i in 0..mesh.n_elements() {
            for k in 0..3 {
                parts[mesh.dual.subs[i][k].cell].push((i, k));
            }
        }
        let ng = basis.n_gamma();
        let nbv = 2 * basis.n_phi() * ng;
        let nbs = 3 * basis.n_psi() * ng;
        Ok(Self {
            mesh,
            basis,
            ops,
            material,
            mode,
            bc,
            parts,
            nbv,
            nbs,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.mesh.n_elements()
    }

    pub fn n_cells(&self) -> usize {
        self.mesh.n_cells()
    }

    pub fn dt(&self) -> f64 {
        self.ops.dt
    }

    pub fn velocity_len(&self) -> usize {
        self.n_elements() * self.nbv
    }

    pub fn stress_len(&self) -> usize {
        self.n_cells() * self.nbs
    }

    /// Weight of the coupling term: 1 for space-time, ¼ for Crank–Nicolson.
    pub fn coupling(&self) -> f64 {
        match self.mode {
            Mode::SpaceTime => 1.0,
            Mode::CrankNicolson => 0.25,
        }
    }

    fn n_gamma(&self) -> usize {
        self.basis.n_gamma()
    }

    /// Raw strain moments `Σ_i 𝒬̃_{i,j} v_i` of cell `j`, Voigt components.
    pub fn strain_into(&self, j: usize, x: &[f64], out: &mut [f64]) {
        let nphi = self.basis.n_phi();
        let npsi = self.basis.n_psi();
        let ng = self.n_gamma();
        let dt = self.ops.dt;
        out.fill(0.0);
        for &(e, k) in &self.parts[j] {
            let q = &self.ops.spatial.subs[e][k].q;
            let xe = &x[e * self.nbv..(e + 1) * self.nbv];
            for a in 0..ng {
                let f = dt * self.ops.temporal.weights[a];
                let u = &xe[a * nphi..(a + 1) * nphi];
                let v = &xe[(ng + a) * nphi..(ng + a + 1) * nphi];
                let (sxx, rest) = out.split_at_mut(ng * npsi);
                let (syy, sxy) = rest.split_at_mut(ng * npsi);
                let r = a * npsi..(a + 1) * npsi;
                gemv(&q[0], u, &mut sxx[r.clone()], f);
                gemv(&q[1], v, &mut syy[r.clone()], f);
                gemv(&q[1], u, &mut sxy[r.clone()], 0.5 * f);
                gemv(&q[0], v, &mut sxy[r], 0.5 * f);
            }
        }
    }

    /// `s ← Ẽ_j s` pointwise in the coefficients.
    pub fn stiffness_apply(&self, j: usize, s: &mut [f64]) {
        let e = &self.material.stiffness[j].e;
        let n = s.len() / 3;
        for idx in 0..n {
            let v = [s[idx], s[n + idx], s[2 * n + idx]];
            for c in 0..3 {
                s[c * n + idx] = e[c][0] * v[0] + e[c][1] * v[1] + e[c][2] * v[2];
            }
        }
    }

    /// `s ← (M_j^{-1}) s` per Voigt component (spatial inverse then `T⁻¹`).
    pub fn cell_mass_inv_apply(&self, j: usize, s: &mut [f64]) {
        let npsi = self.basis.n_psi();
        let ng = self.n_gamma();
        let minv = &self.ops.spatial.cell_mass_inv[j];
        let mut tmp = vec![0.0; ng * npsi];
        for c in 0..3 {
            let blk = &mut s[c * ng * npsi..(c + 1) * ng * npsi];
            tmp.fill(0.0);
            for a in 0..ng {
                gemv(minv, &blk[a * npsi..(a + 1) * npsi], &mut tmp[a * npsi..(a + 1) * npsi], 1.0);
            }
            self.time_apply(&self.ops.temporal.t_inv, &tmp, blk);
        }
    }

    /// `out[a] = Σ_b t[a,b] x[b]` on `ng` stacked blocks.
    pub(crate) fn time_apply(&self, t: &DMatrix<f64>, x: &[f64], out: &mut [f64]) {
        let ng = t.nrows();
        let n = x.len() / ng;
        out.fill(0.0);
        for a in 0..ng {
            for b in 0..ng {
                let f = t[(a, b)];
                if f == 0.0 {
                    continue;
                }
                let (o, xi) = (&mut out[a * n..(a + 1) * n], &x[b * n..(b + 1) * n]);
                for (oi, xv) in o.iter_mut().zip(xi) {
                    *oi += f * xv;
                }
            }
        }
    }

    /// `out_e += alpha · 𝒟_{e,j} y_j` for local edge `k` of element `e`.
    pub fn div_add(&self, e: usize, k: usize, y: &[f64], out: &mut [f64], alpha: f64) {
        let nphi = self.basis.n_phi();
        let npsi = self.basis.n_psi();
        let ng = self.n_gamma();
        let d = &self.ops.spatial.subs[e][k].d;
        let dt = self.ops.dt;
        for a in 0..ng {
            let f = alpha * dt * self.ops.temporal.weights[a];
            let yxx = &y[a * npsi..(a + 1) * npsi];
            let yyy = &y[(ng + a) * npsi..(ng + a + 1) * npsi];
            let yxy = &y[(2 * ng + a) * npsi..(2 * ng + a + 1) * npsi];
            let (ou, ov) = out.split_at_mut(ng * nphi);
            let r = a * nphi..(a + 1) * nphi;
            gemv(&d[0], yxx, &mut ou[r.clone()], f);
            gemv(&d[1], yxy, &mut ou[r.clone()], f);
            gemv(&d[0], yxy, &mut ov[r.clone()], f);
            gemv(&d[1], yyy, &mut ov[r], f);
        }
    }

    /// `out_e += alpha ρ_e (t ⊗ M̄_e) x_e` for both velocity components.
    pub fn elem_mass_add(&self, e: usize, t: &DMatrix<f64>, x: &[f64], out: &mut [f64], alpha: f64) {
        let nphi = self.basis.n_phi();
        let ng = self.n_gamma();
        let m = &self.ops.spatial.elem_mass[e];
        let rho = self.material.elements[e].rho;
        let mut mx = vec![0.0; ng * nphi];
        for c in 0..2 {
            let xc = &x[c * ng * nphi..(c + 1) * ng * nphi];
            mx.fill(0.0);
            for b in 0..ng {
                gemv(m, &xc[b * nphi..(b + 1) * nphi], &mut mx[b * nphi..(b + 1) * nphi], 1.0);
            }
            let oc = &mut out[c * ng * nphi..(c + 1) * ng * nphi];
            for a in 0..ng {
                for b in 0..ng {
                    let f = alpha * rho * t[(a, b)];
                    if f == 0.0 {
                        continue;
                    }
                    for (o, v) in oc[a * nphi..(a + 1) * nphi].iter_mut().zip(&mx[b * nphi..(b + 1) * nphi]) {
                        *o += f * v;
                    }
                }
            }
        }
    }

    /// `M_j^{-1} Ẽ_j Σ 𝒬̃ v` for every dual cell.
    pub fn compliance_field(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.stress_len()];
        y.par_chunks_mut(self.nbs).enumerate().for_each(|(j, yj)| {
            self.strain_into(j, x, yj);
            self.stiffness_apply(j, yj);
            self.cell_mass_inv_apply(j, yj);
        });
        y
    }

    /// `out_e += alpha Σ_j 𝒟_{e,j} y_j` for every element.
    pub fn div_field_add(&self, y: &[f64], out: &mut [f64], alpha: f64) {
        out.par_chunks_mut(self.nbv).enumerate().for_each(|(e, oe)| {
            for k in 0..3 {
                let j = self.mesh.dual.subs[e][k].cell;
                self.div_add(e, k, &y[j * self.nbs..(j + 1) * self.nbs], oe, alpha);
            }
        });
    }

    /// Elements sharing a dual cell with `e`, `e` first.
    pub fn stencil(&self, e: usize) -> Vec<usize> {
        let mut s = vec![e];
        for k in 0..3 {
            for &(o, _) in &self.parts[self.mesh.dual.subs[e][k].cell] {
                if !s.contains(&o) {
                    s.push(o);
                }
            }
        }
        s
    }
}
