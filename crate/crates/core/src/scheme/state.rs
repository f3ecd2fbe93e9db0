use rayon::prelude::*;

use super::Discretization;
use crate::assembly::dense::{dot, gemv};
use crate::basis::{make_quadrature, QuadKind};
use crate::error::Result;

/// Coefficients of one slab. Velocity blocks are `[component][time][space]`
/// per element, stress blocks `[Voigt component][time][space]` per dual cell.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub velocity: Vec<f64>,
    pub stress: Vec<f64>,
    pub step: usize,
    /// Physical time at the end of the slab (`τ = 1`).
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Energy {
    pub kinetic: f64,
    pub elastic: f64,
}

impl Energy {
    pub fn total(&self) -> f64 {
        self.kinetic + self.elastic
    }
}

impl Discretization {
    pub fn zero_state(&self) -> State {
        State {
            velocity: vec![0.0; self.velocity_len()],
            stress: vec![0.0; self.stress_len()],
            step: 0,
            time: 0.0,
        }
    }

    /// Spatial velocity coefficients `[element][component][space]` at `τ`.
    pub fn velocity_trace(&self, v: &[f64], tau: f64) -> Vec<f64> {
        let g = self.basis.time.values(tau);
        trace(v, &g, 2, self.basis.n_phi())
    }

    /// Spatial stress coefficients `[cell][component][space]` at `τ`.
    pub fn stress_trace(&self, s: &[f64], tau: f64) -> Vec<f64> {
        let g = self.basis.time.values(tau);
        trace(s, &g, 3, self.basis.n_psi())
    }

    /// `½ Σ ρ vᵀ M̄ v` of a velocity trace.
    pub fn kinetic_energy(&self, trace: &[f64]) -> f64 {
        let nphi = self.basis.n_phi();
        let parts: Vec<f64> = trace
            .par_chunks(2 * nphi)
            .enumerate()
            .map(|(e, t)| {
                let m = &self.ops.spatial.elem_mass[e];
                let mut mv = vec![0.0; nphi];
                let mut s = 0.0;
                for c in 0..2 {
                    mv.fill(0.0);
                    let tc = &t[c * nphi..(c + 1) * nphi];
                    gemv(m, tc, &mut mv, 1.0);
                    s += dot(tc, &mv);
                }
                0.5 * self.material.elements[e].rho * s
            })
            .collect();
        parts.iter().sum()
    }

    /// `½ Σ σᵀ (M ⊗ diag(1,1,2) Ẽ⁻¹) σ` of a stress trace.
    pub fn elastic_energy(&self, trace: &[f64]) -> f64 {
        let npsi = self.basis.n_psi();
        let parts: Vec<f64> = trace
            .par_chunks(3 * npsi)
            .enumerate()
            .map(|(j, t)| {
                let m = &self.ops.spatial.cell_mass[j];
                let w = self.material.stiffness[j].energy_matrix();
                let mut ms = vec![0.0; 3 * npsi];
                for c in 0..3 {
                    gemv(m, &t[c * npsi..(c + 1) * npsi], &mut ms[c * npsi..(c + 1) * npsi], 1.0);
                }
                let mut s = 0.0;
                for r in 0..3 {
                    for c in 0..3 {
                        if w[r][c] != 0.0 {
                            s += w[r][c] * dot(&t[r * npsi..(r + 1) * npsi], &ms[c * npsi..(c + 1) * npsi]);
                        }
                    }
                }
                0.5 * s
            })
            .collect();
        parts.iter().sum()
    }

    /// Energy of the slab polynomial at `τ`.
    pub fn energy_at(&self, state: &State, tau: f64) -> Energy {
        Energy {
            kinetic: self.kinetic_energy(&self.velocity_trace(&state.velocity, tau)),
            elastic: self.elastic_energy(&self.stress_trace(&state.stress, tau)),
        }
    }

    /// Energy at the end of the slab.
    pub fn total_energy(&self, state: &State) -> Energy {
        self.energy_at(state, 1.0)
    }

    /// Energy of the temporal jump between the end of `old` and the start of
    /// `new`.
    pub fn jump_energy(&self, old: &State, new: &State) -> Energy {
        let sub = |a: Vec<f64>, b: Vec<f64>| a.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<_>>();
        let dv = sub(self.velocity_trace(&new.velocity, 0.0), self.velocity_trace(&old.velocity, 1.0));
        let ds = sub(self.stress_trace(&new.stress, 0.0), self.stress_trace(&old.stress, 1.0));
        Energy {
            kinetic: self.kinetic_energy(&dv),
            elastic: self.elastic_energy(&ds),
        }
    }

    /// L2 projection of `velocity(x)` and `stress(x)` (Voigt), constant in time.
    pub fn project(
        &self,
        velocity: impl Fn([f64; 2]) -> [f64; 2] + Sync,
        stress: impl Fn([f64; 2]) -> [f64; 3] + Sync,
    ) -> Result<State> {
        let p = self.basis.degree();
        let rule = make_quadrature(QuadKind::Triangle, (4 * p + 4).min(crate::basis::quadrature::MAX_EXACTNESS))?;
        let nphi = self.basis.n_phi();
        let npsi = self.basis.n_psi();
        let ng = self.basis.n_gamma();
        let mesh = &self.mesh;
        let mut state = self.zero_state();
        state.velocity.par_chunks_mut(self.nbv).enumerate().for_each(|(e, blk)| {
            let mut rhs = vec![0.0; 2 * nphi];
            let mut phi = vec![0.0; nphi];
            let area = mesh.primal.area(e);
            let [a, b, c] = mesh.primal.vertices(e);
            for (pt, w) in rule.points.iter().zip(&rule.weights) {
                let x = [
                    a[0] + pt[0] * (b[0] - a[0]) + pt[1] * (c[0] - a[0]),
                    a[1] + pt[0] * (b[1] - a[1]) + pt[1] * (c[1] - a[1]),
                ];
                self.basis.primal.eval(*pt, &mut phi);
                let f = velocity(x);
                for comp in 0..2 {
                    for k in 0..nphi {
                        rhs[comp * nphi + k] += 2.0 * area * w * f[comp] * phi[k];
                    }
                }
            }
            let chol = self.ops.spatial.elem_mass[e].clone().cholesky().expect("SPD mass");
            for comp in 0..2 {
                let sol = chol.solve(&nalgebra::DVector::from_column_slice(&rhs[comp * nphi..(comp + 1) * nphi]));
                for t in 0..ng {
                    blk[(comp * ng + t) * nphi..(comp * ng + t + 1) * nphi].copy_from_slice(sol.as_slice());
                }
            }
        });
        state.stress.par_chunks_mut(self.nbs).enumerate().for_each(|(j, blk)| {
            let mut rhs = vec![0.0; 3 * npsi];
            let mut psi = vec![0.0; npsi];
            let frame = &mesh.dual.cells[j].frame;
            for &(e, k) in &self.parts[j] {
                let sub = &mesh.dual.subs[e][k];
                for (pt, w) in rule.points.iter().zip(&rule.weights) {
                    let x = sub.map(*pt);
                    let f = stress(x);
                    self.basis.dual.eval(frame.to_reference([x[0] + sub.shift[0], x[1] + sub.shift[1]]), &mut psi);
                    for comp in 0..3 {
                        for m in 0..npsi {
                            rhs[comp * npsi + m] += 2.0 * sub.area * w * f[comp] * psi[m];
                        }
                    }
                }
            }
            let minv = &self.ops.spatial.cell_mass_inv[j];
            for comp in 0..3 {
                let mut sol = vec![0.0; npsi];
                gemv(minv, &rhs[comp * npsi..(comp + 1) * npsi], &mut sol, 1.0);
                for t in 0..ng {
                    blk[(comp * ng + t) * npsi..(comp * ng + t + 1) * npsi].copy_from_slice(&sol);
                }
            }
        });
        Ok(state)
    }

    /// Velocity `(u, v)` at `x` inside element `e` at slab time `τ`.
    pub fn velocity_at(&self, state: &State, e: usize, x: [f64; 2], tau: f64) -> [f64; 2] {
        let nphi = self.basis.n_phi();
        let ng = self.basis.n_gamma();
        let mut phi = vec![0.0; nphi];
        self.basis.primal.eval(self.mesh.primal.to_reference(e, x), &mut phi);
        let g = self.basis.time.values(tau);
        let blk = &state.velocity[e * self.nbv..(e + 1) * self.nbv];
        let mut out = [0.0; 2];
        for (c, o) in out.iter_mut().enumerate() {
            for a in 0..ng {
                *o += g[a] * dot(&blk[(c * ng + a) * nphi..(c * ng + a + 1) * nphi], &phi);
            }
        }
        out
    }

    /// Stress at `x` evaluated with the polynomial of the dual cell of local
    /// edge `k` of element `e`.
    pub fn stress_at(&self, state: &State, e: usize, k: usize, x: [f64; 2], tau: f64) -> [f64; 3] {
        let npsi = self.basis.n_psi();
        let ng = self.basis.n_gamma();
        let sub = &self.mesh.dual.subs[e][k];
        let j = sub.cell;
        let mut psi = vec![0.0; npsi];
        let xi = self.mesh.dual.cells[j]
            .frame
            .to_reference([x[0] + sub.shift[0], x[1] + sub.shift[1]]);
        self.basis.dual.eval(xi, &mut psi);
        let g = self.basis.time.values(tau);
        let blk = &state.stress[j * self.nbs..(j + 1) * self.nbs];
        let mut out = [0.0; 3];
        for (c, o) in out.iter_mut().enumerate() {
            for a in 0..ng {
                *o += g[a] * dot(&blk[(c * ng + a) * npsi..(c * ng + a + 1) * npsi], &psi);
            }
        }
        out
    }

    /// Local edge of `e` whose dual sub-triangle contains `x`; ties go to the
    /// lowest edge index.
    pub fn covering_edge(&self, e: usize, x: [f64; 2]) -> usize {
        let subs = &self.mesh.dual.subs[e];
        let mut best = None;
        for k in 0..3 {
            let [c, a, b] = subs[k].vertices;
            let l = [
                crate::mesh::signed_area(x, a, b),
                crate::mesh::signed_area(c, x, b),
                crate::mesh::signed_area(c, a, x),
            ];
            let tol = -1e-12 * subs[k].area;
            if l.iter().all(|&v| v >= tol) {
                let key = (subs[k].edge, k);
                if best.is_none_or(|(bk, _)| key.0 < bk) {
                    best = Some(key);
                }
            }
        }
        best.map(|(_, k)| k).unwrap_or_else(|| self.nearest_edge(e, x))
    }

    /// Local edge of `e` closest to `x`.
    pub fn nearest_edge(&self, e: usize, x: [f64; 2]) -> usize {
        let subs = &self.mesh.dual.subs[e];
        let dist = |k: usize| {
            let [_, a, b] = subs[k].vertices;
            let ab = [b[0] - a[0], b[1] - a[1]];
            let t = (((x[0] - a[0]) * ab[0] + (x[1] - a[1]) * ab[1]) / (ab[0] * ab[0] + ab[1] * ab[1])).clamp(0.0, 1.0);
            let p = [a[0] + t * ab[0], a[1] + t * ab[1]];
            (x[0] - p[0]).hypot(x[1] - p[1])
        };
        (0..3)
            .min_by(|&a, &b| dist(a).total_cmp(&dist(b)).then(subs[a].edge.cmp(&subs[b].edge)))
            .unwrap()
    }
}

fn trace(x: &[f64], g: &[f64], ncomp: usize, nspace: usize) -> Vec<f64> {
    let ng = g.len();
    let nb = ncomp * ng * nspace;
    let nblk = x.len() / nb;
    let mut out = vec![0.0; nblk * ncomp * nspace];
    out.par_chunks_mut(ncomp * nspace).enumerate().for_each(|(e, o)| {
        let blk = &x[e * nb..(e + 1) * nb];
        for c in 0..ncomp {
            for a in 0..ng {
                let src = &blk[(c * ng + a) * nspace..(c * ng + a + 1) * nspace];
                for (oi, s) in o[c * nspace..(c + 1) * nspace].iter_mut().zip(src) {
                    *oi += g[a] * s;
                }
            }
        }
    });
    out
}
