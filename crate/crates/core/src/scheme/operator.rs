use nalgebra::DMatrix;
use rayon::prelude::*;

use super::Discretization;
use crate::solver::{BlockSource, LinearOperator};

/// Left-hand side of the velocity system:
/// `ρ M̄_i v_i − c Σ_j 𝒟_{i,j} M_j⁻¹ Ẽ_j Σ_{i'} 𝒬̃_{i',j} v_{i'}` with `c = 1`
/// (space-time) or `c = ¼` (Crank–Nicolson).
#[derive(Clone, Copy)]
pub struct SchurOperator<'a> {
    pub disc: &'a Discretization,
}

impl<'a> SchurOperator<'a> {
    pub fn new(disc: &'a Discretization) -> Self {
        Self { disc }
    }

    /// Spatial coupling of `e1` (rows) and `e2` (columns) through sub-cells
    /// `(e1,k1)` and `(e2,k2)` of cell `j`, per output/input component.
    fn spatial_coupling(&self, j: usize, k1: (usize, usize), k2: (usize, usize)) -> [[DMatrix<f64>; 2]; 2] {
        let d = self.disc;
        let ops2 = &d.ops.spatial.subs[k2.0][k2.1];
        let ops1 = &d.ops.spatial.subs[k1.0][k1.1];
        let minv = &d.ops.spatial.cell_mass_inv[j];
        let p = [minv * &ops2.q[0], minv * &ops2.q[1]];
        // strain row t, velocity column c: sum of (coefficient, P_b)
        let strain = |t: usize, c: usize| -> DMatrix<f64> {
            match (t, c) {
                (0, 0) => p[0].clone(),
                (1, 1) => p[1].clone(),
                (2, 0) => &p[1] * 0.5,
                (2, 1) => &p[0] * 0.5,
                _ => DMatrix::zeros(p[0].nrows(), p[0].ncols()),
            }
        };
        let e = &d.material.stiffness[j].e;
        let g: Vec<Vec<DMatrix<f64>>> = (0..3)
            .map(|s| {
                (0..2)
                    .map(|c| {
                        let mut acc = DMatrix::zeros(p[0].nrows(), p[0].ncols());
                        for t in 0..3 {
                            if e[s][t] != 0.0 {
                                acc += strain(t, c) * e[s][t];
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let dx = &ops1.d[0];
        let dy = &ops1.d[1];
        let out = |c: usize| -> [DMatrix<f64>; 2] {
            [dx * &g[0][c] + dy * &g[2][c], dx * &g[2][c] + dy * &g[1][c]]
        };
        let c0 = out(0);
        let c1 = out(1);
        let [u0, v0] = c0;
        let [u1, v1] = c1;
        [[u0, u1], [v0, v1]]
    }
}

impl LinearOperator for SchurOperator<'_> {
    fn dim(&self) -> usize {
        self.disc.velocity_len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let d = self.disc;
        let z = d.compliance_field(x);
        let t = &d.ops.temporal.t;
        y.par_chunks_mut(d.nbv).enumerate().for_each(|(e, ye)| {
            ye.fill(0.0);
            d.elem_mass_add(e, t, &x[e * d.nbv..(e + 1) * d.nbv], ye, 1.0);
        });
        d.div_field_add(&z, y, -d.coupling());
    }
}

impl BlockSource for SchurOperator<'_> {
    fn n_blocks(&self) -> usize {
        self.disc.n_elements()
    }

    fn block_size(&self) -> usize {
        self.disc.nbv
    }

    fn stencil(&self, i: usize) -> Vec<usize> {
        self.disc.stencil(i)
    }

    fn block(&self, row: usize, col: usize) -> Option<DMatrix<f64>> {
        let d = self.disc;
        let nphi = d.basis.n_phi();
        let ng = d.basis.n_gamma();
        let nb = d.nbv;
        let mut blk = DMatrix::zeros(nb, nb);
        let mut coupled = row == col;
        let tf = &d.ops.temporal;
        let w = DMatrix::from_fn(ng, ng, |a, b| if a == b { d.dt() * tf.weights[a] } else { 0.0 });
        let theta = &w * &tf.t_inv * &w;
        let c = d.coupling();
        for k1 in 0..3 {
            let j = d.mesh.dual.subs[row][k1].cell;
            for &(e2, k2) in &d.parts[j] {
                if e2 != col {
                    continue;
                }
                coupled = true;
                let s = self.spatial_coupling(j, (row, k1), (e2, k2));
                for o in 0..2 {
                    for ci in 0..2 {
                        let sm = &s[o][ci];
                        for a in 0..ng {
                            for b in 0..ng {
                                let f = -c * theta[(a, b)];
                                if f == 0.0 {
                                    continue;
                                }
                                let mut v = blk.view_mut(((o * ng + a) * nphi, (ci * ng + b) * nphi), (nphi, nphi));
                                v += sm * f;
                            }
                        }
                    }
                }
            }
        }
        if !coupled {
            return None;
        }
        if row == col {
            let m = &d.ops.spatial.elem_mass[row];
            let rho = d.material.elements[row].rho;
            for comp in 0..2 {
                for a in 0..ng {
                    for b in 0..ng {
                        let f = rho * tf.t[(a, b)];
                        if f == 0.0 {
                            continue;
                        }
                        let mut v = blk.view_mut(((comp * ng + a) * nphi, (comp * ng + b) * nphi), (nphi, nphi));
                        v += m * f;
                    }
                }
            }
        }
        Some(blk)
    }
}
