//! Spatial mass and flux matrices.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::dense::spd_inverse;
use crate::basis::{make_quadrature, QuadKind, QuadratureRule, SpaceTimeBasis};
use crate::error::{Error, Result};
use crate::mesh::{StaggeredMesh, SubTriangle};

/// Flux blocks of one sub-triangle `T_{i,j}`.
///
/// `d[b][k, m] = ∫_Γ φ_k ψ_m n_b − ∫_T ∂_b φ_k ψ_m` and
/// `q[b][m, k] = ∫_T ψ_m ∂_b φ_k − ∫_Γ ψ_m φ_k n_b`, with `n = n_{i,j}`.
#[derive(Debug, Clone)]
pub struct SubOperators {
    pub d: [DMatrix<f64>; 2],
    pub q: [DMatrix<f64>; 2],
    /// Edge contributions `∫_Γ φ_k ψ_m n_b`, kept for boundary edges only.
    pub edge: Option<[DMatrix<f64>; 2]>,
    /// Set once the edge terms have been removed by a free-surface condition.
    pub free_surface: bool,
}

#[derive(Debug, Clone)]
pub struct SpatialOperators {
    pub elem_mass: Vec<DMatrix<f64>>,
    pub cell_mass: Vec<DMatrix<f64>>,
    pub cell_mass_inv: Vec<DMatrix<f64>>,
    pub subs: Vec<[SubOperators; 3]>,
}

struct Rules {
    tri_mass: QuadratureRule,
    tri: QuadratureRule,
    line: QuadratureRule,
}

fn rules(p: usize) -> Result<Rules> {
    Ok(Rules {
        tri_mass: make_quadrature(QuadKind::Triangle, 2 * p)?,
        tri: make_quadrature(QuadKind::Triangle, 4 * p)?,
        line: make_quadrature(QuadKind::Interval, 4 * p)?,
    })
}

/// Physical gradients of the primal basis on element `i` (constant Jacobian).
fn primal_grads(mesh: &StaggeredMesh, basis: &SpaceTimeBasis, i: usize, xi: [f64; 2], out: &mut [[f64; 2]]) {
    let [a, b, c] = mesh.primal.vertices(i);
    let j = [[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    basis.primal.grad(xi, out);
    for g in out.iter_mut() {
        // J⁻ᵀ g
        let gx = (j[1][1] * g[0] - j[1][0] * g[1]) / det;
        let gy = (-j[0][1] * g[0] + j[0][0] * g[1]) / det;
        *g = [gx, gy];
    }
}

fn element_mass(mesh: &StaggeredMesh, basis: &SpaceTimeBasis, rule: &QuadratureRule, i: usize) -> DMatrix<f64> {
    let n = basis.n_phi();
    let area = mesh.primal.area(i);
    let mut m = DMatrix::zeros(n, n);
    let mut phi = vec![0.0; n];
    for (pt, w) in rule.points.iter().zip(&rule.weights) {
        basis.primal.eval(*pt, &mut phi);
        let f = 2.0 * area * w;
        for c in 0..n {
            for r in 0..n {
                m[(r, c)] += f * phi[r] * phi[c];
            }
        }
    }
    m
}

fn sub_operators(
    mesh: &StaggeredMesh,
    basis: &SpaceTimeBasis,
    rules: &Rules,
    i: usize,
    sub: &SubTriangle,
) -> (SubOperators, DMatrix<f64>) {
    let nphi = basis.n_phi();
    let npsi = basis.n_psi();
    let frame = &mesh.dual.cells[sub.cell].frame;
    let to_frame = |x: [f64; 2]| frame.to_reference([x[0] + sub.shift[0], x[1] + sub.shift[1]]);
    let mut phi = vec![0.0; nphi];
    let mut dphi = vec![[0.0; 2]; nphi];
    let mut psi = vec![0.0; npsi];

    let mut vol = [DMatrix::zeros(nphi, npsi), DMatrix::zeros(nphi, npsi)];
    let mut qvol = [DMatrix::zeros(npsi, nphi), DMatrix::zeros(npsi, nphi)];
    let mut mass = DMatrix::zeros(npsi, npsi);
    for (pt, w) in rules.tri.points.iter().zip(&rules.tri.weights) {
        let x = sub.map(*pt);
        let f = 2.0 * sub.area * w;
        primal_grads(mesh, basis, i, mesh.primal.to_reference(i, x), &mut dphi);
        basis.dual.eval(to_frame(x), &mut psi);
        for m in 0..npsi {
            let fp = f * psi[m];
            for k in 0..nphi {
                for b in 0..2 {
                    vol[b][(k, m)] += fp * dphi[k][b];
                    qvol[b][(m, k)] += fp * dphi[k][b];
                }
            }
            for m2 in 0..npsi {
                mass[(m2, m)] += fp * psi[m2];
            }
        }
    }

    let mut edge = [DMatrix::zeros(nphi, npsi), DMatrix::zeros(nphi, npsi)];
    let mut qedge = [DMatrix::zeros(npsi, nphi), DMatrix::zeros(npsi, nphi)];
    for (pt, w) in rules.line.points.iter().zip(&rules.line.weights) {
        let x = sub.edge_point(pt[0]);
        let f = sub.length * w;
        basis.primal.eval(mesh.primal.to_reference(i, x), &mut phi);
        basis.dual.eval(to_frame(x), &mut psi);
        for m in 0..npsi {
            for k in 0..nphi {
                let v = f * phi[k] * psi[m];
                for b in 0..2 {
                    edge[b][(k, m)] += v * sub.normal[b];
                    qedge[b][(m, k)] += v * sub.normal[b];
                }
            }
        }
    }

    let d = [&edge[0] - &vol[0], &edge[1] - &vol[1]];
    let q = [&qvol[0] - &qedge[0], &qvol[1] - &qedge[1]];
    let boundary = mesh.dual.cells[sub.cell].is_boundary();
    (
        SubOperators {
            d,
            q,
            edge: boundary.then_some(edge),
            free_surface: false,
        },
        mass,
    )
}

impl SpatialOperators {
    pub fn assemble(mesh: &StaggeredMesh, basis: &SpaceTimeBasis) -> Result<Self> {
        let rules = rules(basis.degree())?;
        let ne = mesh.n_elements();
        let elem_mass: Vec<_> = (0..ne)
            .into_par_iter()
            .map(|i| element_mass(mesh, basis, &rules.tri_mass, i))
            .collect();
        let per_elem: Vec<_> = (0..ne)
            .into_par_iter()
            .map(|i| {
                let s = &mesh.dual.subs[i];
                let a = sub_operators(mesh, basis, &rules, i, &s[0]);
                let b = sub_operators(mesh, basis, &rules, i, &s[1]);
                let c = sub_operators(mesh, basis, &rules, i, &s[2]);
                ([a.0, b.0, c.0], [a.1, b.1, c.1])
            })
            .collect();
        let npsi = basis.n_psi();
        let mut cell_mass = vec![DMatrix::zeros(npsi, npsi); mesh.n_cells()];
        let mut subs = Vec::with_capacity(ne);
        for (i, (ops, masses)) in per_elem.into_iter().enumerate() {
            for (k, m) in masses.into_iter().enumerate() {
                cell_mass[mesh.dual.subs[i][k].cell] += m;
            }
            subs.push(ops);
        }
        let cell_mass_inv = cell_mass
            .par_iter()
            .enumerate()
            .map(|(j, m)| {
                spd_inverse(m).ok_or(Error::Singular {
                    what: "dual cell mass matrix",
                    index: j,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, m) in elem_mass.iter().enumerate() {
            if m.clone().cholesky().is_none() {
                return Err(Error::Singular {
                    what: "element mass matrix",
                    index: i,
                });
            }
        }
        Ok(Self {
            elem_mass,
            cell_mass,
            cell_mass_inv,
            subs,
        })
    }

    /// Removes the edge terms on boundary edges (traction-free boundary with
    /// zero velocity jump). Idempotent.
    pub fn apply_free_surface(&mut self) {
        for ops in self.subs.iter_mut().flat_map(|s| s.iter_mut()) {
            if ops.free_surface {
                continue;
            }
            if let Some(edge) = &ops.edge {
                for b in 0..2 {
                    ops.d[b] -= &edge[b];
                    ops.q[b] += &edge[b].transpose();
                }
                ops.free_surface = true;
            }
        }
    }
}
