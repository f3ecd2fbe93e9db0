#![allow(dead_code)]

use stagdg::material::{IsotropicMaterial, MaterialField};
use stagdg::mesh::{generate, PeriodicBox, PrimalMesh, StaggeredMesh};
use stagdg::scheme::{BoundaryCondition, Discretization, Mode};

pub fn unit_material() -> IsotropicMaterial {
    IsotropicMaterial::new(2.0, 1.0, 1.0).unwrap()
}

pub fn discretize(mesh: PrimalMesh, p: usize, pt: usize, dt: f64, mode: Mode) -> Discretization {
    let bc = if mesh.periodic.is_some() {
        BoundaryCondition::Periodic
    } else {
        BoundaryCondition::FreeSurface
    };
    let mesh = StaggeredMesh::new(mesh).unwrap();
    let mat = MaterialField::homogeneous(&mesh, unit_material());
    Discretization::new(mesh, p, pt, dt, mode, mat, bc).unwrap()
}

/// Periodic `[lo, hi]²` cut into four triangles through its centre.
pub fn periodic_cross(lo: f64, hi: f64) -> PrimalMesh {
    generate::cross_square(lo, hi).with_periodic(Some(PeriodicBox {
        xmin: lo,
        xmax: hi,
        ymin: lo,
        ymax: hi,
    }))
}

/// Jittered periodic square with `2 n²` triangles.
pub fn jittered_square(n: usize, seed: u64) -> PrimalMesh {
    let m = generate::periodic_square(n, -1.5, 1.5, true);
    generate::jitter(&m, 3.0 / n as f64, 0.15, seed).unwrap()
}

pub fn max_abs(m: &nalgebra::DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

/// Infinity norm (maximum absolute row sum).
pub fn inf_norm(m: &nalgebra::DMatrix<f64>) -> f64 {
    (0..m.nrows()).map(|r| m.row(r).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}
