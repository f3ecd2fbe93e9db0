//! Matrix-free Krylov solvers and block preconditioners.

mod cg;
mod gmres;
mod precond;

pub use cg::cg_solve;
pub use gmres::gmres_solve;
pub use precond::{build_pre1, build_pre2, BlockDiagonal, BlockSource, Preconditioner, PreconditionerKind, StencilInverse};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `y ← A x`.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Dense row-major matrix as an operator, for tests and small systems.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DenseOperator {
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            data.extend_from_slice(r);
        }
        Self { n, data }
    }

    pub fn from_matrix(m: &nalgebra::DMatrix<f64>) -> Self {
        let n = m.nrows();
        let data = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| m[(r, c)]).collect();
        Self { n, data }
    }
}

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, yr) in y.iter_mut().enumerate() {
            *yr = self.data[r * self.n..(r + 1) * self.n].iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cg,
    Gmres,
}

/// Side on which GMRES applies the preconditioner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreconditionerSide {
    Left,
    #[default]
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KrylovConfig {
    pub method: Method,
    pub tol: f64,
    pub abs_tol: f64,
    pub max_iter: usize,
    /// GMRES restart length; 0 keeps the full Krylov basis.
    pub restart: usize,
    pub side: PreconditionerSide,
    /// Fixed summation order in reductions.
    pub reproducible: bool,
}

impl Default for KrylovConfig {
    fn default() -> Self {
        Self {
            method: Method::Gmres,
            tol: 1e-10,
            abs_tol: 1e-14,
            max_iter: 1000,
            restart: 0,
            side: PreconditionerSide::Right,
            reproducible: false,
        }
    }
}

impl KrylovConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(crate::Error::Config(format!("solver tolerance {} must lie in (0, 1)", self.tol)));
        }
        if self.max_iter < 1 {
            return Err(crate::Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// Final true residual relative to `‖b‖`.
    pub residual: f64,
    pub history: Vec<f64>,
}

const CHUNK: usize = 4096;

pub(crate) fn dot(a: &[f64], b: &[f64], reproducible: bool) -> f64 {
    if a.len() <= CHUNK {
        return crate::assembly::dense::dot(a, b);
    }
    if reproducible {
        let partial: Vec<f64> = a
            .par_chunks(CHUNK)
            .zip(b.par_chunks(CHUNK))
            .map(|(x, y)| crate::assembly::dense::dot(x, y))
            .collect();
        partial.iter().sum()
    } else {
        a.par_chunks(CHUNK)
            .zip(b.par_chunks(CHUNK))
            .map(|(x, y)| crate::assembly::dense::dot(x, y))
            .sum()
    }
}

pub(crate) fn norm(a: &[f64], reproducible: bool) -> f64 {
    dot(a, a, reproducible).sqrt()
}

/// `y += alpha x`.
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_iter_mut().with_min_len(CHUNK).zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

pub(crate) fn residual(a: &dyn LinearOperator, b: &[f64], x: &[f64], r: &mut [f64]) {
    a.apply(x, r);
    r.par_iter_mut().with_min_len(CHUNK).zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
}

/// Builds a dense matrix by applying `a` to unit vectors.
pub fn materialize(a: &dyn LinearOperator, limit: usize) -> crate::Result<nalgebra::DMatrix<f64>> {
    let n = a.dim();
    if n > limit {
        return Err(crate::Error::TooLarge(n));
    }
    let mut m = nalgebra::DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for c in 0..n {
        e[c] = 1.0;
        a.apply(&e, &mut col);
        e[c] = 0.0;
        m.column_mut(c).copy_from_slice(&col);
    }
    Ok(m)
}
