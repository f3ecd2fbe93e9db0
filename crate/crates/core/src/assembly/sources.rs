//! Source terms and their space-time moments.

use serde::{Deserialize, Serialize};

use crate::basis::gauss_legendre;
use crate::error::Result;
use crate::mesh::StaggeredMesh;

/// Source time function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Wavelet {
    /// `a1 (0.5 + a2 (t − t_delay)²) exp(a2 (t − t_delay)²)` with
    /// `a2 = −(π f_c)²`.
    Ricker { a1: f64, fc: f64, t_delay: f64 },
    Constant { value: f64 },
}

impl Wavelet {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Wavelet::Ricker { a1, fc, t_delay } => {
                let a2 = -(std::f64::consts::PI * fc).powi(2);
                let s = a2 * (t - t_delay).powi(2);
                a1 * (0.5 + s) * s.exp()
            }
            Wavelet::Constant { value } => value,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SourceTerm {
    /// Momentum point source `d δ(x − x_s) S(t)` (the density-weighted
    /// velocity source).
    Point {
        position: [f64; 2],
        direction: [f64; 2],
        wavelet: Wavelet,
    },
    /// Constant velocity source `value` on one element, weighted by the
    /// element density.
    ElementVelocity { element: usize, value: [f64; 2] },
    /// Constant stress-rate source on one dual cell.
    CellStress { cell: usize, value: [f64; 3] },
}

/// Point sources resolved to an element and reference coordinates.
#[derive(Debug, Clone)]
pub(crate) enum Resolved {
    Point {
        element: usize,
        xi: [f64; 2],
        direction: [f64; 2],
        wavelet: Wavelet,
    },
    ElementVelocity { element: usize, value: [f64; 2] },
    CellStress { cell: usize, value: [f64; 3] },
}

pub(crate) fn resolve(mesh: &StaggeredMesh, sources: &[SourceTerm]) -> Result<Vec<Resolved>> {
    sources
        .iter()
        .map(|s| {
            Ok(match *s {
                SourceTerm::Point {
                    position,
                    direction,
                    wavelet,
                } => {
                    let element = mesh.primal.locate(position)?;
                    Resolved::Point {
                        element,
                        xi: mesh.primal.to_reference(element, position),
                        direction,
                        wavelet,
                    }
                }
                SourceTerm::ElementVelocity { element, value } => Resolved::ElementVelocity { element, value },
                SourceTerm::CellStress { cell, value } => Resolved::CellStress { cell, value },
            })
        })
        .collect()
}

/// `∫_0^1 γ_a(τ) S(t0 + τ Δt) dτ` for every temporal basis function.
pub(crate) fn time_moments(time: &crate::basis::TimeBasis, w: &Wavelet, t0: f64, dt: f64) -> Vec<f64> {
    let n = time.len();
    let (x, wq) = gauss_legendre(12);
    let mut g = vec![0.0; n];
    let mut out = vec![0.0; n];
    for (tau, wt) in x.iter().zip(&wq) {
        time.eval(*tau, &mut g);
        let s = w.eval(t0 + tau * dt);
        for a in 0..n {
            out[a] += wt * g[a] * s;
        }
    }
    out
}

/// Source moments of one slab: `(ρ𝒮)` per element and `𝒮` per dual cell,
/// laid out like the state vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceVectors {
    pub velocity: Vec<f64>,
    pub stress: Vec<f64>,
}

impl SourceVectors {
    pub fn is_zero(&self) -> bool {
        self.velocity.iter().chain(&self.stress).all(|&v| v == 0.0)
    }
}
