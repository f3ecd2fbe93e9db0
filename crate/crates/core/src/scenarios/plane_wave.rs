use nalgebra::{Matrix5, Vector5};

use crate::error::{Error, Result};

/// Plane-wave superposition `U(x, 0) = α (w_p r_p + w_s r_s) sin(2π n·x)` with
/// the eigenvectors written for the given (possibly non-unit) `n`, and its
/// exact evolution in a homogeneous medium.
///
/// State ordering is `(σxx, σyy, σxy, u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWave {
    /// Wave vector `2π n`.
    pub k: [f64; 2],
    /// Amplitude of the initial profile per component.
    pub profile: [f64; 5],
    /// `(speed, coefficient, eigenvector)` of each characteristic mode along
    /// the unit direction.
    pub modes: Vec<(f64, f64, [f64; 5])>,
}

impl PlaneWave {
    pub fn new(lambda: f64, mu: f64, rho: f64, alpha: f64, n: [f64; 2], weights: [f64; 2]) -> Result<Self> {
        let norm = n[0].hypot(n[1]);
        if !(norm > 0.0) {
            return Err(Error::Config("plane-wave direction must be non-zero".into()));
        }
        let cp = ((lambda + 2.0 * mu) / rho).sqrt();
        let cs = (mu / rho).sqrt();
        let (nx, ny) = (n[0], n[1]);
        let rp = [
            lambda + 2.0 * mu * nx * nx,
            lambda + 2.0 * mu * ny * ny,
            2.0 * mu * nx * ny,
            -nx * cp,
            -ny * cp,
        ];
        let rs = [
            -2.0 * mu * nx * ny,
            2.0 * mu * nx * ny,
            mu * (nx * nx - ny * ny),
            ny * cs,
            -nx * cs,
        ];
        let mut profile = [0.0; 5];
        for i in 0..5 {
            profile[i] = alpha * (weights[0] * rp[i] + weights[1] * rs[i]);
        }
        let d = [nx / norm, ny / norm];
        let t = [-d[1], d[0]];
        let p_mode = |s: f64| {
            // velocity along d, stress (λ I + 2μ d dᵀ) / s
            [
                (lambda + 2.0 * mu * d[0] * d[0]) / s,
                (lambda + 2.0 * mu * d[1] * d[1]) / s,
                2.0 * mu * d[0] * d[1] / s,
                d[0],
                d[1],
            ]
        };
        let s_mode = |s: f64| {
            [
                2.0 * mu * d[0] * t[0] / s,
                2.0 * mu * d[1] * t[1] / s,
                mu * (d[0] * t[1] + d[1] * t[0]) / s,
                t[0],
                t[1],
            ]
        };
        let static_mode = [t[0] * t[0], t[1] * t[1], t[0] * t[1], 0.0, 0.0];
        let basis = [
            (cp, p_mode(cp)),
            (-cp, p_mode(-cp)),
            (cs, s_mode(cs)),
            (-cs, s_mode(-cs)),
            (0.0, static_mode),
        ];
        let m = Matrix5::from_fn(|r, c| basis[c].1[r]);
        let coeff = m
            .lu()
            .solve(&Vector5::from_column_slice(&profile))
            .ok_or(Error::Singular {
                what: "plane-wave eigenbasis",
                index: 0,
            })?;
        let modes = basis
            .iter()
            .zip(coeff.iter())
            .map(|(&(s, e), &c)| (s, c, e))
            .collect();
        Ok(Self {
            k: [2.0 * std::f64::consts::PI * nx, 2.0 * std::f64::consts::PI * ny],
            profile,
            modes,
        })
    }

    /// Initial state at `x`.
    pub fn initial(&self, x: [f64; 2]) -> [f64; 5] {
        let s = (self.k[0] * x[0] + self.k[1] * x[1]).sin();
        self.profile.map(|a| a * s)
    }

    /// Exact state at `x` and time `t`.
    pub fn exact(&self, x: [f64; 2], t: f64) -> [f64; 5] {
        let kn = self.k[0].hypot(self.k[1]);
        let phase = self.k[0] * x[0] + self.k[1] * x[1];
        let mut out = [0.0; 5];
        for &(s, c, e) in &self.modes {
            let v = c * (phase + kn * s * t).sin();
            for i in 0..5 {
                out[i] += v * e[i];
            }
        }
        out
    }
}
