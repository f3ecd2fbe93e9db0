//! Isotropic elastic media in plane strain.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::StaggeredMesh;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicMaterial {
    pub lambda: f64,
    pub mu: f64,
    pub rho: f64,
}

impl IsotropicMaterial {
    pub fn new(lambda: f64, mu: f64, rho: f64) -> Result<Self> {
        let bad = |msg: &str| {
            Err(Error::InvalidMaterial {
                region: -1,
                msg: msg.to_string(),
            })
        };
        if !(mu > 0.0) {
            return bad("mu must be positive");
        }
        if !(rho > 0.0) {
            return bad("rho must be positive");
        }
        if !(lambda + mu > 0.0) {
            return bad("lambda + mu must be positive");
        }
        Ok(Self { lambda, mu, rho })
    }

    pub fn from_speeds(cp: f64, cs: f64, rho: f64) -> Result<Self> {
        let mu = rho * cs * cs;
        Self::new(rho * cp * cp - 2.0 * mu, mu, rho)
    }

    /// `(c_p, c_s)`.
    pub fn wave_speeds(&self) -> (f64, f64) {
        (
            ((self.lambda + 2.0 * self.mu) / self.rho).sqrt(),
            (self.mu / self.rho).sqrt(),
        )
    }

    pub fn stiffness(&self) -> Stiffness2D {
        stiffness_from_lame(self)
    }
}

/// Voigt stiffness acting on `(εxx, εyy, εxy)` and producing
/// `(σxx, σyy, σxy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stiffness2D {
    pub e: [[f64; 3]; 3],
    pub inv: [[f64; 3]; 3],
}

pub fn stiffness_from_lame(m: &IsotropicMaterial) -> Stiffness2D {
    let a = m.lambda + 2.0 * m.mu;
    let b = m.lambda;
    let det = 4.0 * m.mu * (m.lambda + m.mu);
    Stiffness2D {
        e: [[a, b, 0.0], [b, a, 0.0], [0.0, 0.0, 2.0 * m.mu]],
        inv: [
            [a / det, -b / det, 0.0],
            [-b / det, a / det, 0.0],
            [0.0, 0.0, 0.5 / m.mu],
        ],
    }
}

impl Stiffness2D {
    pub fn apply(&self, x: [f64; 3]) -> [f64; 3] {
        mat3_vec(&self.e, x)
    }

    pub fn apply_inv(&self, x: [f64; 3]) -> [f64; 3] {
        mat3_vec(&self.inv, x)
    }

    /// `diag(1, 1, 2) Ẽ⁻¹`, the symmetric matrix of the elastic energy form.
    pub fn energy_matrix(&self) -> [[f64; 3]; 3] {
        let mut w = self.inv;
        for v in &mut w[2] {
            *v *= 2.0;
        }
        w
    }
}

fn mat3_vec(m: &[[f64; 3]; 3], x: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
        m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
        m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2],
    ]
}

/// `σ : E⁻¹ σ` for a Voigt stress.
pub fn strain_energy_density(sigma: [f64; 3], s: &Stiffness2D) -> f64 {
    let eps = s.apply_inv(sigma);
    sigma[0] * eps[0] + sigma[1] * eps[1] + 2.0 * sigma[2] * eps[2]
}

/// Material entry of a configuration file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaterialSpec {
    Lame {
        region_id: i32,
        lambda: f64,
        mu: f64,
        rho: f64,
    },
    Speeds {
        region_id: i32,
        cp: f64,
        cs: f64,
        rho: f64,
    },
}

impl MaterialSpec {
    pub fn region_id(&self) -> i32 {
        match *self {
            MaterialSpec::Lame { region_id, .. } | MaterialSpec::Speeds { region_id, .. } => region_id,
        }
    }

    pub fn material(&self) -> Result<IsotropicMaterial> {
        let m = match *self {
            MaterialSpec::Lame { lambda, mu, rho, .. } => IsotropicMaterial::new(lambda, mu, rho),
            MaterialSpec::Speeds { cp, cs, rho, .. } => IsotropicMaterial::from_speeds(cp, cs, rho),
        };
        m.map_err(|e| match e {
            Error::InvalidMaterial { msg, .. } => Error::InvalidMaterial {
                region: self.region_id(),
                msg,
            },
            e => e,
        })
    }
}

/// Piecewise-constant material on the primal elements and dual cells.
#[derive(Debug, Clone)]
pub struct MaterialField {
    pub elements: Vec<IsotropicMaterial>,
    pub cells: Vec<IsotropicMaterial>,
    pub stiffness: Vec<Stiffness2D>,
}

impl MaterialField {
    pub fn new(mesh: &StaggeredMesh, table: &BTreeMap<i32, IsotropicMaterial>) -> Result<Self> {
        let get = |r: i32| table.get(&r).copied().ok_or(Error::MissingMaterial(r));
        let elements = mesh
            .primal
            .regions
            .iter()
            .map(|&r| get(r))
            .collect::<Result<Vec<_>>>()?;
        let cells = mesh
            .dual
            .cells
            .iter()
            .map(|c| get(c.region))
            .collect::<Result<Vec<_>>>()?;
        let stiffness = cells.iter().map(stiffness_from_lame).collect();
        Ok(Self {
            elements,
            cells,
            stiffness,
        })
    }

    pub fn homogeneous(mesh: &StaggeredMesh, m: IsotropicMaterial) -> Self {
        let elements = vec![m; mesh.n_elements()];
        let cells = vec![m; mesh.n_cells()];
        let stiffness = vec![stiffness_from_lame(&m); mesh.n_cells()];
        Self {
            elements,
            cells,
            stiffness,
        }
    }

    pub fn from_specs(mesh: &StaggeredMesh, specs: &[MaterialSpec]) -> Result<Self> {
        let mut table = BTreeMap::new();
        for s in specs {
            table.insert(s.region_id(), s.material()?);
        }
        Self::new(mesh, &table)
    }

    pub fn max_p_speed(&self) -> f64 {
        self.elements
            .iter()
            .chain(&self.cells)
            .map(|m| m.wave_speeds().0)
            .fold(0.0, f64::max)
    }
}
