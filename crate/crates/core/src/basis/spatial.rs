//! Nodal spatial bases: `P_p` on the reference triangle for velocity and
//! tensor-product `Q_p` on the unit square for stress.

use super::lagrange::Lagrange1d;
use crate::error::{Error, Result};

pub const MIN_DEGREE: usize = 1;
pub const MAX_DEGREE: usize = 6;

fn check_degree(p: usize) -> Result<()> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&p) {
        return Err(Error::DegreeOutOfRange {
            degree: p,
            min: MIN_DEGREE,
            max: MAX_DEGREE,
        });
    }
    Ok(())
}

/// `R_m(z) = Π_{l<m} (z - l)/(l + 1)` and its derivative.
fn silvester(m: usize, z: f64) -> (f64, f64) {
    let mut v = 1.0;
    let mut d = 0.0;
    for l in 0..m {
        let f = (z - l as f64) / (l as f64 + 1.0);
        d = d * f + v / (l as f64 + 1.0);
        v *= f;
    }
    (v, d)
}

/// Lagrange basis of degree `p` on the reference triangle with equispaced nodes
/// `(i/p, j/p)`, ordered `j` outer, `i` inner.
#[derive(Debug, Clone)]
pub struct PrimalBasis {
    p: usize,
    index: Vec<(usize, usize)>,
    nodes: Vec<[f64; 2]>,
}

impl PrimalBasis {
    pub fn new(p: usize) -> Result<Self> {
        check_degree(p)?;
        let mut index = Vec::new();
        let mut nodes = Vec::new();
        for j in 0..=p {
            for i in 0..=(p - j) {
                index.push((i, j));
                nodes.push([i as f64 / p as f64, j as f64 / p as f64]);
            }
        }
        Ok(Self { p, index, nodes })
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn eval(&self, xi: [f64; 2], out: &mut [f64]) {
        let p = self.p as f64;
        let l0 = 1.0 - xi[0] - xi[1];
        for (k, &(i, j)) in self.index.iter().enumerate() {
            let (a, _) = silvester(i, p * xi[0]);
            let (b, _) = silvester(j, p * xi[1]);
            let (c, _) = silvester(self.p - i - j, p * l0);
            out[k] = a * b * c;
        }
    }

    /// Reference gradients `(∂ξ, ∂η)`.
    pub fn grad(&self, xi: [f64; 2], out: &mut [[f64; 2]]) {
        let p = self.p as f64;
        let l0 = 1.0 - xi[0] - xi[1];
        for (k, &(i, j)) in self.index.iter().enumerate() {
            let (a, da) = silvester(i, p * xi[0]);
            let (b, db) = silvester(j, p * xi[1]);
            let (c, dc) = silvester(self.p - i - j, p * l0);
            out[k] = [p * (da * b * c - a * b * dc), p * (a * db * c - a * b * dc)];
        }
    }
}

/// Tensor-product Lagrange basis of degree `p` on `[0, 1]²`; function
/// `a + (p + 1) b` is `ℓ_a(ξ) ℓ_b(η)`.
#[derive(Debug, Clone)]
pub struct DualBasis {
    p: usize,
    line: Lagrange1d,
}

impl DualBasis {
    pub fn new(p: usize) -> Result<Self> {
        check_degree(p)?;
        Ok(Self {
            p,
            line: Lagrange1d::equispaced(p),
        })
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        (self.p + 1) * (self.p + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> Vec<[f64; 2]> {
        let x = self.line.nodes();
        let mut out = Vec::with_capacity(self.len());
        for &y in x {
            for &xv in x {
                out.push([xv, y]);
            }
        }
        out
    }

    pub fn eval(&self, xi: [f64; 2], out: &mut [f64]) {
        let n = self.p + 1;
        let mut lx = [0.0; MAX_DEGREE + 1];
        let mut ly = [0.0; MAX_DEGREE + 1];
        self.line.eval(xi[0], &mut lx[..n]);
        self.line.eval(xi[1], &mut ly[..n]);
        for b in 0..n {
            for a in 0..n {
                out[a + n * b] = lx[a] * ly[b];
            }
        }
    }

    pub fn grad(&self, xi: [f64; 2], out: &mut [[f64; 2]]) {
        let n = self.p + 1;
        let mut lx = [0.0; MAX_DEGREE + 1];
        let mut ly = [0.0; MAX_DEGREE + 1];
        let mut dx = [0.0; MAX_DEGREE + 1];
        let mut dy = [0.0; MAX_DEGREE + 1];
        self.line.eval(xi[0], &mut lx[..n]);
        self.line.eval(xi[1], &mut ly[..n]);
        self.line.deriv(xi[0], &mut dx[..n]);
        self.line.deriv(xi[1], &mut dy[..n]);
        for b in 0..n {
            for a in 0..n {
                out[a + n * b] = [dx[a] * ly[b], lx[a] * dy[b]];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(PrimalBasis::new(1).unwrap().len(), 3);
        assert_eq!(PrimalBasis::new(2).unwrap().len(), 6);
        assert_eq!(PrimalBasis::new(5).unwrap().len(), 21);
        assert_eq!(DualBasis::new(2).unwrap().len(), 9);
        assert!(PrimalBasis::new(0).is_err());
        assert!(DualBasis::new(7).is_err());
    }

    #[test]
    fn linear_primal_is_barycentric() {
        let b = PrimalBasis::new(1).unwrap();
        let mut v = [0.0; 3];
        let xi = [0.2, 0.3];
        b.eval(xi, &mut v);
        // node order (0,0), (1,0), (0,1)
        assert!((v[0] - 0.5).abs() < 1e-15);
        assert!((v[1] - 0.2).abs() < 1e-15);
        assert!((v[2] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn bilinear_center() {
        let b = DualBasis::new(1).unwrap();
        let mut v = [0.0; 4];
        b.eval([0.5, 0.5], &mut v);
        for x in v {
            assert!((x - 0.25).abs() < 1e-15);
        }
        b.eval([0.3, 0.7], &mut v);
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
