//! Nodal temporal basis on the reference slab `[0, 1]`.

use super::lagrange::Lagrange1d;
use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};

pub const MAX_TIME_DEGREE: usize = 4;

/// Lagrange polynomials through the Gauss–Legendre points of `[0, 1]`.
///
/// Because the interpolation nodes coincide with a quadrature rule that is
/// exact for the product of two basis functions, the Gram matrix is
/// `diag(w)`.
#[derive(Debug, Clone)]
pub struct TimeBasis {
    p: usize,
    line: Lagrange1d,
    weights: Vec<f64>,
}

impl TimeBasis {
    pub fn new(p: usize) -> Result<Self> {
        if p > MAX_TIME_DEGREE {
            return Err(Error::DegreeOutOfRange {
                degree: p,
                min: 0,
                max: MAX_TIME_DEGREE,
            });
        }
        let (nodes, weights) = gauss_legendre(p + 1);
        Ok(Self {
            p,
            line: Lagrange1d::new(nodes),
            weights,
        })
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.p + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        self.line.nodes()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn eval(&self, tau: f64, out: &mut [f64]) {
        self.line.eval(tau, out);
    }

    pub fn deriv(&self, tau: f64, out: &mut [f64]) {
        self.line.deriv(tau, out);
    }

    pub fn values(&self, tau: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.len()];
        self.eval(tau, &mut v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::quadrature::{make_quadrature, QuadKind};

    #[test]
    fn constant_basis() {
        let t = TimeBasis::new(0).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.values(0.0), vec![1.0]);
        assert_eq!(t.values(1.0), vec![1.0]);
        assert_eq!(t.values(0.37), vec![1.0]);
        let mut d = [1.0];
        t.deriv(0.3, &mut d);
        assert_eq!(d[0], 0.0);
    }

    #[test]
    fn linear_nodes_and_gram() {
        let t = TimeBasis::new(1).unwrap();
        let s = 1.0 / (2.0 * 3f64.sqrt());
        assert!((t.nodes()[0] - (0.5 - s)).abs() < 1e-15);
        assert!((t.nodes()[1] - (0.5 + s)).abs() < 1e-15);
        let q = make_quadrature(QuadKind::Interval, 6).unwrap();
        let g01 = q.integrate(|x| {
            let v = t.values(x[0]);
            v[0] * v[1]
        });
        assert!(g01.abs() < 1e-15);
        for k in 0..2 {
            let g = q.integrate(|x| t.values(x[0])[k].powi(2));
            assert!((g - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn out_of_range() {
        assert!(TimeBasis::new(5).is_err());
    }
}
