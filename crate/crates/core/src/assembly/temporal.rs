//! Purely temporal factors of the space-time matrices on the reference slab.

use nalgebra::DMatrix;

use crate::basis::{make_quadrature, QuadKind, TimeBasis};
use crate::error::{Error, Result};

/// Temporal matrices of one slab for test index `k` (row) and trial index
/// `m` (column):
/// `plus[k,m] = γ_k(1)γ_m(1)`, `circ[k,m] = ∫ γ_k' γ_m dτ`,
/// `minus[k,m] = γ_k(0)γ_m(1)`, `t = plus − circ`.
#[derive(Debug, Clone)]
pub struct TemporalFactors {
    pub weights: Vec<f64>,
    pub at_start: Vec<f64>,
    pub at_end: Vec<f64>,
    pub gram: DMatrix<f64>,
    pub plus: DMatrix<f64>,
    pub circ: DMatrix<f64>,
    pub minus: DMatrix<f64>,
    pub t: DMatrix<f64>,
    pub t_inv: DMatrix<f64>,
    /// `T⁻¹ minus`, which maps old stress coefficients into the new slab.
    pub carry: DMatrix<f64>,
}

impl TemporalFactors {
    pub fn new(time: &TimeBasis) -> Result<Self> {
        let n = time.len();
        let rule = make_quadrature(QuadKind::Interval, 2 * time.degree() + 2)?;
        let mut gram = DMatrix::zeros(n, n);
        let mut circ = DMatrix::zeros(n, n);
        let mut g = vec![0.0; n];
        let mut dg = vec![0.0; n];
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            time.eval(p[0], &mut g);
            time.deriv(p[0], &mut dg);
            for k in 0..n {
                for m in 0..n {
                    gram[(k, m)] += w * g[k] * g[m];
                    circ[(k, m)] += w * dg[k] * g[m];
                }
            }
        }
        let at_start = time.values(0.0);
        let at_end = time.values(1.0);
        let plus = DMatrix::from_fn(n, n, |k, m| at_end[k] * at_end[m]);
        let minus = DMatrix::from_fn(n, n, |k, m| at_start[k] * at_end[m]);
        let t = &plus - &circ;
        let t_inv = t.clone().try_inverse().ok_or(Error::Singular {
            what: "temporal matrix",
            index: 0,
        })?;
        let carry = &t_inv * &minus;
        Ok(Self {
            weights: time.weights().to_vec(),
            at_start,
            at_end,
            gram,
            plus,
            circ,
            minus,
            t,
            t_inv,
            carry,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}
