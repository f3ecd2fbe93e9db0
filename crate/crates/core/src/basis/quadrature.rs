//! Quadrature rules on the unit interval, the unit square and the reference
//! triangle `{(ξ, η) : ξ ≥ 0, η ≥ 0, ξ + η ≤ 1}`.

use crate::error::{Error, Result};

/// Highest polynomial exactness a rule can be requested with.
pub const MAX_EXACTNESS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadKind {
    Interval,
    Square,
    Triangle,
}

/// Points and positive weights of a rule. Interval rules store `[t, 0.0]`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: QuadKind,
    pub exactness: usize,
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn integrate(&self, f: impl Fn([f64; 2]) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }
}

/// Gauss–Legendre nodes and weights on [0, 1], nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        // Newton iteration on P_n over [-1, 1]
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        // map to [0, 1]; cos ordering is decreasing so fill from the back
        nodes[n - 1 - i] = 0.5 * (x + 1.0);
        weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Builds a rule of the given kind integrating all polynomials of total degree
/// `exactness` exactly.
///
/// The triangle rule is the collapsed (Duffy) product of two Gauss–Legendre
/// rules, which is exact for any degree and has strictly positive weights.
pub fn make_quadrature(kind: QuadKind, exactness: usize) -> Result<QuadratureRule> {
    if exactness > MAX_EXACTNESS {
        return Err(Error::UnsupportedExactness(exactness));
    }
    let rule = match kind {
        QuadKind::Interval => {
            let n = exactness / 2 + 1;
            let (x, w) = gauss_legendre(n);
            QuadratureRule {
                kind,
                exactness,
                points: x.into_iter().map(|t| [t, 0.0]).collect(),
                weights: w,
            }
        }
        QuadKind::Square => {
            let n = exactness / 2 + 1;
            let (x, w) = gauss_legendre(n);
            let mut points = Vec::with_capacity(n * n);
            let mut weights = Vec::with_capacity(n * n);
            for j in 0..n {
                for i in 0..n {
                    points.push([x[i], x[j]]);
                    weights.push(w[i] * w[j]);
                }
            }
            QuadratureRule {
                kind,
                exactness,
                points,
                weights,
            }
        }
        QuadKind::Triangle => {
            // the collapse adds one degree in the first direction
            let n = (exactness + 2).div_ceil(2);
            let (x, w) = gauss_legendre(n);
            let mut points = Vec::with_capacity(n * n);
            let mut weights = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let u = x[i];
                    let v = x[j];
                    points.push([u, v * (1.0 - u)]);
                    weights.push(w[i] * w[j] * (1.0 - u));
                }
            }
            QuadratureRule {
                kind,
                exactness,
                points,
                weights,
            }
        }
    };
    Ok(rule)
}
