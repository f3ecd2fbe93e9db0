//! One-dimensional Lagrange interpolation through an arbitrary node set.

/// Lagrange polynomials `ℓ_k` with `ℓ_k(x_m) = δ_km`.
#[derive(Debug, Clone)]
pub struct Lagrange1d {
    nodes: Vec<f64>,
    denom: Vec<f64>,
}

impl Lagrange1d {
    pub fn new(nodes: Vec<f64>) -> Self {
        let denom = (0..nodes.len())
            .map(|k| {
                nodes
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != k)
                    .map(|(_, &xm)| nodes[k] - xm)
                    .product()
            })
            .collect();
        Self { nodes, denom }
    }

    /// Equispaced nodes `k/p` on [0, 1].
    pub fn equispaced(p: usize) -> Self {
        Self::new((0..=p).map(|k| k as f64 / p as f64).collect())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn eval(&self, x: f64, out: &mut [f64]) {
        let n = self.nodes.len();
        for k in 0..n {
            let mut v = 1.0;
            for m in 0..n {
                if m != k {
                    v *= x - self.nodes[m];
                }
            }
            out[k] = v / self.denom[k];
        }
    }

    pub fn deriv(&self, x: f64, out: &mut [f64]) {
        let n = self.nodes.len();
        for k in 0..n {
            let mut s = 0.0;
            for skip in 0..n {
                if skip == k {
                    continue;
                }
                let mut v = 1.0;
                for m in 0..n {
                    if m != k && m != skip {
                        v *= x - self.nodes[m];
                    }
                }
                s += v;
            }
            out[k] = s / self.denom[k];
        }
    }
}
