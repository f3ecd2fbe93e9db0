//! Reference-to-physical maps.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub enum MapElement {
    /// Straight-sided triangle, affine map from the reference triangle.
    Triangle([[f64; 2]; 3]),
    /// Quadrilateral, bilinear map from the unit square.
    Quad([[f64; 2]; 4]),
}

/// Physical point, Jacobian `J[r][c] = ∂x_r/∂ξ_c` and `det J` at `xi`.
///
/// `element` only labels the error.
pub fn reference_map(element: usize, shape: &MapElement, xi: [f64; 2]) -> Result<([f64; 2], [[f64; 2]; 2], f64)> {
    let (x, jac) = match *shape {
        MapElement::Triangle([a, b, c]) => {
            let jac = [[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]];
            let x = [
                a[0] + jac[0][0] * xi[0] + jac[0][1] * xi[1],
                a[1] + jac[1][0] * xi[0] + jac[1][1] * xi[1],
            ];
            (x, jac)
        }
        MapElement::Quad([p0, p1, p2, p3]) => {
            let (s, t) = (xi[0], xi[1]);
            let n = [(1.0 - s) * (1.0 - t), s * (1.0 - t), s * t, (1.0 - s) * t];
            let ds = [-(1.0 - t), 1.0 - t, t, -t];
            let dt = [-(1.0 - s), -s, s, 1.0 - s];
            let p = [p0, p1, p2, p3];
            let mut x = [0.0; 2];
            let mut jac = [[0.0; 2]; 2];
            for k in 0..4 {
                for r in 0..2 {
                    x[r] += n[k] * p[k][r];
                    jac[r][0] += ds[k] * p[k][r];
                    jac[r][1] += dt[k] * p[k][r];
                }
            }
            (x, jac)
        }
    };
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if det <= 0.0 {
        return Err(Error::InvertedElement { element, det });
    }
    Ok((x, jac, det))
}
