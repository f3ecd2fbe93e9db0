//! Small dense kernels on column-major `nalgebra` matrices.

use nalgebra::DMatrix;

/// `y += alpha · A x`.
#[inline]
pub fn gemv(a: &DMatrix<f64>, x: &[f64], y: &mut [f64], alpha: f64) {
    let nr = a.nrows();
    debug_assert_eq!(a.ncols(), x.len());
    debug_assert_eq!(nr, y.len());
    let s = a.as_slice();
    for (c, &xc) in x.iter().enumerate() {
        if xc == 0.0 {
            continue;
        }
        let f = alpha * xc;
        let col = &s[c * nr..(c + 1) * nr];
        for (yr, &ar) in y.iter_mut().zip(col) {
            *yr += f * ar;
        }
    }
}

/// `y += alpha · Aᵀ x`.
#[inline]
pub fn gemv_t(a: &DMatrix<f64>, x: &[f64], y: &mut [f64], alpha: f64) {
    let nr = a.nrows();
    debug_assert_eq!(nr, x.len());
    debug_assert_eq!(a.ncols(), y.len());
    let s = a.as_slice();
    for (c, yc) in y.iter_mut().enumerate() {
        let col = &s[c * nr..(c + 1) * nr];
        let d: f64 = col.iter().zip(x).map(|(p, q)| p * q).sum();
        *yc += alpha * d;
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Inverse of a symmetric positive definite matrix via Cholesky.
pub fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    m.clone().cholesky().map(|c| c.inverse())
}
