use rayon::prelude::*;

use crate::basis::quadrature::MAX_EXACTNESS;
use crate::basis::{make_quadrature, QuadKind};
use crate::scheme::{Discretization, State};

/// L2 norms of `numerical − exact` at the end of the slab, ordered
/// `(u, v, σxx, σyy, σxy)`. `exact` returns `(σxx, σyy, σxy, u, v)`.
pub fn l2_error(disc: &Discretization, state: &State, exact: impl Fn([f64; 2]) -> [f64; 5] + Sync) -> [f64; 5] {
    let p = disc.basis.degree();
    let rule = make_quadrature(QuadKind::Triangle, (2 * p + 8).min(MAX_EXACTNESS)).expect("supported exactness");
    let nphi = disc.basis.n_phi();
    let npsi = disc.basis.n_psi();
    let vt = disc.velocity_trace(&state.velocity, 1.0);
    let st = disc.stress_trace(&state.stress, 1.0);
    let mesh = &disc.mesh;
    let vel: [f64; 2] = (0..disc.n_elements())
        .into_par_iter()
        .map(|e| {
            let mut phi = vec![0.0; nphi];
            let [a, b, c] = mesh.primal.vertices(e);
            let area = mesh.primal.area(e);
            let mut acc = [0.0; 2];
            for (pt, w) in rule.points.iter().zip(&rule.weights) {
                let x = [
                    a[0] + pt[0] * (b[0] - a[0]) + pt[1] * (c[0] - a[0]),
                    a[1] + pt[0] * (b[1] - a[1]) + pt[1] * (c[1] - a[1]),
                ];
                disc.basis.primal.eval(*pt, &mut phi);
                let ex = exact(x);
                for comp in 0..2 {
                    let coef = &vt[(2 * e + comp) * nphi..(2 * e + comp + 1) * nphi];
                    let num: f64 = coef.iter().zip(&phi).map(|(c, f)| c * f).sum();
                    acc[comp] += 2.0 * area * w * (num - ex[3 + comp]).powi(2);
                }
            }
            acc
        })
        .reduce(|| [0.0; 2], |a, b| [a[0] + b[0], a[1] + b[1]]);
    let str_: [f64; 3] = (0..disc.n_elements())
        .into_par_iter()
        .map(|e| {
            let mut psi = vec![0.0; npsi];
            let mut acc = [0.0; 3];
            for sub in &mesh.dual.subs[e] {
                let j = sub.cell;
                let frame = &mesh.dual.cells[j].frame;
                for (pt, w) in rule.points.iter().zip(&rule.weights) {
                    let x = sub.map(*pt);
                    disc.basis
                        .dual
                        .eval(frame.to_reference([x[0] + sub.shift[0], x[1] + sub.shift[1]]), &mut psi);
                    let ex = exact(x);
                    for comp in 0..3 {
                        let coef = &st[(3 * j + comp) * npsi..(3 * j + comp + 1) * npsi];
                        let num: f64 = coef.iter().zip(&psi).map(|(c, f)| c * f).sum();
                        acc[comp] += 2.0 * sub.area * w * (num - ex[comp]).powi(2);
                    }
                }
            }
            acc
        })
        .reduce(|| [0.0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    [vel[0].sqrt(), vel[1].sqrt(), str_[0].sqrt(), str_[1].sqrt(), str_[2].sqrt()]
}
