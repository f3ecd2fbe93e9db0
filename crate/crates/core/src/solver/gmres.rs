use super::{dot, norm, residual, KrylovConfig, LinearOperator, Preconditioner, PreconditionerSide, SolveStats};
use crate::error::{Error, Result};

/// Preconditioned GMRES with modified Gram–Schmidt and Givens rotations.
/// `x` holds the initial guess on entry.
///
/// Convergence is judged on the true residual `‖b − A x‖`. When the
/// iteration estimate meets its target but the true residual does not, the
/// method restarts from the current iterate with a proportionally tighter
/// target.
pub fn gmres_solve(
    a: &dyn LinearOperator,
    b: &[f64],
    x: &mut [f64],
    cfg: &KrylovConfig,
    p: &Preconditioner,
) -> Result<SolveStats> {
    let n = a.dim();
    let rep = cfg.reproducible;
    let bnorm = norm(b, rep);
    let scale = if bnorm > 0.0 { bnorm } else { 1.0 };
    let target = (cfg.tol * bnorm).max(cfg.abs_tol);
    let mut r = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut history = Vec::new();
    let mut total = 0usize;
    let mut shrink = 1.0;
    let mut met_inner = false;
    loop {
        residual(a, b, x, &mut r);
        let rn = norm(&r, rep);
        if !rn.is_finite() {
            return Err(Error::Diverged { iterations: total });
        }
        if history.is_empty() {
            history.push(rn / scale);
        }
        if rn <= target {
            return Ok(SolveStats {
                iterations: total,
                residual: rn / scale,
                history,
            });
        }
        if met_inner {
            shrink *= (target / rn).max(1e-3);
        }
        if total >= cfg.max_iter {
            return Err(Error::NotConverged {
                iterations: total,
                last: rn / scale,
                history,
            });
        }
        let right = cfg.side == PreconditionerSide::Right;
        if right {
            w.copy_from_slice(&r);
        } else {
            p.apply(&r, &mut w);
        }
        let beta = norm(&w, rep);
        if beta == 0.0 {
            return Err(Error::Singular {
                what: "preconditioned residual",
                index: total,
            });
        }
        let inner_target = shrink * beta * target / rn;
        let m = if cfg.restart == 0 {
            cfg.max_iter - total
        } else {
            cfg.restart.min(cfg.max_iter - total)
        };
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        basis.push(w.iter().map(|v| v / beta).collect());
        let mut h: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut cs: Vec<f64> = Vec::with_capacity(m);
        let mut sn: Vec<f64> = Vec::with_capacity(m);
        let mut g = vec![beta];
        let mut k = 0;
        met_inner = false;
        while k < m {
            if right {
                p.apply(&basis[k], &mut tmp);
                a.apply(&tmp, &mut w);
            } else {
                a.apply(&basis[k], &mut tmp);
                p.apply(&tmp, &mut w);
            }
            total += 1;
            let mut col = vec![0.0; k + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(&w, v, rep);
                col[i] = hij;
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= hij * vi;
                }
            }
            let hnext = norm(&w, rep);
            col[k + 1] = hnext;
            for i in 0..k {
                let t = cs[i] * col[i] + sn[i] * col[i + 1];
                col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
                col[i] = t;
            }
            let denom = col[k].hypot(col[k + 1]);
            let (c, s) = if denom == 0.0 { (1.0, 0.0) } else { (col[k] / denom, col[k + 1] / denom) };
            col[k] = denom;
            col[k + 1] = 0.0;
            cs.push(c);
            sn.push(s);
            g.push(-s * g[k]);
            g[k] *= c;
            h.push(col);
            k += 1;
            let est = g[k].abs();
            if !est.is_finite() {
                return Err(Error::Diverged { iterations: total });
            }
            history.push(est / beta * rn / scale);
            if est <= inner_target || hnext <= 1e-300 {
                met_inner = true;
                break;
            }
            basis.push(w.iter().map(|v| v / hnext).collect());
        }
        // back substitution on the k × k triangle
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[j][i] * y[j];
            }
            y[i] = s / h[i][i];
        }
        let update = if right { &mut tmp } else { &mut w };
        update.fill(0.0);
        for (v, yi) in basis.iter().zip(&y) {
            for (ui, vi) in update.iter_mut().zip(v) {
                *ui += yi * vi;
            }
        }
        if right {
            p.apply(&tmp, &mut w);
        }
        for (xi, wi) in x.iter_mut().zip(&w) {
            *xi += wi;
        }
    }
}
