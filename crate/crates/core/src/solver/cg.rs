use super::{axpy, dot, norm, residual, KrylovConfig, LinearOperator, Preconditioner, SolveStats};
use crate::error::{Error, Result};

/// Preconditioned conjugate gradients. `x` holds the initial guess on entry.
pub fn cg_solve(
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
    residual(a, b, x, &mut r);
    let mut rn = norm(&r, rep);
    let mut history = vec![rn / scale];
    if rn <= target {
        return Ok(SolveStats {
            iterations: 0,
            residual: rn / scale,
            history,
        });
    }
    let mut z = vec![0.0; n];
    p.apply(&r, &mut z);
    let mut d = z.clone();
    let mut rz = dot(&r, &z, rep);
    let mut q = vec![0.0; n];
    for it in 1..=cfg.max_iter {
        a.apply(&d, &mut q);
        let alpha = rz / dot(&d, &q, rep);
        axpy(alpha, &d, x);
        axpy(-alpha, &q, &mut r);
        rn = norm(&r, rep);
        if !rn.is_finite() {
            return Err(Error::Diverged { iterations: it });
        }
        history.push(rn / scale);
        let mut restart = false;
        if rn <= target {
            residual(a, b, x, &mut r);
            rn = norm(&r, rep);
            if rn <= target {
                return Ok(SolveStats {
                    iterations: it,
                    residual: rn / scale,
                    history,
                });
            }
            restart = true;
        }
        p.apply(&r, &mut z);
        let rz_new = dot(&r, &z, rep);
        if restart {
            d.copy_from_slice(&z);
        } else {
            let beta = rz_new / rz;
            for (di, zi) in d.iter_mut().zip(&z) {
                *di = zi + beta * *di;
            }
        }
        rz = rz_new;
    }
    Err(Error::NotConverged {
        iterations: cfg.max_iter,
        last: rn / scale,
        history,
    })
}
