//! Small mesh generators used by the built-in scenarios and tests.

use super::{PeriodicBox, PrimalMesh};
use crate::error::Result;

/// Unit square split along the diagonal from (1,0) to (0,1).
pub fn two_triangle_square() -> PrimalMesh {
    let nodes = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    PrimalMesh::new(nodes, vec![[0, 1, 3], [1, 2, 3]], vec![0, 0]).expect("valid mesh")
}

/// Square `[lo, hi]²` cut by both diagonals into four triangles.
pub fn cross_square(lo: f64, hi: f64) -> PrimalMesh {
    let c = 0.5 * (lo + hi);
    let nodes = vec![[lo, lo], [hi, lo], [hi, hi], [lo, hi], [c, c]];
    let tris = vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]];
    PrimalMesh::new(nodes, tris, vec![0; 4]).expect("valid mesh")
}

/// Structured `nx × ny` grid of `[x0, x1] × [y0, y1]`, each cell split in two.
/// With `alternate` the diagonal direction flips in a checkerboard pattern.
pub fn structured_rect(nx: usize, ny: usize, x: [f64; 2], y: [f64; 2], alternate: bool) -> PrimalMesh {
    mapped_grid(nx, ny, alternate, |s, t| {
        [x[0] + s * (x[1] - x[0]), y[0] + t * (y[1] - y[0])]
    })
}

/// Grid on the image of the unit square under `map`, which must preserve
/// orientation.
pub fn mapped_grid(nx: usize, ny: usize, alternate: bool, map: impl Fn(f64, f64) -> [f64; 2]) -> PrimalMesh {
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push(map(i as f64 / nx as f64, j as f64 / ny as f64));
        }
    }
    let id = |i: usize, j: usize| i + (nx + 1) * j;
    let mut tris = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if alternate && (i + j) % 2 == 1 {
                tris.push([a, b, c]);
                tris.push([a, c, d]);
            } else {
                tris.push([a, b, d]);
                tris.push([b, c, d]);
            }
        }
    }
    let n = tris.len();
    PrimalMesh::new(nodes, tris, vec![0; n]).expect("valid grid")
}

/// Periodic square `[lo, hi]²` with `n × n` cells. Without `alternate` every
/// cell is cut along the diagonal parallel to `(-1, 1)`.
pub fn periodic_square(n: usize, lo: f64, hi: f64, alternate: bool) -> PrimalMesh {
    structured_rect(n, n, [lo, hi], [lo, hi], alternate).with_periodic(Some(PeriodicBox {
        xmin: lo,
        xmax: hi,
        ymin: lo,
        ymax: hi,
    }))
}

/// Small deterministic hash in `[-1, 1)`.
fn hash_unit(seed: u64, k: u64) -> f64 {
    let mut z = seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

/// Moves every node that is not on the bounding box by up to `fraction` of
/// `spacing` in each coordinate.
pub fn jitter(mesh: &PrimalMesh, spacing: f64, fraction: f64, seed: u64) -> Result<PrimalMesh> {
    let (lo, hi) = bounds(&mesh.nodes);
    let tol = 1e-12 * (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let nodes = mesh
        .nodes
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let on_box = (p[0] - lo[0]).abs() < tol
                || (p[0] - hi[0]).abs() < tol
                || (p[1] - lo[1]).abs() < tol
                || (p[1] - hi[1]).abs() < tol;
            if on_box {
                *p
            } else {
                let d = fraction * spacing;
                [
                    p[0] + d * hash_unit(seed, 2 * k as u64),
                    p[1] + d * hash_unit(seed, 2 * k as u64 + 1),
                ]
            }
        })
        .collect();
    Ok(PrimalMesh::new(nodes, mesh.triangles.clone(), mesh.regions.clone())?.with_periodic(mesh.periodic))
}

fn bounds(nodes: &[[f64; 2]]) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in nodes {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    (lo, hi)
}

pub fn min_incircle(mesh: &PrimalMesh) -> f64 {
    (0..mesh.n_elements())
        .map(|i| mesh.incircle_radius(i))
        .fold(f64::INFINITY, f64::min)
}

fn nearest_node(mesh: &PrimalMesh, x: [f64; 2]) -> usize {
    (0..mesh.nodes.len())
        .min_by(|&a, &b| {
            let da = super::dist(mesh.nodes[a], x);
            let db = super::dist(mesh.nodes[b], x);
            da.total_cmp(&db)
        })
        .expect("non-empty mesh")
}

/// Copy of `mesh` in which the nodes nearest to `targets` are pushed toward
/// the opposite edge of one incident triangle, so that the smallest incircle
/// radius shrinks by `factor`. The displacement is found by bisection.
pub fn with_slivers(mesh: &PrimalMesh, targets: &[[f64; 2]], factor: f64) -> Result<PrimalMesh> {
    let base = min_incircle(mesh);
    let mut moves = Vec::new();
    for &x in targets {
        let v = nearest_node(mesh, x);
        // incident triangle with the widest angle at v
        let angle = |i: usize| {
            let tri = mesh.triangles[i];
            let k = tri.iter().position(|&n| n == v).unwrap();
            let p = mesh.nodes[v];
            let a = mesh.nodes[tri[(k + 1) % 3]];
            let b = mesh.nodes[tri[(k + 2) % 3]];
            let u = [a[0] - p[0], a[1] - p[1]];
            let w = [b[0] - p[0], b[1] - p[1]];
            (u[0] * w[1] - u[1] * w[0]).atan2(u[0] * w[0] + u[1] * w[1])
        };
        let t = (0..mesh.n_elements())
            .filter(|&i| mesh.triangles[i].contains(&v))
            .max_by(|&a, &b| angle(a).total_cmp(&angle(b)))
            .expect("node belongs to a triangle");
        let tri = mesh.triangles[t];
        let k = tri.iter().position(|&n| n == v).unwrap();
        let a = mesh.nodes[tri[(k + 1) % 3]];
        let b = mesh.nodes[tri[(k + 2) % 3]];
        let p = mesh.nodes[v];
        let ab = [b[0] - a[0], b[1] - a[1]];
        let s = ((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / (ab[0] * ab[0] + ab[1] * ab[1]);
        let foot = [a[0] + s * ab[0], a[1] + s * ab[1]];
        moves.push((v, p, foot));
    }
    let build = |s: f64| -> Result<PrimalMesh> {
        let mut nodes = mesh.nodes.clone();
        for &(v, p, foot) in &moves {
            nodes[v] = [p[0] + s * (foot[0] - p[0]), p[1] + s * (foot[1] - p[1])];
        }
        Ok(PrimalMesh::new(nodes, mesh.triangles.clone(), mesh.regions.clone())?.with_periodic(mesh.periodic))
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let ratio = match build(mid) {
            Ok(m) => base / min_incircle(&m),
            Err(_) => f64::INFINITY,
        };
        if ratio < factor {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    build(lo)
}

/// Periodic square `[-half, half]²` with a circular hole of radius `radius`.
///
/// The outer region is an `n × n` grid (`n` odd) with the central `m × m`
/// cells (`m` odd) removed; the gap to the circle is filled by `layers` rings
/// of quadrilaterals blended between the hole square and the circle.
pub fn cavity(n: usize, m: usize, layers: usize, half: f64, radius: f64) -> Result<PrimalMesh> {
    assert!(n % 2 == 1 && m % 2 == 1 && m < n);
    let h = 2.0 * half / n as f64;
    let lo_cell = (n - m) / 2;
    let hi_cell = lo_cell + m;
    let mut nodes = Vec::new();
    let mut grid_id = vec![usize::MAX; (n + 1) * (n + 1)];
    let gid = |i: usize, j: usize| i + (n + 1) * j;
    let inside_hole = |i: usize, j: usize| i > lo_cell && i < hi_cell && j > lo_cell && j < hi_cell;
    for j in 0..=n {
        for i in 0..=n {
            if !inside_hole(i, j) {
                grid_id[gid(i, j)] = nodes.len();
                nodes.push([-half + i as f64 * h, -half + j as f64 * h]);
            }
        }
    }
    let mut tris = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if i >= lo_cell && i < hi_cell && j >= lo_cell && j < hi_cell {
                continue;
            }
            let (a, b, c, d) = (
                grid_id[gid(i, j)],
                grid_id[gid(i + 1, j)],
                grid_id[gid(i + 1, j + 1)],
                grid_id[gid(i, j + 1)],
            );
            // anti-diagonal split
            tris.push([a, b, d]);
            tris.push([b, c, d]);
        }
    }
    // hole boundary loop, counterclockwise
    let mut ring = Vec::new();
    for i in lo_cell..hi_cell {
        ring.push(gid(i, lo_cell));
    }
    for j in lo_cell..hi_cell {
        ring.push(gid(hi_cell, j));
    }
    for i in (lo_cell + 1..=hi_cell).rev() {
        ring.push(gid(i, hi_cell));
    }
    for j in (lo_cell + 1..=hi_cell).rev() {
        ring.push(gid(lo_cell, j));
    }
    let outer: Vec<usize> = ring.iter().map(|&g| grid_id[g]).collect();
    let k = outer.len();
    let mut loops = vec![outer.clone()];
    for l in 1..=layers {
        // t = 1 on the square, t = 0 on the circle
        let t = 1.0 - l as f64 / layers as f64;
        let mut ids = Vec::with_capacity(k);
        for &o in &outer {
            let q = nodes[o];
            let r = (q[0] * q[0] + q[1] * q[1]).sqrt();
            let c = [radius * q[0] / r, radius * q[1] / r];
            ids.push(nodes.len());
            nodes.push([t * q[0] + (1.0 - t) * c[0], t * q[1] + (1.0 - t) * c[1]]);
        }
        loops.push(ids);
    }
    for l in 0..layers {
        let (o, inn) = (&loops[l], &loops[l + 1]);
        for s in 0..k {
            let s1 = (s + 1) % k;
            tris.push([o[s], inn[s], o[s1]]);
            tris.push([o[s1], inn[s], inn[s1]]);
        }
    }
    let count = tris.len();
    Ok(PrimalMesh::new(nodes, tris, vec![0; count])?.with_periodic(Some(PeriodicBox {
        xmin: -half,
        xmax: half,
        ymin: -half,
        ymax: half,
    })))
}
