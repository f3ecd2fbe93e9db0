use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::scheme::{Discretization, State};

/// Sample points of one triangle subdivided into `level²` sub-triangles, as
/// barycentric weights of the vertices, and the sub-triangle connectivity.
pub fn subdivision(level: usize) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let l = level as f64;
    let mut pts = Vec::new();
    let mut index = vec![vec![0; level + 1]; level + 1];
    for j in 0..=level {
        for i in 0..=level - j {
            index[j][i] = pts.len();
            let (b1, b2) = (i as f64 / l, j as f64 / l);
            pts.push([1.0 - b1 - b2, b1, b2]);
        }
    }
    let mut tris = Vec::with_capacity(level * level);
    for j in 0..level {
        for i in 0..level - j {
            tris.push([index[j][i], index[j][i + 1], index[j + 1][i]]);
            if i + 1 < level - j {
                tris.push([index[j][i + 1], index[j + 1][i + 1], index[j + 1][i]]);
            }
        }
    }
    (pts, tris)
}

/// Sampled field values `(x, y, u, v, sxx, syy, sxy)` at the sub-vertices of
/// every triangle, at the end of the slab.
pub fn sample_fields(disc: &Discretization, state: &State, level: usize) -> Vec<[f64; 7]> {
    let (bary, _) = subdivision(level);
    let mesh = &disc.mesh.primal;
    let mut out = Vec::with_capacity(mesh.n_elements() * bary.len());
    for e in 0..mesh.n_elements() {
        let [a, b, c] = mesh.vertices(e);
        for w in &bary {
            let x = [
                w[0] * a[0] + w[1] * b[0] + w[2] * c[0],
                w[0] * a[1] + w[1] * b[1] + w[2] * c[1],
            ];
            let vel = disc.velocity_at(state, e, x, 1.0);
            let k = disc.covering_edge(e, x);
            let s = disc.stress_at(state, e, k, x, 1.0);
            out.push([x[0], x[1], vel[0], vel[1], s[0], s[1], s[2]]);
        }
    }
    out
}

/// Legacy ASCII VTK unstructured grid with point data `u, v, sxx, syy, sxy`
/// and cell data `region_id`.
pub fn write_fields(disc: &Discretization, state: &State, level: usize, path: impl AsRef<Path>) -> Result<()> {
    let level = level.max(1);
    let (bary, sub) = subdivision(level);
    let mesh = &disc.mesh.primal;
    let samples = sample_fields(disc, state, level);
    let np = samples.len();
    let nc = mesh.n_elements() * sub.len();
    let mut s = String::with_capacity(np * 120);
    writeln!(s, "# vtk DataFile Version 3.0").unwrap();
    writeln!(s, "stagdg step {} t {:.16e}", state.step, state.time).unwrap();
    writeln!(s, "ASCII\nDATASET UNSTRUCTURED_GRID").unwrap();
    writeln!(s, "POINTS {np} double").unwrap();
    for p in &samples {
        writeln!(s, "{:.8e} {:.8e} 0", p[0], p[1]).unwrap();
    }
    writeln!(s, "CELLS {nc} {}", 4 * nc).unwrap();
    for e in 0..mesh.n_elements() {
        let off = e * bary.len();
        for t in &sub {
            writeln!(s, "3 {} {} {}", off + t[0], off + t[1], off + t[2]).unwrap();
        }
    }
    writeln!(s, "CELL_TYPES {nc}").unwrap();
    for _ in 0..nc {
        s.push_str("5\n");
    }
    writeln!(s, "CELL_DATA {nc}\nSCALARS region_id int 1\nLOOKUP_TABLE default").unwrap();
    for e in 0..mesh.n_elements() {
        for _ in 0..sub.len() {
            writeln!(s, "{}", mesh.regions[e]).unwrap();
        }
    }
    writeln!(s, "POINT_DATA {np}").unwrap();
    for (c, name) in ["u", "v", "sxx", "syy", "sxy"].iter().enumerate() {
        writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default").unwrap();
        for p in &samples {
            writeln!(s, "{:.8e}", p[2 + c]).unwrap();
        }
    }
    std::fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subdivision_counts() {
        for level in 1..6 {
            let (p, t) = subdivision(level);
            assert_eq!(p.len(), (level + 1) * (level + 2) / 2);
            assert_eq!(t.len(), level * level);
        }
    }

    #[test]
    fn sub_triangles_tile_the_reference_triangle() {
        let (p, t) = subdivision(4);
        let area: f64 = t
            .iter()
            .map(|tri| {
                let [a, b, c] = tri.map(|k| [p[k][1], p[k][2]]);
                0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
            })
            .inspect(|&a| assert!(a > 0.0))
            .sum();
        assert!((area - 0.5).abs() < 1e-14);
    }
}
