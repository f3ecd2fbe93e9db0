use std::collections::HashMap;

use super::{dist, PeriodicBox, PrimalMesh};
use crate::error::{Error, Result};

/// Edge-based connectivity of a primal mesh.
///
/// Edge `j` stores its nodes `(a, b)` counterclockwise with respect to the
/// element that owns the record (the left element for ordinary edges). Edges
/// on opposite sides of a periodic box stay separate records linked through
/// `partner`; both records of a pair share the same left and right element.
#[derive(Debug, Clone)]
pub struct EdgeConnectivity {
    pub edges: Vec<[usize; 2]>,
    pub left: Vec<usize>,
    pub right: Vec<Option<usize>>,
    /// Element whose local edge list contains the record.
    pub owner: Vec<usize>,
    /// Local edges `(v0,v1), (v1,v2), (v2,v0)` of each triangle.
    pub elem_edges: Vec<[usize; 3]>,
    pub partner: Vec<Option<usize>>,
    /// Unit normal pointing from the left toward the right element.
    pub normals: Vec<[f64; 2]>,
    pub lengths: Vec<f64>,
}

impl EdgeConnectivity {
    pub fn build(mesh: &PrimalMesh, periodic: Option<&PeriodicBox>) -> Result<Self> {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut users: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut edges = Vec::new();
        let mut elem_edges = vec![[0usize; 3]; mesh.n_elements()];
        for (i, t) in mesh.triangles.iter().enumerate() {
            for k in 0..3 {
                let a = t[k];
                let b = t[(k + 1) % 3];
                let key = (a.min(b), a.max(b));
                let j = *index.entry(key).or_insert_with(|| {
                    edges.push([a, b]);
                    users.push(Vec::new());
                    edges.len() - 1
                });
                if users[j].len() == 2 {
                    return Err(Error::NonManifoldEdge(key.0, key.1));
                }
                users[j].push((i, k));
                elem_edges[i][k] = j;
            }
        }

        let ne = edges.len();
        let mut left = vec![0; ne];
        let mut right = vec![None; ne];
        let mut owner = vec![0; ne];
        for j in 0..ne {
            let (i0, k0) = users[j][0];
            let t = mesh.triangles[i0];
            // first user is the lower index, so it is both owner and left
            edges[j] = [t[k0], t[(k0 + 1) % 3]];
            left[j] = i0;
            owner[j] = i0;
            if let Some(&(i1, _)) = users[j].get(1) {
                right[j] = Some(i1);
            }
        }

        let mut partner = vec![None; ne];
        if let Some(pbox) = periodic {
            pair_periodic(mesh, pbox, &edges, &right, &mut partner)?;
            for j in 0..ne {
                if let Some(q) = partner[j] {
                    let (a, b) = (owner[j], owner[q]);
                    if a == b {
                        return Err(Error::SelfPeriodic { element: a, edge: j });
                    }
                    left[j] = a.min(b);
                    right[j] = Some(a.max(b));
                }
            }
        }

        let mut normals = vec![[0.0; 2]; ne];
        let mut lengths = vec![0.0; ne];
        for j in 0..ne {
            let pa = mesh.nodes[edges[j][0]];
            let pb = mesh.nodes[edges[j][1]];
            let len = dist(pa, pb);
            let s = if owner[j] == left[j] { 1.0 } else { -1.0 };
            normals[j] = [s * (pb[1] - pa[1]) / len, -s * (pb[0] - pa[0]) / len];
            lengths[j] = len;
        }

        Ok(Self {
            edges,
            left,
            right,
            owner,
            elem_edges,
            partner,
            normals,
            lengths,
        })
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_boundary(&self, j: usize) -> bool {
        self.right[j].is_none()
    }

    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.n_edges()).filter(|&j| self.is_boundary(j)).collect()
    }

    pub fn interior_edges(&self) -> Vec<usize> {
        (0..self.n_edges()).filter(|&j| !self.is_boundary(j)).collect()
    }

    /// `s_{i,j} = (r − 2i + ℓ)/(r − ℓ)`; `+1` on boundary edges.
    pub fn sign(&self, i: usize, j: usize) -> f64 {
        debug_assert!(self.elem_edges[i].contains(&j), "edge {j} is not an edge of element {i}");
        match self.right[j] {
            None => 1.0,
            Some(r) => {
                let l = self.left[j] as f64;
                let r = r as f64;
                (r - 2.0 * i as f64 + l) / (r - l)
            }
        }
    }

    /// Element across edge `j` from `i`.
    pub fn neighbor(&self, i: usize, j: usize) -> Option<usize> {
        let r = self.right[j]?;
        Some(if i == self.left[j] { r } else { self.left[j] })
    }
}

fn pair_periodic(
    mesh: &PrimalMesh,
    pbox: &PeriodicBox,
    edges: &[[usize; 2]],
    right: &[Option<usize>],
    partner: &mut [Option<usize>],
) -> Result<()> {
    let tol = 1e-9 * mesh.diameter();
    let on = |j: usize, axis: usize, value: f64| {
        let a = mesh.nodes[edges[j][0]][axis];
        let b = mesh.nodes[edges[j][1]][axis];
        (a - value).abs() <= tol && (b - value).abs() <= tol
    };
    let boundary: Vec<usize> = (0..edges.len()).filter(|&j| right[j].is_none()).collect();
    for (axis, lo, hi) in [(0, pbox.xmin, pbox.xmax), (1, pbox.ymin, pbox.ymax)] {
        let other = 1 - axis;
        let key = |j: usize| {
            let a = mesh.nodes[edges[j][0]][other];
            let b = mesh.nodes[edges[j][1]][other];
            (a.min(b), a.max(b))
        };
        let mut low: Vec<usize> = boundary.iter().copied().filter(|&j| on(j, axis, lo)).collect();
        let mut high: Vec<usize> = boundary.iter().copied().filter(|&j| on(j, axis, hi)).collect();
        low.sort_by(|&p, &q| key(p).0.total_cmp(&key(q).0));
        high.sort_by(|&p, &q| key(p).0.total_cmp(&key(q).0));
        if low.len() != high.len() {
            let extra = if low.len() > high.len() { low[high.len()] } else { high[low.len()] };
            return Err(Error::UnmatchedPeriodicEdge { edge: extra });
        }
        for (&p, &q) in low.iter().zip(&high) {
            let (kp, kq) = (key(p), key(q));
            if (kp.0 - kq.0).abs() > tol || (kp.1 - kq.1).abs() > tol {
                return Err(Error::UnmatchedPeriodicEdge { edge: p });
            }
            partner[p] = Some(q);
            partner[q] = Some(p);
        }
    }
    Ok(())
}
