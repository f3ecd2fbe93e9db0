use super::{signed_area, EdgeConnectivity, PrimalMesh};
use crate::error::{Error, Result};

/// Affine map `x = origin + J ξ` onto which the dual basis is evaluated.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub origin: [f64; 2],
    pub jac: [[f64; 2]; 2],
    pub inv: [[f64; 2]; 2],
    pub det: f64,
}

impl Frame {
    fn new(origin: [f64; 2], c0: [f64; 2], c1: [f64; 2]) -> Self {
        let det = c0[0] * c1[1] - c1[0] * c0[1];
        Self {
            origin,
            jac: [[c0[0], c1[0]], [c0[1], c1[1]]],
            inv: [[c1[1] / det, -c1[0] / det], [-c0[1] / det, c0[0] / det]],
            det,
        }
    }

    pub fn to_reference(&self, x: [f64; 2]) -> [f64; 2] {
        let d = [x[0] - self.origin[0], x[1] - self.origin[1]];
        [
            self.inv[0][0] * d[0] + self.inv[0][1] * d[1],
            self.inv[1][0] * d[0] + self.inv[1][1] * d[1],
        ]
    }

    pub fn to_physical(&self, xi: [f64; 2]) -> [f64; 2] {
        [
            self.origin[0] + self.jac[0][0] * xi[0] + self.jac[0][1] * xi[1],
            self.origin[1] + self.jac[1][0] * xi[0] + self.jac[1][1] * xi[1],
        ]
    }

    /// Physical gradient from a reference gradient, `J⁻ᵀ ∇_ξ`.
    pub fn grad(&self, g: [f64; 2]) -> [f64; 2] {
        [
            self.inv[0][0] * g[0] + self.inv[1][0] * g[1],
            self.inv[0][1] * g[0] + self.inv[1][1] * g[1],
        ]
    }
}

/// `T_{i,j}`: the part of element `i` covered by the dual cell of its local
/// edge `j`.
#[derive(Debug, Clone, Copy)]
pub struct SubTriangle {
    /// Barycenter of the element followed by the edge nodes, counterclockwise.
    pub vertices: [[f64; 2]; 3],
    pub area: f64,
    pub edge: usize,
    pub cell: usize,
    pub sign: f64,
    /// `n_{i,j}`, the outward normal of the element on the edge.
    pub normal: [f64; 2],
    pub length: f64,
    /// Translation into the coordinates of the cell frame.
    pub shift: [f64; 2],
}

impl SubTriangle {
    pub fn map(&self, xi: [f64; 2]) -> [f64; 2] {
        let [c, a, b] = self.vertices;
        [
            c[0] + xi[0] * (a[0] - c[0]) + xi[1] * (b[0] - c[0]),
            c[1] + xi[0] * (a[1] - c[1]) + xi[1] * (b[1] - c[1]),
        ]
    }

    /// Point on the edge at parameter `t ∈ [0, 1]` from node `a` to node `b`.
    pub fn edge_point(&self, t: f64) -> [f64; 2] {
        let [_, a, b] = self.vertices;
        [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
    }
}

/// Stress control volume attached to an edge (or a periodic pair of edges).
#[derive(Debug, Clone)]
pub struct DualCell {
    pub left: usize,
    pub right: Option<usize>,
    pub edge_left: usize,
    pub edge_right: Option<usize>,
    /// `(bary_ℓ, a, bary_r, b)` for interior cells, `(a, b, bary_ℓ)` otherwise,
    /// in the coordinates of the left element.
    pub vertices: Vec<[f64; 2]>,
    pub area: f64,
    pub frame: Frame,
    pub region: i32,
}

impl DualCell {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.left).chain(self.right)
    }
}

#[derive(Debug, Clone)]
pub struct DualMesh {
    pub cells: Vec<DualCell>,
    pub cell_of_edge: Vec<usize>,
    /// Sub-triangles indexed by element and local edge.
    pub subs: Vec<[SubTriangle; 3]>,
}

impl DualMesh {
    pub fn build(mesh: &PrimalMesh, conn: &EdgeConnectivity) -> Result<Self> {
        let ne = conn.n_edges();
        let mut cell_of_edge = vec![usize::MAX; ne];
        let mut cells = Vec::new();
        for j in 0..ne {
            if cell_of_edge[j] != usize::MAX {
                continue;
            }
            let l = conn.left[j];
            let (edge_left, edge_right) = match conn.partner[j] {
                Some(q) => {
                    if conn.owner[j] == l {
                        (j, Some(q))
                    } else {
                        (q, Some(j))
                    }
                }
                None => (j, conn.right[j].map(|_| j)),
            };
            let id = cells.len();
            cell_of_edge[j] = id;
            if let Some(q) = conn.partner[j] {
                cell_of_edge[q] = id;
            }
            let bl = mesh.barycenter(l);
            let a = mesh.nodes[conn.edges[edge_left][0]];
            let b = mesh.nodes[conn.edges[edge_left][1]];
            let cell = match conn.right[j] {
                Some(r) => {
                    let er = edge_right.unwrap();
                    let shift = periodic_shift(mesh, conn, edge_left, er);
                    let br = mesh.barycenter(r);
                    let br = [br[0] + shift[0], br[1] + shift[1]];
                    let verts = vec![bl, a, br, b];
                    let area = signed_area(bl, a, b) + signed_area(br, b, a);
                    let c = [
                        0.25 * (bl[0] + a[0] + br[0] + b[0]),
                        0.25 * (bl[1] + a[1] + br[1] + b[1]),
                    ];
                    let c0 = [
                        0.5 * (a[0] - bl[0] + br[0] - b[0]),
                        0.5 * (a[1] - bl[1] + br[1] - b[1]),
                    ];
                    let c1 = [
                        0.5 * (b[0] - bl[0] + br[0] - a[0]),
                        0.5 * (b[1] - bl[1] + br[1] - a[1]),
                    ];
                    let origin = [
                        c[0] - 0.5 * (c0[0] + c1[0]),
                        c[1] - 0.5 * (c0[1] + c1[1]),
                    ];
                    let frame = Frame::new(origin, c0, c1);
                    if frame.det <= 0.0 {
                        return Err(Error::InvertedElement {
                            element: l,
                            det: frame.det,
                        });
                    }
                    DualCell {
                        left: l,
                        right: Some(r),
                        edge_left,
                        edge_right: Some(er),
                        vertices: verts,
                        area,
                        frame,
                        region: mesh.regions[l].min(mesh.regions[r]),
                    }
                }
                None => {
                    let frame = Frame::new(bl, [a[0] - bl[0], a[1] - bl[1]], [b[0] - bl[0], b[1] - bl[1]]);
                    DualCell {
                        left: l,
                        right: None,
                        edge_left,
                        edge_right: None,
                        vertices: vec![a, b, bl],
                        area: signed_area(bl, a, b),
                        frame,
                        region: mesh.regions[l],
                    }
                }
            };
            cells.push(cell);
        }

        let mut subs = Vec::with_capacity(mesh.n_elements());
        for i in 0..mesh.n_elements() {
            let bary = mesh.barycenter(i);
            let t = mesh.triangles[i];
            let sub = |k: usize| {
                let j = conn.elem_edges[i][k];
                let a = mesh.nodes[t[k]];
                let b = mesh.nodes[t[(k + 1) % 3]];
                let sign = conn.sign(i, j);
                let n = conn.normals[j];
                let cell = cell_of_edge[j];
                let c = &cells[cell];
                let shift = if c.right == Some(i) && c.left != i {
                    periodic_shift(mesh, conn, c.edge_left, j)
                } else {
                    [0.0, 0.0]
                };
                SubTriangle {
                    vertices: [bary, a, b],
                    area: signed_area(bary, a, b),
                    edge: j,
                    cell,
                    sign,
                    normal: [sign * n[0], sign * n[1]],
                    length: conn.lengths[j],
                    shift,
                }
            };
            subs.push([sub(0), sub(1), sub(2)]);
        }
        Ok(Self {
            cells,
            cell_of_edge,
            subs,
        })
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.area).sum()
    }
}

/// Translation taking points of edge record `er` onto edge record `el`.
fn periodic_shift(mesh: &PrimalMesh, conn: &EdgeConnectivity, el: usize, er: usize) -> [f64; 2] {
    if el == er {
        return [0.0, 0.0];
    }
    let mid = |j: usize| {
        let a = mesh.nodes[conn.edges[j][0]];
        let b = mesh.nodes[conn.edges[j][1]];
        [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
    };
    let ml = mid(el);
    let mr = mid(er);
    [ml[0] - mr[0], ml[1] - mr[1]]
}
