//! Primal triangulation, edge connectivity and the edge-based dual mesh.

mod connectivity;
mod dual;
pub mod generate;
pub mod geometry;
mod io;

pub use connectivity::EdgeConnectivity;
pub use dual::{DualCell, DualMesh, SubTriangle};
pub use geometry::{reference_map, MapElement};
pub use io::{parse_gmsh, parse_native, read_mesh, write_native};

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Axis-aligned box whose opposite sides are identified.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PeriodicBox {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

#[derive(Debug, Clone)]
pub struct PrimalMesh {
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub regions: Vec<i32>,
    /// Periodicity declared in the mesh file, if any.
    pub periodic: Option<PeriodicBox>,
}

/// Positive for counterclockwise vertices.
pub fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

impl PrimalMesh {
    /// Validates the triangulation and flips clockwise triangles.
    pub fn new(nodes: Vec<[f64; 2]>, mut triangles: Vec<[usize; 3]>, regions: Vec<i32>) -> Result<Self> {
        assert_eq!(triangles.len(), regions.len());
        let n = nodes.len();
        let scale = bounding_diameter(&nodes).max(f64::MIN_POSITIVE);
        let mut seen = std::collections::HashMap::new();
        for (i, t) in triangles.iter_mut().enumerate() {
            for &v in t.iter() {
                if v >= n {
                    return Err(Error::NodeOutOfRange {
                        element: i,
                        node: v,
                        count: n,
                    });
                }
            }
            let area = signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
            if area.abs() <= 1e-14 * scale * scale {
                return Err(Error::DegenerateTriangle { index: i, area });
            }
            if area < 0.0 {
                t.swap(1, 2);
            }
            let mut key = *t;
            key.sort_unstable();
            if let Some(&first) = seen.get(&key) {
                return Err(Error::DuplicateTriangle { first, second: i });
            }
            seen.insert(key, i);
        }
        Ok(Self {
            nodes,
            triangles,
            regions,
            periodic: None,
        })
    }

    pub fn with_periodic(mut self, periodic: Option<PeriodicBox>) -> Self {
        self.periodic = periodic;
        self
    }

    pub fn n_elements(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertices(&self, i: usize) -> [[f64; 2]; 3] {
        let t = self.triangles[i];
        [self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]]
    }

    pub fn area(&self, i: usize) -> f64 {
        let [a, b, c] = self.vertices(i);
        signed_area(a, b, c)
    }

    pub fn barycenter(&self, i: usize) -> [f64; 2] {
        let [a, b, c] = self.vertices(i);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_elements()).map(|i| self.area(i)).sum()
    }

    /// Diameter of the node bounding box.
    pub fn diameter(&self) -> f64 {
        bounding_diameter(&self.nodes)
    }

    /// Radius of the inscribed circle of triangle `i`.
    pub fn incircle_radius(&self, i: usize) -> f64 {
        let [a, b, c] = self.vertices(i);
        let perimeter = dist(a, b) + dist(b, c) + dist(c, a);
        2.0 * self.area(i) / perimeter
    }

    /// Longest edge over all triangles.
    pub fn max_edge_length(&self) -> f64 {
        (0..self.n_elements())
            .map(|i| {
                let [a, b, c] = self.vertices(i);
                dist(a, b).max(dist(b, c)).max(dist(c, a))
            })
            .fold(0.0, f64::max)
    }

    /// Reference coordinates of `x` in triangle `i`.
    pub fn to_reference(&self, i: usize, x: [f64; 2]) -> [f64; 2] {
        let [a, b, c] = self.vertices(i);
        let det = 2.0 * signed_area(a, b, c);
        let dx = [x[0] - a[0], x[1] - a[1]];
        let xi = ((c[1] - a[1]) * dx[0] - (c[0] - a[0]) * dx[1]) / det;
        let eta = (-(b[1] - a[1]) * dx[0] + (b[0] - a[0]) * dx[1]) / det;
        [xi, eta]
    }

    /// Element containing `x`. Points within a relative distance `1e-10` of an
    /// element boundary are rejected as ambiguous.
    pub fn locate(&self, x: [f64; 2]) -> Result<usize> {
        let tol = 1e-10;
        let mut found = None;
        for i in 0..self.n_elements() {
            let [xi, eta] = self.to_reference(i, x);
            let m = xi.min(eta).min(1.0 - xi - eta);
            if m > tol {
                found = Some(i);
                break;
            }
            if m >= -tol {
                return Err(Error::AmbiguousPoint { x: x[0], y: x[1] });
            }
        }
        found.ok_or(Error::PointOutsideMesh { x: x[0], y: x[1] })
    }

    /// Lowest-index element whose closure contains `x`.
    pub fn locate_closed(&self, x: [f64; 2]) -> Result<usize> {
        let tol = 1e-10;
        (0..self.n_elements())
            .find(|&i| {
                let [xi, eta] = self.to_reference(i, x);
                xi.min(eta).min(1.0 - xi - eta) >= -tol
            })
            .ok_or(Error::PointOutsideMesh { x: x[0], y: x[1] })
    }

    pub fn region_ids(&self) -> Vec<i32> {
        let set: HashSet<i32> = self.regions.iter().copied().collect();
        let mut v: Vec<i32> = set.into_iter().collect();
        v.sort_unstable();
        v
    }
}

pub(crate) fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn bounding_diameter(nodes: &[[f64; 2]]) -> f64 {
    if nodes.is_empty() {
        return 0.0;
    }
    let mut lo = nodes[0];
    let mut hi = nodes[0];
    for p in nodes {
        lo = [lo[0].min(p[0]), lo[1].min(p[1])];
        hi = [hi[0].max(p[0]), hi[1].max(p[1])];
    }
    dist(lo, hi)
}

/// Complete staggered mesh: primal triangles, edges and dual cells.
#[derive(Debug, Clone)]
pub struct StaggeredMesh {
    pub primal: PrimalMesh,
    pub conn: EdgeConnectivity,
    pub dual: DualMesh,
}

impl StaggeredMesh {
    pub fn new(primal: PrimalMesh) -> Result<Self> {
        let periodic = primal.periodic;
        let conn = EdgeConnectivity::build(&primal, periodic.as_ref())?;
        let dual = DualMesh::build(&primal, &conn)?;
        Ok(Self { primal, conn, dual })
    }

    pub fn n_elements(&self) -> usize {
        self.primal.n_elements()
    }

    pub fn n_cells(&self) -> usize {
        self.dual.cells.len()
    }
}
