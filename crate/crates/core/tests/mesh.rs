mod common;

use std::io::Write;

use proptest::prelude::*;
use stagdg::mesh::{generate, read_mesh, signed_area, StaggeredMesh};
use stagdg::Error;

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn shoelace(p: &[[f64; 2]]) -> f64 {
    let n = p.len();
    0.5 * (0..n)
        .map(|k| {
            let (a, b) = (p[k], p[(k + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

#[test]
fn reads_two_triangle_square() {
    let f = write_temp("NODES 4\n0 0\n1 0\n1 1\n0 1\nTRIANGLES 2\n0 1 3 0\n1 2 3 0\n");
    let m = read_mesh(f.path()).unwrap();
    assert_eq!(m.nodes.len(), 4);
    assert_eq!(m.n_elements(), 2);
    for i in 0..2 {
        assert!((m.area(i) - 0.5).abs() < 1e-15);
    }
}

#[test]
fn clockwise_triangle_is_flipped() {
    let f = write_temp("NODES 3\n0 0\n1 0\n0 1\nTRIANGLES 1\n0 2 1 0\n");
    let m = read_mesh(f.path()).unwrap();
    assert_eq!(m.triangles[0], [0, 1, 2]);
    let [a, b, c] = m.vertices(0);
    assert!(signed_area(a, b, c) > 0.0);
}

#[test]
fn node_out_of_range_names_the_element() {
    let f = write_temp("NODES 3\n0 0\n1 0\n0 1\nTRIANGLES 2\n0 1 2 0\n0 1 7 0\n");
    match read_mesh(f.path()) {
        Err(Error::Parse { line, msg, .. }) => {
            assert_eq!(line, 7);
            assert!(msg.contains("triangle 1"), "{msg}");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn reads_gmsh_triangles() {
    let text = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 1 1 0\n4 0 1 0\n$EndNodes\n\
                $Elements\n3\n1 1 2 7 1 1 2\n2 2 2 5 1 1 2 4\n3 2 2 5 1 2 3 4\n$EndElements\n";
    let f = write_temp(text);
    let m = read_mesh(f.path()).unwrap();
    assert_eq!(m.n_elements(), 2);
    assert_eq!(m.regions, vec![5, 5]);
    assert!((m.total_area() - 1.0).abs() < 1e-15);
}

#[test]
fn native_round_trip() {
    let m = generate::jitter(&generate::periodic_square(4, -1.5, 1.5, true), 0.75, 0.2, 3).unwrap();
    let f = tempfile::NamedTempFile::new().unwrap();
    stagdg::mesh::write_native(&m, f.path()).unwrap();
    let back = read_mesh(f.path()).unwrap();
    assert_eq!(back.nodes, m.nodes);
    assert_eq!(back.triangles, m.triangles);
    assert_eq!(back.periodic, m.periodic);
}

#[test]
fn two_triangle_connectivity() {
    let m = StaggeredMesh::new(generate::two_triangle_square()).unwrap();
    let c = &m.conn;
    assert_eq!(c.n_edges(), 5);
    assert_eq!(c.interior_edges().len(), 1);
    assert_eq!(c.boundary_edges().len(), 4);
    let j = c.interior_edges()[0];
    assert_eq!(c.left[j], 0);
    assert_eq!(c.right[j], Some(1));
    let b0 = m.primal.barycenter(0);
    let b1 = m.primal.barycenter(1);
    let n = c.normals[j];
    assert!((n[0].hypot(n[1]) - 1.0).abs() < 1e-15);
    assert!(n[0] * (b1[0] - b0[0]) + n[1] * (b1[1] - b0[1]) > 0.0);
    assert_eq!(c.sign(0, j), 1.0);
    assert_eq!(c.sign(1, j), -1.0);
    for &b in &c.boundary_edges() {
        assert_eq!(c.sign(c.left[b], b), 1.0);
    }
}

#[test]
fn periodic_two_triangle_connectivity() {
    let m = StaggeredMesh::new(generate::periodic_square(1, 0.0, 1.0, false)).unwrap();
    assert_eq!(m.conn.n_edges(), 5);
    assert!(m.conn.boundary_edges().is_empty());
    let paired = (0..5).filter(|&j| m.conn.partner[j].is_some()).count();
    assert_eq!(paired, 4);
    assert_eq!(m.n_cells(), 3);
}

#[test]
fn interior_dual_quad_of_unit_square() {
    // diagonal from (1,0) to (0,1)
    let m = StaggeredMesh::new(generate::two_triangle_square()).unwrap();
    let j = m.conn.interior_edges()[0];
    let cell = &m.dual.cells[m.dual.cell_of_edge[j]];
    assert!((shoelace(&cell.vertices).abs() - 1.0 / 3.0).abs() < 1e-15);
    assert!((cell.area - 1.0 / 3.0).abs() < 1e-15);
    let mut v = cell.vertices.clone();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let want = [[0.0, 1.0], [1.0 / 3.0, 1.0 / 3.0], [2.0 / 3.0, 2.0 / 3.0], [1.0, 0.0]];
    for (a, b) in v.iter().zip(&want) {
        assert!((a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-15, "{v:?}");
    }
    let total: f64 = m.dual.cells.iter().map(|c| c.area).sum();
    assert!((total - 1.0).abs() < 1e-15);
}

#[test]
fn sub_triangles_are_thirds() {
    let m = StaggeredMesh::new(generate::two_triangle_square()).unwrap();
    for i in 0..2 {
        for s in &m.dual.subs[i] {
            assert!((s.area - m.primal.area(i) / 3.0).abs() < 1e-15);
        }
    }
}

fn check_invariants(m: &StaggeredMesh) {
    let c = &m.conn;
    let rel = 1e-12;
    for i in 0..m.n_elements() {
        let [a, b, cc] = m.primal.vertices(i);
        assert!(signed_area(a, b, cc) > 0.0);
        let sub: f64 = m.dual.subs[i].iter().map(|s| s.area).sum();
        assert!((sub - m.primal.area(i)).abs() <= rel * m.primal.area(i));
        for s in &m.dual.subs[i] {
            let nj = c.normals[s.edge];
            let sg = c.sign(i, s.edge);
            assert!((s.normal[0] - sg * nj[0]).abs() < 1e-14 && (s.normal[1] - sg * nj[1]).abs() < 1e-14);
            assert_eq!(s.sign, sg);
        }
    }
    let n_interior = c.interior_edges().len();
    let n_boundary = c.boundary_edges().len();
    let incident: usize = c.elem_edges.iter().map(|e| e.len()).sum();
    let records_per_edge = |j: usize| if c.partner[j].is_some() || c.is_boundary(j) { 1 } else { 2 };
    let expect: usize = (0..c.n_edges()).map(records_per_edge).sum();
    assert_eq!(incident, expect);
    assert_eq!(incident, 3 * m.n_elements());
    assert!(n_interior + n_boundary == c.n_edges());
    for &j in &c.interior_edges() {
        let (l, r) = (c.left[j], c.right[j].unwrap());
        assert_ne!(l, r);
        let n = c.normals[j];
        assert!((n[0].hypot(n[1]) - 1.0).abs() < 1e-14);
        if c.partner[j].is_none() {
            assert!(c.elem_edges[l].contains(&j) && c.elem_edges[r].contains(&j));
        }
    }
    let dual: f64 = m.dual.total_area();
    assert!((dual - m.primal.total_area()).abs() <= rel * m.primal.total_area());
}

#[test]
fn generated_meshes_satisfy_invariants() {
    check_invariants(&StaggeredMesh::new(generate::structured_rect(5, 4, [0.0, 2.0], [0.0, 1.0], true)).unwrap());
    check_invariants(&StaggeredMesh::new(generate::cavity(9, 3, 2, 2.5, 0.25).unwrap()).unwrap());
}

#[test]
fn doubling_does_not_duplicate_triangles() {
    let f = write_temp("NODES 3\n0 0\n1 0\n0 1\nTRIANGLES 2\n0 1 2 0\n1 2 0 0\n");
    assert!(matches!(read_mesh(f.path()), Err(Error::DuplicateTriangle { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn jittered_periodic_meshes_satisfy_invariants(n in 2usize..7, seed in 0u64..10_000, frac in 0.0f64..0.25, alt: bool) {
        let base = generate::periodic_square(n, -1.0, 2.0, alt);
        let m = generate::jitter(&base, 3.0 / n as f64, frac, seed).unwrap();
        check_invariants(&StaggeredMesh::new(m).unwrap());
    }
}
