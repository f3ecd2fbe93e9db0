use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{PeriodicBox, PrimalMesh};
use crate::error::{Error, Result};

/// Reads a native or Gmsh 2.2 ASCII mesh, chosen by content.
pub fn read_mesh(path: impl AsRef<Path>) -> Result<PrimalMesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('$') {
        parse_gmsh(&text, path)
    } else {
        parse_native(&text, path)
    }
}

struct Lines<'a> {
    path: &'a Path,
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str, path: &'a Path) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Self {
            path,
            inner: it.peekable(),
        }
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line,
            msg: msg.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        match self.inner.next() {
            Some((n, l)) => Ok((n, l.split_whitespace().collect())),
            None => Err(self.err(0, format!("unexpected end of file, expected {what}"))),
        }
    }

    fn parse<T: std::str::FromStr>(&self, line: usize, tok: &str) -> Result<T> {
        tok.parse()
            .map_err(|_| self.err(line, format!("cannot parse `{tok}`")))
    }
}

pub fn parse_native(text: &str, path: &Path) -> Result<PrimalMesh> {
    let mut lines = Lines::new(text, path);
    let (ln, head) = lines.next("NODES header")?;
    if head.len() != 2 || !head[0].eq_ignore_ascii_case("NODES") {
        return Err(lines.err(ln, "expected `NODES <n>`"));
    }
    let n: usize = lines.parse(ln, head[1])?;
    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, t) = lines.next("node coordinates")?;
        if t.len() != 2 {
            return Err(lines.err(ln, "expected `<x> <y>`"));
        }
        nodes.push([lines.parse(ln, t[0])?, lines.parse(ln, t[1])?]);
    }
    let (ln, head) = lines.next("TRIANGLES header")?;
    if head.len() != 2 || !head[0].eq_ignore_ascii_case("TRIANGLES") {
        return Err(lines.err(ln, "expected `TRIANGLES <m>`"));
    }
    let m: usize = lines.parse(ln, head[1])?;
    let mut tris = Vec::with_capacity(m);
    let mut regions = Vec::with_capacity(m);
    for e in 0..m {
        let (ln, t) = lines.next("triangle")?;
        if t.len() != 4 {
            return Err(lines.err(ln, "expected `<i1> <i2> <i3> <region_id>`"));
        }
        let mut tri = [0usize; 3];
        for k in 0..3 {
            tri[k] = lines.parse(ln, t[k])?;
            if tri[k] >= n {
                return Err(lines.err(
                    ln,
                    format!("triangle {e} references node {} but only {n} nodes exist", tri[k]),
                ));
            }
        }
        tris.push(tri);
        regions.push(lines.parse(ln, t[3])?);
    }
    let mut periodic = None;
    if let Some((ln, t)) = lines.inner.next() {
        let t: Vec<&str> = t.split_whitespace().collect();
        if t.len() != 6 || !t[0].eq_ignore_ascii_case("PERIODIC") || !t[1].eq_ignore_ascii_case("BOX") {
            return Err(lines.err(ln, "expected `PERIODIC BOX <xmin> <xmax> <ymin> <ymax>`"));
        }
        periodic = Some(PeriodicBox {
            xmin: lines.parse(ln, t[2])?,
            xmax: lines.parse(ln, t[3])?,
            ymin: lines.parse(ln, t[4])?,
            ymax: lines.parse(ln, t[5])?,
        });
        if let Some((ln, _)) = lines.inner.next() {
            return Err(lines.err(ln, "trailing content"));
        }
    }
    Ok(PrimalMesh::new(nodes, tris, regions)?.with_periodic(periodic))
}

/// Gmsh 2.2 ASCII subset: 3-node triangles, region from the first tag.
pub fn parse_gmsh(text: &str, path: &Path) -> Result<PrimalMesh> {
    let mut lines = Lines::new(text, path);
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut tris = Vec::new();
    let mut regions = Vec::new();
    let mut skipped = 0usize;
    while let Some((_, l)) = lines.inner.next() {
        match l {
            "$Nodes" => {
                let (ln, t) = lines.next("node count")?;
                let n: usize = lines.parse(ln, t[0])?;
                for _ in 0..n {
                    let (ln, t) = lines.next("node")?;
                    if t.len() < 3 {
                        return Err(lines.err(ln, "expected `<id> <x> <y> [z]`"));
                    }
                    ids.insert(lines.parse(ln, t[0])?, nodes.len());
                    nodes.push([lines.parse(ln, t[1])?, lines.parse(ln, t[2])?]);
                }
            }
            "$Elements" => {
                let (ln, t) = lines.next("element count")?;
                let m: usize = lines.parse(ln, t[0])?;
                for _ in 0..m {
                    let (ln, t) = lines.next("element")?;
                    if t.len() < 3 {
                        return Err(lines.err(ln, "malformed element"));
                    }
                    let ty: usize = lines.parse(ln, t[1])?;
                    let ntags: usize = lines.parse(ln, t[2])?;
                    if ty != 2 {
                        skipped += 1;
                        continue;
                    }
                    if t.len() != 3 + ntags + 3 {
                        return Err(lines.err(ln, "triangle must list 3 nodes"));
                    }
                    let region = if ntags > 0 { lines.parse(ln, t[3])? } else { 0 };
                    let mut tri = [0usize; 3];
                    for k in 0..3 {
                        let id: usize = lines.parse(ln, t[3 + ntags + k])?;
                        tri[k] = *ids.get(&id).ok_or_else(|| {
                            lines.err(ln, format!("triangle {} references unknown node {id}", tris.len()))
                        })?;
                    }
                    tris.push(tri);
                    regions.push(region);
                }
            }
            // other sections ($MeshFormat, $PhysicalNames, ...) and their bodies
            _ => {}
        }
    }
    if skipped > 0 {
        log::warn!("{}: ignored {skipped} non-triangle elements", path.display());
    }
    PrimalMesh::new(nodes, tris, regions)
}

pub fn write_native(mesh: &PrimalMesh, path: impl AsRef<Path>) -> Result<()> {
    let mut s = String::new();
    let _ = writeln!(s, "NODES {}", mesh.nodes.len());
    for p in &mesh.nodes {
        let _ = writeln!(s, "{:.17e} {:.17e}", p[0], p[1]);
    }
    let _ = writeln!(s, "TRIANGLES {}", mesh.triangles.len());
    for (t, r) in mesh.triangles.iter().zip(&mesh.regions) {
        let _ = writeln!(s, "{} {} {} {}", t[0], t[1], t[2], r);
    }
    if let Some(b) = mesh.periodic {
        let _ = writeln!(s, "PERIODIC BOX {:.17e} {:.17e} {:.17e} {:.17e}", b.xmin, b.xmax, b.ymin, b.ymax);
    }
    std::fs::write(path, s)?;
    Ok(())
}
