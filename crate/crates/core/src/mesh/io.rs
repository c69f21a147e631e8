//! Plain-text mesh format:
//!
//! ```text
//! annular-mesh v1
//! nv nt ne
//! x y          (nv lines)
//! i j k        (nt lines, 0-based)
//! a b tag      (ne lines, tag = inner | outer)
//! ```
//!
//! Coordinates are written with the shortest representation that parses back
//! to the same `f64`, so a write/read cycle is bit-exact.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{BoundaryEdge, BoundaryTag, Mesh};
use crate::error::{Error, Result};

const HEADER: &str = "annular-mesh v1";

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(
        out,
        "{} {} {}",
        mesh.vertices.len(),
        mesh.triangles.len(),
        mesh.boundary_edges.len()
    );
    for v in &mesh.vertices {
        let _ = writeln!(out, "{:?} {:?}", v[0], v[1]);
    }
    for t in &mesh.triangles {
        let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
    }
    for e in &mesh.boundary_edges {
        let tag = match e.tag {
            BoundaryTag::Inner => "inner",
            BoundaryTag::Outer => "outer",
        };
        let _ = writeln!(out, "{} {} {}", e.a, e.b, tag);
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn fields<const N: usize>(line_no: usize, line: &str) -> Result<[&str; N]> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    parts
        .try_into()
        .map_err(|p: Vec<&str>| parse_err(line_no, format!("expected {N} fields, found {}", p.len())))
}

fn num<T: FromStr>(line_no: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| parse_err(line_no, format!("cannot parse '{s}'")))
}

/// Parses the text format. The result carries no exact boundary curves.
pub fn read_mesh(text: &str) -> Result<Mesh> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (no, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    if header.trim() != HEADER {
        return Err(parse_err(no, format!("expected header '{HEADER}'")));
    }
    let (no, counts) = lines.next().ok_or_else(|| parse_err(2, "missing counts line"))?;
    let [nv, nt, ne] = fields::<3>(no, counts)?;
    let (nv, nt, ne): (usize, usize, usize) = (num(no, nv)?, num(no, nt)?, num(no, ne)?);

    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| parse_err(0, format!("unexpected end of input while reading {what}")))
    };
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (no, line) = next("vertices")?;
        let [x, y] = fields::<2>(no, line)?;
        vertices.push([num(no, x)?, num(no, y)?]);
    }
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (no, line) = next("triangles")?;
        let [a, b, c] = fields::<3>(no, line)?;
        let t: [usize; 3] = [num(no, a)?, num(no, b)?, num(no, c)?];
        if t.iter().any(|&i| i >= nv) {
            return Err(parse_err(no, "vertex index out of range"));
        }
        triangles.push(t);
    }
    let mut boundary_edges = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (no, line) = next("boundary edges")?;
        let [a, b, tag] = fields::<3>(no, line)?;
        let tag = match tag {
            "inner" => BoundaryTag::Inner,
            "outer" => BoundaryTag::Outer,
            other => return Err(parse_err(no, format!("unknown boundary tag '{other}'"))),
        };
        let (a, b): (usize, usize) = (num(no, a)?, num(no, b)?);
        if a >= nv || b >= nv {
            return Err(parse_err(no, "vertex index out of range"));
        }
        boundary_edges.push(BoundaryEdge { a, b, tag });
    }
    for (no, rest) in lines {
        if !rest.trim().is_empty() {
            return Err(parse_err(no, "trailing content"));
        }
    }
    Mesh::new(vertices, triangles, boundary_edges, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{AnnularDomain, Outline, RadialOutline};
    use crate::mesh::polar_mesh;

    #[test]
    fn round_trip_is_bit_exact() {
        let o = RadialOutline::new(1.5, vec![0.0, 0.3], vec![0.05]).unwrap();
        let d = AnnularDomain::new(Outline::Radial(o), 0.5).unwrap();
        let m = polar_mesh(&d, 5, 40).unwrap();
        let text = write_mesh(&m);
        let back = read_mesh(&text).unwrap();
        assert_eq!(back.vertices, m.vertices);
        assert_eq!(back.triangles, m.triangles);
        assert_eq!(back.boundary_edges, m.boundary_edges);
        assert_eq!(write_mesh(&back), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let d = AnnularDomain::shell(1.0, 2.0).unwrap();
        let text = write_mesh(&polar_mesh(&d, 2, 8).unwrap());
        let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
        lines[4] = "0.5 oops".into();
        match read_mesh(&lines.join("\n")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_mesh("nope"), Err(Error::Parse { line: 1, .. })));
        let mut bad_tag: Vec<String> = text.lines().map(str::to_owned).collect();
        let last = bad_tag.len() - 1;
        bad_tag[last] = bad_tag[last].replace("outer", "middle");
        assert!(matches!(read_mesh(&bad_tag.join("\n")), Err(Error::Parse { .. })));
    }
}
