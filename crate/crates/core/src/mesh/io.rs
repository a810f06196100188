//! Plain-text mesh format.
//!
//! ```text
//! nv nt
//! x y        (nv lines)
//! i j k      (nt lines, 0-based)
//! ```
//!
//! Coordinates are written with the shortest representation that parses
//! back to the same `f64`, so save/load is bit-exact.

use std::fmt::Write as _;

use crate::error::{Error, ParseError};
use crate::geom::Vec2;

use super::Triangulation;

pub fn write_mesh(tri: &Triangulation) -> String {
    let mut s = String::new();
    writeln!(s, "{} {}", tri.num_vertices(), tri.num_triangles()).unwrap();
    for v in tri.vertices() {
        writeln!(s, "{:?} {:?}", v.x, v.y).unwrap();
    }
    for t in tri.triangles() {
        writeln!(s, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    s
}

pub fn parse_mesh(text: &str) -> Result<Triangulation, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let syntax = |line: usize, msg: &str| ParseError::Syntax {
        line,
        msg: msg.to_string(),
    };
    let (ln, header) = lines.next().ok_or(ParseError::Invalid("empty mesh file".into()))?;
    let counts: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| syntax(ln, "header must be `nv nt`")))
        .collect::<Result<_, _>>()?;
    let [nv, nt] = counts[..] else {
        return Err(syntax(ln, "header must be `nv nt`").into());
    };
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines.next().ok_or(ParseError::Invalid("missing vertex lines".into()))?;
        let v: Vec<f64> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| syntax(ln, "vertex must be `x y`")))
            .collect::<Result<_, _>>()?;
        match v[..] {
            [x, y] if x.is_finite() && y.is_finite() => vertices.push(Vec2::new(x, y)),
            _ => return Err(syntax(ln, "vertex must be `x y`").into()),
        }
    }
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (ln, l) = lines.next().ok_or(ParseError::Invalid("missing triangle lines".into()))?;
        let t: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| syntax(ln, "triangle must be `i j k`")))
            .collect::<Result<_, _>>()?;
        match t[..] {
            [i, j, k] => triangles.push([i, j, k]),
            _ => return Err(syntax(ln, "triangle must be `i j k`").into()),
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(syntax(ln, "trailing content").into());
    }
    Ok(Triangulation::new(vertices, triangles)?)
}
