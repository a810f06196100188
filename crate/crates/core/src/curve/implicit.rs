//! Curves given as the zero set of a defining function `Ψ`, with `Ω = {Ψ < 0}`.

use std::collections::HashMap;
use std::fmt::Debug;

use crate::error::CurveError;
use crate::geom::{Mat2, Vec2};

/// A C² defining function with analytic first and second derivatives.
pub trait DefiningFunction: Debug + Send + Sync {
    fn value(&self, p: Vec2) -> f64;
    fn gradient(&self, p: Vec2) -> Vec2;
    fn hessian(&self, p: Vec2) -> Mat2;
}

/// Bivariate polynomial `Σ c · xⁱ yʲ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<(u32, u32, f64)>,
}

fn powi(x: f64, n: u32) -> f64 {
    x.powi(n as i32)
}

impl Polynomial {
    pub fn new(terms: Vec<(u32, u32, f64)>) -> Self {
        Polynomial { terms }
    }
}

impl DefiningFunction for Polynomial {
    fn value(&self, p: Vec2) -> f64 {
        self.terms
            .iter()
            .map(|&(i, j, c)| c * powi(p.x, i) * powi(p.y, j))
            .sum()
    }

    fn gradient(&self, p: Vec2) -> Vec2 {
        let mut g = Vec2::ZERO;
        for &(i, j, c) in &self.terms {
            if i > 0 {
                g.x += c * i as f64 * powi(p.x, i - 1) * powi(p.y, j);
            }
            if j > 0 {
                g.y += c * j as f64 * powi(p.x, i) * powi(p.y, j - 1);
            }
        }
        g
    }

    fn hessian(&self, p: Vec2) -> Mat2 {
        let (mut xx, mut xy, mut yy) = (0.0, 0.0, 0.0);
        for &(i, j, c) in &self.terms {
            let (fi, fj) = (i as f64, j as f64);
            if i > 1 {
                xx += c * fi * (fi - 1.0) * powi(p.x, i - 2) * powi(p.y, j);
            }
            if i > 0 && j > 0 {
                xy += c * fi * fj * powi(p.x, i - 1) * powi(p.y, j - 1);
            }
            if j > 1 {
                yy += c * fj * (fj - 1.0) * powi(p.x, i) * powi(p.y, j - 2);
            }
        }
        Mat2::new(xx, xy, xy, yy)
    }
}

/// Newton iteration along the gradient onto `Ψ = 0`.
pub(crate) fn project_to_zero_set(f: &dyn DefiningFunction, mut y: Vec2, tol: f64) -> Option<Vec2> {
    for _ in 0..50 {
        let v = f.value(y);
        let g = f.gradient(y);
        let g2 = g.norm_sq();
        if g2 == 0.0 || !v.is_finite() {
            return None;
        }
        let step = g * (v / g2);
        y = y - step;
        if step.norm() <= tol {
            return Some(y);
        }
    }
    None
}

/// Extracts the closed zero contours of `f` inside `bbox = [x0, y0, x1, y1]`
/// by marching over a `res × res` grid of squares split along one diagonal.
///
/// Contour vertices are projected onto the zero set; loops are returned
/// counter-clockwise, ordered by the first grid cell they cross.
pub fn extract_contours(
    f: &dyn DefiningFunction,
    bbox: [f64; 4],
    res: usize,
    tol: f64,
) -> Result<Vec<Vec<Vec2>>, CurveError> {
    let [x0, y0, x1, y1] = bbox;
    if !(x1 > x0 && y1 > y0) || res < 2 {
        return Err(CurveError::DegenerateCurve("invalid contour extraction box".into()));
    }
    let nx = res;
    let ny = res;
    let dx = (x1 - x0) / nx as f64;
    let dy = (y1 - y0) / ny as f64;
    let node = |i: usize, j: usize| Vec2::new(x0 + i as f64 * dx, y0 + j as f64 * dy);
    let vals: Vec<f64> = (0..=ny)
        .flat_map(|j| (0..=nx).map(move |i| (i, j)))
        .map(|(i, j)| f.value(node(i, j)))
        .collect();
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let positive = |k: usize| vals[k] >= 0.0;

    for i in 0..=nx {
        for j in [0, ny] {
            if !positive(id(i, j)) {
                return Err(CurveError::DegenerateCurve("zero set reaches the extraction box".into()));
            }
        }
    }
    for j in 0..=ny {
        for i in [0, nx] {
            if !positive(id(i, j)) {
                return Err(CurveError::DegenerateCurve("zero set reaches the extraction box".into()));
            }
        }
    }

    // Crossing points keyed by the (sorted) grid edge they lie on.
    let mut crossing: HashMap<(usize, usize), usize> = HashMap::new();
    let mut points: Vec<Vec2> = Vec::new();
    let mut segments: Vec<(usize, usize)> = Vec::new();
    let mut first_cell: Vec<usize> = Vec::new();
    let mut cross_at = |a: usize, b: usize, pa: Vec2, pb: Vec2, points: &mut Vec<Vec2>| -> usize {
        let key = (a.min(b), a.max(b));
        *crossing.entry(key).or_insert_with(|| {
            let (va, vb) = (vals[a], vals[b]);
            let t = va / (va - vb);
            points.push(pa.lerp(pb, t));
            points.len() - 1
        })
    };
    for j in 0..ny {
        for i in 0..nx {
            let cell = j * nx + i;
            let corners = [id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)];
            let pos = [node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)];
            for tri in [[0usize, 1, 2], [0, 2, 3]] {
                let inside: Vec<usize> = tri.iter().copied().filter(|&c| !positive(corners[c])).collect();
                if inside.is_empty() || inside.len() == 3 {
                    continue;
                }
                // the lone vertex whose side differs from the other two
                let lone = if inside.len() == 1 {
                    inside[0]
                } else {
                    *tri.iter().find(|c| !inside.contains(c)).unwrap()
                };
                let others: Vec<usize> = tri.iter().copied().filter(|&c| c != lone).collect();
                let p = cross_at(corners[lone], corners[others[0]], pos[lone], pos[others[0]], &mut points);
                let q = cross_at(corners[lone], corners[others[1]], pos[lone], pos[others[1]], &mut points);
                if p != q {
                    segments.push((p, q));
                    first_cell.push(cell);
                }
            }
        }
    }

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    for (s, &(p, q)) in segments.iter().enumerate() {
        adj[p].push(s);
        adj[q].push(s);
    }
    if adj.iter().any(|a| !a.is_empty() && a.len() != 2) {
        return Err(CurveError::DegenerateCurve(
            "contour is not a disjoint union of closed loops at this resolution".into(),
        ));
    }
    let mut used = vec![false; segments.len()];
    let mut loops = Vec::new();
    for s0 in 0..segments.len() {
        if used[s0] {
            continue;
        }
        let (start, mut cur) = segments[s0];
        used[s0] = true;
        let mut chain = vec![start];
        let mut seg = s0;
        while cur != start {
            chain.push(cur);
            let next = adj[cur].iter().copied().find(|&s| s != seg && !used[s]);
            let Some(next) = next else {
                return Err(CurveError::DegenerateCurve("open contour chain".into()));
            };
            used[next] = true;
            let (a, b) = segments[next];
            cur = if a == cur { b } else { a };
            seg = next;
        }
        let mut poly: Vec<Vec2> = Vec::with_capacity(chain.len());
        for &k in &chain {
            let y = project_to_zero_set(f, points[k], tol).ok_or_else(|| {
                CurveError::InvalidDefiningFunction("Newton projection onto the zero set failed".into())
            })?;
            poly.push(y);
        }
        if signed_area(&poly) < 0.0 {
            poly.reverse();
        }
        loops.push((first_cell[s0], poly));
    }
    loops.sort_by_key(|(c, _)| *c);
    Ok(loops.into_iter().map(|(_, p)| p).collect())
}

pub(crate) fn signed_area(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>() * 0.5
}
