//! Background triangulations: vertex list, connectivity, edge adjacency and
//! per-triangle shape metrics.

mod grid;
mod io;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::MeshError;
use crate::geom::{angle_at, orient2d, point_segment_distance, Vec2};

pub use grid::{equilateral_grid, equilateral_grid_with_margin, grid_dimensions, GridDimensions};
pub use io::{parse_mesh, write_mesh};

/// Undirected edge identity: sorted vertex-index pair.
pub type EdgeKey = (usize, usize);

#[inline]
pub fn edge_key(a: usize, b: usize) -> EdgeKey {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleMetrics {
    /// Diameter (longest edge).
    pub h: f64,
    /// Diameter of the inscribed circle.
    pub rho: f64,
    /// Shape parameter `h / rho`.
    pub sigma: f64,
    /// Interior angles in degrees, in the triangle's vertex order.
    pub angles: [f64; 3],
    pub area: f64,
}

impl TriangleMetrics {
    pub fn compute(a: Vec2, b: Vec2, c: Vec2) -> Self {
        let (la, lb, lc) = (b.dist(c), a.dist(c), a.dist(b));
        let area = 0.5 * orient2d(a, b, c).abs();
        let h = la.max(lb).max(lc);
        let rho = 4.0 * area / (la + lb + lc);
        TriangleMetrics {
            h,
            rho,
            sigma: h / rho,
            angles: [angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)],
            area,
        }
    }
}

/// Uniform bucket grid over triangle bounding boxes for point location.
#[derive(Debug, Clone)]
struct Locator {
    origin: Vec2,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl Locator {
    fn build(vertices: &[Vec2], triangles: &[[usize; 3]], h_mean: f64) -> Self {
        let (mut lo, mut hi) = (vertices[0], vertices[0]);
        for v in vertices {
            lo = Vec2::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Vec2::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        let cell = h_mean.max(1e-300);
        let nx = (((hi.x - lo.x) / cell).ceil() as usize).clamp(1, 4096);
        let ny = (((hi.y - lo.y) / cell).ceil() as usize).clamp(1, 4096);
        let cell = ((hi.x - lo.x) / nx as f64).max((hi.y - lo.y) / ny as f64).max(1e-300);
        let mut buckets = vec![Vec::new(); nx * ny];
        let loc = |x: f64, n: usize| ((x / cell).floor().max(0.0) as usize).min(n - 1);
        for (k, t) in triangles.iter().enumerate() {
            let ps = t.map(|i| vertices[i]);
            let (mut a, mut b) = (ps[0], ps[0]);
            for p in &ps[1..] {
                a = Vec2::new(a.x.min(p.x), a.y.min(p.y));
                b = Vec2::new(b.x.max(p.x), b.y.max(p.y));
            }
            for j in loc(a.y - lo.y, ny)..=loc(b.y - lo.y, ny) {
                for i in loc(a.x - lo.x, nx)..=loc(b.x - lo.x, nx) {
                    buckets[j * nx + i].push(k);
                }
            }
        }
        Locator {
            origin: lo,
            cell,
            nx,
            ny,
            buckets,
        }
    }

    fn candidates(&self, p: Vec2) -> &[usize] {
        let d = p - self.origin;
        if d.x < 0.0 || d.y < 0.0 {
            return &[];
        }
        let i = (d.x / self.cell).floor() as usize;
        let j = (d.y / self.cell).floor() as usize;
        if i > self.nx || j > self.ny {
            return &[];
        }
        &self.buckets[j.min(self.ny - 1) * self.nx + i.min(self.nx - 1)]
    }
}

/// A validated triangulation `(V, C)` of a polygonal region.
#[derive(Debug, Clone)]
pub struct Triangulation {
    vertices: Vec<Vec2>,
    triangles: Vec<[usize; 3]>,
    edge_map: BTreeMap<EdgeKey, Vec<usize>>,
    metrics: Vec<TriangleMetrics>,
    locator: Locator,
}

impl Triangulation {
    /// Validates the connectivity and builds the edge map.
    pub fn new(vertices: Vec<Vec2>, triangles: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        let nv = vertices.len();
        for (k, t) in triangles.iter().enumerate() {
            for &i in t {
                if i >= nv {
                    return Err(MeshError::IndexOutOfRange { tri: k, index: i, nv });
                }
            }
        }
        check_duplicates(&vertices)?;
        let mut edge_map: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
        let mut metrics = Vec::with_capacity(triangles.len());
        for (k, t) in triangles.iter().enumerate() {
            let [a, b, c] = t.map(|i| vertices[i]);
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || orient2d(a, b, c) == 0.0 {
                return Err(MeshError::DegenerateTriangle(k));
            }
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let key = edge_key(e.0, e.1);
                let inc = edge_map.entry(key).or_default();
                inc.push(k);
                if inc.len() > 2 {
                    return Err(MeshError::NonManifoldEdge(key.0, key.1));
                }
            }
            metrics.push(TriangleMetrics::compute(a, b, c));
        }
        let h_mean = if metrics.is_empty() {
            1.0
        } else {
            metrics.iter().map(|m| m.h).sum::<f64>() / metrics.len() as f64
        };
        let locator = if vertices.is_empty() {
            Locator {
                origin: Vec2::ZERO,
                cell: 1.0,
                nx: 1,
                ny: 1,
                buckets: vec![Vec::new()],
            }
        } else {
            Locator::build(&vertices, &triangles, h_mean)
        };
        Ok(Triangulation {
            vertices,
            triangles,
            edge_map,
            metrics,
            locator,
        })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Vec2 {
        self.vertices[i]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, k: usize) -> [usize; 3] {
        self.triangles[k]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeKey, &Vec<usize>)> {
        self.edge_map.iter()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_map.len()
    }

    pub fn metrics(&self, k: usize) -> &TriangleMetrics {
        &self.metrics[k]
    }

    /// Interior angle of triangle `k` at mesh vertex `v`, in degrees.
    pub fn angle_at_vertex(&self, k: usize, v: usize) -> Option<f64> {
        let t = self.triangles[k];
        t.iter().position(|&i| i == v).map(|j| self.metrics[k].angles[j])
    }

    /// Triangles incident to the undirected edge `(a, b)`.
    pub fn edge_incident_triangles(&self, a: usize, b: usize) -> Result<&[usize], MeshError> {
        self.edge_map
            .get(&edge_key(a, b))
            .map(Vec::as_slice)
            .ok_or(MeshError::UnknownEdge(a, b))
    }

    /// Edges with a single incident triangle.
    pub fn boundary_edges(&self) -> Vec<EdgeKey> {
        self.edge_map
            .iter()
            .filter(|(_, inc)| inc.len() == 1)
            .map(|(e, _)| *e)
            .collect()
    }

    /// A triangle whose closure contains `p`.
    pub fn locate(&self, p: Vec2) -> Option<usize> {
        self.locator.candidates(p).iter().copied().find(|&k| {
            let [a, b, c] = self.triangles[k].map(|i| self.vertices[i]);
            let s = orient2d(a, b, c).signum();
            orient2d(a, b, p) * s >= 0.0 && orient2d(b, c, p) * s >= 0.0 && orient2d(c, a, p) * s >= 0.0
        })
    }

    /// Distance from `p` to the nearest boundary edge.
    pub fn distance_to_boundary(&self, p: Vec2, boundary: &[EdgeKey]) -> f64 {
        boundary
            .iter()
            .map(|&(a, b)| point_segment_distance(p, self.vertices[a], self.vertices[b]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_h(&self) -> f64 {
        self.metrics.iter().map(|m| m.h).fold(0.0, f64::max)
    }

    pub fn min_h(&self) -> f64 {
        self.metrics.iter().map(|m| m.h).fold(f64::INFINITY, f64::min)
    }
}

/// Rejects vertex pairs closer than `1e-12 ·` (bounding-box diagonal).
fn check_duplicates(vertices: &[Vec2]) -> Result<(), MeshError> {
    if vertices.len() < 2 {
        return Ok(());
    }
    let (mut lo, mut hi) = (vertices[0], vertices[0]);
    for v in vertices {
        lo = Vec2::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Vec2::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    let eps = 1e-12 * (hi - lo).norm();
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| vertices[a].x.total_cmp(&vertices[b].x));
    for (n, &i) in order.iter().enumerate() {
        for &j in &order[n + 1..] {
            if vertices[j].x - vertices[i].x > eps {
                break;
            }
            if vertices[i].dist(vertices[j]) <= eps {
                return Err(MeshError::DuplicateVertex(i.min(j), i.max(j)));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Triangulation {
        Triangulation::new(
            vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(1.0, 1.0),
                Vec2::new(0.0, 1.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn single_triangle_has_three_boundary_edges() {
        let t = Triangulation::new(
            vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        assert_eq!(t.num_edges(), 3);
        assert_eq!(t.boundary_edges().len(), 3);
    }

    #[test]
    fn square_diagonal_is_interior() {
        let t = square();
        assert_eq!(t.edge_incident_triangles(0, 2).unwrap(), &[0, 1]);
        assert_eq!(t.edge_incident_triangles(2, 0).unwrap(), &[0, 1]);
        assert_eq!(t.edge_incident_triangles(0, 1).unwrap(), &[0]);
        assert_eq!(t.edge_incident_triangles(1, 3), Err(MeshError::UnknownEdge(1, 3)));
        let incidences: usize = t.edges().map(|(_, inc)| inc.len()).sum();
        assert_eq!(incidences, 3 * t.num_triangles());
    }

    #[test]
    fn index_out_of_range() {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(1.0, 1.0)];
        assert_eq!(
            Triangulation::new(v, vec![[0, 1, 99]]).unwrap_err(),
            MeshError::IndexOutOfRange { tri: 0, index: 99, nv: 4 }
        );
    }

    #[test]
    fn rejects_bad_meshes() {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)];
        assert_eq!(
            Triangulation::new(v, vec![[0, 1, 2]]).unwrap_err(),
            MeshError::DegenerateTriangle(0)
        );
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(0.0, 1.0)];
        assert_eq!(
            Triangulation::new(v, vec![[0, 1, 2]]).unwrap_err(),
            MeshError::DuplicateVertex(2, 3)
        );
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.5, 1.0),
            Vec2::new(0.5, -1.0),
            Vec2::new(0.6, 2.0),
        ];
        assert_eq!(
            Triangulation::new(v, vec![[0, 1, 2], [0, 1, 3], [1, 0, 4]]).unwrap_err(),
            MeshError::NonManifoldEdge(0, 1)
        );
    }

    #[test]
    fn metrics_of_reference_triangles() {
        let eq = TriangleMetrics::compute(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.5, 3f64.sqrt() / 2.0));
        assert!((eq.h - 1.0).abs() < 1e-15);
        assert!((eq.rho - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((eq.sigma - 3f64.sqrt()).abs() < 1e-14);
        for a in eq.angles {
            assert!((a - 60.0).abs() < 1e-12);
        }

        // right isosceles: inradius (a + b - c) / 2
        let ri = TriangleMetrics::compute(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0));
        let r = (1.0 + 1.0 - 2f64.sqrt()) / 2.0;
        assert!((ri.h - 2f64.sqrt()).abs() < 1e-15);
        assert!((ri.rho - 2.0 * r).abs() < 1e-15);
        assert!((ri.sigma - 2f64.sqrt() / (2.0 - 2f64.sqrt())).abs() < 1e-13);

        // 3-4-5: area 6, semiperimeter 6, inradius 1
        let t = TriangleMetrics::compute(Vec2::new(0.0, 0.0), Vec2::new(4.0, 0.0), Vec2::new(0.0, 3.0));
        assert!((t.h - 5.0).abs() < 1e-15);
        assert!((t.rho - 2.0).abs() < 1e-15);
        assert!((t.sigma - 2.5).abs() < 1e-15);
        assert!((t.angles.iter().sum::<f64>() - 180.0).abs() < 1e-9);
    }

    #[test]
    fn locate_points() {
        let t = square();
        assert_eq!(t.locate(Vec2::new(0.9, 0.1)), Some(0));
        assert_eq!(t.locate(Vec2::new(0.1, 0.9)), Some(1));
        assert_eq!(t.locate(Vec2::new(1.5, 0.5)), None);
    }
}
