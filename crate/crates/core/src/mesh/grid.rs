use crate::error::MeshError;
use crate::geom::Vec2;

use super::Triangulation;

/// Layout of an equilateral grid: `columns` edge-lengths per row,
/// `rows` strips of triangles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridDimensions {
    pub origin: Vec2,
    pub columns: usize,
    pub rows: usize,
}

impl GridDimensions {
    pub fn num_vertices(&self) -> usize {
        (self.columns + 1) * (self.rows + 1)
    }

    pub fn num_triangles(&self) -> usize {
        2 * self.columns * self.rows
    }
}

/// Grid layout covering `bbox = [x0, y0, x1, y1]` plus `margin` cells on each side.
pub fn grid_dimensions(bbox: [f64; 4], h: f64, margin: usize) -> Result<GridDimensions, MeshError> {
    let [x0, y0, x1, y1] = bbox;
    if !(h > 0.0 && h.is_finite()) {
        return Err(MeshError::InvalidGrid(format!("edge length must be positive, got {h}")));
    }
    if !(x1 > x0 && y1 > y0) || bbox.iter().any(|v| !v.is_finite()) {
        return Err(MeshError::InvalidGrid("bounding box is degenerate".into()));
    }
    let m = margin as f64;
    let row_h = h * 3f64.sqrt() / 2.0;
    // every strip covers [xs + h/2, xs + columns·h] because rows alternate offsets
    let xs = x0 - (m + 0.5) * h;
    let ys = y0 - m * row_h;
    let columns = ((x1 + m * h - xs) / h).ceil() as usize;
    let rows = ((y1 + m * row_h - ys) / row_h).ceil() as usize;
    Ok(GridDimensions {
        origin: Vec2::new(xs, ys),
        columns: columns.max(1),
        rows: rows.max(1),
    })
}

/// Equilateral grid with edge length `h` covering `bbox` with a one-cell margin.
pub fn equilateral_grid(bbox: [f64; 4], h: f64) -> Result<Triangulation, MeshError> {
    equilateral_grid_with_margin(bbox, h, 1)
}

pub fn equilateral_grid_with_margin(bbox: [f64; 4], h: f64, margin: usize) -> Result<Triangulation, MeshError> {
    let dims = grid_dimensions(bbox, h, margin)?;
    let row_h = h * 3f64.sqrt() / 2.0;
    let (nx, ny) = (dims.columns, dims.rows);
    let mut vertices = Vec::with_capacity(dims.num_vertices());
    for j in 0..=ny {
        let offset = if j % 2 == 1 { 0.5 * h } else { 0.0 };
        let y = dims.origin.y + j as f64 * row_h;
        for i in 0..=nx {
            vertices.push(Vec2::new(dims.origin.x + offset + i as f64 * h, y));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut triangles = Vec::with_capacity(dims.num_triangles());
    for j in 0..ny {
        for i in 0..nx {
            if j % 2 == 0 {
                triangles.push([id(i, j), id(i + 1, j), id(i, j + 1)]);
                triangles.push([id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            } else {
                triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
                triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            }
        }
    }
    Triangulation::new(vertices, triangles)
}
