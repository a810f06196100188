//! Positively cut triangles, positive edges, proximal vertices and the
//! conditioning and adjacent angles.
//!
//! Classification only looks at the sign of `φ` at mesh vertices; no
//! curve-mesh intersection is computed.

mod conditions;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::BoundaryCurve;
use crate::error::{ClassifyError, CurveError};
use crate::mesh::{edge_key, EdgeKey, Triangulation};
use crate::tol;

pub use conditions::{check_conditions, curvature_bound, ConditionReport, ConditionRow, CurvatureBound, CurvatureSampler};

/// Which side of the curve selects the edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EdgeMode {
    /// Edges with `φ ≥ 0` at both vertices.
    #[default]
    Positive,
    /// Edges selected with `-φ`.
    Negative,
}

impl EdgeMode {
    /// The curve whose signed distance drives the classification.
    pub fn apply(self, curve: &BoundaryCurve) -> BoundaryCurve {
        match self {
            EdgeMode::Positive => curve.clone(),
            EdgeMode::Negative => curve.complement(),
        }
    }
}

/// A triangle with `φ ≥ 0` at precisely two of its vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutTriangle {
    pub triangle: usize,
    /// Positive edge as `(proximal, other)`.
    pub positive_edge: (usize, usize),
    pub opposite_vertex: usize,
    pub proximal_vertex: usize,
    /// Interior angle at the proximal vertex, degrees.
    pub conditioning_angle: f64,
    /// Minimum angle of the neighbour across the positive edge at its
    /// endpoints, when the edge meets the curve and the neighbour exists.
    pub adjacent_angle: Option<f64>,
    /// `φ` at the triangle's vertices, in connectivity order.
    pub vertex_phis: [f64; 3],
}

impl CutTriangle {
    /// The non-proximal vertex of the positive edge.
    pub fn other_vertex(&self) -> usize {
        self.positive_edge.1
    }

    pub fn edge_key(&self) -> EdgeKey {
        edge_key(self.positive_edge.0, self.positive_edge.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PositiveEdge {
    pub edge: EdgeKey,
    pub owner: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CutClassification {
    /// `φ` at every mesh vertex.
    pub vertex_phi: Vec<f64>,
    /// Ordered by triangle id.
    pub cut_triangles: Vec<CutTriangle>,
    /// Ordered by edge key.
    pub positive_edges: Vec<PositiveEdge>,
    pub warnings: Vec<String>,
}

impl CutClassification {
    /// Position of triangle `k` in `cut_triangles`.
    pub fn find(&self, k: usize) -> Option<&CutTriangle> {
        self.cut_triangles
            .binary_search_by_key(&k, |c| c.triangle)
            .ok()
            .map(|i| &self.cut_triangles[i])
    }

    pub fn owner_of(&self, e: EdgeKey) -> Option<usize> {
        self.positive_edges
            .binary_search_by_key(&e, |p| p.edge)
            .ok()
            .map(|i| self.positive_edges[i].owner)
    }
}

/// Checks `Γ ⊂ int(∪K̄)` on arclength samples spaced at most `h_min / 4`.
pub fn check_immersed(curve: &BoundaryCurve, tri: &Triangulation) -> Result<(), ClassifyError> {
    if tri.num_triangles() == 0 {
        return Err(ClassifyError::NotImmersed("mesh has no triangles".into()));
    }
    let step = 0.25 * tri.min_h();
    let boundary = tri.boundary_edges();
    for id in 0..curve.num_components() {
        let n = ((curve.component_length(id) / step).ceil() as usize).max(64);
        for cp in curve.sample_arclength(id, n) {
            let p = cp.position;
            if tri.locate(p).is_none() || tri.distance_to_boundary(p, &boundary) <= 0.0 {
                return Err(ClassifyError::NotImmersed(format!(
                    "curve point ({}, {}) of component {id} is not interior to the mesh",
                    p.x, p.y
                )));
            }
        }
    }
    Ok(())
}

/// `φ` at every mesh vertex.
pub fn vertex_signed_distances(curve: &BoundaryCurve, tri: &Triangulation) -> Result<Vec<f64>, CurveError> {
    tri.vertices()
        .par_iter()
        .map(|&v| curve.signed_distance(v))
        .collect()
}

/// Census of triangles with `φ ≥ 0` at precisely two vertices.
pub fn classify(curve: &BoundaryCurve, tri: &Triangulation) -> Result<CutClassification, ClassifyError> {
    check_immersed(curve, tri)?;
    let phi = vertex_signed_distances(curve, tri)?;
    classify_with_phi(curve, tri, phi)
}

/// Classification from precomputed vertex values of `φ`.
pub fn classify_with_phi(
    curve: &BoundaryCurve,
    tri: &Triangulation,
    phi: Vec<f64>,
) -> Result<CutClassification, ClassifyError> {
    let mut cut: Vec<CutTriangle> = tri
        .triangles()
        .iter()
        .enumerate()
        .filter_map(|(k, t)| cut_triangle(tri, &phi, k, *t))
        .collect();

    let mut owners: BTreeMap<EdgeKey, usize> = BTreeMap::new();
    for c in &cut {
        if let Some(&first) = owners.get(&c.edge_key()) {
            return Err(ClassifyError::SharedPositiveEdgeConflict {
                edge: c.edge_key(),
                first,
                second: c.triangle,
            });
        }
        owners.insert(c.edge_key(), c.triangle);
    }

    let adjacent: Vec<(Option<f64>, Option<String>)> = cut
        .par_iter()
        .map(|c| adjacent_angle(curve, tri, c))
        .collect::<Result<_, _>>()?;
    let mut warnings = Vec::new();
    for (c, (angle, warn)) in cut.iter_mut().zip(adjacent) {
        c.adjacent_angle = angle;
        warnings.extend(warn);
    }
    Ok(CutClassification {
        vertex_phi: phi,
        cut_triangles: cut,
        positive_edges: owners
            .into_iter()
            .map(|(edge, owner)| PositiveEdge { edge, owner })
            .collect(),
        warnings,
    })
}

fn cut_triangle(tri: &Triangulation, phi: &[f64], k: usize, t: [usize; 3]) -> Option<CutTriangle> {
    let nonneg: Vec<usize> = (0..3).filter(|&j| phi[t[j]] >= 0.0).collect();
    if nonneg.len() != 2 {
        return None;
    }
    let opp = (0..3).find(|j| !nonneg.contains(j)).unwrap();
    let (i, j) = (nonneg[0], nonneg[1]);
    let (p, q) = (t[i], t[j]);
    let m = tri.metrics(k);
    let proximal_is_p = if phi[p] != phi[q] {
        phi[p] < phi[q]
    } else if (m.angles[i] - m.angles[j]).abs() > tol::ANGLE_TIE_DEG {
        m.angles[i] < m.angles[j]
    } else {
        p < q
    };
    let (a, ai, b) = if proximal_is_p { (p, i, q) } else { (q, j, p) };
    Some(CutTriangle {
        triangle: k,
        positive_edge: (a, b),
        opposite_vertex: t[opp],
        proximal_vertex: a,
        conditioning_angle: m.angles[ai],
        adjacent_angle: None,
        vertex_phis: t.map(|v| phi[v]),
    })
}

/// Whether the closed edge `ab` meets the curve, judged from the endpoint
/// signs and `φ` at interior samples.
pub fn edge_meets_curve(curve: &BoundaryCurve, tri: &Triangulation, a: usize, b: usize, phi_a: f64, phi_b: f64) -> Result<bool, CurveError> {
    if phi_a <= 0.0 || phi_b <= 0.0 {
        return Ok(true);
    }
    let (pa, pb) = (tri.vertex(a), tri.vertex(b));
    let n = tol::EDGE_TOUCH_SAMPLES;
    for s in 1..=n {
        let x = pa.lerp(pb, s as f64 / (n + 1) as f64);
        if curve.signed_distance(x)? <= curve.tol_proj() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Angle adjacent to the positive edge of `cut`, plus an optional warning
/// when the edge lies on the mesh boundary.
pub fn adjacent_angle(
    curve: &BoundaryCurve,
    tri: &Triangulation,
    cut: &CutTriangle,
) -> Result<(Option<f64>, Option<String>), CurveError> {
    let (a, b) = cut.positive_edge;
    let t = tri.triangle(cut.triangle);
    let phi_of = |v: usize| cut.vertex_phis[t.iter().position(|&i| i == v).unwrap()];
    if !edge_meets_curve(curve, tri, a, b, phi_of(a), phi_of(b))? {
        return Ok((None, None));
    }
    let incident = tri.edge_incident_triangles(a, b).expect("positive edge is a mesh edge");
    match incident.iter().find(|&&k| k != cut.triangle) {
        Some(&adj) => {
            let ta = tri.angle_at_vertex(adj, a).unwrap();
            let tb = tri.angle_at_vertex(adj, b).unwrap();
            Ok((Some(ta.min(tb)), None))
        }
        None => Ok((
            None,
            Some(format!(
                "positive edge ({a}, {b}) of triangle {} meets the curve on the mesh boundary; adjacent angle undefined",
                cut.triangle
            )),
        )),
    }
}
