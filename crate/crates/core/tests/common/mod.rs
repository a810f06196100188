//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use cutparam::classify::{check_conditions, classify, ConditionReport, CutClassification, EdgeMode};
use cutparam::curve::Polynomial;
use cutparam::mesh::{edge_key, equilateral_grid};
use cutparam::param::{sample_loop, verify_homeomorphism, ParamSample, VerificationReport};
use cutparam::topology::{build_loops, orient_loops, PositiveLoop};
use cutparam::{BoundaryCurve, Shape, Triangulation, Vec2};

/// Centre offset that keeps grid vertices off the curve.
pub const OFFSET: Vec2 = Vec2::new(0.013, -0.021);

pub fn unit_circle() -> BoundaryCurve {
    BoundaryCurve::circle(OFFSET, 1.0).unwrap()
}

pub fn ellipse() -> BoundaryCurve {
    BoundaryCurve::ellipse(OFFSET, 2.0, 1.0).unwrap()
}

pub fn two_circles() -> BoundaryCurve {
    BoundaryCurve::new(vec![
        Shape::Circle { center: Vec2::new(-3.0, 0.017), radius: 1.0 },
        Shape::Circle { center: Vec2::new(3.0, -0.011), radius: 1.0 },
    ])
    .unwrap()
}

/// Control points of a smooth non-convex blob.
pub fn blob_points() -> Vec<Vec2> {
    (0..24)
        .map(|i| {
            let t = TAU * i as f64 / 24.0;
            let r = 1.0 + 0.2 * (3.0 * t).cos() + 0.08 * (2.0 * t).sin();
            OFFSET + Vec2::new(r * t.cos(), r * t.sin())
        })
        .collect()
}

pub fn blob() -> BoundaryCurve {
    BoundaryCurve::spline(blob_points()).unwrap()
}

/// The ellipse `x²/4 + y² = 1` as a zero set.
pub fn implicit_ellipse() -> BoundaryCurve {
    let psi = Polynomial::new(vec![(2, 0, 0.25), (0, 2, 1.0), (0, 0, -1.0)]);
    BoundaryCurve::implicit(Arc::new(psi), [-2.6, -1.6, 2.6, 1.6], 96).unwrap()
}

/// Bounding box of the curve padded by `pad`.
pub fn bbox_of(curve: &BoundaryCurve, pad: f64) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for id in 0..curve.num_components() {
        for p in curve.polyline(id, 2048) {
            b = [b[0].min(p.x), b[1].min(p.y), b[2].max(p.x), b[3].max(p.y)];
        }
    }
    [b[0] - pad, b[1] - pad, b[2] + pad, b[3] + pad]
}

pub fn grid_for(curve: &BoundaryCurve, h: f64) -> Triangulation {
    equilateral_grid(bbox_of(curve, 0.1), h).unwrap()
}

/// Every stage of an analysis, unwrapped.
pub struct Run {
    pub curve: BoundaryCurve,
    pub tri: Triangulation,
    pub cls: CutClassification,
    pub rep: ConditionReport,
    pub loops: Vec<PositiveLoop>,
    pub samples: Vec<Vec<ParamSample>>,
    pub ver: VerificationReport,
}

pub fn run(curve: &BoundaryCurve, tri: Triangulation, mode: EdgeMode, n: usize) -> Run {
    let curve = mode.apply(curve);
    let cls = classify(&curve, &tri).unwrap();
    let rep = check_conditions(&curve, &tri, &cls).unwrap();
    let loops = orient_loops(&tri, build_loops(&tri, &cls).unwrap(), &curve).unwrap();
    let samples: Vec<_> = loops.iter().map(|lp| sample_loop(&curve, &tri, &rep, lp, n).unwrap()).collect();
    let ver = verify_homeomorphism(&curve, &tri, &cls, &rep, &loops, &samples, n).unwrap();
    Run { curve, tri, cls, rep, loops, samples, ver }
}

/// Largest `h = 0.2 / 2^k` at which every condition holds.
pub fn passing_h(curve: &BoundaryCurve) -> f64 {
    let mut h = 0.2;
    for _ in 0..5 {
        let tri = grid_for(curve, h);
        let cls = classify(curve, &tri).unwrap();
        if check_conditions(curve, &tri, &cls).unwrap().all_pass {
            return h;
        }
        h *= 0.5;
    }
    panic!("no passing h down to {h}");
}

/// Signed distance to the ellipse `x²/a² + y²/b² = 1` about `c` by a dense
/// parameter sweep, with the foot point.
pub fn brute_ellipse(p: Vec2, c: Vec2, a: f64, b: f64, n: usize) -> (f64, Vec2) {
    let mut best = (f64::INFINITY, Vec2::ZERO);
    for i in 0..n {
        let t = TAU * i as f64 / n as f64;
        let q = c + Vec2::new(a * t.cos(), b * t.sin());
        let d = p.dist(q);
        if d < best.0 {
            best = (d, q);
        }
    }
    let d = p - c;
    let inside = (d.x / a).powi(2) + (d.y / b).powi(2) < 1.0;
    (if inside { -best.0 } else { best.0 }, best.1)
}

/// Even-odd membership in a closed polygon.
pub fn in_polygon(poly: &[Vec2], p: Vec2) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y) {
            inside = !inside;
        }
    }
    inside
}

/// Signed distance to a closed polygon: negative inside.
pub fn polygon_signed_distance(poly: &[Vec2], p: Vec2) -> f64 {
    let n = poly.len();
    let mut d2 = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let ab = b - a;
        let t = ((p - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
        d2 = d2.min((a + ab * t - p).norm_sq());
    }
    if in_polygon(poly, p) {
        -d2.sqrt()
    } else {
        d2.sqrt()
    }
}

/// Union-find over vertex ids.
pub struct UnionFind {
    parent: BTreeMap<usize, usize>,
}

impl UnionFind {
    pub fn new() -> Self {
        UnionFind { parent: BTreeMap::new() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let p = *self.parent.entry(x).or_insert(x);
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.parent.insert(x, r);
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent.insert(ra.max(rb), ra.min(rb));
        }
    }
}

/// Positive-edge components by union-find, as sorted edge sets.
pub fn components_by_union_find(cls: &CutClassification) -> Vec<Vec<(usize, usize)>> {
    let mut uf = UnionFind::new();
    for e in &cls.positive_edges {
        uf.union(e.edge.0, e.edge.1);
    }
    let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for e in &cls.positive_edges {
        let r = uf.find(e.edge.0);
        groups.entry(r).or_default().push(e.edge);
    }
    let mut out: Vec<_> = groups.into_values().map(|mut v| {
        v.sort();
        v
    }).collect();
    out.sort();
    out
}

/// Loops as sorted edge sets, for comparison with the union-find oracle.
pub fn loop_edge_sets(loops: &[PositiveLoop]) -> Vec<Vec<(usize, usize)>> {
    let mut out: Vec<_> = loops
        .iter()
        .map(|lp| {
            let mut v: Vec<_> = lp.edges().map(|(a, b)| edge_key(a, b)).collect();
            v.sort();
            v
        })
        .collect();
    out.sort();
    out
}

/// Cut-triangle ids from vertex signs alone.
pub fn census(tri: &Triangulation, phi: impl Fn(Vec2) -> f64) -> Vec<usize> {
    let signs: Vec<bool> = tri.vertices().iter().map(|&v| phi(v) >= 0.0).collect();
    (0..tri.num_triangles())
        .filter(|&k| tri.triangle(k).iter().filter(|&&v| signs[v]).count() == 2)
        .collect()
}

/// Central-difference Jacobian of `π` along `u` at `x`.
pub fn fd_jacobian(curve: &BoundaryCurve, x: Vec2, u: Vec2, step: f64) -> f64 {
    let p = curve.project(x + u * step).unwrap().point.position;
    let m = curve.project(x - u * step).unwrap().point.position;
    ((p - m) * (0.5 / step)).norm()
}
