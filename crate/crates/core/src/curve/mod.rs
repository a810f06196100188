//! Closed C²-regular planar curves: signed distance, closest point
//! projection, the tangent/normal frame, signed curvature and reach.
//!
//! Orientation convention: the unit normal `N̂` points toward increasing
//! signed distance (out of `Ω`) and `T̂` is chosen so that `{T̂, N̂}` is
//! right-handed, i.e. `N̂ = T̂` rotated by +90°. With this convention a
//! circle bounding a disk has `κ_s = -1/R`.

pub mod arclength;
pub mod config;
pub mod implicit;
pub mod spline;

use std::f64::consts::TAU;
use std::sync::Arc;

use serde::Serialize;

use crate::error::CurveError;
use crate::geom::{segment_projection, Mat2, Vec2};
use crate::tol;

use arclength::ArcTable;
pub use implicit::{DefiningFunction, Polynomial};
use spline::ClosedSpline;

/// Default number of samples per component used by the reach estimate at construction.
pub const DEFAULT_REACH_SAMPLES: usize = 512;

/// A point on the curve together with its local frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub position: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub signed_curvature: f64,
    pub component_id: usize,
    /// Native parameter of the owning component, in `[0, 1)`.
    pub param: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReachMethod {
    Analytic,
    Sampled,
}

/// Radius of the tube around the curve on which `φ` and `π` are well defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReachEstimate {
    pub r_n: f64,
    pub method: ReachMethod,
    pub sample_count: usize,
}

/// Result of a global closest-point solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub point: CurvePoint,
    pub phi: f64,
}

/// One input shape. A shape contributes one or more curve components.
#[derive(Debug, Clone)]
pub enum Shape {
    Circle { center: Vec2, radius: f64 },
    /// Axis-aligned ellipse with semi-axis `a` along x and `b` along y.
    Ellipse { center: Vec2, a: f64, b: f64 },
    /// Closed interpolating cubic spline through the control points.
    Spline { points: Vec<Vec2> },
    /// Zero set of `func`, extracted from `bbox = [x0, y0, x1, y1]` on a
    /// `resolution × resolution` grid.
    Implicit {
        func: Arc<dyn DefiningFunction>,
        bbox: [f64; 4],
        resolution: usize,
    },
}

#[derive(Debug, Clone)]
enum Geometry {
    Circle { center: Vec2, radius: f64 },
    Ellipse { center: Vec2, a: f64, b: f64, table: ArcTable },
    Spline { spline: ClosedSpline, table: ArcTable },
    Implicit {
        func: Arc<dyn DefiningFunction>,
        poly: Vec<Vec2>,
        /// cumulative polyline length, `cum.len() == poly.len() + 1`
        cum: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
struct Component {
    geom: Geometry,
    /// `T̂ = orient · (direction of increasing native parameter)`.
    orient: f64,
    /// Coarse samples `(t, γ(t))` for the multistart sweep.
    sweep: Vec<(f64, Vec2)>,
}

/// Membership data for the even-odd definition of `Ω`.
#[derive(Debug, Clone)]
enum Region {
    Disk { center: Vec2, radius: f64 },
    Ellipse { center: Vec2, a: f64, b: f64 },
    Polygon(Vec<Vec2>),
    Implicit(Arc<dyn DefiningFunction>),
}

impl Region {
    fn contains(&self, p: Vec2) -> bool {
        match self {
            Region::Disk { center, radius } => (p - *center).norm() < *radius,
            Region::Ellipse { center, a, b } => {
                let d = p - *center;
                (d.x / a).powi(2) + (d.y / b).powi(2) < 1.0
            }
            Region::Polygon(poly) => polygon_contains(poly, p),
            Region::Implicit(f) => f.value(p) < 0.0,
        }
    }
}

/// Even-odd ray crossing test.
pub(crate) fn polygon_contains(poly: &[Vec2], p: Vec2) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn curvature_of(d1: Vec2, d2: Vec2) -> f64 {
    d1.cross(d2) / d1.norm().powi(3)
}

impl Component {
    fn is_parametric(&self) -> bool {
        !matches!(self.geom, Geometry::Implicit { .. })
    }

    /// Position, first and second derivative for the parametric kinds.
    fn derivs(&self, t: f64) -> (Vec2, Vec2, Vec2) {
        match &self.geom {
            Geometry::Circle { center, radius } => {
                let (s, c) = (TAU * t).sin_cos();
                let r = *radius;
                (
                    *center + Vec2::new(c, s) * r,
                    Vec2::new(-s, c) * (r * TAU),
                    Vec2::new(c, s) * (-r * TAU * TAU),
                )
            }
            Geometry::Ellipse { center, a, b, .. } => {
                let (s, c) = (TAU * t).sin_cos();
                (
                    *center + Vec2::new(a * c, b * s),
                    Vec2::new(-a * s, b * c) * TAU,
                    Vec2::new(a * c, b * s) * (-TAU * TAU),
                )
            }
            Geometry::Spline { spline, .. } => spline.eval(t),
            Geometry::Implicit { .. } => unreachable!("implicit components have no parametric form"),
        }
    }

    fn speed(&self, t: f64) -> f64 {
        self.derivs(t).1.norm()
    }

    fn length(&self) -> f64 {
        match &self.geom {
            Geometry::Circle { radius, .. } => TAU * radius,
            Geometry::Ellipse { table, .. } | Geometry::Spline { table, .. } => table.total(),
            Geometry::Implicit { cum, .. } => *cum.last().unwrap(),
        }
    }

    /// Arclength fraction in `[0, 1)` of the native parameter `t`.
    fn arclength_fraction(&self, t: f64) -> f64 {
        match &self.geom {
            Geometry::Circle { .. } | Geometry::Implicit { .. } => t.rem_euclid(1.0),
            Geometry::Ellipse { table, .. } | Geometry::Spline { table, .. } => {
                (table.length_at(|s| self.speed(s), t) / table.total()).rem_euclid(1.0)
            }
        }
    }

    fn param_at_fraction(&self, f: f64) -> f64 {
        match &self.geom {
            Geometry::Circle { .. } | Geometry::Implicit { .. } => f.rem_euclid(1.0),
            Geometry::Ellipse { table, .. } | Geometry::Spline { table, .. } => {
                table.param_at(|s| self.speed(s), f * table.total())
            }
        }
    }

    fn polyline_point(poly: &[Vec2], cum: &[f64], u: f64) -> Vec2 {
        let s = u.rem_euclid(1.0) * cum.last().unwrap();
        let i = match cum.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => i.min(poly.len() - 1),
            Err(i) => i.saturating_sub(1).min(poly.len() - 1),
        };
        let seg = cum[i + 1] - cum[i];
        let w = if seg > 0.0 { (s - cum[i]) / seg } else { 0.0 };
        poly[i].lerp(poly[(i + 1) % poly.len()], w)
    }

    /// Closest point on the polyline, returned as an arclength fraction.
    fn polyline_fraction(poly: &[Vec2], cum: &[f64], p: Vec2) -> f64 {
        let n = poly.len();
        let (mut best, mut best_d) = (0.0, f64::INFINITY);
        for i in 0..n {
            let (t, d) = segment_projection(p, poly[i], poly[(i + 1) % n]);
            if d < best_d {
                best_d = d;
                best = cum[i] + t * (cum[i + 1] - cum[i]);
            }
        }
        (best / cum[n]).rem_euclid(1.0)
    }

    fn frame(&self, id: usize, t: f64, tol: f64) -> CurvePoint {
        let t = t.rem_euclid(1.0);
        match &self.geom {
            Geometry::Implicit { func, poly, cum } => {
                let guess = Self::polyline_point(poly, cum, t);
                let pos = implicit::project_to_zero_set(func.as_ref(), guess, tol).unwrap_or(guess);
                self.implicit_frame(id, t, pos)
            }
            _ => {
                let (pos, d1, d2) = self.derivs(t);
                let tangent = d1.normalized() * self.orient;
                CurvePoint {
                    position: pos,
                    tangent,
                    normal: tangent.perp(),
                    signed_curvature: self.orient * curvature_of(d1, d2),
                    component_id: id,
                    param: t,
                }
            }
        }
    }

    fn implicit_frame(&self, id: usize, u: f64, pos: Vec2) -> CurvePoint {
        let Geometry::Implicit { func, .. } = &self.geom else {
            unreachable!()
        };
        let g = func.gradient(pos);
        let gn = g.norm();
        let normal = g * (self.orient / gn);
        let tangent = normal.perp_cw();
        let h = func.hessian(pos);
        CurvePoint {
            position: pos,
            tangent,
            normal,
            signed_curvature: -self.orient * h.bilinear(tangent, tangent) / gn,
            component_id: id,
            param: u,
        }
    }

    fn build_sweep(&mut self, m: usize) {
        self.sweep = match &self.geom {
            Geometry::Implicit { .. } => Vec::new(),
            _ => (0..m)
                .map(|i| {
                    let t = i as f64 / m as f64;
                    (t, self.derivs(t).0)
                })
                .collect(),
        };
    }

    /// Local closest point: `(param, foot, distance)`.
    fn closest(&self, p: Vec2, tol: f64) -> Result<(f64, Vec2, f64), CurveError> {
        match &self.geom {
            Geometry::Circle { center, radius } => {
                let d = p - *center;
                let r = d.norm();
                let t = if r == 0.0 {
                    0.0
                } else {
                    (d.y.atan2(d.x) / TAU).rem_euclid(1.0)
                };
                let dir = if r == 0.0 { Vec2::new(1.0, 0.0) } else { d * (1.0 / r) };
                Ok((t, *center + dir * *radius, (r - radius).abs()))
            }
            Geometry::Implicit { func, poly, cum } => closest_implicit(func.as_ref(), poly, cum, p, tol),
            _ => self.closest_parametric(p, tol),
        }
    }

    fn closest_parametric(&self, p: Vec2, tol: f64) -> Result<(f64, Vec2, f64), CurveError> {
        let m = self.sweep.len();
        let d2: Vec<f64> = self.sweep.iter().map(|(_, q)| (*q - p).norm_sq()).collect();
        let chord = (0..m)
            .map(|i| self.sweep[i].1.dist(self.sweep[(i + 1) % m].1))
            .fold(0.0, f64::max);
        let best = d2.iter().copied().fold(f64::INFINITY, f64::min).sqrt();
        let mut cands: Vec<usize> = (0..m)
            .filter(|&i| {
                let (a, b) = (d2[(i + m - 1) % m], d2[(i + 1) % m]);
                d2[i] <= a && d2[i] <= b && d2[i].sqrt() <= best + 2.0 * chord
            })
            .collect();
        cands.sort_by(|&a, &b| d2[a].total_cmp(&d2[b]));
        let dt = 1.0 / m as f64;
        let mut found: Option<(f64, Vec2, f64)> = None;
        for i in cands {
            let t0 = self.sweep[i].0;
            if let Some(t) = self.refine(p, t0 - dt, t0 + dt, tol) {
                let q = self.derivs(t).0;
                let d = q.dist(p);
                if found.is_none_or(|f| d < f.2) {
                    found = Some((t.rem_euclid(1.0), q, d));
                }
            }
        }
        found.ok_or(CurveError::ProjectionDidNotConverge(p))
    }

    /// Safeguarded Newton on `f(t) = (γ(t) - p)·γ'(t)` inside `[lo, hi]`.
    fn refine(&self, p: Vec2, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
        let f = |t: f64| {
            let (q, d1, d2) = self.derivs(t);
            let r = q - p;
            (r.dot(d1), d1.norm_sq() + r.dot(d2), d1.norm())
        };
        let (flo, _, _) = f(lo);
        let (fhi, _, _) = f(hi);
        if flo > 0.0 || fhi < 0.0 {
            // no bracketed stationary point; fall back to golden section on the distance
            let g = |t: f64| (self.derivs(t).0 - p).norm_sq();
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            let (mut a, mut b) = (lo, hi);
            let mut c = b - phi * (b - a);
            let mut d = a + phi * (b - a);
            for _ in 0..80 {
                if g(c) < g(d) {
                    b = d;
                } else {
                    a = c;
                }
                c = b - phi * (b - a);
                d = a + phi * (b - a);
            }
            let t = 0.5 * (a + b);
            if t - lo < 1e-9 * (hi - lo) || hi - t < 1e-9 * (hi - lo) {
                return None;
            }
            // polish
            let mut t = t;
            for _ in 0..8 {
                let (ft, dft, _) = f(t);
                if dft <= 0.0 {
                    break;
                }
                t -= ft / dft;
            }
            let (ft, _, sp) = f(t);
            return (ft.abs() / sp <= tol).then_some(t);
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..100 {
            let (ft, dft, sp) = f(t);
            if ft.abs() / sp <= 0.01 * tol {
                return Some(t);
            }
            if ft < 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let next = t - ft / dft;
            let next = if dft > 0.0 && next > lo && next < hi {
                next
            } else {
                0.5 * (lo + hi)
            };
            if (next - t).abs() * sp <= 1e-3 * tol {
                t = next;
                let (ft, _, sp) = f(t);
                return (ft.abs() / sp <= tol).then_some(t);
            }
            t = next;
        }
        let (ft, _, sp) = f(t);
        (ft.abs() / sp <= tol).then_some(t)
    }
}

fn closest_implicit(
    func: &dyn DefiningFunction,
    poly: &[Vec2],
    cum: &[f64],
    p: Vec2,
    tol: f64,
) -> Result<(f64, Vec2, f64), CurveError> {
    let n = poly.len();
    let segd: Vec<f64> = (0..n)
        .map(|i| segment_projection(p, poly[i], poly[(i + 1) % n]).1.sqrt())
        .collect();
    let seglen = (0..n).map(|i| cum[i + 1] - cum[i]).fold(0.0, f64::max);
    let best = segd.iter().copied().fold(f64::INFINITY, f64::min);
    let mut cands: Vec<usize> = (0..n)
        .filter(|&i| {
            segd[i] <= segd[(i + n - 1) % n] && segd[i] <= segd[(i + 1) % n] && segd[i] <= best + 2.0 * seglen
        })
        .collect();
    cands.sort_by(|&a, &b| segd[a].total_cmp(&segd[b]));
    cands.truncate(4);
    let mut found: Option<(Vec2, f64)> = None;
    for i in cands {
        let (t, _) = segment_projection(p, poly[i], poly[(i + 1) % n]);
        let y0 = poly[i].lerp(poly[(i + 1) % n], t);
        if let Some(y) = constrained_newton(func, p, y0, tol) {
            let d = y.dist(p);
            if found.is_none_or(|f| d < f.1) {
                found = Some((y, d));
            }
        }
    }
    let (y, d) = found.ok_or(CurveError::ProjectionDidNotConverge(p))?;
    Ok((Component::polyline_fraction(poly, cum, y), y, d))
}

/// Newton on `Ψ(y) = 0`, `(p - y) × ∇Ψ(y) = 0`.
fn constrained_newton(func: &dyn DefiningFunction, p: Vec2, mut y: Vec2, tol: f64) -> Option<Vec2> {
    let resid = |y: Vec2| {
        let g = func.gradient(y);
        let gn = g.norm();
        Vec2::new(func.value(y) / gn, (p - y).cross(g) / gn)
    };
    let mut r = resid(y);
    for _ in 0..60 {
        if r.x.abs() <= 0.01 * tol && r.y.abs() <= 0.01 * tol {
            return Some(y);
        }
        let g = func.gradient(y);
        let h = func.hessian(y);
        let u = p - y;
        let jac = Mat2::new(
            g.x,
            g.y,
            -g.y + u.x * h.m[1][0] - u.y * h.m[0][0],
            g.x + u.x * h.m[1][1] - u.y * h.m[0][1],
        );
        let rhs = Vec2::new(func.value(y), u.cross(g));
        let step = jac.solve(rhs)?;
        let mut lam = 1.0;
        let r0 = r.norm();
        loop {
            let cand = y - step * lam;
            let rc = resid(cand);
            if rc.norm() < r0 || lam < 1e-6 {
                y = cand;
                r = rc;
                break;
            }
            lam *= 0.5;
        }
    }
    (r.x.abs() <= tol && r.y.abs() <= tol).then_some(y)
}

/// A closed C²-regular boundary made of one or more Jordan components.
///
/// `Ω` is the even-odd union of the interiors of the input shapes. The
/// value is immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    regions: Vec<Region>,
    components: Vec<Component>,
    reach: ReachEstimate,
    diameter: f64,
    tol_proj: f64,
    complemented: bool,
}

impl BoundaryCurve {
    pub fn circle(center: Vec2, radius: f64) -> Result<Self, CurveError> {
        Self::new(vec![Shape::Circle { center, radius }])
    }

    pub fn ellipse(center: Vec2, a: f64, b: f64) -> Result<Self, CurveError> {
        Self::new(vec![Shape::Ellipse { center, a, b }])
    }

    pub fn spline(points: Vec<Vec2>) -> Result<Self, CurveError> {
        Self::new(vec![Shape::Spline { points }])
    }

    pub fn implicit(func: Arc<dyn DefiningFunction>, bbox: [f64; 4], resolution: usize) -> Result<Self, CurveError> {
        Self::new(vec![Shape::Implicit { func, bbox, resolution }])
    }

    pub fn new(shapes: Vec<Shape>) -> Result<Self, CurveError> {
        if shapes.is_empty() {
            return Err(CurveError::DegenerateCurve("no shapes given".into()));
        }
        let mut regions = Vec::new();
        let mut components = Vec::new();
        for shape in shapes {
            match shape {
                Shape::Circle { center, radius } => {
                    if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
                        return Err(CurveError::DegenerateCurve(format!("bad circle radius {radius}")));
                    }
                    regions.push(Region::Disk { center, radius });
                    components.push(Geometry::Circle { center, radius });
                }
                Shape::Ellipse { center, a, b } => {
                    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) || !center.is_finite() {
                        return Err(CurveError::DegenerateCurve(format!("bad ellipse semi-axes {a}, {b}")));
                    }
                    regions.push(Region::Ellipse { center, a, b });
                    let speed = |t: f64| {
                        let (s, c) = (TAU * t).sin_cos();
                        Vec2::new(-a * s, b * c).norm() * TAU
                    };
                    let table = ArcTable::build(speed, 2048);
                    components.push(Geometry::Ellipse { center, a, b, table });
                }
                Shape::Spline { points } => {
                    let spline = ClosedSpline::new(points)?;
                    let n = spline.control_points().len();
                    let intervals = (64 * n).max(2048);
                    let table = ArcTable::build(|t| spline.eval(t).1.norm(), intervals);
                    if table.total() <= 0.0 {
                        return Err(CurveError::DegenerateCurve("zero-length spline".into()));
                    }
                    let poly: Vec<Vec2> = (0..intervals)
                        .map(|i| spline.eval(i as f64 / intervals as f64).0)
                        .collect();
                    if (0..intervals).any(|i| spline.eval(i as f64 / intervals as f64).1.norm() == 0.0) {
                        return Err(CurveError::DegenerateCurve("spline has a stationary point".into()));
                    }
                    regions.push(Region::Polygon(poly));
                    components.push(Geometry::Spline { spline, table });
                }
                Shape::Implicit { func, bbox, resolution } => {
                    let scale = (bbox[2] - bbox[0]).hypot(bbox[3] - bbox[1]);
                    let loops = implicit::extract_contours(func.as_ref(), bbox, resolution, 1e-14 * scale)?;
                    if loops.is_empty() {
                        return Err(CurveError::DegenerateCurve("defining function has no zero contour".into()));
                    }
                    for poly in loops {
                        for y in &poly {
                            let g = func.gradient(*y).norm();
                            if g < 1.0 - 1e-9 {
                                return Err(CurveError::InvalidDefiningFunction(format!(
                                    "|grad Psi| = {g} < 1 at ({}, {})",
                                    y.x, y.y
                                )));
                            }
                        }
                        let mut cum = vec![0.0];
                        for i in 0..poly.len() {
                            let l = poly[i].dist(poly[(i + 1) % poly.len()]);
                            cum.push(cum[i] + l);
                        }
                        components.push(Geometry::Implicit {
                            func: Arc::clone(&func),
                            poly,
                            cum,
                        });
                    }
                    regions.push(Region::Implicit(func));
                }
            }
        }
        let mut components: Vec<Component> = components
            .into_iter()
            .map(|geom| Component {
                geom,
                orient: 1.0,
                sweep: Vec::new(),
            })
            .collect();

        // bounding box diameter of dense samples
        let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        let mut kappa_max: Vec<f64> = Vec::with_capacity(components.len());
        for c in &components {
            let mut km: f64 = 0.0;
            for i in 0..2048 {
                let u = i as f64 / 2048.0;
                let cp = c.frame(0, u, 1e-12);
                lo = Vec2::new(lo.x.min(cp.position.x), lo.y.min(cp.position.y));
                hi = Vec2::new(hi.x.max(cp.position.x), hi.y.max(cp.position.y));
                km = km.max(cp.signed_curvature.abs());
            }
            kappa_max.push(km);
        }
        let diameter = (hi - lo).norm();
        let tol_proj = tol::PROJ_REL * diameter;
        for (c, km) in components.iter_mut().zip(&kappa_max) {
            let m = ((8.0 * c.length() * km).ceil() as usize).max(256);
            c.build_sweep(m);
        }

        let mut curve = BoundaryCurve {
            regions,
            components,
            reach: ReachEstimate {
                r_n: f64::INFINITY,
                method: ReachMethod::Analytic,
                sample_count: 0,
            },
            diameter,
            tol_proj,
            complemented: false,
        };
        curve.orient_components()?;
        curve.reach = curve.estimate_reach(DEFAULT_REACH_SAMPLES)?;
        let r_n = curve.reach.r_n;
        for c in curve.components.iter_mut() {
            let m = ((4.0 * c.length() / r_n).ceil() as usize).max(64);
            if c.is_parametric() && m > c.sweep.len() {
                c.build_sweep(m);
            }
        }
        curve.check_orientation()?;
        Ok(curve)
    }

    /// Fix each component's orientation so that `N̂` points out of `Ω`.
    fn orient_components(&mut self) -> Result<(), CurveError> {
        for k in 0..self.components.len() {
            let c = &self.components[k];
            // pick the flattest sample for a robust side test
            let (u, cp) = (0..64)
                .map(|i| {
                    let u = (i as f64 + 0.5) / 64.0;
                    (u, c.frame(k, u, self.tol_proj))
                })
                .min_by(|a, b| a.1.signed_curvature.abs().total_cmp(&b.1.signed_curvature.abs()))
                .unwrap();
            let radius = if cp.signed_curvature == 0.0 {
                self.diameter
            } else {
                1.0 / cp.signed_curvature.abs()
            };
            let delta = 1e-6 * radius.min(self.diameter);
            let plus = self.contains(cp.position + cp.normal * delta);
            let minus = self.contains(cp.position - cp.normal * delta);
            if plus == minus {
                return Err(CurveError::Orientation(format!(
                    "component {k}: both sides of the curve at u={u} have the same membership"
                )));
            }
            if plus {
                self.components[k].orient = -1.0;
            }
        }
        Ok(())
    }

    /// Confirms `N̂ = ∇φ` and the sign of `κ_s` against central differences of `φ`.
    fn check_orientation(&self) -> Result<(), CurveError> {
        let r = self.reach.r_n.min(self.diameter);
        for k in 0..self.components.len() {
            let cp = (0..64)
                .map(|i| self.point_at(k, i as f64 / 64.0))
                .max_by(|a, b| a.signed_curvature.abs().total_cmp(&b.signed_curvature.abs()))
                .unwrap();
            let delta = 0.1 * r;
            let p = cp.position + cp.normal * delta;
            let h = 1e-3 * r;
            let phi = |q: Vec2| self.signed_distance(q);
            let dn = (phi(p + cp.normal * h)? - phi(p - cp.normal * h)?) / (2.0 * h);
            if (dn - 1.0).abs() > 1e-3 {
                return Err(CurveError::Orientation(format!("component {k}: d(phi)/dN = {dn}")));
            }
            let ks = cp.signed_curvature;
            if ks.abs() * r > 1e-3 {
                let fd = (phi(p + cp.tangent * h)? - 2.0 * phi(p)? + phi(p - cp.tangent * h)?) / (h * h);
                let analytic = -ks / (1.0 - delta * ks);
                if fd.signum() != analytic.signum() || (fd - analytic).abs() > 0.05 * analytic.abs() {
                    return Err(CurveError::Orientation(format!(
                        "component {k}: second derivative {fd} disagrees with {analytic}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Absolute closest-point tolerance.
    pub fn tol_proj(&self) -> f64 {
        self.tol_proj
    }

    pub fn reach(&self) -> ReachEstimate {
        self.reach
    }

    /// Whether `p ∈ Ω` (even-odd over all shapes).
    pub fn contains(&self, p: Vec2) -> bool {
        (self.regions.iter().filter(|r| r.contains(p)).count() % 2 == 1) != self.complemented
    }

    /// The same curve bounding the complement of `Ω`: `φ`, `N̂`, `T̂` and
    /// `κ_s` all change sign. Used to select negative edges.
    pub fn complement(&self) -> BoundaryCurve {
        let mut c = self.clone();
        c.complemented = !c.complemented;
        for comp in c.components.iter_mut() {
            comp.orient = -comp.orient;
        }
        c
    }

    pub fn is_complemented(&self) -> bool {
        self.complemented
    }

    pub fn component_length(&self, id: usize) -> f64 {
        self.components[id].length()
    }

    /// Whether component `id` has an analytic reach (circle or ellipse).
    fn analytic_reach(&self, id: usize) -> Option<f64> {
        match self.components[id].geom {
            Geometry::Circle { radius, .. } => Some(radius),
            Geometry::Ellipse { a, b, .. } => Some(a.min(b).powi(2) / a.max(b)),
            _ => None,
        }
    }

    /// Point and frame at native parameter `u` of component `id`.
    pub fn point_at(&self, id: usize, u: f64) -> CurvePoint {
        self.components[id].frame(id, u, self.tol_proj)
    }

    /// Arclength fraction in `[0, 1)` of a curve point, measured from the
    /// component's parameter origin in the direction of increasing native parameter.
    pub fn arclength_param(&self, xi: &CurvePoint) -> f64 {
        self.components[xi.component_id].arclength_fraction(xi.param)
    }

    /// `n` points of component `id` equally spaced in arclength.
    pub fn sample_arclength(&self, id: usize, n: usize) -> Vec<CurvePoint> {
        let c = &self.components[id];
        (0..n)
            .map(|i| {
                let t = c.param_at_fraction(i as f64 / n as f64);
                c.frame(id, t, self.tol_proj)
            })
            .collect()
    }

    /// Native parameter of component `id` at arclength fraction `f`.
    pub fn param_at_arclength(&self, id: usize, f: f64) -> f64 {
        self.components[id].param_at_fraction(f)
    }

    /// Whether the native parameter runs in the direction of `T̂`.
    pub fn tangent_follows_param(&self, id: usize) -> bool {
        self.components[id].orient > 0.0
    }

    /// Global closest point and signed distance; no tube restriction.
    pub fn project(&self, p: Vec2) -> Result<Projection, CurveError> {
        if !p.is_finite() {
            return Err(CurveError::ProjectionDidNotConverge(p));
        }
        let mut best: Option<(usize, f64, Vec2, f64)> = None;
        for (k, c) in self.components.iter().enumerate() {
            let (t, q, d) = c.closest(p, self.tol_proj)?;
            if best.is_none_or(|b| d < b.3) {
                best = Some((k, t, q, d));
            }
        }
        let (k, t, q, d) = best.unwrap();
        let c = &self.components[k];
        let mut point = match c.geom {
            Geometry::Implicit { .. } => c.implicit_frame(k, t, q),
            _ => c.frame(k, t, self.tol_proj),
        };
        point.position = q;
        let phi = match c.geom {
            Geometry::Circle { center, radius } => -c.orient * ((p - center).norm() - radius),
            _ => {
                let s = (p - q).dot(point.normal);
                if s < 0.0 {
                    -d
                } else {
                    d
                }
            }
        };
        Ok(Projection { point, phi })
    }

    /// Signed distance `φ(p)`: negative in `Ω`, positive outside.
    pub fn signed_distance(&self, p: Vec2) -> Result<f64, CurveError> {
        Ok(self.project(p)?.phi)
    }

    /// Closest point projection `π(p)`, restricted to the tube of radius `r_n`.
    pub fn closest_point(&self, p: Vec2) -> Result<CurvePoint, CurveError> {
        let pr = self.project(p)?;
        if pr.phi.abs() >= self.reach.r_n {
            return Err(CurveError::OutsideTube {
                point: p,
                dist: pr.phi.abs(),
                reach: self.reach.r_n,
            });
        }
        Ok(pr.point)
    }

    /// Signed curvature at a point on the curve.
    pub fn signed_curvature(&self, xi: &CurvePoint) -> f64 {
        let c = &self.components[xi.component_id];
        match c.geom {
            Geometry::Implicit { .. } => c.implicit_frame(xi.component_id, xi.param, xi.position).signed_curvature,
            _ => c.frame(xi.component_id, xi.param, self.tol_proj).signed_curvature,
        }
    }

    fn tube_frame(&self, p: Vec2) -> Result<(Projection, f64), CurveError> {
        let pr = self.project(p)?;
        let s = pr.phi * pr.point.signed_curvature;
        if s.abs() >= 1.0 - tol::EPS_SING {
            return Err(CurveError::CurvatureSingularity(s.abs()));
        }
        Ok((pr, 1.0 - s))
    }

    /// `∇π(p) = T̂⊗T̂ / (1 - φ κ_s)`.
    pub fn grad_pi(&self, p: Vec2) -> Result<Mat2, CurveError> {
        let (pr, denom) = self.tube_frame(p)?;
        let t = pr.point.tangent;
        Ok(t.outer(t).scale(1.0 / denom))
    }

    /// `∇∇φ(p) = -κ_s(π(p)) ∇π(p)`.
    pub fn hess_phi(&self, p: Vec2) -> Result<Mat2, CurveError> {
        let (pr, denom) = self.tube_frame(p)?;
        let t = pr.point.tangent;
        Ok(t.outer(t).scale(-pr.point.signed_curvature / denom))
    }

    /// Conservative estimate of the tube radius from `n` samples per component.
    ///
    /// Circles and ellipses use their exact reach; other kinds take the
    /// smallest radius of curvature over the samples and a medial-axis probe
    /// along the normal rays. Several components are further capped by half
    /// their mutual separation.
    pub fn estimate_reach(&self, n: usize) -> Result<ReachEstimate, CurveError> {
        if n < 256 {
            return Err(CurveError::DegenerateCurve(format!("reach estimate needs >= 256 samples, got {n}")));
        }
        let mut r: f64 = f64::INFINITY;
        let mut all_analytic = true;
        let samples: Vec<Vec<CurvePoint>> = (0..self.components.len()).map(|k| self.sample_arclength(k, n)).collect();
        for (k, pts) in samples.iter().enumerate() {
            match self.analytic_reach(k) {
                Some(a) => r = r.min(a),
                None => {
                    all_analytic = false;
                    let km = pts.iter().map(|p| p.signed_curvature.abs()).fold(0.0, f64::max);
                    if km > 1.0 / tol::EPS_SING {
                        return Err(CurveError::DegenerateCurve(format!("curvature {km} exceeds 1/eps_sing")));
                    }
                    if km > 0.0 {
                        r = r.min(1.0 / km);
                    }
                }
            }
        }
        for a in 0..samples.len() {
            for b in a + 1..samples.len() {
                r = r.min(0.5 * self.separation(a, b, &samples[a], &samples[b])?);
            }
        }
        if !all_analytic {
            let cap = r.min(self.diameter);
            let move_tol = 1e-6 * self.diameter;
            for (k, pts) in samples.iter().enumerate() {
                if self.analytic_reach(k).is_some() {
                    continue;
                }
                for xi in pts {
                    for side in [1.0, -1.0] {
                        let foot_stays = |t: f64| -> Result<bool, CurveError> {
                            let q = xi.position + xi.normal * (side * t);
                            match self.project(q) {
                                Ok(pr) => Ok(pr.point.position.dist(xi.position) <= move_tol),
                                // no unique foot: past the medial axis or a focal point
                                Err(CurveError::ProjectionDidNotConverge(_)) => Ok(false),
                                Err(e) => Err(e),
                            }
                        };
                        if foot_stays(cap)? {
                            continue;
                        }
                        let (mut lo, mut hi) = (0.0, cap);
                        while hi - lo > 1e-6 * cap {
                            let mid = 0.5 * (lo + hi);
                            if foot_stays(mid)? {
                                lo = mid;
                            } else {
                                hi = mid;
                            }
                        }
                        r = r.min(lo);
                    }
                }
            }
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(CurveError::DegenerateCurve(format!("reach estimate {r} is not positive")));
        }
        Ok(ReachEstimate {
            r_n: r,
            method: if all_analytic {
                ReachMethod::Analytic
            } else {
                ReachMethod::Sampled
            },
            sample_count: n,
        })
    }

    /// Minimum distance between two components, refined by alternating projection.
    fn separation(&self, a: usize, b: usize, pa: &[CurvePoint], pb: &[CurvePoint]) -> Result<f64, CurveError> {
        let mut best = (f64::INFINITY, Vec2::ZERO);
        for p in pa {
            for q in pb {
                let d = p.position.dist(q.position);
                if d < best.0 {
                    best = (d, p.position);
                }
            }
        }
        let mut x = best.1;
        let mut d = best.0;
        for _ in 0..50 {
            let (_, y, _) = self.components[b].closest(x, self.tol_proj)?;
            let (_, x2, d2) = self.components[a].closest(y, self.tol_proj)?;
            let done = (d - d2).abs() <= self.tol_proj;
            x = x2;
            d = d.min(d2);
            if done {
                break;
            }
        }
        Ok(d)
    }

    /// Dense polyline of component `id` for rendering.
    pub fn polyline(&self, id: usize, n: usize) -> Vec<Vec2> {
        (0..n).map(|i| self.point_at(id, i as f64 / n as f64).position).collect()
    }
}
