//! Per-triangle hypothesis report.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{CutClassification, CutTriangle};
use crate::curve::BoundaryCurve;
use crate::error::CurveError;
use crate::geom::Vec2;
use crate::mesh::Triangulation;

/// Local curvature maximum and its tube-corrected amplification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureBound {
    pub m_k: f64,
    /// `M_K / (1 - M_K h_K)`, infinite when `M_K h_K ≥ 1`.
    pub c_kh: f64,
}

impl CurvatureBound {
    pub fn new(m_k: f64, h: f64) -> Self {
        let c_kh = if m_k * h < 1.0 { m_k / (1.0 - m_k * h) } else { f64::INFINITY };
        CurvatureBound { m_k, c_kh }
    }
}

#[derive(Debug, Clone, Copy)]
struct KappaSample {
    component: usize,
    index: usize,
    position: Vec2,
    kappa: f64,
}

/// Arclength samples of `|κ_s|` with a bucket index for window queries.
#[derive(Debug, Clone)]
pub struct CurvatureSampler {
    samples: Vec<KappaSample>,
    /// per component: native parameters of its samples, in order
    params: Vec<Vec<f64>>,
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl CurvatureSampler {
    /// Samples every component at arclength step at most `step`.
    /// `cell` sets the bucket size and should be near the query radius.
    pub fn new(curve: &BoundaryCurve, step: f64, cell: f64) -> Self {
        let mut samples = Vec::new();
        let mut params = Vec::new();
        for id in 0..curve.num_components() {
            let n = ((curve.component_length(id) / step).ceil() as usize).max(256);
            let pts = curve.sample_arclength(id, n);
            params.push(pts.iter().map(|p| p.param).collect());
            for (index, p) in pts.into_iter().enumerate() {
                samples.push(KappaSample {
                    component: id,
                    index,
                    position: p.position,
                    kappa: p.signed_curvature.abs(),
                });
            }
        }
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, s) in samples.iter().enumerate() {
            buckets.entry(bucket(s.position, cell)).or_default().push(i);
        }
        CurvatureSampler { samples, params, cell, buckets }
    }

    /// Sampler with the default step `min(h_min / 16, r_n / 64)`.
    pub fn for_mesh(curve: &BoundaryCurve, tri: &Triangulation) -> Self {
        let step = (tri.min_h() / 16.0).min(curve.reach().r_n / 64.0);
        Self::new(curve, step, 2.0 * tri.max_h())
    }

    /// `max κ` over curve points within `radius` of some point of `centers`,
    /// refined around the sampled maximum. Zero when the window is empty.
    pub fn max_within(&self, curve: &BoundaryCurve, centers: &[Vec2], radius: f64) -> f64 {
        let inside = |p: Vec2| centers.iter().any(|c| c.dist(p) <= radius);
        let reach = (radius / self.cell).ceil() as i64;
        let mut best: Option<&KappaSample> = None;
        let mut seen = std::collections::HashSet::new();
        for c in centers {
            let (bx, by) = bucket(*c, self.cell);
            for dx in -reach..=reach {
                for dy in -reach..=reach {
                    let Some(ids) = self.buckets.get(&(bx + dx, by + dy)) else { continue };
                    for &i in ids {
                        if !seen.insert(i) {
                            continue;
                        }
                        let s = &self.samples[i];
                        if inside(s.position) && best.is_none_or(|b| s.kappa > b.kappa) {
                            best = Some(s);
                        }
                    }
                }
            }
        }
        let Some(b) = best else { return 0.0 };
        let params = &self.params[b.component];
        let n = params.len();
        let lo = params[(b.index + n - 1) % n];
        let hi = params[(b.index + 1) % n];
        let span = if hi > lo { hi - lo } else { hi + 1.0 - lo };
        let mut m = b.kappa;
        const REFINE: usize = 32;
        for j in 1..REFINE {
            let u = (lo + span * j as f64 / REFINE as f64).rem_euclid(1.0);
            let p = curve.point_at(b.component, u);
            if inside(p.position) {
                m = m.max(p.signed_curvature.abs());
            }
        }
        m
    }
}

fn bucket(p: Vec2, cell: f64) -> (i64, i64) {
    ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
}

/// `M_K` over curve points within `2 h_K` of the vertices of triangle `k`,
/// a superset of the `h_K`-neighbourhood of `K`.
pub fn curvature_bound(curve: &BoundaryCurve, tri: &Triangulation, sampler: &CurvatureSampler, k: usize) -> CurvatureBound {
    let h = tri.metrics(k).h;
    let centers = tri.triangle(k).map(|v| tri.vertex(v));
    CurvatureBound::new(sampler.max_within(curve, &centers, 2.0 * h), h)
}

/// One row of the report, for one positively cut triangle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionRow {
    pub triangle: usize,
    pub h: f64,
    pub sigma: f64,
    /// Conditioning angle, degrees.
    pub theta: f64,
    /// Adjacent angle, degrees.
    pub theta_adj: Option<f64>,
    pub m_k: f64,
    pub c_kh: f64,
    pub eta: f64,
    pub cos_beta: f64,
    /// Degrees; `None` when `cos β` lies outside `[-1, 1]`.
    pub beta: Option<f64>,
    /// `σ_K C_K^h h_K`.
    pub sigma_ch: f64,
    pub cond_a: bool,
    pub cond_b: bool,
    pub cond_c: bool,
    pub cond_d: bool,
    /// `r_n - h_K`.
    pub slack_a: f64,
    /// `90 - ϑ_K`.
    pub slack_b: f64,
    /// `min{cos ϑ_K, sin(ϑ_K/2)} - σ_K C_K^h h_K`.
    pub slack_c: f64,
    /// `½ sin ϑ_K^adj - C_K^h h_K`, infinite when the adjacent angle is undefined.
    pub slack_d: f64,
    /// `0 < η_K ≤ 1`.
    pub eta_ok: bool,
    /// `β_K` defined and `β_K > ϑ_K`.
    pub beta_ok: bool,
}

impl ConditionRow {
    pub fn passes(&self) -> bool {
        self.cond_a && self.cond_b && self.cond_c && self.cond_d
    }

    /// Compact flag string with failed conditions replaced by `-`, e.g. `ab-d`.
    pub fn flags(&self) -> String {
        [(self.cond_a, 'a'), (self.cond_b, 'b'), (self.cond_c, 'c'), (self.cond_d, 'd')]
            .iter()
            .map(|&(ok, c)| if ok { c } else { '-' })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub r_n: f64,
    /// Ordered by triangle id.
    pub rows: Vec<ConditionRow>,
    /// Whether some positive edge projects onto each curve component.
    pub components_touched: Vec<bool>,
    pub all_pass: bool,
}

impl ConditionReport {
    pub fn failing_rows(&self) -> impl Iterator<Item = &ConditionRow> {
        self.rows.iter().filter(|r| !r.passes())
    }

    pub fn untouched_components(&self) -> Vec<usize> {
        (0..self.components_touched.len()).filter(|&i| !self.components_touched[i]).collect()
    }

    pub fn row(&self, k: usize) -> Option<&ConditionRow> {
        self.rows.binary_search_by_key(&k, |r| r.triangle).ok().map(|i| &self.rows[i])
    }
}

/// Evaluates the four conditions for every positively cut triangle.
pub fn check_conditions(curve: &BoundaryCurve, tri: &Triangulation, cls: &CutClassification) -> Result<ConditionReport, CurveError> {
    let sampler = CurvatureSampler::for_mesh(curve, tri);
    let r_n = curve.reach().r_n;
    let rows: Vec<ConditionRow> = cls
        .cut_triangles
        .par_iter()
        .map(|c| condition_row(curve, tri, &sampler, r_n, c))
        .collect();

    let mut touched = vec![false; curve.num_components()];
    for e in &cls.positive_edges {
        let mid = tri.vertex(e.edge.0).lerp(tri.vertex(e.edge.1), 0.5);
        touched[curve.project(mid)?.point.component_id] = true;
    }
    let all_pass = !rows.is_empty() && rows.iter().all(ConditionRow::passes) && touched.iter().all(|&t| t);
    Ok(ConditionReport {
        r_n,
        rows,
        components_touched: touched,
        all_pass,
    })
}

fn condition_row(curve: &BoundaryCurve, tri: &Triangulation, sampler: &CurvatureSampler, r_n: f64, c: &CutTriangle) -> ConditionRow {
    let m = tri.metrics(c.triangle);
    let bound = curvature_bound(curve, tri, sampler, c.triangle);
    let t = tri.triangle(c.triangle);
    let phi = |v: usize| c.vertex_phis[t.iter().position(|&i| i == v).unwrap()];
    let (a, b) = c.positive_edge;
    let eta = (phi(a).min(phi(b)) - phi(c.opposite_vertex)) / m.h;

    let theta = c.conditioning_angle;
    let sigma_ch = m.sigma * bound.c_kh * m.h;
    let cos_beta = sigma_ch - eta;
    let beta = (-1.0..=1.0).contains(&cos_beta).then(|| cos_beta.acos().to_degrees());
    let ch = bound.c_kh * m.h;

    let limit_c = theta.to_radians().cos().min((0.5 * theta).to_radians().sin());
    let slack_d = c.adjacent_angle.map_or(f64::INFINITY, |adj| 0.5 * adj.to_radians().sin() - ch);
    ConditionRow {
        triangle: c.triangle,
        h: m.h,
        sigma: m.sigma,
        theta,
        theta_adj: c.adjacent_angle,
        m_k: bound.m_k,
        c_kh: bound.c_kh,
        eta,
        cos_beta,
        beta,
        sigma_ch,
        cond_a: m.h < r_n,
        cond_b: theta < 90.0,
        cond_c: sigma_ch > 0.0 && sigma_ch < limit_c,
        cond_d: slack_d > 0.0,
        slack_a: r_n - m.h,
        slack_b: 90.0 - theta,
        slack_c: limit_c - sigma_ch,
        slack_d,
        eta_ok: eta > 0.0 && eta <= 1.0,
        beta_ok: beta.is_some_and(|b| b > theta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::mesh::equilateral_grid;

    #[test]
    fn circle_curvature_bound_is_one() {
        let curve = BoundaryCurve::circle(Vec2::new(0.013, -0.021), 1.0).unwrap();
        let tri = equilateral_grid([-1.3, -1.3, 1.3, 1.3], 0.2).unwrap();
        let cls = classify(&curve, &tri).unwrap();
        let sampler = CurvatureSampler::for_mesh(&curve, &tri);
        for c in &cls.cut_triangles {
            let b = curvature_bound(&curve, &tri, &sampler, c.triangle);
            assert!((b.m_k - 1.0).abs() < 1e-12);
            assert!((b.c_kh - 1.0 / 0.8).abs() < 1e-9);
        }
    }

    #[test]
    fn ellipse_curvature_near_vertex() {
        let curve = BoundaryCurve::ellipse(Vec2::ZERO, 2.0, 1.0).unwrap();
        let tri = equilateral_grid([-2.3, -1.3, 2.3, 1.3], 0.1).unwrap();
        let sampler = CurvatureSampler::for_mesh(&curve, &tri);
        let k = tri.locate(Vec2::new(1.98, 0.0)).unwrap();
        let b = curvature_bound(&curve, &tri, &sampler, k);
        assert!((b.m_k - 2.0).abs() < 0.02, "{}", b.m_k);
    }

    #[test]
    fn singular_amplification_is_infinite() {
        assert_eq!(CurvatureBound::new(2.0, 0.5).c_kh, f64::INFINITY);
        assert_eq!(CurvatureBound::new(0.0, 0.5).c_kh, 0.0);
    }

    #[test]
    fn circle_threshold() {
        let curve = BoundaryCurve::circle(Vec2::new(0.013, -0.021), 1.0).unwrap();
        let tri = equilateral_grid([-1.3, -1.3, 1.3, 1.3], 0.2).unwrap();
        let rep = check_conditions(&curve, &tri, &classify(&curve, &tri).unwrap()).unwrap();
        assert!(rep.all_pass);
        assert!(rep.rows.iter().all(|r| r.eta_ok && r.beta_ok));

        let tri = equilateral_grid([-1.4, -1.4, 1.4, 1.4], 0.3).unwrap();
        let rep = check_conditions(&curve, &tri, &classify(&curve, &tri).unwrap()).unwrap();
        assert!(!rep.all_pass);
        for r in &rep.rows {
            assert!(!r.cond_c);
            assert!((r.sigma_ch - 3f64.sqrt() * 0.3 / 0.7).abs() < 1e-9);
        }
    }
}
