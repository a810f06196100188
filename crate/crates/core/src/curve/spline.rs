//! Closed (periodic) interpolating cubic splines.

use crate::error::CurveError;
use crate::geom::Vec2;

/// C² periodic cubic spline through a cyclic list of control points,
/// parameterized over `t ∈ [0, 1)` with uniform knot spacing.
#[derive(Debug, Clone)]
pub struct ClosedSpline {
    points: Vec<Vec2>,
    /// Second derivatives with respect to the local (unit-spaced) parameter.
    second: Vec<Vec2>,
}

impl ClosedSpline {
    pub fn new(points: Vec<Vec2>) -> Result<Self, CurveError> {
        if points.len() < 3 {
            return Err(CurveError::DegenerateCurve(format!(
                "closed spline needs at least 3 control points, got {}",
                points.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(CurveError::DegenerateCurve(format!("control point {i} is not finite")));
            }
            let q = points[(i + 1) % points.len()];
            if *p == q {
                return Err(CurveError::DegenerateCurve(format!(
                    "control points {i} and {} coincide",
                    (i + 1) % points.len()
                )));
            }
        }
        let n = points.len();
        let rhs: Vec<Vec2> = (0..n)
            .map(|i| {
                let prev = points[(i + n - 1) % n];
                let next = points[(i + 1) % n];
                (next - points[i] * 2.0 + prev) * 6.0
            })
            .collect();
        let xs = solve_cyclic(&rhs.iter().map(|v| v.x).collect::<Vec<_>>());
        let ys = solve_cyclic(&rhs.iter().map(|v| v.y).collect::<Vec<_>>());
        let second = xs.into_iter().zip(ys).map(|(x, y)| Vec2::new(x, y)).collect();
        Ok(ClosedSpline { points, second })
    }

    pub fn control_points(&self) -> &[Vec2] {
        &self.points
    }

    /// Position and first two derivatives with respect to `t`.
    pub fn eval(&self, t: f64) -> (Vec2, Vec2, Vec2) {
        let n = self.points.len();
        let s = t.rem_euclid(1.0) * n as f64;
        let i = (s.floor() as usize).min(n - 1);
        let w = s - i as f64;
        let j = (i + 1) % n;
        let (p0, p1) = (self.points[i], self.points[j]);
        let (m0, m1) = (self.second[i], self.second[j]);
        let u = 1.0 - w;
        let pos = p0 * u + p1 * w + m0 * ((u * u * u - u) / 6.0) + m1 * ((w * w * w - w) / 6.0);
        let d1 = p1 - p0 + m0 * ((1.0 - 3.0 * u * u) / 6.0) + m1 * ((3.0 * w * w - 1.0) / 6.0);
        let d2 = m0 * u + m1 * w;
        let nf = n as f64;
        (pos, d1 * nf, d2 * (nf * nf))
    }
}

/// Solves the cyclic system `x[i-1] + 4 x[i] + x[i+1] = r[i]` (indices mod n).
fn solve_cyclic(r: &[f64]) -> Vec<f64> {
    let n = r.len();
    if n == 3 {
        // every row couples all three unknowns: [4 1 1; 1 4 1; 1 1 4]
        let s: f64 = r.iter().sum::<f64>() / 6.0;
        return r.iter().map(|ri| (ri - s) / 3.0).collect();
    }
    // Sherman-Morrison on the tridiagonal part.
    let gamma = -4.0;
    let mut diag = vec![4.0; n];
    diag[0] -= gamma;
    diag[n - 1] -= 1.0 / gamma;
    let x = thomas(&diag, r);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = 1.0;
    let z = thomas(&diag, &u);
    let fact = (x[0] + x[n - 1] / gamma) / (1.0 + z[0] + z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

/// Tridiagonal solve with unit off-diagonals.
fn thomas(diag: &[f64], r: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = 1.0 / diag[0];
    d[0] = r[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - c[i - 1];
        c[i] = 1.0 / m;
        d[i] = (r[i] - d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_control_points() {
        let pts = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.3, 0.9),
            Vec2::new(-0.8, 0.5),
            Vec2::new(-0.7, -0.6),
            Vec2::new(0.4, -0.9),
        ];
        let s = ClosedSpline::new(pts.clone()).unwrap();
        for (i, p) in pts.iter().enumerate() {
            let (q, _, _) = s.eval(i as f64 / pts.len() as f64);
            assert!(q.dist(*p) < 1e-14, "{i}: {q:?} vs {p:?}");
        }
    }

    #[test]
    fn second_derivative_is_continuous_across_knots() {
        let pts: Vec<Vec2> = (0..7)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 7.0;
                Vec2::new(a.cos() * (1.0 + 0.2 * (3.0 * a).sin()), a.sin())
            })
            .collect();
        let s = ClosedSpline::new(pts).unwrap();
        for k in 0..7 {
            let t = k as f64 / 7.0;
            let (_, d1a, d2a) = s.eval(t - 1e-12);
            let (_, d1b, d2b) = s.eval(t + 1e-12);
            assert!((d1a - d1b).norm() < 1e-8);
            assert!((d2a - d2b).norm() < 1e-6);
        }
    }

    #[test]
    fn cyclic_solver_matches_residual() {
        for n in 3..9 {
            let r: Vec<f64> = (0..n).map(|i| (i as f64 * 1.7).sin()).collect();
            let x = solve_cyclic(&r);
            for i in 0..n {
                let lhs = x[(i + n - 1) % n] + 4.0 * x[i] + x[(i + 1) % n];
                assert!((lhs - r[i]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn collinear_controls_have_zero_curvature() {
        let pts = (0..4).map(|i| Vec2::new(i as f64, 0.0)).collect();
        let s = ClosedSpline::new(pts).unwrap();
        let (_, d1, d2) = s.eval(0.1);
        assert!(d1.norm() > 0.0);
        assert_eq!(d1.cross(d2), 0.0);
    }

    #[test]
    fn rejects_too_few_points() {
        assert!(ClosedSpline::new(vec![Vec2::ZERO, Vec2::new(1.0, 0.0)]).is_err());
    }
}
