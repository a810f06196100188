//! Cumulative arclength lookup for periodic parametric curves.

/// Five-point Gauss-Legendre nodes on [-1, 1].
const GL_X: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_W: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

pub(crate) fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GL_X.iter()
        .zip(GL_W)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Arclength as a function of a periodic parameter `t ∈ [0, 1)`.
#[derive(Debug, Clone)]
pub struct ArcTable {
    /// `cum[i]` is the arclength from `t = 0` to `t = i / (cum.len() - 1)`.
    cum: Vec<f64>,
}

impl ArcTable {
    /// `speed(t)` is `|γ'(t)|`.
    pub fn build(speed: impl Fn(f64) -> f64, intervals: usize) -> Self {
        let dt = 1.0 / intervals as f64;
        let mut cum = Vec::with_capacity(intervals + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for i in 0..intervals {
            let a = i as f64 * dt;
            acc += gauss_legendre(&speed, a, a + dt);
            cum.push(acc);
        }
        ArcTable { cum }
    }

    pub fn total(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    fn intervals(&self) -> usize {
        self.cum.len() - 1
    }

    /// Arclength from 0 to `t`.
    pub fn length_at(&self, speed: impl Fn(f64) -> f64, t: f64) -> f64 {
        let t = t.rem_euclid(1.0);
        let n = self.intervals();
        let dt = 1.0 / n as f64;
        let i = ((t / dt).floor() as usize).min(n - 1);
        let a = i as f64 * dt;
        self.cum[i] + gauss_legendre(speed, a, t)
    }

    /// Inverse of [`length_at`](Self::length_at): parameter at arclength `s`.
    pub fn param_at(&self, speed: impl Fn(f64) -> f64, s: f64) -> f64 {
        let total = self.total();
        let s = s.rem_euclid(total);
        let n = self.intervals();
        let dt = 1.0 / n as f64;
        let i = match self.cum.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => return (i as f64 * dt).rem_euclid(1.0),
            Err(i) => i.saturating_sub(1).min(n - 1),
        };
        let a = i as f64 * dt;
        let (mut lo, mut hi) = (a, a + dt);
        let target = s - self.cum[i];
        let mut t = a + dt * target / (self.cum[i + 1] - self.cum[i]);
        for _ in 0..60 {
            let g = gauss_legendre(&speed, a, t) - target;
            if g.abs() <= 1e-15 * total {
                break;
            }
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let v = speed(t);
            let next = t - g / v;
            t = if v > 0.0 && next > lo && next < hi {
                next
            } else {
                0.5 * (lo + hi)
            };
        }
        t
    }
}
