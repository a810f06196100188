//! Numerical tolerances shared across the crate.
//!
//! Length-valued tolerances are relative to a geometric scale supplied by the
//! caller (usually the curve diameter).

/// Closest-point solve accuracy, relative to the curve diameter.
pub const PROJ_REL: f64 = 1e-10;
/// Relative error allowed when comparing analytic derivatives to finite differences.
pub const FD_REL: f64 = 1e-3;
/// Angular accuracy of the closest-point stationarity condition (radians).
pub const ANGLE: f64 = 1e-8;
/// Guard on `|φ κ_s|` near 1 and on extreme curvature.
pub const EPS_SING: f64 = 1e-6;
/// Allowed deviation of the total winding of a loop from one full period.
pub const WIND: f64 = 1e-6;
/// Tie tolerance, in degrees, when comparing interior angles.
pub const ANGLE_TIE_DEG: f64 = 1e-12;
/// Number of edge samples used to decide whether an edge touches the curve.
pub const EDGE_TOUCH_SAMPLES: usize = 64;
/// Upper bound on the pointwise Jacobian on passing configurations.
pub const JACOBIAN_CAP: f64 = 5.0 / 3.0;
/// Slack on the Jacobian cap.
pub const JACOBIAN_CAP_SLACK: f64 = 1e-9;
