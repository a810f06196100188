//! Parameterization of smooth closed planar curves over the positive edges
//! of a nonconforming background triangulation, via the closest point
//! projection.

pub mod classify;
pub mod curve;
pub mod error;
pub mod geom;
pub mod mesh;
pub mod param;
pub mod pipeline;
pub mod report;
pub mod svg;
pub mod tol;
pub mod topology;

pub use curve::{BoundaryCurve, CurvePoint, ReachEstimate, ReachMethod, Shape};
pub use error::{Error, Result};
pub use geom::{Mat2, Vec2};
pub use mesh::{TriangleMetrics, Triangulation};
