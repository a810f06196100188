use thiserror::Error;

use crate::geom::Vec2;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CurveError {
    #[error("closest-point solve did not converge at ({}, {})", .0.x, .0.y)]
    ProjectionDidNotConverge(Vec2),
    #[error("point ({}, {}) at distance {dist} lies outside the tube of radius {reach}", .point.x, .point.y)]
    OutsideTube { point: Vec2, dist: f64, reach: f64 },
    #[error("|phi * kappa_s| = {0} is too close to 1")]
    CurvatureSingularity(f64),
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("invalid defining function: {0}")]
    InvalidDefiningFunction(String),
    #[error("orientation self-check failed: {0}")]
    Orientation(String),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MeshError {
    #[error("triangle {tri} references vertex {index} but the mesh has {nv} vertices")]
    IndexOutOfRange { tri: usize, index: usize, nv: usize },
    #[error("triangle {0} is degenerate")]
    DegenerateTriangle(usize),
    #[error("edge ({0}, {1}) is shared by more than two triangles")]
    NonManifoldEdge(usize, usize),
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("edge ({0}, {1}) is not in the mesh")]
    UnknownEdge(usize, usize),
    #[error("invalid grid request: {0}")]
    InvalidGrid(String),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ClassifyError {
    #[error("curve is not immersed in the mesh: {0}")]
    NotImmersed(String),
    #[error("edge ({}, {}) is the positive edge of triangles {first} and {second}", .edge.0, .edge.1)]
    SharedPositiveEdgeConflict {
        edge: (usize, usize),
        first: usize,
        second: usize,
    },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TopologyError {
    #[error("vertex {vertex} has {degree} incident positive edges, expected 2")]
    DegreeViolation { vertex: usize, degree: usize },
    #[error("traversal from vertex {0} did not close")]
    OpenChain(usize),
    #[error("loop {0} intersects itself")]
    SelfIntersectingLoop(usize),
    #[error("loop {0} has a tied orientation vote")]
    AmbiguousOrientation(usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// Crate-level error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Structural errors are hypothesis violations; the rest are input problems.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Parse(_) | Error::Mesh(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
