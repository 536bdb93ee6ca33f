//! Error types for the crate, grouped by subsystem.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("failed to parse network description: {0}")]
    Parse(String),
    #[error("vertex {0} referenced by arc {1} does not exist")]
    UnknownVertex(usize, usize),
    #[error("arc {arc}: geometry endpoints disagree with declared vertices (start gap {start_gap:.3e}, end gap {end_gap:.3e})")]
    InconsistentOrientation {
        arc: usize,
        start_gap: f64,
        end_gap: f64,
    },
    #[error("boundary vertex {0} has no Dirichlet value")]
    MissingDirichletValue(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("degenerate geometry: computed length {0:.3e} is below the minimum")]
    DegenerateGeometry(f64),
    #[error("parameter {t} outside [0, {len}] on arc {arc}")]
    OutOfRange { arc: usize, t: f64, len: f64 },
    #[error("sine geometry requires a two-dimensional embedding, got dimension {0}")]
    SineDimension(usize),
    #[error("geometry has inconsistent dimensions")]
    DimensionMismatch,
}

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid step {dx} must be positive and smaller than the shortest arc length {min_len}")]
    StepTooLarge { dx: f64, min_len: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("no convergence after {sweeps} sweeps (residual {residual:.3e} > tolerance {tolerance:.3e})")]
    NotConverged {
        sweeps: usize,
        residual: f64,
        tolerance: f64,
    },
    #[error("cost {value:.3e} below the declared lower bound {eta:.3e} at node {node}")]
    NonPositiveCost { node: usize, value: f64, eta: f64 },
    #[error("boundary vertex {0} has no Dirichlet value")]
    MissingDirichletValue(usize),
}

#[derive(Debug, Error)]
pub enum PathError {
    #[error("path stalled: zero control at non-boundary node {node} (arc {arc}, t = {t})")]
    PathStalled { node: usize, arc: usize, t: f64 },
    #[error("path exceeded {0} steps before reaching the boundary")]
    MaxStepsExceeded(usize),
    #[error("solve result carries no recorded controls")]
    MissingControls,
    #[error("point does not lie on the network")]
    PointOffNetwork,
}

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("observed order undefined: error {0:.3e} is numerically zero")]
    ZeroError(f64),
    #[error("refinement steps must halve: {0} -> {1}")]
    StepsNotHalving(f64, f64),
    #[error("need at least two refinement steps")]
    TooFewSteps,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}
