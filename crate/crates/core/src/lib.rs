//! Solver for eikonal-type Hamilton-Jacobi equations |u'| = f(x) posed on
//! finite networks of parametrized arcs embedded in R^N, with Dirichlet data
//! on a set of boundary vertices.
//!
//! The discrete scheme is semi-Lagrangian: the value at a grid node is the
//! minimum over a control q in [-1,1] of the piecewise-linear interpolant at
//! the foot point one step of length h|q| along the arc, plus the running
//! cost h f |q|. Interior vertices minimize over all incident arcs. The fixed
//! point is computed by Gauss-Seidel sweeps from a dominating initial guess,
//! and the recorded argmin controls yield approximate shortest paths to the
//! boundary.
//!
//! Modules:
//! - [`network`]: network description, validation, signed incidence matrix
//! - [`geometry`]: arc-length parametrization and intrinsic path distance
//! - [`grid`]: per-arc partitions and the linear interpolation operator
//! - [`solver`]: the update operators, sweep loop, and fixed-point iteration
//! - [`paths`]: shortest-path reconstruction from recorded controls
//! - [`oracle`]: independent reference solutions (fine-grid Dijkstra,
//!   representation formula, closed forms)
//! - [`study`]: error norms, observed convergence orders, refinement studies
//! - [`presets`]: bundled example networks

pub mod error;
pub mod geometry;
pub mod grid;
pub mod network;
pub mod oracle;
pub mod paths;
pub mod presets;
pub mod solver;
pub mod study;
pub mod tol;

pub use error::{GeometryError, GridError, NetworkError, PathError, SolveError, StudyError};
pub use geometry::{path_distance, ArcParametrization, NetworkPoint};
pub use grid::{Grid, NodeField};
pub use network::{
    build_incidence, validate_network, Arc, CostSpec, GeometrySpec, Network, ValidationReport,
    Vertex,
};
pub use paths::{extract_path, NetworkPath};
pub use solver::{
    check_compatibility, solve, Control, IterationVariable, SolveResult, SolverConfig,
};
pub use study::{error_norms, observed_order, run_study, Reference, StudyReport, StudyRow};
