//! Numerical thresholds shared across the crate.
//!
//! Everything here is a fixed constant of the artifact, not a tunable: the
//! validation and acceptance suites assert against these exact values.

/// Agreement required between declared vertex positions and curve endpoints,
/// and between declared and computed arc lengths (relative).
pub const GEOMETRY_MATCH: f64 = 1e-8;

/// Relative tolerance of the adaptive quadrature used for curved arc lengths.
pub const QUADRATURE_REL: f64 = 1e-10;

/// Arc-length parameters are accepted up to this absolute slack outside
/// [0, l] before `OutOfRange` is raised.
pub const PARAM_SLACK: f64 = 1e-12;

/// Samples per arc in the cumulative-length table of a curved parametrization.
pub const PARAM_TABLE_SAMPLES: usize = 1024;

/// Samples per arc for the sampled self-intersection and cost checks.
pub const VALIDATION_SAMPLES: usize = 64;

/// Pairwise-distance threshold for the sampled self-intersection check,
/// relative to the arc length.
pub const SELF_INTERSECTION_REL: f64 = 1e-6;

/// Arcs shorter than this are rejected as degenerate.
pub const DEGENERATE_LENGTH: f64 = 1e-12;

/// Slack in the boundary-compatibility inequality g(x) - g(y) <= S(y, x).
pub const COMPATIBILITY_SLACK: f64 = 1e-8;

/// Default sup-norm stopping threshold of the fixed-point iteration.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default cap on Gauss-Seidel sweeps.
pub const DEFAULT_MAX_SWEEPS: usize = 1_000_000;

/// Errors below this are treated as exactly zero when computing observed
/// convergence orders.
pub const ORDER_ZERO_ERROR: f64 = 1e-14;

// ordering of the scales, checked at compile time
const _: () = {
    assert!(DEGENERATE_LENGTH < GEOMETRY_MATCH);
    assert!(PARAM_SLACK < GEOMETRY_MATCH);
    assert!(QUADRATURE_REL < GEOMETRY_MATCH);
    assert!(ORDER_ZERO_ERROR < DEFAULT_TOLERANCE);
};
