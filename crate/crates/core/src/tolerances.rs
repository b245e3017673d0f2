//! Numerical thresholds shared by the library, the CLI and the test suites.

/// Relative size of a series term below which it counts as negligible.
pub const SERIES_TERM: f64 = 1e-16;
/// Consecutive negligible terms needed before a series is declared converged.
pub const SERIES_QUIET_TERMS: usize = 3;
/// Hard cap on the number of terms of a non-terminating series.
pub const SERIES_MAX_TERMS: usize = 200_000;
/// Infinite q-products stop once `|a q^k|` drops below this.
pub const QPRODUCT_TAIL: f64 = 1e-18;

/// Tanh-sinh refinement stops when successive estimates agree to this.
pub const QUADRATURE_REL: f64 = 1e-10;
/// Maximum number of tanh-sinh nodes.
pub const QUADRATURE_MAX_NODES: usize = 1 << 18;

/// Fraction of a finite domain kept away from each endpoint in sample grids.
pub const GRID_MARGIN: f64 = 0.02;

pub const SPECTRUM_REL: f64 = 1e-10;
pub const EIGEN_RESIDUAL: f64 = 1e-8;
pub const LADDER_REL: f64 = 1e-9;
pub const GROUND_ANNIHILATION: f64 = 1e-10;
pub const CLOSURE: f64 = 1e-8;
pub const HERMITICITY: f64 = 1e-6;
pub const NUMBER_OPERATOR: f64 = 1e-10;
pub const CLASSICAL_TRAJECTORY: f64 = 1e-6;
pub const ENERGY_DRIFT_PER_PERIOD: f64 = 1e-9;
pub const COHERENT_CLOSED_FORM: f64 = 1e-8;
pub const AOCS: f64 = 1e-7;
pub const TEMPORAL_STABILITY: f64 = 1e-9;
pub const ENERGY_FACTORIZATION: f64 = 1e-12;
pub const SHIFT_RELATION: f64 = 1e-9;
pub const COMPENSATOR: f64 = 1e-10;
pub const CLASSIFIER_CONDITIONS: f64 = 1e-10;
pub const CLASSIFIER_CONTROL: f64 = 1e-9;
pub const CLASSIFIER_NEGATIVE: f64 = 1e-3;
pub const POLYNOMIAL_ROUTES: f64 = 1e-10;
pub const GEGENBAUER_RATIO: f64 = 1e-12;

/// Rows/columns dropped at the truncation edge for first-commutator checks.
pub const INTERIOR_FIRST: usize = 2;
/// Rows/columns dropped at the truncation edge for double-commutator checks.
pub const INTERIOR_DOUBLE: usize = 4;
