//! Numerical tolerances shared by every module.

/// Exact identities (orthonormality, idempotence, metric identities).
pub const EXACT: f64 = 1e-9;

/// Slack added to the right-hand side of inequality checks.
pub const INEQUALITY_SLACK: f64 = 1e-8;

/// Relative tolerance for projective round trips and the "at infinity" test.
pub const PROJECTIVE: f64 = 1e-7;

/// Point-hyperplane incidence and hyperplane refit residuals.
pub const INCIDENCE: f64 = 1e-6;

/// Determinant magnitude below which a matrix counts as singular.
pub const SINGULAR_DET: f64 = 1e-9;

/// Agreement window for empirical box-counting dimension estimates.
pub const DIMENSION: f64 = 0.15;

/// Largest ambient dimension supported by the dense linear algebra.
pub const MAX_AMBIENT: usize = 16;
