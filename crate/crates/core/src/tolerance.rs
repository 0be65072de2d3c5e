//! The single numeric tolerance context threaded through every operation.

use serde::{Deserialize, Serialize};

/// Tolerances used by geometric predicates and numerical solvers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Acceptable residual for algebraic identities.
    pub residual: f64,
    /// Inflation of real-interval membership tests such as `tr ∈ [-2, 2]`.
    pub interval: f64,
    /// Two lengths closer than this are treated as a tie.
    pub tie: f64,
    /// Lengths below this are treated as zero (degenerate sides and edges).
    pub degenerate: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            residual: 1e-9,
            interval: 1e-9,
            tie: 1e-7,
            degenerate: 1e-7,
        }
    }
}

impl Tolerance {
    /// Default tolerances with `residual` and `interval` both set to `eps`.
    pub fn with_eps(eps: f64) -> Self {
        Self {
            residual: eps,
            interval: eps,
            ..Self::default()
        }
    }
}
