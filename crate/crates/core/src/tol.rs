use serde::{Deserialize, Serialize};

/// Numeric thresholds shared by every stage of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative residual allowed in identity checks, scaled by `max(1, |operand|_inf)`.
    pub residual: f64,
    /// Relative norm below which a Gram-Schmidt residual counts as zero.
    pub rank: f64,
    /// Singular values of the cross-Gram at or above `1 - angle` lie in an intersection.
    pub angle: f64,
    /// `|u_i(θ_j) ∓ 1|` at or below this is classified as ±1.
    pub classify: f64,
    /// Values strictly between `classify` and this distance from ±1 are ambiguous.
    pub ambiguity: f64,
    /// Relative deviation from an integer allowed for multiplicities.
    pub multiplicity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-8,
            rank: 1e-8,
            angle: 1e-6,
            classify: 1e-8,
            ambiguity: 1e-4,
            multiplicity: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn with_residual(residual: f64) -> Self {
        Tolerances { residual, ..Self::default() }
    }

    /// Absolute residual bound for an operand of the given magnitude.
    pub fn scaled(&self, magnitude: f64) -> f64 {
        self.residual * magnitude.max(1.0)
    }
}
