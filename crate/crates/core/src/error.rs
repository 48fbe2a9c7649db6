use thiserror::Error;

use crate::system::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {var} out of range for {nvars} variables")]
    VariableOutOfRange { var: usize, nvars: usize },

    #[error("jets are centered at different points")]
    CenterMismatch,

    #[error("multi-index {index} exceeds truncation order {order}")]
    OrderExceeded { index: String, order: String },

    /// Constant term of a jet denominator vanished. For the engine this means a
    /// deflated factor is zero at a lattice root, i.e. two entries of one
    /// column of the coefficient matrix coincide.
    #[error("jet is not a unit (zero constant term)")]
    NonUnitJet,

    #[error("invalid system: {0}")]
    InvalidSystem(ValidationReport),

    #[error("root finder did not converge after {iterations} iterations: {detail}")]
    NonConvergence { iterations: usize, detail: String },

    #[error("resultant vanishes identically; roots are not isolated")]
    DegenerateResultant,

    #[error("root count {found} does not match permanent {expected}")]
    RootCountMismatch { found: u64, expected: u64 },

    #[error("back substitution is ambiguous: {0}")]
    AmbiguousProjection(String),

    #[error("perturbation dominates on cycle {cycle} for equation {equation} (|t Q| / |q| = {ratio:.3e})")]
    DominanceViolation {
        cycle: usize,
        equation: usize,
        ratio: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parse error: {0}")]
    Parse(String),
}
