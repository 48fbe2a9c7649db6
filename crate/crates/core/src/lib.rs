//! Waring-type formulas for power sums of roots of Tsikh-class polynomial
//! systems, with independent numeric oracles.

pub mod document;
pub mod error;
pub mod jet;
pub mod multi_index;
pub mod oracle;
pub mod permutation;
pub mod poly;
pub mod scalar;
pub mod system;
pub mod transcend;
pub mod waring;

pub use error::{Error, Result};
pub use jet::Jet;
pub use multi_index::MultiIndex;
pub use permutation::Permutation;
pub use poly::{jacobian_det, SparsePoly};
pub use scalar::{Exact, Float, Mode, Scalar};
pub use system::{permanent, LatticeRoot, TransformedSystem, TsikhSystem, ValidationReport, Violation};
pub use waring::{
    beta_order, index_set, local_term, newton_coefficients, power_sum, power_sum_transformed, residue_series_z,
    PowerSumReport, PowerSumRequest, SeriesReport, TermBreakdown, TermEntry,
};
pub use document::{AnySystem, SystemDocument, TransformedDocument};
