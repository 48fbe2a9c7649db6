//! Independent ground truth for the engine: numeric roots, direct power sums
//! over them, and torus quadrature of the residue integrals.

pub mod aberth;
pub mod elimination;
pub mod quadrature;
pub mod unipoly;
pub mod verify;

pub use aberth::univariate_roots;
pub use elimination::{direct_power_sum, sylvester_resultant, solve_system, solve_system_2d, Root, RootSet};
pub use quadrature::{torus_residue_quadrature, QuadratureResult, QuadratureSpec, Radii};
pub use unipoly::UniPoly;
pub use verify::{assess, relative_deviation, verify_power_sum, Check, VerificationReport, VerifyOptions};
