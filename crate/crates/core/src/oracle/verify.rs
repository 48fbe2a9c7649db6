//! Cross-checks of the engine against the root and quadrature oracles.

use num_complex::Complex64;

use super::elimination::{direct_power_sum_with_scale, solve_system};
use super::quadrature::{torus_residue_quadrature, QuadratureSpec, Radii};
use crate::error::Result;
use crate::multi_index::MultiIndex;
use crate::scalar::Scalar;
use crate::system::TsikhSystem;
use crate::waring::{power_sum_transformed, residue_series_z, PowerSumRequest};

pub const ROOTS_TOL: f64 = 1e-8;
pub const QUADRATURE_TOL: f64 = 1e-6;
pub const SERIES_TOL: f64 = 1e-9;
pub const ZERO_TOL: f64 = 1e-6;

/// `|a - b| / max(|a|, |b|, scale)`.
///
/// `scale` is the sum of the moduli of the summands of the root-side sum, so
/// that cancellation among roots does not inflate the deviation.
pub fn relative_deviation(a: Complex64, b: Complex64, scale: f64) -> f64 {
    let d = (a - b).norm();
    if d == 0.0 {
        return 0.0;
    }
    d / a.norm().max(b.norm()).max(scale)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub quadrature_nodes: usize,
    pub quadrature_radii: Radii,
    /// Truncation `|alpha| <= N` of the `z`-side series; `None` skips it.
    pub trunc_alpha: Option<u32>,
    pub zero_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            quadrature_nodes: 128,
            quadrature_radii: Radii::Auto,
            trunc_alpha: None,
            zero_tol: ZERO_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: Option<Complex64>,
    pub deviation: Option<f64>,
    pub tolerance: f64,
    /// Why the oracle did not produce a value.
    pub skipped: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        match self.deviation {
            Some(d) => d <= self.tolerance,
            None => self.skipped.is_some(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport<F> {
    pub gamma: MultiIndex,
    pub t: F,
    pub engine: F,
    pub root_count: Option<u64>,
    pub permanent: u64,
    pub checks: Vec<Check>,
}

impl<F> VerificationReport<F> {
    /// The root oracle must succeed; other oracles may be skipped.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
            && self
                .checks
                .iter()
                .any(|c| c.name == "roots" && c.deviation.is_some())
    }
}

/// Compares an engine value with every applicable oracle.
pub fn assess<F: Scalar>(sys: &TsikhSystem<F>, gamma: &MultiIndex, t: &F, engine: F, opts: &VerifyOptions) -> Result<VerificationReport<F>> {
    let ts = sys.with_t(t.clone()).transform()?;
    let e = engine.to_c64();
    let mut checks = Vec::new();
    let mut root_count = None;

    match solve_system(&ts) {
        Ok(rs) => {
            root_count = Some(rs.total_multiplicity());
            let (v, scale) = direct_power_sum_with_scale(&rs, gamma, opts.zero_tol);
            checks.push(Check {
                name: "roots",
                value: Some(v),
                deviation: Some(relative_deviation(e, v, scale)),
                tolerance: ROOTS_TOL,
                skipped: None,
            });
        }
        Err(err) => checks.push(Check {
            name: "roots",
            value: None,
            deviation: None,
            tolerance: ROOTS_TOL,
            skipped: Some(err.to_string()),
        }),
    }

    let spec = QuadratureSpec {
        radii: opts.quadrature_radii.clone(),
        nodes_per_dim: opts.quadrature_nodes,
        t: t.to_c64(),
    };
    match torus_residue_quadrature(&ts, gamma, &spec) {
        Ok(q) => checks.push(Check {
            name: "quadrature",
            value: Some(q.value),
            deviation: Some(relative_deviation(e, q.value, 0.0)),
            tolerance: QUADRATURE_TOL,
            skipped: None,
        }),
        Err(err) => checks.push(Check {
            name: "quadrature",
            value: None,
            deviation: None,
            tolerance: QUADRATURE_TOL,
            skipped: Some(err.to_string()),
        }),
    }

    if let Some(trunc) = opts.trunc_alpha {
        let s = residue_series_z(sys, gamma, t, trunc)?;
        let check = if s.skipped.is_empty() {
            let v = s.value.to_c64();
            Check {
                name: "z-series",
                value: Some(v),
                deviation: Some(relative_deviation(e, v, 0.0)),
                tolerance: SERIES_TOL,
                skipped: None,
            }
        } else {
            Check {
                name: "z-series",
                value: None,
                deviation: None,
                tolerance: SERIES_TOL,
                skipped: Some("some lattice root has a zero coordinate".into()),
            }
        };
        checks.push(check);
    }

    Ok(VerificationReport {
        gamma: gamma.clone(),
        t: t.clone(),
        engine,
        root_count,
        permanent: ts.permanent(),
        checks,
    })
}

/// Runs the engine and [`assess`]es its value.
pub fn verify_power_sum<F: Scalar>(sys: &TsikhSystem<F>, gamma: &MultiIndex, t: &F, opts: &VerifyOptions) -> Result<VerificationReport<F>> {
    let ts = sys.transform()?;
    let engine = power_sum_transformed(&ts, &PowerSumRequest::new(gamma.clone(), t.clone()))?.value;
    assess(sys, gamma, t, engine, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::SparsePoly;
    use crate::scalar::Exact;

    fn example_one() -> TsikhSystem<Exact> {
        let q = Exact::from_ratio;
        TsikhSystem::new(
            vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(-1, 1)]],
            vec![vec![0, 2], vec![2, 1]],
            vec![
                SparsePoly::monomial(MultiIndex::from_slice(&[1, 2]), q(1, 1)),
                SparsePoly::monomial(MultiIndex::from_slice(&[2, 1]), q(1, 1)),
            ],
            q(1, 1),
        )
        .unwrap()
    }

    #[test]
    fn example_one_passes() {
        let sys = example_one();
        let r = verify_power_sum(&sys, &MultiIndex::zeros(2), &Exact::from_i64(1), &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.engine, Exact::from_ratio(17, 4));
        assert_eq!(r.root_count, Some(5));
    }

    #[test]
    fn small_t_uses_quadrature() {
        let sys = example_one();
        let t = Exact::from_ratio(1, 100);
        let r = verify_power_sum(&sys, &MultiIndex::zeros(2), &t, &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.checks.iter().any(|c| c.name == "quadrature" && c.deviation.is_some()));
    }

    #[test]
    fn corrupted_engine_value_fails() {
        let sys = example_one();
        let t = Exact::from_i64(1);
        let wrong = -Exact::from_ratio(17, 4);
        let r = assess(&sys, &MultiIndex::zeros(2), &t, wrong, &VerifyOptions::default()).unwrap();
        assert!(!r.passed());
    }
}
