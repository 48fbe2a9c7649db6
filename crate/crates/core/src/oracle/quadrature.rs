//! Trapezoidal quadrature of the residue integrals over local tori.
//!
//! Around each lattice root `a_J` the torus `|w_j - a_J,j| = eps_j`, taken
//! with the orientation induced by the equation order of `J`, carries
//! `(2 pi i)^{-n} w^{gamma+I} Delta~ dw / (F~_1 ... F~_n)`. The product
//! trapezoid rule converges geometrically for these periodic integrands.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::SparsePoly;
use crate::scalar::{pairwise_sum, Float, Scalar};
use crate::system::{LatticeRoot, TransformedSystem};

pub const MIN_NODES: usize = 8;
/// Total nodes per torus used to rank candidate radii.
const PROBE_BUDGET: f64 = 4096.0;

fn probe_nodes(n: usize) -> usize {
    (PROBE_BUDGET.powf(1.0 / n as f64).round() as usize).clamp(2 * MIN_NODES, 256)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Radii {
    /// Half the smallest gap between distinct lattice coordinates per variable, capped at 1/4.
    Default,
    /// The best converging member of a fixed ladder of fractions of the half gaps.
    Auto,
    Fixed(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub radii: Radii,
    pub nodes_per_dim: usize,
    pub t: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Per lattice root, in permutation order, including the orientation sign.
    pub per_cycle: Vec<Complex64>,
    pub radii: Vec<f64>,
    /// `min |q~_i| / |t Q~_i|` over all nodes.
    pub dominance_margin: f64,
}

struct FloatSystem {
    n: usize,
    qtilde: Vec<SparsePoly<Float>>,
    pert: Vec<SparsePoly<Float>>,
    numer: SparsePoly<Float>,
}

impl FloatSystem {
    fn new<F: Scalar>(ts: &TransformedSystem<F>, gamma: &MultiIndex, t: Complex64) -> Result<Self> {
        let n = ts.n();
        let fts = TransformedSystem::from_parts(
            ts.a().iter().map(|r| r.iter().map(|x| x.to_c64()).collect()).collect(),
            ts.mhat().to_vec(),
            ts.qtilde().iter().map(|p| p.to_float()).collect(),
            ts.qtilde_pert().iter().map(|p| p.to_float()).collect(),
            t,
        )?;
        let mono = SparsePoly::monomial(gamma.add(&MultiIndex::ones(n)), Complex64::new(1.0, 0.0));
        let numer = fts.jacobian().checked_mul(&mono)?;
        Ok(FloatSystem {
            n,
            qtilde: fts.qtilde().to_vec(),
            pert: fts.qtilde_pert().iter().map(|p| p.scale(&t)).collect(),
            numer,
        })
    }
}

/// Half the smallest gap between distinct lattice coordinates in each variable;
/// infinite where a variable has a single distinct coordinate.
pub fn half_gaps<F: Scalar>(roots: &[LatticeRoot<F>], n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let mut coords: Vec<Complex64> = Vec::new();
            for r in roots {
                let c = r.point[j].to_c64();
                if !coords.contains(&c) {
                    coords.push(c);
                }
            }
            let mut gap = f64::INFINITY;
            for a in 0..coords.len() {
                for b in a + 1..coords.len() {
                    gap = gap.min((coords[a] - coords[b]).norm());
                }
            }
            gap / 2.0
        })
        .collect()
}

fn nodes(n: usize, per_dim: usize) -> Vec<Vec<Complex64>> {
    let unit: Vec<Complex64> = (0..per_dim)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / per_dim as f64))
        .collect();
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * per_dim);
        for prefix in &out {
            for u in &unit {
                let mut p = prefix.clone();
                p.push(*u);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Mean of the integrand times `prod (w - c)` over the torus, plus the dominance margin.
fn cycle_integral(sys: &FloatSystem, center: &[Complex64], radii: &[f64], grid: &[Vec<Complex64>], cycle: usize) -> Result<(Complex64, f64)> {
    let n = sys.n;
    let mut margin = f64::INFINITY;
    let mut samples = Vec::with_capacity(grid.len());
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for u in grid {
        let mut jac = Complex64::new(1.0, 0.0);
        for j in 0..n {
            let d = u[j] * radii[j];
            w[j] = center[j] + d;
            jac *= d;
        }
        let mut denom = Complex64::new(1.0, 0.0);
        for i in 0..n {
            let q = sys.qtilde[i].eval(&w)?;
            let p = sys.pert[i].eval(&w)?;
            let ratio = if p.norm() == 0.0 { f64::INFINITY } else { q.norm() / p.norm() };
            if ratio <= 1.0 {
                return Err(Error::DominanceViolation {
                    cycle,
                    equation: i + 1,
                    ratio: 1.0 / ratio,
                });
            }
            margin = margin.min(ratio);
            denom *= q + p;
        }
        samples.push(sys.numer.eval(&w)? * jac / denom);
    }
    Ok((pairwise_sum(&samples) / grid.len() as f64, margin))
}

fn integrate(sys: &FloatSystem, roots: &[LatticeRoot<Complex64>], radii: &[f64], per_dim: usize) -> Result<QuadratureResult> {
    let grid = nodes(sys.n, per_dim);
    let mut per_cycle = Vec::with_capacity(roots.len());
    let mut margin = f64::INFINITY;
    for (c, r) in roots.iter().enumerate() {
        let (v, m) = cycle_integral(sys, &r.point, radii, &grid, c)?;
        margin = margin.min(m);
        per_cycle.push(if r.sign < 0 { -v } else { v });
    }
    Ok(QuadratureResult {
        value: pairwise_sum(&per_cycle),
        per_cycle,
        radii: radii.to_vec(),
        dominance_margin: margin,
    })
}

/// `sum_J` of the torus integral at `a_J`, which equals `sigma_{gamma+I}(t)`
/// whenever every torus separates its own cluster of roots.
pub fn torus_residue_quadrature<F: Scalar>(ts: &TransformedSystem<F>, gamma: &MultiIndex, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    let n = ts.n();
    if gamma.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: gamma.dim(),
        });
    }
    if spec.nodes_per_dim < MIN_NODES {
        return Err(Error::Unsupported(format!("at least {MIN_NODES} nodes per dimension required")));
    }
    let sys = FloatSystem::new(ts, gamma, spec.t)?;
    let roots: Vec<LatticeRoot<Complex64>> = ts
        .lattice_roots()
        .into_iter()
        .map(|r| LatticeRoot {
            perm: r.perm,
            point: r.point.iter().map(|x| x.to_c64()).collect(),
            sign: r.sign,
            multiplicity: r.multiplicity,
        })
        .collect();
    let gaps = half_gaps(&roots, n);
    match &spec.radii {
        Radii::Default => {
            let radii: Vec<f64> = gaps.iter().map(|g| g.min(0.25)).collect();
            integrate(&sys, &roots, &radii, spec.nodes_per_dim)
        }
        Radii::Fixed(r) => {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            for (j, (&e, &g)) in r.iter().zip(&gaps).enumerate() {
                if !(e > 0.0 && e <= g) {
                    return Err(Error::Unsupported(format!(
                        "radius {e} for variable {} does not isolate the lattice roots",
                        j + 1
                    )));
                }
            }
            integrate(&sys, &roots, r, spec.nodes_per_dim)
        }
        Radii::Auto => {
            // rank by the change between probe resolutions, then by margin
            let probe = probe_nodes(n);
            let mut best: Option<((f64, f64), Vec<f64>)> = None;
            let mut last_err = None;
            for step in 0..16 {
                let theta = 0.95 - 0.05 * step as f64;
                let radii: Vec<f64> = gaps.iter().map(|g| g.min(1.0) * theta).collect();
                let trial = integrate(&sys, &roots, &radii, probe)
                    .and_then(|fine| Ok((integrate(&sys, &roots, &radii, probe / 2)?, fine)));
                match trial {
                    Ok((coarse, fine)) => {
                        let key = ((fine.value - coarse.value).norm(), -fine.dominance_margin);
                        if best.as_ref().is_none_or(|b| key < b.0) {
                            best = Some((key, radii));
                        }
                    }
                    Err(e) => last_err = Some(e),
                }
            }
            match best {
                Some((_, radii)) => integrate(&sys, &roots, &radii, spec.nodes_per_dim),
                None => Err(last_err.expect("ladder is nonempty")),
            }
        }
    }
}
