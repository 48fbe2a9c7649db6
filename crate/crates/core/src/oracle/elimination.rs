//! Root solving for the transformed system by elimination of `w_2`.

use num_complex::Complex64;

use super::aberth::{cluster, univariate_roots};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::SparsePoly;
use crate::scalar::{Float, Mode, Scalar};
use crate::system::TransformedSystem;

/// Tolerance for merging numerically coincident roots.
pub const CLUSTER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub point: Vec<Complex64>,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// `max |F~_i|` over all roots.
    pub residual: f64,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> u64 {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

/// Coefficients of `p` as a polynomial in `w_2` over `F[w_1]`.
fn as_bivariate<F: Scalar>(p: &SparsePoly<F>) -> Vec<UniPoly<F>> {
    let deg = p.degree_in(1).unwrap_or(0) as usize;
    let mut rows: Vec<Vec<F>> = vec![Vec::new(); deg + 1];
    for (e, c) in p.terms() {
        let row = &mut rows[e.get(1) as usize];
        let k = e.get(0) as usize;
        if row.len() <= k {
            row.resize(k + 1, F::zero());
        }
        row[k] = row[k].clone() + c.clone();
    }
    rows.into_iter().map(UniPoly::new).collect()
}

fn as_univariate<F: Scalar>(p: &SparsePoly<F>) -> UniPoly<F> {
    let deg = p.degree_in(0).unwrap_or(0) as usize;
    let mut c = vec![F::zero(); deg + 1];
    for (e, v) in p.terms() {
        c[e.get(0) as usize] = v.clone();
    }
    UniPoly::new(c)
}

/// Determinant over `F[w]` by fraction-free (Bareiss) elimination.
fn bareiss<F: Scalar>(mut m: Vec<Vec<UniPoly<F>>>) -> UniPoly<F> {
    let n = m.len();
    if n == 0 {
        return UniPoly::constant(F::one());
    }
    let mut negate = false;
    let mut prev = UniPoly::constant(F::one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev).expect("Bareiss pivot is nonzero");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Sylvester resultant of two bivariate polynomials with respect to `w_2`.
pub fn sylvester_resultant<F: Scalar>(f: &SparsePoly<F>, g: &SparsePoly<F>) -> Result<UniPoly<F>> {
    if f.nvars() != 2 || g.nvars() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.nvars().max(g.nvars()),
        });
    }
    let fc = as_bivariate(f);
    let gc = as_bivariate(g);
    let (p, q) = (fc.len() - 1, gc.len() - 1);
    if p == 0 && q == 0 {
        return Err(Error::DegenerateResultant);
    }
    let size = p + q;
    let mut m = vec![vec![UniPoly::zero(); size]; size];
    for r in 0..q {
        for (k, c) in fc.iter().enumerate() {
            m[r][r + p - k] = c.clone();
        }
    }
    for r in 0..p {
        for (k, c) in gc.iter().enumerate() {
            m[q + r][r + q - k] = c.clone();
        }
    }
    Ok(bareiss(m))
}

/// Distinct roots with multiplicities, from an exact squarefree
/// decomposition in exact mode or by clustering in float mode.
pub fn roots_with_multiplicity<F: Scalar>(p: &UniPoly<F>) -> Result<Vec<(Complex64, u64)>> {
    match p.degree() {
        None => return Err(Error::DegenerateResultant),
        Some(0) => return Ok(Vec::new()),
        _ => {}
    }
    if F::MODE == Mode::Exact {
        let mut out = Vec::new();
        for (factor, k) in p.squarefree() {
            for r in univariate_roots(factor.to_float().coeffs())? {
                out.push((r, k as u64));
            }
        }
        Ok(out)
    } else {
        let roots = univariate_roots(p.to_float().coeffs())?;
        Ok(cluster(&roots, CLUSTER_TOL))
    }
}

/// Coefficients of `p(r, w_2)`, with coefficients that vanish up to rounding set to zero.
fn specialize(rows: &[UniPoly<Float>], r: Complex64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = rows
        .iter()
        .map(|row| {
            let v = row.eval(&r);
            let scale = row
                .coeffs()
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * r.norm() + c.norm());
            if v.norm() <= 1e3 * f64::EPSILON * scale {
                Complex64::new(0.0, 0.0)
            } else {
                v
            }
        })
        .collect();
    while out.last().is_some_and(|c| c.norm() == 0.0) {
        out.pop();
    }
    out
}

fn eval_relative(c: &[Complex64], x: Complex64) -> f64 {
    let v = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a);
    let s = c.iter().rev().fold(0.0, |acc, a| acc * x.norm() + a.norm());
    if s == 0.0 {
        0.0
    } else {
        v.norm() / s
    }
}

/// Newton's method on the 2x2 system; steps are kept only while the residual drops.
fn polish(eqs: &[SparsePoly<Float>], jac: &[Vec<SparsePoly<Float>>], mut x: Vec<Complex64>) -> Vec<Complex64> {
    let residual = |x: &[Complex64]| {
        eqs.iter()
            .map(|e| e.eval(x).map(|v| v.norm()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    };
    let mut best = residual(&x);
    for _ in 0..20 {
        if best == 0.0 {
            break;
        }
        let f: Vec<Complex64> = eqs.iter().map(|e| e.eval(&x).unwrap()).collect();
        let j: Vec<Vec<Complex64>> = jac
            .iter()
            .map(|row| row.iter().map(|d| d.eval(&x).unwrap()).collect())
            .collect();
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.norm() == 0.0 {
            break;
        }
        let dx0 = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let dx1 = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        let y = vec![x[0] - dx0, x[1] - dx1];
        let r = residual(&y);
        if !(r < best) {
            break;
        }
        best = r;
        x = y;
    }
    x
}

fn merge(roots: Vec<Root>, tol: f64) -> Vec<Root> {
    let mut out: Vec<Root> = Vec::new();
    for r in roots {
        let close = out.iter_mut().find(|o| {
            o.point
                .iter()
                .zip(&r.point)
                .all(|(a, b)| (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0))
        });
        match close {
            Some(o) => o.multiplicity += r.multiplicity,
            None => out.push(r),
        }
    }
    out
}

fn residual_of(eqs: &[SparsePoly<Float>], roots: &[Root]) -> f64 {
    roots
        .iter()
        .flat_map(|r| eqs.iter().map(move |e| e.eval(&r.point).map(|v| v.norm()).unwrap_or(f64::INFINITY)))
        .fold(0.0, f64::max)
}

fn check_count(found: u64, expected: u64) -> Result<()> {
    if found != expected {
        return Err(Error::RootCountMismatch { found, expected });
    }
    Ok(())
}

fn solve_1d<F: Scalar>(ts: &TransformedSystem<F>) -> Result<RootSet> {
    let f = ts.equation(0);
    let roots: Vec<Root> = roots_with_multiplicity(&as_univariate(&f))?
        .into_iter()
        .map(|(r, k)| Root {
            point: vec![r],
            multiplicity: k,
        })
        .collect();
    check_count(roots.iter().map(|r| r.multiplicity).sum(), ts.permanent())?;
    let eqs = [f.to_float()];
    let residual = residual_of(&eqs, &roots);
    Ok(RootSet { roots, residual })
}

/// All roots of a two-variable transformed system, with multiplicity.
pub fn solve_system_2d<F: Scalar>(ts: &TransformedSystem<F>) -> Result<RootSet> {
    if ts.n() != 2 {
        return Err(Error::Unsupported(format!("elimination solver needs n = 2, got {}", ts.n())));
    }
    let eqs = ts.equations();
    let expected = ts.permanent();
    let res = sylvester_resultant(&eqs[0], &eqs[1])?;
    if res.is_zero() {
        return Err(Error::DegenerateResultant);
    }
    let deg = res.degree().unwrap_or(0) as u64;
    check_count(deg, expected)?;

    let feqs: Vec<SparsePoly<Float>> = eqs.iter().map(|e| e.to_float()).collect();
    let rows: Vec<Vec<UniPoly<Float>>> = feqs.iter().map(as_bivariate).collect();
    let jac: Vec<Vec<SparsePoly<Float>>> = feqs
        .iter()
        .map(|e| (0..2).map(|v| e.derivative(v)).collect::<Result<_>>())
        .collect::<Result<_>>()?;

    let mut roots = Vec::new();
    for (r, k) in roots_with_multiplicity(&res)? {
        let p: Vec<Vec<Complex64>> = rows.iter().map(|rw| specialize(rw, r)).collect();
        let active: Vec<&Vec<Complex64>> = p.iter().filter(|c| !c.is_empty()).collect();
        if active.iter().any(|c| c.len() == 1) {
            return Err(Error::AmbiguousProjection(format!(
                "no common root over w1 = {r}"
            )));
        }
        let Some(base) = active.iter().min_by_key(|c| c.len()) else {
            return Err(Error::DegenerateResultant);
        };
        let candidates = cluster(&univariate_roots(base)?, CLUSTER_TOL);
        let common: Vec<Complex64> = candidates
            .into_iter()
            .map(|(y, _)| y)
            .filter(|&y| active.iter().all(|c| eval_relative(c, y) <= CLUSTER_TOL))
            .collect();
        let assigned: Vec<(Complex64, u64)> = match common.len() {
            0 => {
                return Err(Error::AmbiguousProjection(format!(
                    "no common root over w1 = {r}"
                )))
            }
            1 => vec![(common[0], k)],
            c if c as u64 == k => common.into_iter().map(|y| (y, 1)).collect(),
            // A simple root with near-coincident spurious candidates: keep the best fit.
            _ if k == 1 => {
                let fit = |y: Complex64| active.iter().map(|c| eval_relative(c, y)).fold(0.0, f64::max);
                let best = common
                    .into_iter()
                    .min_by(|&x, &y| fit(x).total_cmp(&fit(y)))
                    .expect("more than one candidate");
                vec![(best, 1)]
            }
            c => {
                return Err(Error::AmbiguousProjection(format!(
                    "{c} candidate w2 values over w1 = {r} with multiplicity {k}"
                )))
            }
        };
        for (y, mult) in assigned {
            let point = if mult == 1 {
                polish(&feqs, &jac, vec![r, y])
            } else {
                vec![r, y]
            };
            roots.push(Root {
                point,
                multiplicity: mult,
            });
        }
    }
    let roots = merge(roots, CLUSTER_TOL);
    check_count(roots.iter().map(|r| r.multiplicity).sum(), expected)?;
    let residual = residual_of(&feqs, &roots);
    Ok(RootSet { roots, residual })
}

/// Dispatches on the dimension; `n <= 2` is supported.
pub fn solve_system<F: Scalar>(ts: &TransformedSystem<F>) -> Result<RootSet> {
    match ts.n() {
        1 => solve_1d(ts),
        2 => solve_system_2d(ts),
        n => Err(Error::Unsupported(format!("root oracle supports n <= 2, got {n}"))),
    }
}

/// `sum mult * w^{gamma+I}` over roots whose coordinates all exceed `zero_tol`
/// in modulus, together with `sum mult * |w^{gamma+I}|`.
pub fn direct_power_sum_with_scale(rs: &RootSet, gamma: &MultiIndex, zero_tol: f64) -> (Complex64, f64) {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for r in &rs.roots {
        if r.point.iter().any(|x| x.norm() <= zero_tol) {
            continue;
        }
        let mut v = Complex64::new(r.multiplicity as f64, 0.0);
        for (j, x) in r.point.iter().enumerate() {
            v *= x.powu(gamma.get(j) + 1);
        }
        scale += v.norm();
        sum += v;
    }
    (sum, scale)
}

pub fn direct_power_sum(rs: &RootSet, gamma: &MultiIndex, zero_tol: f64) -> Complex64 {
    direct_power_sum_with_scale(rs, gamma, zero_tol).0
}
