//! Power sums of the reciprocal roots of a Tsikh-class system.
//!
//! For `w = 1/z` the sum `sigma_{gamma+I}` of `w^{gamma+I}` over all roots of
//! `q~ + t Q~ = 0` equals
//!
//! ```text
//! sum_{K in R} (-t)^|K| sum_J sign(J) * [ Delta~ w^{gamma+I} Q~^K / q~^{K+I}(J) ]_beta(K,J) at a_J
//! ```
//!
//! where `R` is the finite set of `K` with `|K| <= max gamma + 1`,
//! `q~^{K+I}(J)` keeps only the deflated factors `q~_i[j_i]`, and `[.]_beta`
//! is the Taylor coefficient of order `beta(K, J)`. Every term is a finite
//! jet computation, so the sum is exact in exact mode.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::multi_index::MultiIndex;
use crate::permutation::Permutation;
use crate::poly::{jacobian_det, SparsePoly};
use crate::scalar::{pairwise_sum, Scalar};
use crate::system::{TransformedSystem, TsikhSystem};

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumRequest<F> {
    pub gamma: MultiIndex,
    pub t: F,
    /// Record every `(K, J)` term.
    pub breakdown: bool,
}

impl<F: Scalar> PowerSumRequest<F> {
    pub fn new(gamma: MultiIndex, t: F) -> Self {
        PowerSumRequest {
            gamma,
            t,
            breakdown: false,
        }
    }

    pub fn with_breakdown(mut self) -> Self {
        self.breakdown = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermEntry<F> {
    pub k: MultiIndex,
    pub perm: Permutation,
    pub sign: i32,
    pub beta: MultiIndex,
    /// The bare Taylor coefficient, before `(-t)^|K| sign(J)`.
    pub value: F,
}

/// `total = sum over entries of (-t)^|K| * sign * value`.
#[derive(Clone, Debug, PartialEq)]
pub struct TermBreakdown<F> {
    pub entries: Vec<TermEntry<F>>,
    pub total: F,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumReport<F> {
    pub gamma: MultiIndex,
    pub t: F,
    pub value: F,
    /// `sum_J mult(J) a_J^{gamma+I}`, the value at `t = 0`.
    pub lattice_value: F,
    pub breakdown: Option<TermBreakdown<F>>,
}

/// All `K >= 0` with `|K| <= max_i gamma_i + 1`, graded-lex.
pub fn index_set(gamma: &MultiIndex) -> Vec<MultiIndex> {
    MultiIndex::graded_up_to(gamma.dim(), gamma.max_component() + 1)
}

/// Component `j_i` is `mhat[i][j_i] * (k_i + 1) - 1`.
pub fn beta_order(k: &MultiIndex, perm: &Permutation, mhat: &[Vec<u32>]) -> Result<MultiIndex> {
    let n = perm.len();
    if k.dim() != n || mhat.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if k.dim() != n { k.dim() } else { mhat.len() },
        });
    }
    let mut beta = MultiIndex::zeros(n);
    for i in 0..n {
        let j = perm.image(i);
        let m = mhat[i][j];
        if m == 0 {
            return Err(Error::Unsupported(format!(
                "zero effective degree at ({}, {})",
                i + 1,
                j + 1
            )));
        }
        beta.set(j, m * (k.get(i) + 1) - 1);
    }
    Ok(beta)
}

/// Numerator polynomial `Delta~(w, t) w^{gamma+I}`.
fn numerator<F: Scalar>(ts: &TransformedSystem<F>, gamma: &MultiIndex, t: &F) -> Result<SparsePoly<F>> {
    let n = ts.n();
    if gamma.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: gamma.dim(),
        });
    }
    let equations: Vec<SparsePoly<F>> = (0..n).map(|i| &ts.qtilde()[i] + &ts.qtilde_pert()[i].scale(t)).collect();
    let delta = jacobian_det(&equations)?;
    let mono = SparsePoly::monomial(gamma.add(&MultiIndex::ones(n)), F::one());
    delta.checked_mul(&mono)
}

/// Jets shared by all `K` for one permutation, built at the largest order in use.
struct PermJets<F> {
    numer: Jet<F>,
    pert: Vec<Jet<F>>,
    inv_deflated: Vec<Jet<F>>,
    pert_zero: Vec<bool>,
}

impl<F: Scalar> PermJets<F> {
    fn build(ts: &TransformedSystem<F>, numer: &SparsePoly<F>, perm: &Permutation, center: &[F], order: &MultiIndex) -> Result<Self> {
        let n = ts.n();
        let numer = Jet::from_poly(numer, center, order)?;
        let mut pert = Vec::with_capacity(n);
        let mut inv_deflated = Vec::with_capacity(n);
        for i in 0..n {
            pert.push(Jet::from_poly(&ts.qtilde_pert()[i], center, order)?);
            let d = ts.deflated(i, perm.image(i));
            inv_deflated.push(Jet::from_poly(&d, center, order)?.invert()?);
        }
        let pert_zero = ts.qtilde_pert().iter().map(|p| p.is_zero()).collect();
        Ok(PermJets {
            numer,
            pert,
            inv_deflated,
            pert_zero,
        })
    }

    fn term(&self, k: &MultiIndex, beta: &MultiIndex) -> Result<F> {
        let n = k.dim();
        if (0..n).any(|i| k.get(i) > 0 && self.pert_zero[i]) {
            return Ok(F::zero());
        }
        let mut acc = self.numer.truncate(beta)?;
        let mut last: Option<&Jet<F>> = None;
        for i in 0..n {
            for _ in 0..k.get(i) {
                if let Some(j) = last.replace(&self.pert[i]) {
                    acc = acc.mul(j)?;
                }
            }
            for _ in 0..=k.get(i) {
                if let Some(j) = last.replace(&self.inv_deflated[i]) {
                    acc = acc.mul(j)?;
                }
            }
        }
        match last {
            Some(j) => acc.mul_coefficient(j, beta),
            None => acc.coefficient(beta),
        }
    }
}

fn max_order<F: Scalar>(ts: &TransformedSystem<F>, perm: &Permutation, kmax: u32) -> MultiIndex {
    let n = ts.n();
    let mut order = MultiIndex::zeros(n);
    for i in 0..n {
        let j = perm.image(i);
        order.set(j, (ts.mhat()[i][j] * (kmax + 1)).saturating_sub(1));
    }
    order
}

/// One bracket term, computed from scratch.
pub fn local_term<F: Scalar>(
    ts: &TransformedSystem<F>,
    k: &MultiIndex,
    perm: &Permutation,
    gamma: &MultiIndex,
    t: &F,
) -> Result<F> {
    let beta = beta_order(k, perm, ts.mhat())?;
    let center = ts.lattice_root(perm).point;
    let n = ts.n();
    let mut acc = Jet::from_poly(&numerator(ts, gamma, t)?, &center, &beta)?;
    for i in 0..n {
        let q = Jet::from_poly(&ts.qtilde_pert()[i], &center, &beta)?;
        acc = acc.mul(&q.pow(k.get(i))?)?;
        let d = Jet::from_poly(&ts.deflated(i, perm.image(i)), &center, &beta)?;
        acc = acc.mul(&d.invert()?.pow(k.get(i) + 1)?)?;
    }
    acc.coefficient(&beta)
}

/// `sum_J mult(J) a_J^{gamma+I}`.
pub fn lattice_sum<F: Scalar>(ts: &TransformedSystem<F>, gamma: &MultiIndex) -> F {
    let terms: Vec<F> = ts
        .lattice_roots()
        .iter()
        .map(|r| {
            let mut v = F::from_i64(r.multiplicity as i64);
            for (j, x) in r.point.iter().enumerate() {
                v = v * x.pow_nat(gamma.get(j) + 1);
            }
            v
        })
        .collect();
    pairwise_sum(&terms)
}

/// The power sum of an already transformed system.
pub fn power_sum_transformed<F: Scalar>(ts: &TransformedSystem<F>, req: &PowerSumRequest<F>) -> Result<PowerSumReport<F>> {
    let n = ts.n();
    let gamma = &req.gamma;
    let numer = numerator(ts, gamma, &req.t)?;
    let ks = index_set(gamma);
    let kmax = gamma.max_component() + 1;
    let perms = Permutation::all(n);
    let minus_t = -req.t.clone();
    let tpow: Vec<F> = (0..=kmax).map(|e| minus_t.pow_nat(e)).collect();

    // values[k][j], reduced K-outer, J-inner
    let mut values = vec![Vec::with_capacity(perms.len()); ks.len()];
    let mut betas = vec![Vec::with_capacity(perms.len()); ks.len()];
    for perm in &perms {
        let center = ts.lattice_root(perm).point;
        let jets = PermJets::build(ts, &numer, perm, &center, &max_order(ts, perm, kmax))?;
        for (ki, k) in ks.iter().enumerate() {
            let beta = beta_order(k, perm, ts.mhat())?;
            values[ki].push(jets.term(k, &beta)?);
            betas[ki].push(beta);
        }
    }

    let mut contributions = Vec::with_capacity(ks.len() * perms.len());
    for (ki, k) in ks.iter().enumerate() {
        for (pi, perm) in perms.iter().enumerate() {
            let v = values[ki][pi].clone() * tpow[k.norm() as usize].clone();
            contributions.push(if perm.sign() < 0 { -v } else { v });
        }
    }
    let value = pairwise_sum(&contributions);

    let breakdown = req.breakdown.then(|| {
        let mut entries = Vec::with_capacity(contributions.len());
        for (ki, k) in ks.iter().enumerate() {
            for (pi, perm) in perms.iter().enumerate() {
                entries.push(TermEntry {
                    k: k.clone(),
                    perm: perm.clone(),
                    sign: perm.sign(),
                    beta: betas[ki][pi].clone(),
                    value: values[ki][pi].clone(),
                });
            }
        }
        TermBreakdown {
            entries,
            total: value.clone(),
        }
    });

    Ok(PowerSumReport {
        gamma: gamma.clone(),
        t: req.t.clone(),
        value,
        lattice_value: lattice_sum(ts, gamma),
        breakdown,
    })
}

/// `sigma_{gamma+I}(t)`: the sum of `z^{-(gamma+I)}` over all roots of the
/// system off the coordinate subspaces.
pub fn power_sum<F: Scalar>(sys: &TsikhSystem<F>, req: &PowerSumRequest<F>) -> Result<PowerSumReport<F>> {
    let ts = sys.transform()?;
    power_sum_transformed(&ts, req)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport<F> {
    pub value: F,
    /// Magnitude of the `|alpha| = max_alpha_norm` shell.
    pub last_shell: f64,
    /// Permutations left out because some `a_{i, j_i}` vanishes.
    pub skipped: Vec<Permutation>,
}

/// Partial sum of the `z`-side series for the residue integral
///
/// ```text
/// J_gamma(t) = sum'_J sign(J) sum_alpha (-t)^|alpha| prod_i (-a_{i j_i})^{-m_{i j_i}(alpha_i+1)}
///              [ Delta Q^alpha / (z^{gamma+I} prod_i q_i[j_i]^{alpha_i+1}) ]_beta(alpha,J) at a~_J
/// ```
///
/// over `|alpha| <= max_alpha_norm`, where `a~_J` has coordinate `j_i` equal
/// to `1 / a_{i j_i}`.
pub fn residue_series_z<F: Scalar>(
    sys: &TsikhSystem<F>,
    gamma: &MultiIndex,
    t: &F,
    max_alpha_norm: u32,
) -> Result<SeriesReport<F>> {
    sys.ensure_valid()?;
    let n = sys.n();
    if gamma.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: gamma.dim(),
        });
    }
    let at_t = sys.with_t(t.clone());
    let equations: Vec<SparsePoly<F>> = (0..n).map(|i| at_t.equation(i)).collect();
    let delta = jacobian_det(&equations)?;
    let alphas = MultiIndex::graded_up_to(n, max_alpha_norm);
    let minus_t = -t.clone();

    let mut contributions = Vec::new();
    let mut shell = Vec::new();
    let mut skipped = Vec::new();
    for perm in Permutation::all(n) {
        if (0..n).any(|i| sys.a()[i][perm.image(i)].is_zero()) {
            skipped.push(perm);
            continue;
        }
        let mut center = vec![F::zero(); n];
        let mut order = MultiIndex::zeros(n);
        for i in 0..n {
            let j = perm.image(i);
            center[j] = F::one() / sys.a()[i][j].clone();
            order.set(j, sys.m()[i][j] * (max_alpha_norm + 1) - 1);
        }
        // 1 / z^{gamma+I} as a jet: every coordinate of the center is nonzero
        let mut numer = Jet::from_poly(&delta, &center, &order)?;
        for j in 0..n {
            let zj = Jet::from_poly(&SparsePoly::var(n, j), &center, &order)?.invert()?;
            numer = numer.mul(&zj.pow(gamma.get(j) + 1)?)?;
        }
        let pert: Vec<Jet<F>> = (0..n)
            .map(|i| Jet::from_poly(&sys.perturbations()[i], &center, &order))
            .collect::<Result<_>>()?;
        let inv_deflated: Vec<Jet<F>> = (0..n)
            .map(|i| Jet::from_poly(&sys.unperturbed_without(i, perm.image(i)), &center, &order)?.invert())
            .collect::<Result<_>>()?;
        for alpha in &alphas {
            let mut beta = MultiIndex::zeros(n);
            let mut scale = if perm.sign() < 0 { -F::one() } else { F::one() };
            scale = scale * minus_t.pow_nat(alpha.norm() as u32);
            for i in 0..n {
                let j = perm.image(i);
                let m = sys.m()[i][j];
                beta.set(j, m * (alpha.get(i) + 1) - 1);
                scale = scale * (-sys.a()[i][j].clone()).pow_int(-((m * (alpha.get(i) + 1)) as i64))?;
            }
            let mut acc = numer.truncate(&beta)?;
            for i in 0..n {
                for _ in 0..alpha.get(i) {
                    acc = acc.mul(&pert[i])?;
                }
                for _ in 0..=alpha.get(i) {
                    acc = acc.mul(&inv_deflated[i])?;
                }
            }
            let term = acc.coefficient(&beta)? * scale;
            if alpha.norm() == max_alpha_norm as u64 {
                shell.push(term.clone());
            }
            contributions.push(term);
        }
    }
    Ok(SeriesReport {
        value: pairwise_sum(&contributions),
        last_shell: pairwise_sum(&shell).magnitude(),
        skipped,
    })
}

/// Coefficients `b_0 = 1, b_1, ..., b_N` from power sums `s_1, ..., s_N` by
/// `sum_{j<k} b_j s_{k-j} + k b_k = 0`.
pub fn newton_coefficients<F: Scalar>(s: &[F], order: usize) -> Result<Vec<F>> {
    if s.len() < order {
        return Err(Error::DimensionMismatch {
            expected: order,
            found: s.len(),
        });
    }
    let mut b = Vec::with_capacity(order + 1);
    b.push(F::one());
    for k in 1..=order {
        let terms: Vec<F> = (0..k).map(|j| b[j].clone() * s[k - j - 1].clone()).collect();
        b.push(-(pairwise_sum(&terms) / F::from_i64(k as i64)));
    }
    Ok(b)
}
