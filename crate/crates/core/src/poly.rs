//! Sparse multivariate polynomials over a [`Scalar`] field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::permutation::Permutation;
use crate::scalar::Scalar;

/// Polynomial in `nvars` variables. Never stores a zero coefficient, so the
/// zero polynomial has an empty term map.
#[derive(Clone, PartialEq)]
pub struct SparsePoly<F> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, F>,
}

impl<F: Scalar> SparsePoly<F> {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(MultiIndex::zeros(nvars), c)
    }

    /// The coordinate function `w_j`.
    pub fn var(nvars: usize, j: usize) -> Self {
        Self::monomial(MultiIndex::unit(nvars, j), F::one())
    }

    pub fn monomial(exp: MultiIndex, c: F) -> Self {
        let nvars = exp.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        SparsePoly { nvars, terms }
    }

    /// `(w_j - c)^e`, expanded.
    pub fn linear_power(nvars: usize, j: usize, c: &F, e: u32) -> Self {
        let mut terms = BTreeMap::new();
        let mut binom = F::one();
        for k in 0..=e {
            // coefficient of w_j^k is C(e,k) (-c)^(e-k)
            let coeff = binom.clone() * (-c.clone()).pow_nat(e - k);
            if !coeff.is_zero() {
                let mut exp = MultiIndex::zeros(nvars);
                exp.set(j, k);
                terms.insert(exp, coeff);
            }
            binom = binom * F::from_i64((e - k) as i64) / F::from_i64(k as i64 + 1);
        }
        SparsePoly { nvars, terms }
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, summing repeats.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, F)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.dim() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.dim(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: MultiIndex, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &MultiIndex) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    /// `deg_{w_j}`; `None` stands for minus infinity (zero polynomial).
    pub fn degree_in(&self, j: usize) -> Option<u32> {
        self.terms.keys().map(|e| e.get(j)).max()
    }

    /// Smallest exponent of `w_j` over stored terms.
    pub fn min_degree_in(&self, j: usize) -> Option<u32> {
        self.terms.keys().map(|e| e.get(j)).min()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.norm()).max()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v.clone() * c.clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to `w_var`.
    pub fn derivative(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange {
                var,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.get(var);
            if k == 0 {
                continue;
            }
            let mut d = e.clone();
            d.set(var, k - 1);
            out.add_term(d, c.clone() * F::from_i64(k as i64));
        }
        Ok(out)
    }

    fn check_point(&self, point: &[F]) -> Result<()> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        Ok(())
    }

    /// Evaluates with a table of coordinate powers; exact in exact mode.
    pub fn eval(&self, point: &[F]) -> Result<F> {
        self.check_point(point)?;
        let mut powers: Vec<Vec<F>> = Vec::with_capacity(self.nvars);
        for j in 0..self.nvars {
            let d = self.degree_in(j).unwrap_or(0) as usize;
            let mut row = Vec::with_capacity(d + 1);
            row.push(F::one());
            for k in 1..=d {
                let next = row[k - 1].clone() * point[j].clone();
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (j, &k) in e.as_slice().iter().enumerate() {
                if k > 0 {
                    term = term * powers[j][k as usize].clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Returns `p^(u) = p(center + u)`.
    pub fn shift(&self, center: &[F]) -> Result<Self> {
        self.check_point(center)?;
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            // prod_j (c_j + u_j)^{e_j} expanded, times the coefficient
            let mut partial: Vec<(MultiIndex, F)> = vec![(MultiIndex::zeros(self.nvars), c.clone())];
            for (j, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let row = binomial_row(&center[j], k);
                let mut next = Vec::with_capacity(partial.len() * row.len());
                for (pe, pc) in &partial {
                    for (d, rc) in row.iter().enumerate() {
                        if rc.is_zero() {
                            continue;
                        }
                        let mut ne = pe.clone();
                        ne.set(j, d as u32);
                        next.push((ne, pc.clone() * rc.clone()));
                    }
                }
                partial = next;
            }
            for (ne, nc) in partial {
                out.add_term(ne, nc);
            }
        }
        Ok(out)
    }

    /// Substitutes `w -> w^-1` and multiplies by `w^shift_by`; every stored
    /// exponent must be `<= shift_by` componentwise.
    pub fn reciprocal_shift(&self, shift_by: &MultiIndex) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let ne = shift_by.checked_sub(e)?;
            out.add_term(ne, c.clone());
        }
        Some(out)
    }

    pub fn map_coeffs<G: Scalar>(&self, f: impl Fn(&F) -> G) -> SparsePoly<G> {
        let mut out = SparsePoly::<G>::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn to_float(&self) -> SparsePoly<crate::scalar::Float> {
        self.map_coeffs(|c| c.to_c64())
    }
}

/// Coefficients of `(c + u)^k` in powers of `u`.
fn binomial_row<F: Scalar>(c: &F, k: u32) -> Vec<F> {
    let mut cpow = Vec::with_capacity(k as usize + 1);
    cpow.push(F::one());
    for i in 1..=k as usize {
        let next = cpow[i - 1].clone() * c.clone();
        cpow.push(next);
    }
    let mut out = Vec::with_capacity(k as usize + 1);
    let mut binom: u128 = 1;
    for d in 0..=k {
        out.push(F::from_i64(binom as i64) * cpow[(k - d) as usize].clone());
        binom = binom * (k - d) as u128 / (d + 1) as u128;
    }
    out
}

/// Determinant of the Jacobian matrix `(d p_i / d w_j)`, expanded.
pub fn jacobian_det<F: Scalar>(polys: &[SparsePoly<F>]) -> Result<SparsePoly<F>> {
    let n = polys.len();
    for p in polys {
        if p.nvars() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.nvars(),
            });
        }
    }
    let mut jac: Vec<Vec<SparsePoly<F>>> = Vec::with_capacity(n);
    for p in polys {
        let row = (0..n).map(|j| p.derivative(j)).collect::<Result<Vec<_>>>()?;
        jac.push(row);
    }
    Ok(determinant(&jac, n))
}

/// Leibniz expansion; the matrices here are at most a handful of rows.
pub(crate) fn determinant<F: Scalar>(mat: &[Vec<SparsePoly<F>>], nvars: usize) -> SparsePoly<F> {
    let n = mat.len();
    let mut acc = SparsePoly::zero(nvars);
    for perm in Permutation::all(n) {
        let mut term = SparsePoly::one(nvars);
        for (i, row) in mat.iter().enumerate() {
            term = &term * &row[perm.image(i)];
            if term.is_zero() {
                break;
            }
        }
        if term.is_zero() {
            continue;
        }
        acc = if perm.sign() > 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

impl<F: Scalar> Add for &SparsePoly<F> {
    type Output = SparsePoly<F>;
    fn add(self, rhs: &SparsePoly<F>) -> SparsePoly<F> {
        self.checked_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl<F: Scalar> Sub for &SparsePoly<F> {
    type Output = SparsePoly<F>;
    fn sub(self, rhs: &SparsePoly<F>) -> SparsePoly<F> {
        self.checked_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl<F: Scalar> Mul for &SparsePoly<F> {
    type Output = SparsePoly<F>;
    fn mul(self, rhs: &SparsePoly<F>) -> SparsePoly<F> {
        self.checked_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl<F: Scalar> Neg for &SparsePoly<F> {
    type Output = SparsePoly<F>;
    fn neg(self) -> SparsePoly<F> {
        self.scale(&-F::one())
    }
}

impl<F: fmt::Debug> fmt::Debug for SparsePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c:?}*w^{e}")?;
        }
        Ok(())
    }
}
