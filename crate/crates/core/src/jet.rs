//! Truncated multivariate Taylor expansions ("jets") at a point.
//!
//! A jet stores the coefficients `c_delta` of `sum_delta c_delta u^delta` for
//! every `delta <= order` componentwise, where `u = w - center`. The
//! coefficient at `delta` equals `(1/delta!) d^delta f(center)`, so extracting a
//! coefficient is the same as evaluating a scaled mixed partial derivative.
//!
//! Orders are anisotropic boxes rather than total degrees: the derivative
//! orders needed by the engine differ a lot between variables.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::SparsePoly;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<F> {
    order: MultiIndex,
    center: Vec<F>,
    strides: Vec<usize>,
    coeffs: Vec<F>,
}

/// Row-major coordinates of every index in the order box, flattened.
/// Advances `cur` through the box `0..=limit` in row-major order; false once exhausted.
fn advance(cur: &mut [u32], limit: &[u32]) -> bool {
    for j in (0..cur.len()).rev() {
        if cur[j] < limit[j] {
            cur[j] += 1;
            return true;
        }
        cur[j] = 0;
    }
    false
}

fn coordinates(order: &MultiIndex) -> Vec<u32> {
    let limit = order.as_slice();
    let size: usize = limit.iter().map(|&x| x as usize + 1).product();
    let mut out = Vec::with_capacity(size * limit.len());
    let mut cur = vec![0u32; limit.len()];
    loop {
        out.extend_from_slice(&cur);
        if !advance(&mut cur, limit) {
            return out;
        }
    }
}

fn flat(e: &[u32], strides: &[usize]) -> usize {
    e.iter().zip(strides).map(|(&x, &s)| x as usize * s).sum()
}

fn strides_for(order: &MultiIndex) -> (Vec<usize>, usize) {
    let n = order.dim();
    let mut strides = vec![1usize; n];
    let mut size = 1usize;
    for j in (0..n).rev() {
        strides[j] = size;
        size *= order.get(j) as usize + 1;
    }
    (strides, size)
}

impl<F: Scalar> Jet<F> {
    pub fn zero(center: Vec<F>, order: MultiIndex) -> Self {
        assert_eq!(center.len(), order.dim(), "jet center and order dimensions differ");
        let (strides, size) = strides_for(&order);
        Jet {
            order,
            center,
            strides,
            coeffs: vec![F::zero(); size],
        }
    }

    pub fn constant(center: Vec<F>, order: MultiIndex, c: F) -> Self {
        let mut j = Self::zero(center, order);
        j.coeffs[0] = c;
        j
    }

    /// Multiplicative identity.
    pub fn one(center: Vec<F>, order: MultiIndex) -> Self {
        Self::constant(center, order, F::one())
    }

    /// Taylor coefficients of `p` at `center` up to `order`.
    pub fn from_poly(p: &SparsePoly<F>, center: &[F], order: &MultiIndex) -> Result<Self> {
        let n = p.nvars();
        if center.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: center.len(),
            });
        }
        if order.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: order.dim(),
            });
        }
        let mut jet = Self::zero(center.to_vec(), order.clone());
        // per variable, row e holds C(e,d) c_j^(e-d) for d <= min(e, order_j)
        let mut rows: Vec<F> = Vec::new();
        let mut starts: Vec<SmallVec<[usize; 8]>> = Vec::with_capacity(n);
        for j in 0..n {
            let maxe = p.degree_in(j).unwrap_or(0);
            let mut cpow: SmallVec<[F; 8]> = SmallVec::new();
            cpow.push(F::one());
            for k in 1..=maxe as usize {
                let next = cpow[k - 1].clone() * center[j].clone();
                cpow.push(next);
            }
            let mut at = SmallVec::with_capacity(maxe as usize + 1);
            for e in 0..=maxe {
                at.push(rows.len());
                let mut binom: u128 = 1;
                for d in 0..=e.min(order.get(j)) {
                    rows.push(F::from_i64(binom as i64) * cpow[(e - d) as usize].clone());
                    binom = binom * (e - d) as u128 / (d + 1) as u128;
                }
            }
            starts.push(at);
        }
        for (e, c) in p.terms() {
            // tensor product of the per-variable rows, accumulated in place
            let exps = e.as_slice();
            let limits: SmallVec<[u32; 4]> = (0..n).map(|j| exps[j].min(order.get(j))).collect();
            let mut delta: SmallVec<[u32; 4]> = SmallVec::from_elem(0, n);
            loop {
                let mut v = c.clone();
                let mut idx = 0;
                for j in 0..n {
                    let d = delta[j] as usize;
                    let r = &rows[starts[j][exps[j] as usize] + d];
                    if r.is_zero() {
                        v = F::zero();
                        break;
                    }
                    v = v * r.clone();
                    idx += d * jet.strides[j];
                }
                if !v.is_zero() {
                    jet.coeffs[idx] = jet.coeffs[idx].clone() + v;
                }
                if !advance(&mut delta, &limits) {
                    break;
                }
            }
        }
        Ok(jet)
    }

    pub fn order(&self) -> &MultiIndex {
        &self.order
    }

    pub fn center(&self) -> &[F] {
        &self.center
    }

    pub fn dim(&self) -> usize {
        self.order.dim()
    }

    fn index_of(&self, delta: &MultiIndex) -> usize {
        (0..self.dim())
            .map(|j| delta.get(j) as usize * self.strides[j])
            .sum()
    }

    /// Coefficient at `delta`, i.e. `(1/delta!) d^delta f(center)`.
    pub fn coefficient(&self, delta: &MultiIndex) -> Result<F> {
        if delta.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: delta.dim(),
            });
        }
        if !delta.le_all(&self.order) {
            return Err(Error::OrderExceeded {
                index: delta.to_string(),
                order: self.order.to_string(),
            });
        }
        Ok(self.coeffs[self.index_of(delta)].clone())
    }

    pub fn constant_term(&self) -> &F {
        &self.coeffs[0]
    }

    /// Restricts to a smaller order box.
    pub fn truncate(&self, order: &MultiIndex) -> Result<Self> {
        if !order.le_all(&self.order) {
            return Err(Error::OrderExceeded {
                index: order.to_string(),
                order: self.order.to_string(),
            });
        }
        if *order == self.order {
            return Ok(self.clone());
        }
        let mut out = Self::zero(self.center.clone(), order.clone());
        let lim = order.as_slice();
        let mut delta: SmallVec<[u32; 4]> = SmallVec::from_elem(0, lim.len());
        for k in 0..out.coeffs.len() {
            out.coeffs[k] = self.coeffs[flat(&delta, &self.strides)].clone();
            advance(&mut delta, lim);
        }
        Ok(out)
    }

    /// Truncated Cauchy product; the result carries the componentwise minimum order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if self.center != other.center {
            return Err(Error::CenterMismatch);
        }
        let order = self.order.meet(&other.order);
        let mut out = Self::zero(self.center.clone(), order.clone());
        let n = self.dim();
        let lim = order.as_slice();
        let mut ea: SmallVec<[u32; 4]> = SmallVec::from_elem(0, n);
        let mut eb: SmallVec<[u32; 4]> = SmallVec::from_elem(0, n);
        let mut lb: SmallVec<[u32; 4]> = SmallVec::from_elem(0, n);
        loop {
            let ca = &self.coeffs[flat(&ea, &self.strides)];
            if !ca.is_zero() {
                let base = flat(&ea, &out.strides);
                for j in 0..n {
                    lb[j] = lim[j] - ea[j];
                    eb[j] = 0;
                }
                loop {
                    let cb = &other.coeffs[flat(&eb, &other.strides)];
                    if !cb.is_zero() {
                        let idx = base + flat(&eb, &out.strides);
                        out.coeffs[idx] = out.coeffs[idx].clone() + ca.clone() * cb.clone();
                    }
                    if !advance(&mut eb, &lb) {
                        break;
                    }
                }
            }
            if !advance(&mut ea, lim) {
                break;
            }
        }
        Ok(out)
    }

    /// The single coefficient `delta` of `self * other`, without forming the product.
    pub fn mul_coefficient(&self, other: &Self, delta: &MultiIndex) -> Result<F> {
        if self.center != other.center {
            return Err(Error::CenterMismatch);
        }
        let order = self.order.meet(&other.order);
        if delta.dim() != self.dim() || !delta.le_all(&order) {
            return Err(Error::OrderExceeded {
                index: delta.to_string(),
                order: order.to_string(),
            });
        }
        let n = self.dim();
        let lim = delta.as_slice();
        let mut acc = F::zero();
        let mut ea: SmallVec<[u32; 4]> = SmallVec::from_elem(0, n);
        let mut rest: SmallVec<[u32; 4]> = SmallVec::from_elem(0, n);
        loop {
            let ca = &self.coeffs[flat(&ea, &self.strides)];
            if !ca.is_zero() {
                for j in 0..n {
                    rest[j] = lim[j] - ea[j];
                }
                let cb = &other.coeffs[flat(&rest, &other.strides)];
                if !cb.is_zero() {
                    acc = acc + ca.clone() * cb.clone();
                }
            }
            if !advance(&mut ea, lim) {
                break;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse by triangular recursion on the coefficients.
    pub fn invert(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].try_inv().ok_or(Error::NonUnitJet)?;
        let mut out = Self::zero(self.center.clone(), self.order.clone());
        out.coeffs[0] = inv0.clone();
        let n = self.dim();
        let table = coordinates(&self.order);
        let size = self.coeffs.len();
        // row-major order visits delta - eps before delta for every eps != 0
        for k in 1..size {
            let delta = &table[k * n..(k + 1) * n];
            let mut acc = F::zero();
            for ke in 1..=k {
                let eps = &table[ke * n..(ke + 1) * n];
                if (0..n).any(|j| eps[j] > delta[j]) {
                    continue;
                }
                let a = &self.coeffs[ke];
                if a.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * out.coeffs[k - ke].clone();
            }
            out.coeffs[k] = -(acc * inv0.clone());
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(self.center.clone(), self.order.clone());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.iter_mut() {
            *v = v.clone() * c.clone();
        }
        out
    }
}
