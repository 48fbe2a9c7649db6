//! Tsikh-class systems `f_i = q_i + t Q_i`, their hypotheses, the reciprocal
//! transform `z = 1/w`, and the lattice roots of the unperturbed system.
//!
//! Here `q_i(z) = prod_j (1 - a_ij z_j)^m_ij` and every `Q_i` is divisible by
//! `z_1 ... z_n`. After the transform, equation `i` reads
//! `q~_i(w) + t Q~_i(w)` with `q~_i = prod_j (w_j - a_ij)^mhat_ij`.

use std::fmt;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::permutation::Permutation;
use crate::poly::{jacobian_det, SparsePoly};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct TsikhSystem<F> {
    n: usize,
    a: Vec<Vec<F>>,
    m: Vec<Vec<u32>>,
    perturbations: Vec<SparsePoly<F>>,
    t: F,
}

/// A violated hypothesis, with zero-based equation/variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `a_ij == a_kj` for `i != k`.
    ColumnNotDistinct { column: usize, rows: (usize, usize) },
    /// Some term of `Q_i` is not divisible by `z_1 ... z_n`.
    NotDivisible { equation: usize, exponent: String },
    /// `deg_{z_j} Q_i > m_ij` although `a_ij != 0`.
    DegreeBound {
        equation: usize,
        variable: usize,
        degree: u32,
        bound: u32,
    },
    /// `a_ij = 0` while `Q_i = 0`: the roots would not be isolated.
    ZeroCoefficientWithoutPerturbation { equation: usize, variable: usize },
    /// `m_ij = 0` although `a_ij != 0`.
    ZeroMultiplicity { equation: usize, variable: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ColumnNotDistinct { column, rows } => write!(
                f,
                "column distinctness: a[{}][{}] == a[{}][{}]",
                rows.0 + 1,
                column + 1,
                rows.1 + 1,
                column + 1
            ),
            Violation::NotDivisible { equation, exponent } => write!(
                f,
                "divisibility: term z^{exponent} of Q[{}] is not divisible by z1...zn",
                equation + 1
            ),
            Violation::DegreeBound {
                equation,
                variable,
                degree,
                bound,
            } => write!(
                f,
                "degree bound: deg_z{} Q[{}] = {degree} > m[{}][{}] = {bound}",
                variable + 1,
                equation + 1,
                equation + 1,
                variable + 1
            ),
            Violation::ZeroCoefficientWithoutPerturbation { equation, variable } => write!(
                f,
                "isolated roots: a[{}][{}] = 0 but Q[{}] = 0",
                equation + 1,
                variable + 1,
                equation + 1
            ),
            Violation::ZeroMultiplicity { equation, variable } => write!(
                f,
                "positive multiplicity: m[{}][{}] = 0 with a[{}][{}] != 0",
                equation + 1,
                variable + 1,
                equation + 1,
                variable + 1
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("pass");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl<F: Scalar> TsikhSystem<F> {
    /// Checks shapes only; the analytic hypotheses are checked by [`Self::validate`].
    pub fn new(a: Vec<Vec<F>>, m: Vec<Vec<u32>>, perturbations: Vec<SparsePoly<F>>, t: F) -> Result<Self> {
        let n = a.len();
        let bad = |found: usize| Error::DimensionMismatch { expected: n, found };
        if let Some(row) = a.iter().find(|r| r.len() != n) {
            return Err(bad(row.len()));
        }
        if m.len() != n {
            return Err(bad(m.len()));
        }
        if let Some(row) = m.iter().find(|r| r.len() != n) {
            return Err(bad(row.len()));
        }
        if perturbations.len() != n {
            return Err(bad(perturbations.len()));
        }
        if let Some(p) = perturbations.iter().find(|p| p.nvars() != n) {
            return Err(bad(p.nvars()));
        }
        Ok(TsikhSystem {
            n,
            a,
            m,
            perturbations,
            t,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &[Vec<F>] {
        &self.a
    }

    pub fn m(&self) -> &[Vec<u32>] {
        &self.m
    }

    pub fn perturbations(&self) -> &[SparsePoly<F>] {
        &self.perturbations
    }

    pub fn t(&self) -> &F {
        &self.t
    }

    pub fn with_t(&self, t: F) -> Self {
        TsikhSystem { t, ..self.clone() }
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.n;
        let mut violations = Vec::new();
        for j in 0..n {
            for i in 0..n {
                for k in i + 1..n {
                    if self.a[i][j] == self.a[k][j] {
                        violations.push(Violation::ColumnNotDistinct { column: j, rows: (i, k) });
                    }
                }
            }
        }
        for (i, q) in self.perturbations.iter().enumerate() {
            for (e, _) in q.terms() {
                if e.as_slice().iter().any(|&x| x == 0) {
                    violations.push(Violation::NotDivisible {
                        equation: i,
                        exponent: e.to_string(),
                    });
                }
            }
            for j in 0..n {
                if self.a[i][j].is_zero() {
                    if q.is_zero() {
                        violations.push(Violation::ZeroCoefficientWithoutPerturbation { equation: i, variable: j });
                    }
                    continue;
                }
                if self.m[i][j] == 0 {
                    violations.push(Violation::ZeroMultiplicity { equation: i, variable: j });
                }
                if let Some(d) = q.degree_in(j) {
                    if d > self.m[i][j] {
                        violations.push(Violation::DegreeBound {
                            equation: i,
                            variable: j,
                            degree: d,
                            bound: self.m[i][j],
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidSystem(report))
        }
    }

    /// `mhat_ij = m_ij` when `a_ij != 0`, else `deg_{z_j} Q_i`.
    pub fn effective_degrees(&self) -> Vec<Vec<u32>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        if self.a[i][j].is_zero() {
                            self.perturbations[i].degree_in(j).unwrap_or(0)
                        } else {
                            self.m[i][j]
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `q_i(z) = prod_j (1 - a_ij z_j)^m_ij`.
    pub fn unperturbed(&self, i: usize) -> SparsePoly<F> {
        let n = self.n;
        let mut p = SparsePoly::one(n);
        for j in 0..n {
            if self.a[i][j].is_zero() || self.m[i][j] == 0 {
                continue;
            }
            // (1 - a z)^m = (-a)^m (z - 1/a)^m
            let root = F::one() / self.a[i][j].clone();
            let lead = (-self.a[i][j].clone()).pow_nat(self.m[i][j]);
            p = &p * &SparsePoly::linear_power(n, j, &root, self.m[i][j]).scale(&lead);
        }
        p
    }

    /// The deflated product `q_i[j] = q_i / (1 - a_ij z_j)^m_ij`.
    pub(crate) fn unperturbed_without(&self, i: usize, skip: usize) -> SparsePoly<F> {
        let n = self.n;
        let mut p = SparsePoly::one(n);
        for j in 0..n {
            if j == skip || self.a[i][j].is_zero() || self.m[i][j] == 0 {
                continue;
            }
            let root = F::one() / self.a[i][j].clone();
            let lead = (-self.a[i][j].clone()).pow_nat(self.m[i][j]);
            p = &p * &SparsePoly::linear_power(n, j, &root, self.m[i][j]).scale(&lead);
        }
        p
    }

    /// `F_i(z, t) = q_i + t Q_i` at the system's own `t`.
    pub fn equation(&self, i: usize) -> SparsePoly<F> {
        &self.unperturbed(i) + &self.perturbations[i].scale(&self.t)
    }

    pub fn transform(&self) -> Result<TransformedSystem<F>> {
        self.ensure_valid()?;
        let n = self.n;
        let mhat = self.effective_degrees();
        let mut qtilde = Vec::with_capacity(n);
        let mut qtilde_pert = Vec::with_capacity(n);
        for i in 0..n {
            let mut p = SparsePoly::one(n);
            for j in 0..n {
                p = &p * &SparsePoly::linear_power(n, j, &self.a[i][j], mhat[i][j]);
            }
            qtilde.push(p);
            let shift = MultiIndex::from_slice(&mhat[i]);
            let qp = self.perturbations[i]
                .reciprocal_shift(&shift)
                .expect("validated degrees fit inside mhat");
            qtilde_pert.push(qp);
        }
        Ok(TransformedSystem {
            n,
            a: self.a.clone(),
            mhat,
            qtilde,
            qtilde_pert,
            t: self.t.clone(),
        })
    }
}

/// The system `q~_i(w) + t Q~_i(w)` obtained by `z_j = 1/w_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformedSystem<F> {
    n: usize,
    a: Vec<Vec<F>>,
    mhat: Vec<Vec<u32>>,
    qtilde: Vec<SparsePoly<F>>,
    qtilde_pert: Vec<SparsePoly<F>>,
    t: F,
}

/// Common zero `a_J` of the unperturbed transformed system.
///
/// For the permutation `J: i -> j_i`, equation `i` vanishes through its factor
/// in `w_{j_i}`, so coordinate `j_i` of the point is `a_{i, j_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeRoot<F> {
    pub perm: Permutation,
    pub point: Vec<F>,
    pub sign: i32,
    pub multiplicity: u64,
}

impl<F: Scalar> TransformedSystem<F> {
    /// Assembles a transformed system directly; used for oracle fixtures
    /// that are not produced by [`TsikhSystem::transform`].
    pub fn from_parts(
        a: Vec<Vec<F>>,
        mhat: Vec<Vec<u32>>,
        qtilde: Vec<SparsePoly<F>>,
        qtilde_pert: Vec<SparsePoly<F>>,
        t: F,
    ) -> Result<Self> {
        let n = qtilde.len();
        if a.len() != n || mhat.len() != n || qtilde_pert.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.len().min(mhat.len()).min(qtilde_pert.len()),
            });
        }
        Ok(TransformedSystem {
            n,
            a,
            mhat,
            qtilde,
            qtilde_pert,
            t,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &[Vec<F>] {
        &self.a
    }

    pub fn mhat(&self) -> &[Vec<u32>] {
        &self.mhat
    }

    pub fn qtilde(&self) -> &[SparsePoly<F>] {
        &self.qtilde
    }

    /// The transformed perturbations `Q~_i`.
    pub fn qtilde_pert(&self) -> &[SparsePoly<F>] {
        &self.qtilde_pert
    }

    pub fn t(&self) -> &F {
        &self.t
    }

    pub fn with_t(&self, t: F) -> Self {
        TransformedSystem { t, ..self.clone() }
    }

    /// `F~_i = q~_i + t Q~_i`.
    pub fn equation(&self, i: usize) -> SparsePoly<F> {
        &self.qtilde[i] + &self.qtilde_pert[i].scale(&self.t)
    }

    pub fn equations(&self) -> Vec<SparsePoly<F>> {
        (0..self.n).map(|i| self.equation(i)).collect()
    }

    /// Jacobian determinant of the `F~_i` at the system's `t`.
    pub fn jacobian(&self) -> SparsePoly<F> {
        jacobian_det(&self.equations()).expect("square system")
    }

    /// `q~_i[j] = q~_i / (w_j - a_ij)^mhat_ij`.
    pub fn deflated(&self, i: usize, skip: usize) -> SparsePoly<F> {
        let mut p = SparsePoly::one(self.n);
        for j in 0..self.n {
            if j != skip {
                p = &p * &SparsePoly::linear_power(self.n, j, &self.a[i][j], self.mhat[i][j]);
            }
        }
        p
    }

    pub fn lattice_root(&self, perm: &Permutation) -> LatticeRoot<F> {
        let mut point = vec![F::zero(); self.n];
        let mut multiplicity = 1u64;
        for i in 0..self.n {
            let j = perm.image(i);
            point[j] = self.a[i][j].clone();
            multiplicity *= self.mhat[i][j] as u64;
        }
        LatticeRoot {
            perm: perm.clone(),
            point,
            sign: perm.sign(),
            multiplicity,
        }
    }

    /// One root per permutation, in lexicographic permutation order.
    pub fn lattice_roots(&self) -> Vec<LatticeRoot<F>> {
        Permutation::all(self.n)
            .iter()
            .map(|p| self.lattice_root(p))
            .collect()
    }

    pub fn permanent(&self) -> u64 {
        let mat: Vec<Vec<u64>> = self
            .mhat
            .iter()
            .map(|r| r.iter().map(|&x| x as u64).collect())
            .collect();
        permanent(&mat)
    }
}

/// Matrix permanent by Ryser's inclusion-exclusion formula.
pub fn permanent(mat: &[Vec<u64>]) -> u64 {
    let n = mat.len();
    if n == 0 {
        return 1;
    }
    assert!(mat.iter().all(|r| r.len() == n), "permanent needs a square matrix");
    let mut total: i128 = 0;
    for subset in 1u64..(1u64 << n) {
        let mut prod: i128 = 1;
        for row in mat {
            let s: i128 = (0..n)
                .filter(|&j| subset >> j & 1 == 1)
                .map(|j| row[j] as i128)
                .sum();
            prod *= s;
            if prod == 0 {
                break;
            }
        }
        let size = subset.count_ones() as usize;
        if (n - size) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total as u64
}
