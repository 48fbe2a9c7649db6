//! Systems given as infinite products of Tsikh-class factors.
//!
//! If `f_i = prod_s f_{i,s}`, the roots of `(f_1, ..., f_n)` are the union of
//! the roots of the subsystems `(f_{1,s_1}, ..., f_{n,s_n})`, so a power sum is
//! the sum of the subsystem power sums over all `s >= 1`. This module sums
//! that series over growing shells and reports how it converges.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::SparsePoly;
use crate::scalar::{pairwise_sum, Float};
use crate::system::TsikhSystem;
use crate::waring::{power_sum, PowerSumRequest};

pub trait FactorFamily: Sync {
    fn n(&self) -> usize;

    /// The subsystem whose `i`-th equation is the `s_i`-th factor of `f_i`.
    fn factor_system(&self, s: &MultiIndex) -> Result<TsikhSystem<Float>>;
}

fn check_factor_index(s: &MultiIndex, n: usize) -> Result<()> {
    if s.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.dim(),
        });
    }
    if s.as_slice().iter().any(|&x| x == 0) {
        return Err(Error::Unsupported(format!("factor indices start at 1, got {s}")));
    }
    Ok(())
}

/// Factors `(1 - a2 z2/(k pi)^2)^2 + a3 z1 z2^2/(k pi)^2` and
/// `(1 - b1 z1/(m pi)^2)^2 (1 - b2 z2/(m pi)^2) + b3 z1^2 z2/(m pi)^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Example2Family {
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl FactorFamily for Example2Family {
    fn n(&self) -> usize {
        2
    }

    fn factor_system(&self, s: &MultiIndex) -> Result<TsikhSystem<Float>> {
        check_factor_index(s, 2)?;
        let c = |x: f64| Complex64::new(x, 0.0);
        let ka = 1.0 / (s.get(0) as f64 * PI).powi(2);
        let kb = 1.0 / (s.get(1) as f64 * PI).powi(2);
        TsikhSystem::new(
            vec![vec![c(0.0), c(self.a2 * ka)], vec![c(self.b1 * kb), c(self.b2 * kb)]],
            vec![vec![0, 2], vec![2, 1]],
            vec![
                SparsePoly::monomial(MultiIndex::from_slice(&[1, 2]), c(self.a3 * ka)),
                SparsePoly::monomial(MultiIndex::from_slice(&[2, 1]), c(self.b3 * kb)),
            ],
            c(1.0),
        )
    }
}

/// How factor indices are grouped into shells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shells {
    /// Shell `l` holds the `s <= s_max` with `max_j s_j = l`.
    Rectangle,
    /// Shell `l` holds the `s` with `sum_j (s_j - 1) = l - 1`.
    Triangle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesJob {
    pub gamma: MultiIndex,
    /// Per-dimension truncation bound (rectangle) or the last shell (triangle, first entry).
    pub s_max: Vec<u32>,
    pub shells: Shells,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShellRecord {
    pub level: u32,
    pub contribution: Complex64,
    pub lattice_contribution: Complex64,
    /// Partial sums through this shell.
    pub partial: Complex64,
    pub lattice_partial: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailEstimate {
    pub last_shell: f64,
    /// `p` in `|shell_l| ~ l^{-p}`, fitted on the last half of the shells.
    pub decay_exponent: Option<f64>,
    /// `|shell_S| S / (p - 1)`; infinite when `p <= 1`.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    /// The sum of the subsystem values at `t = 0`.
    pub lattice_value: Complex64,
    /// `value - lattice_value`.
    pub perturbation_value: Complex64,
    pub shells: Vec<ShellRecord>,
    pub tail: TailEstimate,
    pub lattice_tail: TailEstimate,
    pub subsystems: u64,
}

/// Appends every `prefix ++ rest` with `rest_j` in `lo[j]..=hi[j]`, in lexicographic order.
fn push_box(prefix: &mut Vec<u32>, lo: &[u32], hi: &[u32], out: &mut Vec<MultiIndex>) {
    let k = prefix.len();
    if k == lo.len() {
        out.push(MultiIndex::from_slice(prefix));
        return;
    }
    for v in lo[k]..=hi[k] {
        prefix.push(v);
        push_box(prefix, lo, hi, out);
        prefix.pop();
    }
}

/// Appends the `prefix ++ rest` with `rest_j >= 1` and `sum rest = total`, in lexicographic order.
fn push_compositions(prefix: &mut Vec<u32>, n: usize, total: u32, out: &mut Vec<MultiIndex>) {
    let left = n - prefix.len();
    if left == 1 {
        prefix.push(total);
        out.push(MultiIndex::from_slice(prefix));
        prefix.pop();
        return;
    }
    for v in 1..=total.saturating_sub(left as u32 - 1) {
        prefix.push(v);
        push_compositions(prefix, n, total - v, out);
        prefix.pop();
    }
}

fn shell_members(job: &SeriesJob, n: usize, level: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    match job.shells {
        Shells::Rectangle => {
            // split by the first coordinate that reaches the level
            for first in 0..n {
                if job.s_max[first] < level {
                    continue;
                }
                let mut lo = vec![1; n];
                lo[first] = level;
                let hi: Vec<u32> = (0..n)
                    .map(|j| match j.cmp(&first) {
                        Ordering::Less => (level - 1).min(job.s_max[j]),
                        Ordering::Equal => level,
                        Ordering::Greater => level.min(job.s_max[j]),
                    })
                    .collect();
                if (0..n).all(|j| lo[j] <= hi[j]) {
                    push_box(&mut Vec::with_capacity(n), &lo, &hi, &mut out);
                }
            }
            out.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        }
        Shells::Triangle => push_compositions(&mut Vec::with_capacity(n), n, level + n as u32 - 1, &mut out),
    }
    out
}

fn tail_estimate(contribs: &[f64]) -> TailEstimate {
    let s = contribs.len();
    let last = contribs.last().copied().unwrap_or(0.0);
    if s < 4 || last == 0.0 {
        return TailEstimate {
            last_shell: last,
            decay_exponent: None,
            bound: if last == 0.0 { 0.0 } else { f64::INFINITY },
        };
    }
    let half = contribs[s / 2 - 1];
    let p = (half / last).ln() / ((s as f64) / (s / 2) as f64).ln();
    let bound = if p > 1.0 { last * s as f64 / (p - 1.0) } else { f64::INFINITY };
    TailEstimate {
        last_shell: last,
        decay_exponent: Some(p),
        bound,
    }
}

/// Sums `sigma_{gamma+I}` of all subsystems shell by shell.
pub fn truncated_sigma<Fam: FactorFamily>(family: &Fam, job: &SeriesJob) -> Result<SeriesResult> {
    let n = family.n();
    if job.gamma.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: job.gamma.dim(),
        });
    }
    let levels = match job.shells {
        Shells::Rectangle => {
            if job.s_max.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: job.s_max.len(),
                });
            }
            job.s_max.iter().copied().max().unwrap_or(0)
        }
        Shells::Triangle => job.s_max.first().copied().unwrap_or(0),
    };
    if job.s_max.iter().any(|&x| x == 0) {
        return Err(Error::Unsupported("truncation bounds start at 1".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut shells = Vec::with_capacity(levels as usize);
    let mut partial = Complex64::new(0.0, 0.0);
    let mut lattice_partial = Complex64::new(0.0, 0.0);
    let mut subsystems = 0u64;
    for level in 1..=levels {
        let members = shell_members(job, n, level);
        subsystems += members.len() as u64;
        let values: Vec<(Complex64, Complex64)> = members
            .par_iter()
            .map(|s| {
                let sys = family.factor_system(s)?;
                let r = power_sum(&sys, &PowerSumRequest::new(job.gamma.clone(), one))?;
                Ok((r.value, r.lattice_value))
            })
            .collect::<Result<_>>()?;
        let (v, l): (Vec<Complex64>, Vec<Complex64>) = values.into_iter().unzip();
        let contribution = pairwise_sum(&v);
        let lattice_contribution = pairwise_sum(&l);
        partial += contribution;
        lattice_partial += lattice_contribution;
        shells.push(ShellRecord {
            level,
            contribution,
            lattice_contribution,
            partial,
            lattice_partial,
        });
    }
    let mags: Vec<f64> = shells.iter().map(|s| s.contribution.norm()).collect();
    let lmags: Vec<f64> = shells.iter().map(|s| s.lattice_contribution.norm()).collect();
    Ok(SeriesResult {
        value: partial,
        lattice_value: lattice_partial,
        perturbation_value: partial - lattice_partial,
        tail: tail_estimate(&mags),
        lattice_tail: tail_estimate(&lmags),
        shells,
        subsystems,
    })
}

/// Reference values of the Example-2 decomposition
/// `sigma = lattice + k4 + coth + sinh`.
#[derive(Clone, Debug, PartialEq)]
pub struct Example2Reference {
    /// `a2 b1 / 9`.
    pub lattice: f64,
    /// `a3 pi^2 / (180 b2)`.
    pub k4_closed: f64,
    /// `sum_k a3 / (2 pi^2 b2 k^4)` summed directly.
    pub k4_direct: f64,
    pub coth: f64,
    pub sinh: f64,
    pub total: f64,
    /// Estimated truncation error of `coth + sinh + k4_direct`.
    pub tail_bound: f64,
    pub terms: u64,
}

/// `sum_{k > K} k^{-3}` by Euler-Maclaurin.
fn zeta3_tail(k: f64) -> f64 {
    1.0 / (2.0 * k * k) - 1.0 / (2.0 * k.powi(3)) + 1.0 / (4.0 * k.powi(4)) - 1.0 / (12.0 * k.powi(6))
}

/// Requires `a2 b2 < 0`. Sums the inner series over `m` in closed form and the
/// outer series over `k` directly to `terms` terms.
pub fn example2_reference(a2: f64, a3: f64, b1: f64, b2: f64, terms: u64) -> Result<Example2Reference> {
    if !(a2 * b2 < 0.0) {
        return Err(Error::Hypothesis(format!("a2 * b2 must be negative, got {}", a2 * b2)));
    }
    if terms == 0 {
        return Err(Error::Unsupported("at least one term is required".into()));
    }
    let ratio = (-b2 / a2).sqrt();
    let pref = a3 * b2 / (PI * PI * a2 * a2);
    let mut k4 = Vec::with_capacity(terms as usize);
    let mut coth = Vec::with_capacity(terms as usize);
    let mut sinh = Vec::with_capacity(terms as usize);
    for k in (1..=terms).rev() {
        let kf = k as f64;
        let c = kf * ratio;
        k4.push(a3 / (2.0 * PI * PI * b2 * kf.powi(4)));
        coth.push(-pref * PI / ((PI * c).tanh() * 4.0 * c.powi(3)));
        sinh.push(-pref * PI * PI / (4.0 * c * c * (PI * c).sinh().powi(2)));
    }
    let sum = |v: &[f64]| pairwise_sum(&v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>()).re;
    let kt = terms as f64;
    // the coth summand tends to -pref pi / (4 ratio^3 k^3)
    let coth_tail = -pref * PI / (4.0 * ratio.powi(3)) * zeta3_tail(kt);
    let k4_tail = a3 / (2.0 * PI * PI * b2) / (3.0 * kt.powi(3));
    let lattice = a2 * b1 / 9.0;
    let k4_closed = a3 * PI * PI / (180.0 * b2);
    let coth_v = sum(&coth) + coth_tail;
    let sinh_v = sum(&sinh);
    let tail_bound = (coth_tail.abs() / kt) + k4_tail.abs() + 1e-15 * coth_v.abs().max(1.0);
    Ok(Example2Reference {
        lattice,
        k4_closed,
        k4_direct: sum(&k4),
        coth: coth_v,
        sinh: sinh_v,
        total: lattice + k4_closed + coth_v + sinh_v,
        tail_bound,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT: Example2Family = Example2Family {
        a2: 1.0,
        a3: 1.0,
        b1: 1.0,
        b2: -1.0,
        b3: 1.0,
    };

    fn closed_form(a2: f64, a3: f64, b1: f64, b2: f64) -> f64 {
        4.0 * a2 * b1 - a3 * b2 / (b2 - a2).powi(2)
    }

    #[test]
    fn factor_systems_validate() {
        let sys = UNIT.factor_system(&MultiIndex::from_slice(&[3, 5])).unwrap();
        assert!(sys.validate().is_valid());
        assert!(UNIT.factor_system(&MultiIndex::from_slice(&[0, 1])).is_err());
    }

    #[test]
    fn first_factor_is_rescaled_example_one() {
        let sys = UNIT.factor_system(&MultiIndex::from_slice(&[1, 1])).unwrap();
        let r = power_sum(&sys, &PowerSumRequest::new(MultiIndex::zeros(2), Complex64::new(1.0, 0.0))).unwrap();
        let p2 = PI * PI;
        let expect = closed_form(1.0 / p2, 1.0 / p2, 1.0 / p2, -1.0 / p2);
        assert!((r.value.re - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn single_shell() {
        let job = SeriesJob {
            gamma: MultiIndex::zeros(2),
            s_max: vec![1, 1],
            shells: Shells::Rectangle,
        };
        let r = truncated_sigma(&UNIT, &job).unwrap();
        let sys = UNIT.factor_system(&MultiIndex::from_slice(&[1, 1])).unwrap();
        let v = power_sum(&sys, &PowerSumRequest::new(MultiIndex::zeros(2), Complex64::new(1.0, 0.0))).unwrap();
        assert_eq!(r.value, v.value);
        assert_eq!(r.subsystems, 1);
    }

    #[test]
    fn shell_enumeration() {
        let job = SeriesJob {
            gamma: MultiIndex::zeros(2),
            s_max: vec![3, 2],
            shells: Shells::Rectangle,
        };
        let counts: Vec<usize> = (1..=3).map(|l| shell_members(&job, 2, l).len()).collect();
        assert_eq!(counts, vec![1, 3, 2]);
        let tri = SeriesJob {
            shells: Shells::Triangle,
            ..job
        };
        let counts: Vec<usize> = (1..=3).map(|l| shell_members(&tri, 2, l).len()).collect();
        assert_eq!(counts, vec![1, 2, 3]);
    }

    #[test]
    fn shells_match_brute_force() {
        let job = SeriesJob {
            gamma: MultiIndex::zeros(3),
            s_max: vec![4, 2, 5],
            shells: Shells::Rectangle,
        };
        let tri = SeriesJob {
            shells: Shells::Triangle,
            ..job.clone()
        };
        for level in 1..=6 {
            let mut rect = Vec::new();
            let mut simplex = Vec::new();
            for d in MultiIndex::from_slice(&[5, 5, 5]).box_iter() {
                let s = MultiIndex::new(d.as_slice().iter().map(|x| x + 1));
                if s.le_all(&MultiIndex::from_slice(&job.s_max)) && s.max_component() == level {
                    rect.push(s.clone());
                }
                if d.norm() == (level - 1) as u64 {
                    simplex.push(s);
                }
            }
            assert_eq!(shell_members(&job, 3, level), rect, "rectangle level {level}");
            assert_eq!(shell_members(&tri, 3, level), simplex, "triangle level {level}");
        }
    }

    #[test]
    fn reference_values() {
        let r = example2_reference(1.0, 1.0, 1.0, -1.0, 2000).unwrap();
        assert!((r.k4_closed + PI * PI / 180.0).abs() < 1e-15);
        assert!((r.k4_direct - r.k4_closed).abs() < 1e-10);
        assert!((r.lattice - 1.0 / 9.0).abs() < 1e-16);
        assert!(example2_reference(1.0, 1.0, 1.0, 1.0, 10).is_err());
    }

    #[test]
    fn first_coth_term() {
        let r = example2_reference(1.0, 1.0, 1.0, -1.0, 1).unwrap();
        let first = 1.0 / (PI.tanh() * 4.0 * PI);
        assert!((first - 0.079875).abs() < 1e-6);
        assert!((r.coth - (first + zeta3_tail(1.0) / (4.0 * PI))).abs() < 1e-15);
    }

    #[test]
    fn inner_sum_identity() {
        // sum_m 1/(m^2 + a^2)^2 against its coth/sinh closed form, a = 1
        let direct: f64 = (1..=1_000_000u64).rev().map(|m| 1.0 / ((m * m) as f64 + 1.0).powi(2)).sum();
        let closed = -0.5 + PI / (4.0 * PI.tanh()) + PI * PI / (4.0 * PI.sinh().powi(2));
        assert!((direct - closed).abs() < 1e-12, "{direct} {closed}");
    }

    #[test]
    fn rectangle_and_triangle_agree_on_lattice_part() {
        let gamma = MultiIndex::zeros(2);
        let rect = truncated_sigma(&UNIT, &SeriesJob { gamma: gamma.clone(), s_max: vec![60, 60], shells: Shells::Rectangle }).unwrap();
        let tri = truncated_sigma(&UNIT, &SeriesJob { gamma, s_max: vec![120], shells: Shells::Triangle }).unwrap();
        let gap = (rect.lattice_value - tri.lattice_value).norm();
        assert!(gap <= rect.lattice_tail.bound + tri.lattice_tail.bound, "{gap} {:?} {:?}", rect.lattice_tail, tri.lattice_tail);
    }
}
