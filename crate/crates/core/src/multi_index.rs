use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Tuple of nonnegative exponents.
///
/// Ordered graded-lexicographically: first by dimension, then by total degree,
/// then lexicographically by exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(exps: impl IntoIterator<Item = u32>) -> Self {
        MultiIndex(exps.into_iter().collect())
    }

    pub fn from_slice(exps: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(exps))
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    /// The all-ones index `I`.
    pub fn ones(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(1, n))
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.0[j] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn set(&mut self, j: usize, v: u32) {
        self.0[j] = v;
    }

    pub fn norm(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn max_component(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Componentwise `self <= other`.
    pub fn le_all(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if !other.le_all(self) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// `prod_j exps_j!`
    pub fn factorial(&self) -> u128 {
        self.0
            .iter()
            .map(|&e| (1..=e as u128).product::<u128>())
            .product()
    }

    /// All indices with total degree at most `max_norm`, in graded-lex order.
    pub fn graded_up_to(n: usize, max_norm: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(j: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if j == cur.len() {
                out.push(MultiIndex::from_slice(cur));
                return;
            }
            for e in 0..=left {
                cur[j] = e;
                rec(j + 1, left - e, cur, out);
            }
            cur[j] = 0;
        }
        if n == 0 {
            return vec![MultiIndex::zeros(0)];
        }
        rec(0, max_norm, &mut cur, &mut out);
        out.sort();
        out
    }

    /// All indices `delta <= self` componentwise, row-major (last variable fastest).
    pub fn box_iter(&self) -> BoxIter {
        BoxIter {
            limit: self.clone(),
            cur: MultiIndex::zeros(self.dim()),
            done: false,
        }
    }
}

pub struct BoxIter {
    limit: MultiIndex,
    cur: MultiIndex,
    done: bool,
}

impl Iterator for BoxIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let mut j = self.limit.dim();
        loop {
            if j == 0 {
                self.done = true;
                break;
            }
            j -= 1;
            if self.cur.0[j] < self.limit.0[j] {
                self.cur.0[j] += 1;
                break;
            }
            self.cur.0[j] = 0;
        }
        Some(out)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.norm().cmp(&other.norm()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(SmallVec::from_vec(v))
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        MultiIndex::from_slice(v)
    }
}
