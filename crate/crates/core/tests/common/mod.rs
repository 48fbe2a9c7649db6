#![allow(dead_code)]

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use waring_core::{Exact, MultiIndex, Scalar, SparsePoly, TsikhSystem};

pub fn q(n: i64, d: i64) -> Exact {
    Exact::from_ratio(n, d)
}

pub fn idx(e: &[u32]) -> MultiIndex {
    MultiIndex::from_slice(e)
}

pub fn example_one(a2: Exact, a3: Exact, b1: Exact, b2: Exact, b3: Exact) -> TsikhSystem<Exact> {
    TsikhSystem::new(
        vec![vec![q(0, 1), a2], vec![b1, b2]],
        vec![vec![0, 2], vec![2, 1]],
        vec![
            SparsePoly::monomial(idx(&[1, 2]), a3),
            SparsePoly::monomial(idx(&[2, 1]), b3),
        ],
        q(1, 1),
    )
    .unwrap()
}

pub fn example_one_unit() -> TsikhSystem<Exact> {
    example_one(q(1, 1), q(1, 1), q(1, 1), q(-1, 1), q(1, 1))
}

pub fn example_one_closed_form(a2: &Exact, a3: &Exact, b1: &Exact, b2: &Exact) -> Exact {
    let d = b2.clone() - a2.clone();
    q(4, 1) * a2.clone() * b1.clone() - a3.clone() * b2.clone() / (d.clone() * d)
}

/// A nonzero rational `p/d` with `|p| <= num`, `1 <= d <= den`.
pub fn nonzero_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Exact {
    loop {
        let p = rng.gen_range(-num..=num);
        if p != 0 {
            return q(p, rng.gen_range(1..=den));
        }
    }
}

/// A random valid `n = 2` system with every effective degree in `{1, 2}`.
///
/// Each column takes distinct values from a half-integer grid; with
/// probability `zero_rate` an entry is zero, its degree then set by `Q_i`.
pub fn random_system(rng: &mut ChaCha8Rng, zero_rate: f64) -> TsikhSystem<Exact> {
    let n = 2;
    let grid: Vec<i64> = (-6..=6).filter(|&k| k != 0).collect();
    loop {
        let mut a = vec![vec![q(0, 1); n]; n];
        let mut m = vec![vec![0u32; n]; n];
        for j in 0..n {
            let picks: Vec<i64> = grid.choose_multiple(rng, n).copied().collect();
            for i in 0..n {
                if rng.gen_bool(zero_rate) {
                    continue;
                }
                a[i][j] = q(picks[i], 2);
                m[i][j] = rng.gen_range(1..=2);
            }
        }
        let mut perts = Vec::with_capacity(n);
        for i in 0..n {
            let bound: Vec<u32> = (0..n).map(|j| if a[i][j].is_zero() { 2 } else { m[i][j] }).collect();
            let terms = rng.gen_range(1..=2);
            let mut p = SparsePoly::zero(n);
            for _ in 0..terms {
                let e: Vec<u32> = bound.iter().map(|&b| rng.gen_range(1..=b)).collect();
                p = &p + &SparsePoly::monomial(idx(&e), nonzero_rational(rng, 3, 4));
            }
            perts.push(p);
        }
        let sys = TsikhSystem::new(a, m, perts, q(1, 1)).unwrap();
        if sys.validate().is_valid() {
            return sys;
        }
    }
}
