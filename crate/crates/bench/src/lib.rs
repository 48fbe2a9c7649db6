//! Fixtures shared by the benchmarks.

use waring_core::{Exact, Float, MultiIndex, Scalar, SparsePoly, TsikhSystem};

/// The planar example with `a_12 = a2`, `a_21 = b1`, `a_22 = b2` and
/// perturbations `a3 z1 z2^2`, `b3 z1^2 z2`.
pub fn example_one<F: Scalar>(a2: F, a3: F, b1: F, b2: F, b3: F) -> TsikhSystem<F> {
    TsikhSystem::new(
        vec![vec![F::zero(), a2], vec![b1, b2]],
        vec![vec![0, 2], vec![2, 1]],
        vec![
            SparsePoly::monomial(MultiIndex::from_slice(&[1, 2]), a3),
            SparsePoly::monomial(MultiIndex::from_slice(&[2, 1]), b3),
        ],
        F::one(),
    )
    .expect("shapes are consistent")
}

pub fn example_one_exact() -> TsikhSystem<Exact> {
    let q = Exact::from_ratio;
    example_one(q(2, 3), q(-5, 2), q(7, 3), q(1, 4), q(9, 5))
}

pub fn example_one_float() -> TsikhSystem<Float> {
    let q = Float::from_ratio;
    example_one(q(2, 3), q(-5, 2), q(7, 3), q(1, 4), q(9, 5))
}
