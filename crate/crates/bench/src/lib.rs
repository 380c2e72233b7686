//! Fixtures shared by the benchmarks.

use nvar_core::random::{generating_tuple, rng};
use nvar_core::MatrixTuple;

/// Seeded generating tuples of `m` matrices of side `n`.
pub fn points(count: usize, m: usize, n: usize, seed: u64) -> Vec<MatrixTuple> {
    let mut r = rng(seed);
    (0..count).map(|_| generating_tuple(&mut r, m, n, 3)).collect()
}
