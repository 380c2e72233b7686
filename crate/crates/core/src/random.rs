//! Seeded sampling of integer matrices. All randomness in the crate flows
//! through [`rng`] so a seed fully determines every sampled value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::generates;
use crate::matrix::{Matrix, MatrixTuple};
use crate::scalar::int;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in `[-range, range]`, row-major.
pub fn integer_matrix(rng: &mut SeededRng, n: usize, range: i64) -> Matrix {
    Matrix::from_fn(n, |_, _| int(rng.gen_range(-range..=range)))
}

pub fn integer_tuple(rng: &mut SeededRng, m: usize, n: usize, range: i64) -> MatrixTuple {
    MatrixTuple::new((0..m).map(|_| integer_matrix(rng, n, range)).collect()).expect("m >= 1")
}

pub fn invertible_matrix(rng: &mut SeededRng, n: usize, range: i64) -> Matrix {
    loop {
        let g = integer_matrix(rng, n, range);
        if g.is_invertible() {
            return g;
        }
    }
}

/// Rejection-samples a tuple that generates `M_n`.
pub fn generating_tuple(rng: &mut SeededRng, m: usize, n: usize, range: i64) -> MatrixTuple {
    loop {
        let a = integer_tuple(rng, m, n, range);
        if generates(&a) {
            return a;
        }
    }
}
