//! Exact Gaussian elimination.
//!
//! Conventions are fixed so that outputs are bit-stable: reduction is to
//! reduced row echelon form with pivots taken leftmost, kernel vectors are
//! indexed by free columns in increasing order with the free entry set to 1,
//! and particular solutions set every free variable to 0.

use num_traits::{One, Zero};

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Reduces `rows` in place to reduced row echelon form over the first
/// `ncols` columns and returns the pivot columns. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vec<Scalar>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut work = rows.to_vec();
    rref(&mut work, ncols).len()
}

/// Basis of the solution space of the homogeneous system `rows * x = 0`
/// in `unknowns` variables.
pub fn solve_linear(rows: &[Vec<Scalar>], unknowns: usize) -> Vec<Vec<Scalar>> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work, unknowns);
    let mut is_pivot = vec![false; unknowns];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..unknowns)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Scalar::zero(); unknowns];
            v[f] = Scalar::one();
            for (row, &p) in work.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// One solution of `rows * x = rhs`, or `None` when the system is
/// inconsistent. Free variables are set to zero.
pub fn solve_affine(rows: &[Vec<Scalar>], rhs: &[Scalar], unknowns: usize) -> Option<Vec<Scalar>> {
    assert_eq!(rows.len(), rhs.len(), "one right-hand side per equation");
    let mut work: Vec<Vec<Scalar>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut work, unknowns + 1);
    if pivots.last() == Some(&unknowns) {
        return None;
    }
    let mut x = vec![Scalar::zero(); unknowns];
    for (row, &p) in work.iter().zip(&pivots) {
        x[p] = row[unknowns].clone();
    }
    Some(x)
}

pub fn invert(a: &Matrix) -> Option<Matrix> {
    let n = a.n();
    let mut work: Vec<Vec<Scalar>> = a
        .rows()
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            row
        })
        .collect();
    let pivots = rref(&mut work, n);
    if pivots.len() < n {
        return None;
    }
    let entries = work.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
    Some(Matrix::from_flat(n, entries))
}

/// Incrementally maintained echelon basis of a subspace of `Scalar^dim`.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    dim: usize,
    basis: Vec<(usize, Vec<Scalar>)>,
}

impl SpanBasis {
    pub fn new(dim: usize) -> Self {
        SpanBasis { dim, basis: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.dim
    }

    fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (p, b) in &self.basis {
            if v[*p].is_zero() {
                continue;
            }
            let factor = v[*p].clone();
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        self.basis.push((p, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn row(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn kernel_of_single_equation() {
        let basis = solve_linear(&[row(&[1, 1])], 2);
        assert_eq!(basis, vec![row(&[-1, 1])]);
    }

    #[test]
    fn empty_system_has_full_kernel() {
        let basis = solve_linear(&[], 2);
        assert_eq!(basis, vec![row(&[1, 0]), row(&[0, 1])]);
    }

    #[test]
    fn affine_solution() {
        let x = solve_affine(&[row(&[1, 1]), row(&[1, -1])], &row(&[1, 1]), 2).unwrap();
        assert_eq!(x, row(&[1, 0]));
        assert!(solve_affine(&[row(&[1, 1]), row(&[1, 1])], &row(&[1, 2]), 2).is_none());
    }

    #[test]
    fn affine_free_variables_are_zero() {
        let x = solve_affine(&[row(&[0, 1, 1])], &row(&[3]), 3).unwrap();
        assert_eq!(x, row(&[0, 3, 0]));
    }

    #[test]
    fn rank_and_span() {
        assert_eq!(rank(&[row(&[1, 2]), row(&[2, 4])]), 1);
        let mut span = SpanBasis::new(3);
        assert!(span.insert(row(&[1, 1, 0])));
        assert!(!span.insert(row(&[2, 2, 0])));
        assert!(span.insert(row(&[0, 1, 1])));
        assert!(span.contains(&row(&[1, 2, 1])));
        assert!(!span.contains(&row(&[0, 0, 1])));
        assert!(!span.is_full());
    }
}
