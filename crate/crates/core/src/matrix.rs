//! Dense square matrices over [`Scalar`] and tuples of them.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::linalg;
use crate::scalar::{format_scalar, int, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatOp {
    Add,
    Sub,
    Mul,
}

/// An `n x n` matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix {
            n,
            entries: vec![Scalar::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Scalar::one())
    }

    pub fn scalar(n: usize, s: Scalar) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = s.clone();
        }
        m
    }

    /// Matrix unit with a single 1 at (row, col), zero-based.
    pub fn unit(n: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries[row * n + col] = Scalar::one();
        m
    }

    pub fn diag(values: &[Scalar]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i].clone() } else { Scalar::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Matrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(CoreError::DimensionMismatch("matrix must have at least one row".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(CoreError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(Matrix { n, entries })
    }

    /// Panics on ragged input; meant for literals in tests and examples.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.as_ref().iter().map(|&v| int(v)).collect()).collect())
            .expect("square integer literal")
    }

    pub(crate) fn from_flat(n: usize, entries: Vec<Scalar>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Matrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    fn check_same(&self, other: &Matrix) -> Result<()> {
        if self.n != other.n {
            return Err(CoreError::DimensionMismatch(format!("{}x{} vs {}x{}", self.n, self.n, other.n, other.n)));
        }
        Ok(())
    }

    pub fn arith(&self, other: &Matrix, op: MatOp) -> Result<Matrix> {
        self.check_same(other)?;
        Ok(match op {
            MatOp::Add => self.add_unchecked(other),
            MatOp::Sub => self.sub_unchecked(other),
            MatOp::Mul => self.mul_unchecked(other),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.arith(other, MatOp::Add)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.arith(other, MatOp::Sub)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.arith(other, MatOp::Mul)
    }

    pub(crate) fn add_unchecked(&self, other: &Matrix) -> Matrix {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Matrix { n: self.n, entries }
    }

    pub(crate) fn sub_unchecked(&self, other: &Matrix) -> Matrix {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Matrix { n: self.n, entries }
    }

    pub(crate) fn mul_unchecked(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-Scalar::one())
    }

    pub fn pow(&self, k: u32) -> Matrix {
        (0..k).fold(Matrix::identity(self.n), |acc, _| acc.mul_unchecked(self))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.n).map(|i| self.entries[i * self.n + i].clone()).sum()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// `Some(s)` when the matrix equals `s * I`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        let n = self.n;
        let s = self.entries[0].clone();
        for i in 0..n {
            for j in 0..n {
                let e = &self.entries[i * n + j];
                let ok = if i == j { *e == s } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(s)
    }

    /// Coefficients `(e_1, ..., e_n)` of `t^n - e_1 t^(n-1) + ... + (-1)^n e_n`,
    /// obtained from the power sums `tr(a^k)` by Newton's identities.
    pub fn char_poly_coeffs(&self) -> Vec<Scalar> {
        let n = self.n;
        let mut power_sums = Vec::with_capacity(n);
        let mut power = Matrix::identity(n);
        for _ in 0..n {
            power = power.mul_unchecked(self);
            power_sums.push(power.trace());
        }
        newton_elementary(&power_sums)
    }

    pub fn det(&self) -> Scalar {
        self.char_poly_coeffs().pop().unwrap_or_else(Scalar::one)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        linalg::invert(self)
    }

    pub fn is_invertible(&self) -> bool {
        linalg::rank(&self.rows()) == self.n
    }

    /// `g * self * g^-1`, or `None` when `g` is singular.
    pub fn conjugate_by(&self, g: &Matrix) -> Option<Matrix> {
        let inv = g.inverse()?;
        Some(g.mul_unchecked(self).mul_unchecked(&inv))
    }
}

/// Elementary symmetric values from power sums `p_1..p_k`:
/// `j e_j = sum_{i=1..j} (-1)^(i-1) e_(j-i) p_i`.
pub(crate) fn newton_elementary(power_sums: &[Scalar]) -> Vec<Scalar> {
    let mut e = vec![Scalar::one()];
    for j in 1..=power_sums.len() {
        let mut acc = Scalar::zero();
        for i in 1..=j {
            let term = &e[j - i] * &power_sums[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / int(j as i64));
    }
    e.remove(0);
    e
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = row.iter().map(format_scalar).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A point `(a_1, ..., a_m)` of `(M_n)^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixTuple {
    n: usize,
    matrices: Vec<Matrix>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| CoreError::DimensionMismatch("a tuple needs at least one matrix".into()))?;
        let n = first.n();
        if let Some(bad) = matrices.iter().position(|a| a.n() != n) {
            return Err(CoreError::DimensionMismatch(format!(
                "matrix {} has side {}, expected {n}",
                bad + 1,
                matrices[bad].n()
            )));
        }
        Ok(MatrixTuple { n, matrices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn get(&self, i: usize) -> &Matrix {
        &self.matrices[i]
    }

    /// Simultaneous conjugation `g a_i g^-1`; `None` when `g` is singular.
    pub fn conjugate_by(&self, g: &Matrix) -> Option<MatrixTuple> {
        if g.n() != self.n {
            return None;
        }
        let inv = g.inverse()?;
        let matrices = self.matrices.iter().map(|a| g.mul_unchecked(a).mul_unchecked(&inv)).collect();
        Some(MatrixTuple { n: self.n, matrices })
    }

    pub fn is_integral(&self) -> bool {
        self.matrices.iter().all(|a| a.entries().iter().all(|e| e.is_integer()))
    }
}
