//! Dense matrices over an exact field, with fraction-free inversion.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::expr::Expression;

/// Exact field operations needed by elimination.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Exact quotient; `other` is nonzero.
    fn div(&self, other: &Self) -> Self;
    /// Size heuristic used for pivot choice.
    fn weight(&self) -> usize;
}

impl Field for Expression {
    fn zero() -> Self {
        Expression::zero()
    }
    fn one() -> Self {
        Expression::one()
    }
    fn is_zero(&self) -> bool {
        Expression::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn weight(&self) -> usize {
        self.term_count()
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix<T>) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    pub fn sub(&self, other: &Matrix<T>) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).sub(other.get(i, j))
        })
    }

    pub fn add(&self, other: &Matrix<T>) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).add(other.get(i, j))
        })
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(k))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Fraction-free Gauss-Jordan elimination (Bareiss) on `[self | rhs]`.
    ///
    /// Returns the determinant and `self⁻¹ · rhs`, or `None` when `self` is singular.
    fn bareiss_solve(&self, rhs: &Matrix<T>) -> Option<(T, Matrix<T>)> {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        let m = rhs.cols;
        let w = n + m;
        let mut a: Vec<Vec<T>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend_from_slice(rhs.row(i));
                row
            })
            .collect();
        let mut prev = T::one();
        let mut negate = false;
        for k in 0..n {
            let pivot = (k..n)
                .filter(|&r| !a[r][k].is_zero())
                .min_by_key(|&r| a[r][k].weight())?;
            if pivot != k {
                a.swap(pivot, k);
                negate = !negate;
            }
            let akk = a[k][k].clone();
            for i in 0..n {
                if i == k {
                    continue;
                }
                let aik = a[i][k].clone();
                for j in 0..w {
                    if j == k {
                        continue;
                    }
                    let mut v = a[i][j].mul(&akk);
                    if !aik.is_zero() && !a[k][j].is_zero() {
                        v = v.sub(&aik.mul(&a[k][j]));
                    }
                    a[i][j] = v.div(&prev);
                }
                a[i][k] = T::zero();
            }
            prev = akk;
        }
        // every diagonal entry now equals the last pivot
        let x = Matrix::from_fn(n, m, |i, j| a[i][n + j].div(&prev));
        let det = if negate { T::zero().sub(&prev) } else { prev };
        Some((det, x))
    }

    pub fn inverse(&self) -> Option<Matrix<T>> {
        self.bareiss_solve(&Self::identity(self.rows))
            .map(|(_, x)| x)
    }

    pub fn determinant(&self) -> T {
        match self.bareiss_solve(&Matrix::zeros(self.rows, 0)) {
            Some((d, _)) => d,
            None => T::zero(),
        }
    }
}
