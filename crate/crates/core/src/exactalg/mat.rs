use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Int, Rat};
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: alloc::vec![T::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch { expected: (rows, cols), found: (data.len(), 1) });
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch { expected: (r, c), found: (r, row.len()) });
            }
            data.extend(row);
        }
        Ok(Mat { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Submatrix keeping the listed rows and columns in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

impl<T: Clone + Zero + One> Mat<T> {
    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Mat<T>
where
    T: Clone + Zero + PartialEq + Neg<Output = T>,
{
    pub fn is_alternating(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        (0..self.rows)
            .all(|i| self.get(i, i).is_zero() && (i + 1..self.cols).all(|j| *self.get(j, i) == -self.get(i, j).clone()))
    }
}

impl<T> Mat<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }
}

impl<'a, T> Mul<&'a Mat<T>> for &'a Mat<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    type Output = Mat<T>;

    fn mul(self, rhs: &'a Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out: Mat<T> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j).clone();
                        out.set(i, j, cur + a.clone() * b.clone());
                    }
                }
            }
        }
        out
    }
}

impl<'a, T> Add<&'a Mat<T>> for &'a Mat<T>
where
    T: Clone + Zero + Add<Output = T>,
{
    type Output = Mat<T>;

    fn add(self, rhs: &'a Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() + rhs.get(i, j).clone())
    }
}

impl<'a, T> Sub<&'a Mat<T>> for &'a Mat<T>
where
    T: Clone + Zero + Sub<Output = T>,
{
    type Output = Mat<T>;

    fn sub(self, rhs: &'a Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() - rhs.get(i, j).clone())
    }
}

impl<T> Mat<T>
where
    T: Clone + Zero + Mul<Output = T>,
{
    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c.clone() * x.clone())
    }
}

impl Mat<Int> {
    pub fn to_rat(&self) -> Mat<Rat> {
        self.map(|x| Rat::from_integer(x.clone()))
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Mat { rows, cols, data: data.iter().map(|&x| Int::from(x)).collect() }
    }
}

impl Mat<Rat> {
    /// Returns the integral matrix if every entry has denominator one.
    pub fn to_int(&self) -> Option<Mat<Int>> {
        let mut data = Vec::with_capacity(self.data.len());
        for x in &self.data {
            data.push(super::as_int(x)?);
        }
        Some(Mat { rows: self.rows, cols: self.cols, data })
    }
}
