//! Minimal dense square complex matrix used for subspace operators.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::Scalar;

/// Row-major square matrix of complex entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] = out.data[r * n + c] + a * rhs[(k, c)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.dim, v.len(), "vector length differs from matrix dimension");
        (0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Self, factor: T) {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + b * factor;
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `max |U U† - I|`.
    pub fn unitarity_defect(&self) -> T {
        self.matmul(&self.adjoint())
            .max_abs_diff(&Self::identity(self.dim))
    }

    /// `self · other - other · self`.
    pub fn commutator(&self, other: &Self) -> Self {
        let mut ab = self.matmul(other);
        ab.add_scaled(&other.matmul(self), -T::one());
        ab
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn column(&self, c: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.dim + c]
    }
}

/// `Σ conj(a_i) b_i`.
pub fn inner<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * y)
}

pub fn norm_sqr<T: Scalar>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum()
}
