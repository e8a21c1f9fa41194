use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

/// Dense square complex matrix, row-major.
///
/// This is the working representation for measurement operators, algebra
/// relation images, spectral projections and unitaries. Dimensions stay
/// desk-scale (the largest objects in the test suite are 2^6 x 2^6), so a
/// flat `Vec` with no sparsity is deliberate.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Scalar> {
    dim: usize,
    entries: Vec<C<T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        Matrix {
            dim,
            entries: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn diag_real(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(v, T::zero());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested rows; fails if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<C<T>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Validation("matrix dimension must be >= 1".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(Error::dim(dim, row.len(), "matrix row length"));
            }
            entries.extend_from_slice(row);
        }
        let m = Matrix { dim, entries };
        if !m
            .entries
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::Validation("matrix entries must be finite".into()));
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.dim, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Matrix::from_fn(self.dim, |i, j| self[(i, j)].conj())
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim)
            .map(|i| self[(i, i)])
            .fold(Complex::zero(), |a, b| a + b)
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let entries = self.entries.iter().map(|z| z * s).collect();
        Matrix {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    /// Frobenius inner product `tr(self^* other)`.
    pub fn inner(&self, other: &Self) -> C<T> {
        debug_assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::zero(), |acc, z| acc + z)
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Frobenius norm divided by sqrt(dim); the unit has norm one.
    pub fn little_frobenius_norm(&self) -> T {
        self.frobenius_norm() / T::from_f64_lossy(self.dim as f64).sqrt()
    }

    pub fn matvec(&self, v: &[C<T>]) -> Vec<C<T>> {
        debug_assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self[(i, j)] * v[j])
                    .fold(Complex::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Kronecker product, used to assemble multi-qubit operators.
    pub fn kron(&self, other: &Self) -> Self {
        let d1 = self.dim;
        let d2 = other.dim;
        Matrix::from_fn(d1 * d2, |i, j| {
            self[(i / d2, j / d2)] * other[(i % d2, j % d2)]
        })
    }

    pub fn max_abs_entry(&self) -> T {
        self.entries
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn hermitian_defect(&self) -> T {
        (self - &self.adjoint()).frobenius_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn check_same_dim(&self, other: &Self, context: &str) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::dim(self.dim, other.dim, context));
        }
        Ok(())
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.entries[i * self.dim + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.entries[i * self.dim + j]
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        debug_assert_eq!(self.dim, rhs.dim);
        let entries = self
            .entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            dim: self.dim,
            entries,
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        debug_assert_eq!(self.dim, rhs.dim);
        let entries = self
            .entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            dim: self.dim,
            entries,
        }
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        let entries = self.entries.iter().map(|z| -z).collect();
        Matrix {
            dim: self.dim,
            entries,
        }
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        debug_assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self[(i, k)];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let v = out[(i, j)] + aik * rhs[(k, j)];
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<T: Scalar> std::fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix(dim={})", self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// Commutator `AB - BA`.
pub fn commutator<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    &(a * b) - &(b * a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn adjoint_and_trace() {
        let m = Matrix::from_rows(vec![
            vec![c::<f64>(1.0, 2.0), c(0.0, -1.0)],
            vec![c(3.0, 0.0), c(4.0, 4.0)],
        ])
        .unwrap();
        let a = m.adjoint();
        assert_eq!(a[(0, 1)], c(3.0, 0.0));
        assert_eq!(a[(1, 0)], c(0.0, 1.0));
        assert_eq!(m.trace(), c(5.0, 6.0));
    }

    #[test]
    fn kron_dims_and_values() {
        let x = Matrix::from_rows(vec![
            vec![c::<f64>(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let id = Matrix::identity(2);
        let k = x.kron(&id);
        assert_eq!(k.dim(), 4);
        assert_eq!(k[(0, 2)], c(1.0, 0.0));
        assert_eq!(k[(1, 3)], c(1.0, 0.0));
        assert_eq!(k[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn product_matches_hand_computation() {
        let a = Matrix::from_rows(vec![
            vec![c::<f64>(1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let b = Matrix::from_rows(vec![
            vec![c::<f64>(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let p = &a * &b;
        assert_eq!(p[(0, 0)], c(2.0, 0.0));
        assert_eq!(p[(0, 1)], c(1.0, 0.0));
        assert_eq!(p[(1, 1)], c(0.0, 1.0));
    }
}
