use num_complex::Complex;
use num_traits::Zero;

use super::matrix::Matrix;
use crate::scalar::{Scalar, C};

/// Eigendecomposition of a self-adjoint matrix.
///
/// Eigenvalues are sorted descending; ties keep the order in which the
/// solver produced them, which makes spectral projections deterministic.
#[derive(Clone, Debug)]
pub struct SpectralData<T: Scalar> {
    pub eigenvalues: Vec<T>,
    /// Unitary matrix whose k-th column is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: Matrix<T>,
}

impl<T: Scalar> SpectralData<T> {
    /// Rebuild `U diag(w) U*` for arbitrary real weights `w` on the eigenbasis.
    pub fn assemble(&self, weights: &[T]) -> Matrix<T> {
        let d = self.eigenvectors.dim();
        debug_assert_eq!(weights.len(), d);
        let u = &self.eigenvectors;
        Matrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| u[(i, k)] * Complex::new(weights[k], T::zero()) * u[(j, k)].conj())
                .fold(Complex::zero(), |a, b| a + b)
        })
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.assemble(&self.eigenvalues)
    }
}

/// The complex Jacobi rotation that diagonalizes the Hermitian 2x2 block
/// [[a, b], [conj(b), d]]: returns (c, s, phase) consumed by
/// `rotate_columns` / `rotate_rows`.
pub(super) fn jacobi_params<T: Scalar>(a: T, d: T, b: C<T>) -> (T, T, C<T>) {
    let absb = b.norm();
    let phase = b / Complex::new(absb, T::zero());
    let tau = (d - a) / (T::from_f64_lossy(2.0) * absb);
    let t = if tau.is_zero() {
        T::one()
    } else {
        let sign = if tau > T::zero() { T::one() } else { -T::one() };
        sign / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    (c, t * c, phase)
}

/// Hermitian eigendecomposition by cyclic complex Jacobi sweeps.
///
/// The input is symmetrized once; accuracy is O(eps * dim * ||A||) which is
/// ample for the dimensions this crate works at.
pub fn eigh<T: Scalar>(input: &Matrix<T>) -> SpectralData<T> {
    let d = input.dim();
    // Symmetrize so rounding noise in callers cannot stall convergence.
    let mut a = Matrix::from_fn(d, |i, j| {
        (input[(i, j)] + input[(j, i)].conj()) * Complex::new(T::from_f64_lossy(0.5), T::zero())
    });
    let mut v = Matrix::identity(d);

    let norm = a.frobenius_norm();
    let stop = norm * T::epsilon() * T::from_f64_lossy(d as f64);
    let max_sweeps = 60;

    for _ in 0..max_sweeps {
        let mut off = T::zero();
        for i in 0..d {
            for j in (i + 1)..d {
                off = off + a[(i, j)].norm_sqr();
            }
        }
        let off = (off + off).sqrt();
        if off <= stop || off.is_zero() {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let b = a[(p, q)];
                if b.norm() <= stop / T::from_f64_lossy((d * d) as f64) {
                    continue;
                }
                let (c, s, phase) = jacobi_params(a[(p, p)].re, a[(q, q)].re, b);
                rotate_columns(&mut a, p, q, c, s, phase);
                rotate_rows(&mut a, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
                // Exactness of the zeroed pivot keeps the sweep count low.
                a[(q, p)] = a[(p, q)].conj();
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<T> = (0..d).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[y].partial_cmp(&diag[x]).expect("finite eigenvalues"));

    let eigenvalues: Vec<T> = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = Matrix::from_fn(d, |i, j| v[(i, order[j])]);
    SpectralData {
        eigenvalues,
        eigenvectors,
    }
}

/// Right-multiply columns (p, q) by the rotation: the new columns are
/// col_p' = c*col_p - s*conj(phase)*col_q ; col_q' = s*col_p + c*conj(phase)*col_q.
pub(super) fn rotate_columns<T: Scalar>(
    m: &mut Matrix<T>,
    p: usize,
    q: usize,
    c: T,
    s: T,
    phase: C<T>,
) {
    let d = m.dim();
    let cc = Complex::new(c, T::zero());
    let ss = Complex::new(s, T::zero());
    let u = phase.conj();
    for i in 0..d {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = cc * mp - ss * u * mq;
        m[(i, q)] = ss * mp + cc * u * mq;
    }
}

/// Left-multiply rows (p, q) by the adjoint rotation.
fn rotate_rows<T: Scalar>(m: &mut Matrix<T>, p: usize, q: usize, c: T, s: T, phase: C<T>) {
    let d = m.dim();
    let cc = Complex::new(c, T::zero());
    let ss = Complex::new(s, T::zero());
    for j in 0..d {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = cc * mp - ss * phase * mq;
        m[(q, j)] = ss * mp + cc * phase * mq;
    }
}
