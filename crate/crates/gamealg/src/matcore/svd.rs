use num_complex::Complex;
use num_traits::Zero;

use super::matrix::Matrix;
use crate::scalar::{Scalar, C};

/// Singular value decomposition `A = U diag(sigma) V*` of a square matrix.
///
/// Singular values are sorted descending (ties by first occurrence). For
/// rank-deficient input the null columns of `U` are completed from the
/// canonical basis in index order, so the factors are convention-dependent
/// while `U`, `V` stay exactly unitary.
#[derive(Clone, Debug)]
pub struct SvdData<T: Scalar> {
    pub u: Matrix<T>,
    pub sigma: Vec<T>,
    pub v: Matrix<T>,
}

impl<T: Scalar> SvdData<T> {
    pub fn reconstruct(&self) -> Matrix<T> {
        let d = self.u.dim();
        Matrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| {
                    self.u[(i, k)] * Complex::new(self.sigma[k], T::zero()) * self.v[(j, k)].conj()
                })
                .fold(Complex::zero(), |a, b| a + b)
        })
    }
}

/// One-sided Jacobi SVD: orthogonalize the columns of a working copy by
/// unitary column rotations, accumulating them into `V`.
pub fn svd<T: Scalar>(a: &Matrix<T>) -> SvdData<T> {
    let d = a.dim();
    let mut w = a.clone();
    let mut v = Matrix::identity(d);

    let col = |m: &Matrix<T>, k: usize| -> Vec<C<T>> { (0..d).map(|i| m[(i, k)]).collect() };
    let dot = |m: &Matrix<T>, p: usize, q: usize| -> C<T> {
        (0..d)
            .map(|i| m[(i, p)].conj() * m[(i, q)])
            .fold(Complex::zero(), |x, y| x + y)
    };

    let scale = a.frobenius_norm();
    let tol = T::epsilon() * T::from_f64_lossy(d as f64);
    let max_sweeps = 60;

    for _ in 0..max_sweeps {
        let mut converged = true;
        for p in 0..d {
            for q in (p + 1)..d {
                let alpha = dot(&w, p, p).re;
                let gamma = dot(&w, q, q).re;
                let beta = dot(&w, p, q);
                let thresh = tol * (alpha * gamma).sqrt() + tol * tol * scale * scale;
                if beta.norm() <= thresh {
                    continue;
                }
                converged = false;
                let (c, s, phase) = super::eig::jacobi_params(alpha, gamma, beta);
                super::eig::rotate_columns(&mut w, p, q, c, s, phase);
                super::eig::rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        if converged {
            break;
        }
    }

    // Singular values are the column norms; sort descending, stable.
    let norms: Vec<T> = (0..d)
        .map(|k| {
            col(&w, k)
                .iter()
                .map(|z| z.norm_sqr())
                .fold(T::zero(), |x, y| x + y)
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| {
        norms[y]
            .partial_cmp(&norms[x])
            .expect("finite singular values")
    });
    let sigma: Vec<T> = order.iter().map(|&k| norms[k]).collect();
    let w = Matrix::from_fn(d, |i, j| w[(i, order[j])]);
    let v = Matrix::from_fn(d, |i, j| v[(i, order[j])]);

    // Left factor: normalized columns where sigma is resolvable, canonical
    // completion elsewhere; modified Gram-Schmidt keeps U exactly unitary.
    let sigma_max = sigma.first().copied().unwrap_or_else(T::zero);
    let cutoff = sigma_max * T::epsilon() * T::from_f64_lossy((16 * d) as f64);
    let mut u_cols: Vec<Vec<C<T>>> = Vec::with_capacity(d);
    for k in 0..d {
        let candidate = if sigma[k] > cutoff {
            let inv = Complex::new(T::one() / sigma[k], T::zero());
            col(&w, k).iter().map(|z| z * inv).collect::<Vec<_>>()
        } else {
            Vec::new()
        };
        let u_k = orthonormal_extend(&u_cols, candidate, d);
        u_cols.push(u_k);
    }
    let u = Matrix::from_fn(d, |i, j| u_cols[j][i]);

    SvdData { u, sigma, v }
}

/// Orthogonalize `candidate` against `prior`; if it degenerates (or is
/// empty), fall back to the first canonical basis vector that survives.
fn orthonormal_extend<T: Scalar>(prior: &[Vec<C<T>>], candidate: Vec<C<T>>, d: usize) -> Vec<C<T>> {
    let half = T::from_f64_lossy(0.5);
    let try_vec = |mut vec: Vec<C<T>>| -> Option<Vec<C<T>>> {
        for p in prior {
            let overlap: C<T> = p
                .iter()
                .zip(vec.iter())
                .map(|(a, b)| a.conj() * b)
                .fold(Complex::zero(), |x, y| x + y);
            for (vi, pi) in vec.iter_mut().zip(p.iter()) {
                *vi = *vi - overlap * *pi;
            }
        }
        let norm = vec
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |x, y| x + y)
            .sqrt();
        if norm < half {
            return None;
        }
        let inv = Complex::new(T::one() / norm, T::zero());
        Some(vec.iter().map(|z| z * inv).collect())
    };

    if !candidate.is_empty() {
        if let Some(v) = try_vec(candidate) {
            return v;
        }
    }
    for j in 0..d {
        let mut e = vec![Complex::<T>::zero(); d];
        e[j] = Complex::new(T::one(), T::zero());
        if let Some(v) = try_vec(e) {
            return v;
        }
    }
    unreachable!("an orthonormal completion always exists in dimension d")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn unitary_defect(u: &Matrix<f64>) -> f64 {
        (&(&u.adjoint() * u) - &Matrix::identity(u.dim())).frobenius_norm()
    }

    #[test]
    fn svd_of_diagonal() {
        let a = Matrix::from_rows(vec![
            vec![c::<f64>(0.5, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let s = svd(&a);
        assert!((s.sigma[0] - 1.0).abs() < 1e-14);
        assert!((s.sigma[1] - 0.5).abs() < 1e-14);
        assert!((&s.reconstruct() - &a).frobenius_norm() < 1e-13);
    }

    #[test]
    fn svd_of_zero_uses_identity_convention() {
        let a = Matrix::<f64>::zeros(2);
        let s = svd(&a);
        assert_eq!(s.sigma, vec![0.0, 0.0]);
        assert!((&s.u - &Matrix::identity(2)).frobenius_norm() == 0.0);
        assert!((&s.v - &Matrix::identity(2)).frobenius_norm() == 0.0);
    }

    #[test]
    fn svd_random_complex_reconstructs() {
        // Deterministic pseudo-random fill.
        let d = 5;
        let mut seed = 1u64;
        let mut next = || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = Matrix::from_fn(d, |_, _| c::<f64>(next(), next()));
        let s = svd(&a);
        assert!(
            unitary_defect(&s.u) < 1e-13,
            "u defect {}",
            unitary_defect(&s.u)
        );
        assert!(unitary_defect(&s.v) < 1e-13);
        assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        let err = (&s.reconstruct() - &a).frobenius_norm();
        assert!(err < 1e-12, "reconstruction error {err}");
    }

    #[test]
    fn svd_rank_deficient() {
        // Rank-1 matrix.
        let a = Matrix::from_fn(3, |i, j| c::<f64>(((i + 1) * (j + 1)) as f64, 0.0));
        let s = svd(&a);
        assert!(s.sigma[1].abs() < 1e-12 && s.sigma[2].abs() < 1e-12);
        assert!(unitary_defect(&s.u) < 1e-13);
        assert!((&s.reconstruct() - &a).frobenius_norm() < 1e-12);
    }
}
