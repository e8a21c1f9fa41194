//! Seeded random generators for matrices, states and perturbations.
//!
//! Everything takes an explicit RNG so that callers (sweeps, tests) stay
//! reproducible.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matcore::{eigh, operator_norm, svd, DensityFactor, Matrix};
use crate::scalar::{r, Scalar, C};

fn gauss<T: Scalar, R: Rng>(rng: &mut R) -> T {
    let x: f64 = rng.sample(StandardNormal);
    T::from_f64_lossy(x)
}

/// Complex Gaussian matrix with entries of unit variance.
pub fn ginibre<T: Scalar, R: Rng>(rng: &mut R, dim: usize) -> Matrix<T> {
    let half = r::<T>(0.5).sqrt();
    Matrix::from_fn(dim, |_, _| {
        Complex::new(gauss::<T, _>(rng) * half, gauss::<T, _>(rng) * half)
    })
}

/// Random Hermitian matrix scaled to the requested operator norm.
pub fn hermitian<T: Scalar, R: Rng>(rng: &mut R, dim: usize, op: T) -> Matrix<T> {
    let g = ginibre::<T, _>(rng, dim);
    let h = (&g + &g.adjoint()).scale_real(r::<T>(0.5));
    let n = operator_norm(&h);
    if n.is_zero() {
        return h;
    }
    h.scale_real(op / n)
}

/// Haar-ish random unitary from the QR-free route: unitary SVD factor of a
/// Ginibre sample.
pub fn haar_unitary<T: Scalar, R: Rng>(rng: &mut R, dim: usize) -> Matrix<T> {
    let g = ginibre::<T, _>(rng, dim);
    let s = svd(&g);
    &s.u * &s.v.adjoint()
}

/// Random matrix with operator norm at most one (strictly below, generically).
pub fn contraction<T: Scalar, R: Rng>(rng: &mut R, dim: usize) -> Matrix<T> {
    let g = ginibre::<T, _>(rng, dim);
    let n = operator_norm(&g);
    if n.is_zero() {
        return g;
    }
    let scale: T = T::from_f64_lossy(rng.gen_range(0.05..1.0f64));
    g.scale_real(scale / n)
}

/// Random self-adjoint unitary (random eigenbasis, random +-1 spectrum).
pub fn involution<T: Scalar, R: Rng>(rng: &mut R, dim: usize) -> Matrix<T> {
    let u = haar_unitary::<T, _>(rng, dim);
    let signs: Vec<T> = (0..dim)
        .map(|_| {
            if rng.gen_bool(0.5) {
                T::one()
            } else {
                -T::one()
            }
        })
        .collect();
    &(&u * &Matrix::diag_real(&signs)) * &u.adjoint()
}

/// Random density factor: random full-rank spectrum, random eigenbasis.
pub fn density_factor<T: Scalar, R: Rng>(rng: &mut R, dim: usize) -> DensityFactor<T> {
    let u = haar_unitary::<T, _>(rng, dim);
    let raw: Vec<T> = (0..dim)
        .map(|_| {
            let x: T = gauss::<T, _>(rng);
            x * x + r::<T>(0.05)
        })
        .collect();
    let total: T = raw.iter().map(|&v| v * v).sum();
    let coeffs: Vec<T> = raw.iter().map(|&v| v / total.sqrt()).collect();
    let lam = &(&u * &Matrix::diag_real(&coeffs)) * &u.adjoint();
    DensityFactor::new(lam).expect("constructed density factor is valid")
}

/// Random unit vector in C^dim.
pub fn unit_vector<T: Scalar, R: Rng>(rng: &mut R, dim: usize) -> Vec<C<T>> {
    let mut v: Vec<C<T>> = (0..dim)
        .map(|_| Complex::new(gauss::<T, _>(rng), gauss::<T, _>(rng)))
        .collect();
    let norm: T = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    for z in v.iter_mut() {
        *z = *z / Complex::new(norm, T::zero());
    }
    v
}

/// `exp(i * delta * H)` for a random Hermitian `H` with unit operator norm.
pub fn local_unitary<T: Scalar, R: Rng>(rng: &mut R, dim: usize, delta: T) -> Matrix<T> {
    let h = hermitian::<T, _>(rng, dim, T::one());
    let sd = eigh(&h);
    let d = dim;
    let u = &sd.eigenvectors;
    Matrix::from_fn(d, |i, j| {
        (0..d)
            .map(|k| {
                let theta = delta * sd.eigenvalues[k];
                let phase = Complex::new(theta.cos(), theta.sin());
                u[(i, k)] * phase * u[(j, k)].conj()
            })
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_have_advertised_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary::<f64, _>(&mut rng, 4);
        assert!((&(&u.adjoint() * &u) - &Matrix::identity(4)).frobenius_norm() < 1e-12);
        let z = involution::<f64, _>(&mut rng, 4);
        assert!(z.hermitian_defect() < 1e-12);
        assert!((&(&z * &z) - &Matrix::identity(4)).frobenius_norm() < 1e-12);
        let h = hermitian::<f64, _>(&mut rng, 5, 1.0);
        assert!((operator_norm(&h) - 1.0).abs() < 1e-10);
        let w = local_unitary::<f64, _>(&mut rng, 4, 1e-3);
        assert!((&(&w.adjoint() * &w) - &Matrix::identity(4)).frobenius_norm() < 1e-12);
        assert!((&w - &Matrix::identity(4)).frobenius_norm() < 1e-2);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let a = ginibre::<f64, _>(&mut ChaCha8Rng::seed_from_u64(5), 3);
        let b = ginibre::<f64, _>(&mut ChaCha8Rng::seed_from_u64(5), 3);
        assert!((&a - &b).frobenius_norm() == 0.0);
    }
}
