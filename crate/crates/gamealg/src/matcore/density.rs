use super::eig::{eigh, SpectralData};
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::{r, Scalar};

/// Square root of a density matrix: a positive semidefinite self-adjoint
/// `lambda` with `tr(lambda^2) = 1`, kept in the fixed computational basis.
///
/// Construction clamps eigenvalues in `[-1e-10, 0)` to zero and rejects
/// anything more negative; the trace normalization is checked to 1e-9.
#[derive(Clone, Debug)]
pub struct DensityFactor<T: Scalar> {
    lambda: Matrix<T>,
    spectral: SpectralData<T>,
}

impl<T: Scalar> DensityFactor<T> {
    pub fn new(candidate: Matrix<T>) -> Result<Self> {
        if candidate.hermitian_defect() > r::<T>(1e-9) {
            return Err(Error::Validation(
                "density factor must be self-adjoint".into(),
            ));
        }
        let sd = eigh(&candidate);
        let mut clamped = Vec::with_capacity(sd.eigenvalues.len());
        for &ev in &sd.eigenvalues {
            if ev < -r::<T>(1e-10) {
                return Err(Error::Validation(format!(
                    "density factor has negative eigenvalue {ev:e}"
                )));
            }
            clamped.push(if ev < T::zero() { T::zero() } else { ev });
        }
        let purity: T = clamped.iter().map(|&v| v * v).sum();
        if (purity - T::one()).abs() > r::<T>(1e-9) {
            return Err(Error::Validation(format!(
                "density factor must satisfy tr(lambda^2) = 1, got {purity}"
            )));
        }
        let lambda = sd.assemble(&clamped);
        let spectral = SpectralData {
            eigenvalues: clamped,
            eigenvectors: sd.eigenvectors,
        };
        Ok(DensityFactor { lambda, spectral })
    }

    /// `1/sqrt(d)` times the identity: the factor of the maximally mixed state.
    pub fn maximally_mixed(dim: usize) -> Self {
        let v = T::one() / r::<T>(dim as f64).sqrt();
        let lambda = Matrix::diag_real(&vec![v; dim]);
        DensityFactor {
            spectral: SpectralData {
                eigenvalues: vec![v; dim],
                eigenvectors: Matrix::identity(dim),
            },
            lambda,
        }
    }

    /// Diagonal factor from Schmidt coefficients (descending, sum of squares 1).
    pub fn from_schmidt(coeffs: &[T]) -> Result<Self> {
        Self::new(Matrix::diag_real(coeffs))
    }

    pub fn dim(&self) -> usize {
        self.lambda.dim()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.lambda
    }

    /// Clamped eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[T] {
        &self.spectral.eigenvalues
    }

    pub fn spectral(&self) -> &SpectralData<T> {
        &self.spectral
    }

    pub fn operator_norm(&self) -> T {
        self.spectral
            .eigenvalues
            .first()
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// Spectral projection onto eigenvalues `>= t` (within 1e-12 of `t`
    /// counts as included). For `t <= 0` this is the identity.
    pub fn spectral_projection_geq(&self, t: T) -> Matrix<T> {
        let slack = r::<T>(1e-12);
        let weights: Vec<T> = self
            .spectral
            .eigenvalues
            .iter()
            .map(|&ev| if ev >= t - slack { T::one() } else { T::zero() })
            .collect();
        self.spectral.assemble(&weights)
    }

    /// Rank of the projection returned by `spectral_projection_geq`.
    pub fn count_geq(&self, t: T) -> usize {
        let slack = r::<T>(1e-12);
        self.spectral
            .eigenvalues
            .iter()
            .filter(|&&ev| ev >= t - slack)
            .count()
    }
}

/// State-induced seminorm `||A lambda||_F`; equals the little Frobenius norm
/// when `lambda` is maximally mixed.
pub fn rho_seminorm<T: Scalar>(a: &Matrix<T>, lambda: &DensityFactor<T>) -> Result<T> {
    a.check_same_dim(lambda.matrix(), "rho seminorm operand")?;
    Ok((a * lambda.matrix()).frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn maximally_mixed_matches_little_frobenius() {
        let lam = DensityFactor::<f64>::maximally_mixed(4);
        let a = Matrix::from_fn(4, |i, j| c((i + 2 * j) as f64, (i as f64) - 1.0));
        let lhs = rho_seminorm(&a, &lam).unwrap();
        assert!((lhs - a.little_frobenius_norm()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_seminorm_vanishes_off_support() {
        let lam = DensityFactor::from_schmidt(&[0.0, 1.0]).unwrap();
        // A = diag(1, 0) has image orthogonal to the support of lambda.
        let a = Matrix::diag_real(&[1.0, 0.0]);
        assert!(rho_seminorm(&a, &lam).unwrap() == 0.0);
        let lam2 = DensityFactor::from_schmidt(&[1.0f64, 0.0]).unwrap();
        assert!((rho_seminorm(&a, &lam2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clamping_and_rejection() {
        // Slightly negative eigenvalue within tolerance is clamped.
        let m = Matrix::diag_real(&[1.0, -5e-11]);
        let lam = DensityFactor::new(m).unwrap();
        assert!(lam.eigenvalues().iter().all(|&v| v >= 0.0));
        // Beyond tolerance is rejected.
        let bad = Matrix::diag_real(&[1.0, -1e-6]);
        assert!(DensityFactor::new(bad).is_err());
        // Wrong normalization is rejected.
        let off = Matrix::diag_real(&[2.0, 0.0]);
        assert!(DensityFactor::new(off).is_err());
    }

    #[test]
    fn spectral_projection_thresholds() {
        let lam = DensityFactor::from_schmidt(&[(0.8f64).sqrt(), (0.2f64).sqrt()]).unwrap();
        let p_all = lam.spectral_projection_geq(0.0);
        assert!((&p_all - &Matrix::identity(2)).frobenius_norm() < 1e-12);
        let p_top = lam.spectral_projection_geq(0.7);
        assert!((p_top.trace().re - 1.0).abs() < 1e-12);
        let p_none = lam.spectral_projection_geq(1.5);
        assert!(p_none.frobenius_norm() < 1e-12);
    }
}
