//! Dense complex matrix algebra: norms, spectral decompositions, spectral
//! projections, and nearest-matrix roundings.

mod density;
mod eig;
mod matrix;
mod nearness;
mod paulis;
mod svd;

pub use density::{rho_seminorm, DensityFactor};
pub use eig::{eigh, SpectralData};
pub use matrix::{commutator, Matrix};
pub(crate) use nearness::{compressed_polar, expand_from_basis};
pub use nearness::{
    involution_constant, nearest_projection, nearest_self_adjoint, nearest_unitary, norms,
    operator_norm, round_to_involution, sign_round_diagonal, unitary_part_on_subspace, NormTriple,
};
pub use paulis::{pauli_word, pauli_x, pauli_y, pauli_z};
pub use svd::{svd, SvdData};

use crate::scalar::Scalar;

/// Exact finite-sum evaluation of the spectral-projection integral
/// `int_0^inf chi_{>= sqrt(alpha)}(lambda) d(alpha)`.
///
/// The integrand is piecewise constant between consecutive distinct squared
/// eigenvalues of `lambda`, so the integral is the finite sum of
/// `(t_k - t_{k-1}) * chi_{>= sqrt(t_k)}(lambda)`; it equals `lambda^2`.
pub fn chi_integral<T: Scalar>(lambda: &DensityFactor<T>) -> Matrix<T> {
    let breaks = squared_eigenvalue_breakpoints(lambda);
    let mut acc = Matrix::zeros(lambda.dim());
    let mut prev = T::zero();
    for &t in &breaks {
        let p = lambda.spectral_projection_geq(t.sqrt());
        acc = &acc + &p.scale_real(t - prev);
        prev = t;
    }
    acc
}

/// Distinct squared nonzero eigenvalues of `lambda`, ascending. These are
/// the breakpoints where `chi_{>= sqrt(alpha)}(lambda)` changes.
pub fn squared_eigenvalue_breakpoints<T: Scalar>(lambda: &DensityFactor<T>) -> Vec<T> {
    let mut squared: Vec<T> = lambda
        .eigenvalues()
        .iter()
        .filter(|&&v| v > T::zero())
        .map(|&v| v * v)
        .collect();
    squared.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    squared.dedup_by(|a, b| (*a - *b).abs() <= T::epsilon() * crate::scalar::r::<T>(16.0));
    squared
}
