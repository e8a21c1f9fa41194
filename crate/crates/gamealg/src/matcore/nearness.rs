//! Nearest-matrix roundings: self-adjoint, unitary, involution, projection,
//! and the polar unitary part on a subspace. Each construction comes with an
//! explicit distance bound that the test suite checks verbatim.

use num_complex::Complex;
use num_traits::Zero;

use super::eig::eigh;
use super::matrix::Matrix;
use super::svd::svd;
use crate::error::{Error, Result};
use crate::scalar::{r, Scalar, C};

/// Operator norm (largest singular value), Frobenius norm, and the
/// normalized Frobenius norm of a matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormTriple<T> {
    pub op: T,
    pub frobenius: T,
    pub little_frobenius: T,
}

pub fn norms<T: Scalar>(a: &Matrix<T>) -> NormTriple<T> {
    NormTriple {
        op: operator_norm(a),
        frobenius: a.frobenius_norm(),
        little_frobenius: a.little_frobenius_norm(),
    }
}

pub fn operator_norm<T: Scalar>(a: &Matrix<T>) -> T {
    // Largest eigenvalue of A*A, computed without forming the full SVD.
    let gram = &a.adjoint() * a;
    let top = eigh(&gram).eigenvalues[0];
    if top <= T::zero() {
        T::zero()
    } else {
        top.sqrt()
    }
}

/// `(X + X*)/2`: the closest self-adjoint matrix, at distance
/// `||X - X*||_f / 2`.
pub fn nearest_self_adjoint<T: Scalar>(x: &Matrix<T>) -> Matrix<T> {
    let half = Complex::new(r::<T>(0.5), T::zero());
    (x + &x.adjoint()).scale(half)
}

/// Unitary factor `U V*` of the singular value decomposition, for operators
/// of norm at most one. Singular values in `(1, 1 + 1e-9]` are treated as
/// rounding noise; anything larger is a precondition violation. The output
/// satisfies `||X - W||_f <= ||X*X - 1||_f`.
pub fn nearest_unitary<T: Scalar>(x: &Matrix<T>) -> Result<Matrix<T>> {
    let s = svd(x);
    if s.sigma[0] > T::one() + r::<T>(1e-9) {
        return Err(Error::Precondition(format!(
            "nearest_unitary requires operator norm <= 1, got {}",
            s.sigma[0]
        )));
    }
    Ok(&s.u * &s.v.adjoint())
}

/// Round each real value to its sign; zero goes to +1 (fixed tie-break).
pub fn sign_round_diagonal<T: Scalar>(values: &[T]) -> Vec<T> {
    values
        .iter()
        .map(|&v| if v < T::zero() { -T::one() } else { T::one() })
        .collect()
}

/// Distance constant for `round_to_involution` at operator-norm bound `C`:
/// `(1 + 1/sqrt(2)) (C + 1) + 1/2`.
pub fn involution_constant<T: Scalar>(c_bound: T) -> T {
    (T::one() + T::one() / r::<T>(2.0).sqrt()) * (c_bound + T::one()) + r::<T>(0.5)
}

/// Self-adjoint unitary nearest to `X` (symmetrize, diagonalize, sign-round
/// the spectrum). Requires `||X||_op <= c_bound`; the output `Z` satisfies
/// `Z = Z*`, `Z^2 = 1` and
/// `||Z - X||_f <= involution_constant(c_bound) * max(||X - X*||_f, ||X^2 - 1||_f)`.
pub fn round_to_involution<T: Scalar>(x: &Matrix<T>, c_bound: T) -> Result<Matrix<T>> {
    if operator_norm(x) > c_bound + r::<T>(1e-9) {
        return Err(Error::Precondition(format!(
            "round_to_involution requires operator norm <= {c_bound}"
        )));
    }
    let y = nearest_self_adjoint(x);
    let sd = eigh(&y);
    let signs = sign_round_diagonal(&sd.eigenvalues);
    Ok(sd.assemble(&signs))
}

/// Orthogonal projection nearest to `P`, via the involution `1 - 2P`.
/// Requires `||P||_op <= c0`; the distance bound is
/// `2 * involution_constant(2*c0 + 1) * max(||P - P*||_f, ||P^2 - P||_f)`.
pub fn nearest_projection<T: Scalar>(p: &Matrix<T>, c0: T) -> Result<Matrix<T>> {
    if operator_norm(p) > c0 + r::<T>(1e-9) {
        return Err(Error::Precondition(format!(
            "nearest_projection requires operator norm <= {c0}"
        )));
    }
    let two = r::<T>(2.0);
    let x = &Matrix::identity(p.dim()) - &p.scale_real(two);
    let z = round_to_involution(&x, two * c0 + T::one())?;
    Ok((&Matrix::identity(p.dim()) - &z).scale_real(r::<T>(0.5)))
}

/// Polar unitary part of `P M P` on the range of the projection `P`,
/// embedded back into the full space: the result `W` satisfies
/// `W* W = W W* = P` and `W = P W P`.
///
/// Errors if any singular value of the compressed block falls below `tol`
/// (carrying the offending value), since the polar factor is then
/// ill-conditioned.
pub fn unitary_part_on_subspace<T: Scalar>(
    m: &Matrix<T>,
    p: &Matrix<T>,
    tol: T,
) -> Result<Matrix<T>> {
    m.check_same_dim(p, "unitary part operands")?;
    let basis = projection_basis(p)?;
    let (w_small, min_sv) = compressed_polar(m, &basis);
    if min_sv < tol {
        return Err(Error::Numerical(format!(
            "subspace rounding ill-conditioned: singular value {min_sv:e} below tolerance {tol:e}"
        )));
    }
    Ok(expand_from_basis(&w_small, &basis, m.dim()))
}

/// Orthonormal basis (as columns) of the range of an orthogonal projection.
pub(crate) fn projection_basis<T: Scalar>(p: &Matrix<T>) -> Result<Vec<Vec<C<T>>>> {
    let sd = eigh(p);
    let d = p.dim();
    let mut basis = Vec::new();
    for (k, &ev) in sd.eigenvalues.iter().enumerate() {
        if (ev - T::one()).abs() <= r::<T>(1e-8) {
            basis.push((0..d).map(|i| sd.eigenvectors[(i, k)]).collect());
        } else if ev.abs() > r::<T>(1e-8) {
            return Err(Error::Precondition(format!(
                "matrix is not an orthogonal projection (eigenvalue {ev})"
            )));
        }
    }
    if basis.is_empty() {
        return Err(Error::Precondition("projection has rank zero".into()));
    }
    Ok(basis)
}

/// Compress `M` to the given orthonormal basis, take the polar unitary
/// factor there, and report the smallest singular value encountered.
pub(crate) fn compressed_polar<T: Scalar>(m: &Matrix<T>, basis: &[Vec<C<T>>]) -> (Matrix<T>, T) {
    let small = compress(m, basis);
    let s = svd(&small);
    let min_sv = s.sigma.last().copied().unwrap_or_else(T::zero);
    (&s.u * &s.v.adjoint(), min_sv)
}

/// `B* M B` for an orthonormal column set `B`.
pub(crate) fn compress<T: Scalar>(m: &Matrix<T>, basis: &[Vec<C<T>>]) -> Matrix<T> {
    let rank = basis.len();
    let d = m.dim();
    let mut out = Matrix::zeros(rank);
    for (a, ba) in basis.iter().enumerate() {
        let mba = m.matvec(basis[a].as_slice());
        // out[b][a] = <basis_b, M basis_a>
        for (b, bb) in basis.iter().enumerate() {
            let val = (0..d)
                .map(|i| bb[i].conj() * mba[i])
                .fold(Complex::zero(), |x, y| x + y);
            out[(b, a)] = val;
        }
        let _ = ba;
    }
    out
}

/// `B W B*`: push an operator on the compressed space back to the full space.
pub(crate) fn expand_from_basis<T: Scalar>(
    w: &Matrix<T>,
    basis: &[Vec<C<T>>],
    dim: usize,
) -> Matrix<T> {
    let rank = basis.len();
    Matrix::from_fn(dim, |i, j| {
        let mut acc = Complex::zero();
        for a in 0..rank {
            for b in 0..rank {
                acc = acc + basis[a][i] * w[(a, b)] * basis[b][j].conj();
            }
        }
        acc
    })
}
