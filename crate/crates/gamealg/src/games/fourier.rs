//! Multilinear +-1 polynomials of binary constraints.
//!
//! A binary function g on k bits has a unique real multilinear polynomial f
//! on the +-1 cube with f((-1)^{a_1}, ..., (-1)^{a_k}) = (-1)^{g(a)}. Truth
//! tables are indexed with scope position 1 in the least significant bit.

use crate::error::{Error, Result};
use crate::matcore::Matrix;
use crate::scalar::{r, Scalar};

/// Multilinear polynomial in k +-1 variables; `coeffs[mask]` is the
/// coefficient of the monomial over the bit positions set in `mask`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierPolynomial<T: Scalar> {
    k: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> FourierPolynomial<T> {
    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn coefficient(&self, mask: usize) -> T {
        self.coeffs[mask]
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    /// Evaluate at a +-1 point.
    pub fn evaluate_signs(&self, signs: &[T]) -> T {
        debug_assert_eq!(signs.len(), self.k);
        let mut acc = T::zero();
        for (mask, &coeff) in self.coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let mut term = coeff;
            for (t, &s) in signs.iter().enumerate() {
                if mask & (1 << t) != 0 {
                    term = term * s;
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Evaluate on matrices, multiplying each monomial in ascending bit
    /// position (the monomial basis order).
    pub fn evaluate_matrices(&self, args: &[Matrix<T>]) -> Matrix<T> {
        debug_assert_eq!(args.len(), self.k);
        let dim = args[0].dim();
        let mut acc = Matrix::zeros(dim);
        for (mask, &coeff) in self.coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let mut term = Matrix::identity(dim);
            for (t, arg) in args.iter().enumerate() {
                if mask & (1 << t) != 0 {
                    term = &term * arg;
                }
            }
            acc = &acc + &term.scale_real(coeff);
        }
        acc
    }

    /// Reconstruct the truth table: g(a) = 1 iff f evaluates to -1.
    pub fn truth_table(&self) -> Vec<bool> {
        (0..(1usize << self.k))
            .map(|a| {
                let signs: Vec<T> = (0..self.k)
                    .map(|t| {
                        if a & (1 << t) != 0 {
                            -T::one()
                        } else {
                            T::one()
                        }
                    })
                    .collect();
                self.evaluate_signs(&signs) < T::zero()
            })
            .collect()
    }
}

/// Fourier expansion of a truth table: coefficients
/// `2^-k * sum_a (-1)^{g(a)} * prod_{t in mask} (-1)^{a_t}`.
///
/// `table[a] = true` means `g(a) = 1`, the satisfying value (`f = -1`).
pub fn fourier_polynomial<T: Scalar>(table: &[bool]) -> Result<FourierPolynomial<T>> {
    let len = table.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::Validation(format!(
            "truth table length {len} is not a power of two (k >= 1)"
        )));
    }
    let k = len.trailing_zeros() as usize;
    let scale = r::<T>(1.0 / len as f64);
    let mut coeffs = vec![T::zero(); len];
    for (mask, c) in coeffs.iter_mut().enumerate() {
        let mut acc = T::zero();
        for (a, &sat) in table.iter().enumerate() {
            let f_val = if sat { -T::one() } else { T::one() };
            let parity = (a & mask).count_ones() % 2;
            acc = acc + if parity == 1 { -f_val } else { f_val };
        }
        *c = acc * scale;
    }
    Ok(FourierPolynomial { k, coeffs })
}

/// Table of the parity constraint `prod x = sign` on `k` variables.
pub fn parity_table(k: usize, sign: i8) -> Vec<bool> {
    (0..(1usize << k))
        .map(|a| {
            let prod = if a.count_ones() % 2 == 1 { -1 } else { 1 };
            prod == sign as i32
        })
        .collect()
}

/// Table of the two-variable constraint "not both -1" (the AND-polynomial
/// constraint of the SynchBCS construction).
pub fn nand_table() -> Vec<bool> {
    vec![true, true, true, false]
}
