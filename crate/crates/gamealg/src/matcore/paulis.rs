//! The Pauli matrices and tensor words in them.

use super::matrix::Matrix;
use crate::scalar::{c, Scalar};

pub fn pauli_x<T: Scalar>() -> Matrix<T> {
    Matrix::from_rows(vec![
        vec![c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(1.0, 0.0), c(0.0, 0.0)],
    ])
    .expect("static 2x2")
}

pub fn pauli_y<T: Scalar>() -> Matrix<T> {
    Matrix::from_rows(vec![
        vec![c(0.0, 0.0), c(0.0, -1.0)],
        vec![c(0.0, 1.0), c(0.0, 0.0)],
    ])
    .expect("static 2x2")
}

pub fn pauli_z<T: Scalar>() -> Matrix<T> {
    Matrix::from_rows(vec![
        vec![c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(-1.0, 0.0)],
    ])
    .expect("static 2x2")
}

/// Tensor word over {I, X, Y, Z} given by the letter string, e.g. "XZ".
pub fn pauli_word<T: Scalar>(word: &str) -> Matrix<T> {
    let mut acc: Option<Matrix<T>> = None;
    for ch in word.chars() {
        let factor = match ch {
            'I' => Matrix::identity(2),
            'X' => pauli_x(),
            'Y' => pauli_y(),
            'Z' => pauli_z(),
            other => panic!("unknown Pauli letter `{other}`"),
        };
        acc = Some(match acc {
            None => factor,
            Some(m) => m.kron(&factor),
        });
    }
    acc.expect("nonempty Pauli word")
}
