//! Direction one of the correspondence: extract approximate
//! representations in the state-induced seminorm, with the approximate
//! tracial property, from near-optimal strategies.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::games::{BinaryConstraintSystem, Measurements, Strategy, SynchronousGame, XorGame};
use crate::matcore::{DensityFactor, Matrix};
use crate::scalar::{r, Scalar};
use crate::starpoly::{
    bcs_algebra, defect, synchronous_algebra, xor_solution_algebra, DefectReport, MatrixAssignment,
    NormKind,
};

/// A rho-seminorm extraction: Bob-side generator images, the density
/// factor of the employed state, the per-relation report, and the
/// approximate-tracial defect `max_s ||phi(s) lambda - lambda phi(s)||_F`.
#[derive(Clone, Debug)]
pub struct RhoRepExtraction<T: Scalar> {
    pub assignment: MatrixAssignment<T>,
    pub lambda: DensityFactor<T>,
    pub report: DefectReport<T>,
    pub atp_defect: T,
    /// State-transfer residuals pairing Bob images with the matching
    /// Alice-side operators (`||lambda conj(A) - B lambda||_F`), keyed by a
    /// generator or row tag.
    pub consistency_residuals: BTreeMap<String, T>,
}

/// Density factor read off a canonical strategy's Schmidt coefficients.
fn canonical_lambda<T: Scalar>(s: &Strategy<T>) -> Result<DensityFactor<T>> {
    if !s.canonical {
        return Err(Error::Precondition(
            "strategy must be canonicalized first".into(),
        ));
    }
    let m = s.coefficient_matrix();
    let d = s.dim();
    let mut coeffs = Vec::with_capacity(d);
    for i in 0..d {
        for j in 0..d {
            let z = m[(i, j)];
            if i == j {
                if z.im.abs() > r::<T>(1e-12) || z.re < -r::<T>(1e-12) {
                    return Err(Error::Precondition(
                        "canonical state must have nonnegative real Schmidt coefficients".into(),
                    ));
                }
                coeffs.push(if z.re < T::zero() { T::zero() } else { z.re });
            } else if z.norm() > r::<T>(1e-12) {
                return Err(Error::Precondition(
                    "canonical state must have a diagonal coefficient matrix".into(),
                ));
            }
        }
    }
    DensityFactor::from_schmidt(&coeffs)
}

/// `||lambda conj(alice_op) - bob_op lambda||_F` in the canonical basis.
fn state_transfer_residual<T: Scalar>(
    alice_op: &Matrix<T>,
    bob_op: &Matrix<T>,
    lambda: &DensityFactor<T>,
) -> T {
    let lam = lambda.matrix();
    (&(lam * &alice_op.conj()) - &(bob_op * lam)).frobenius_norm()
}

/// Extract the synchronous-algebra representation carried by Bob's
/// projections of a canonical PVM strategy.
pub fn extract_synchronous<T: Scalar>(
    g: &SynchronousGame<T>,
    s: &Strategy<T>,
) -> Result<RhoRepExtraction<T>> {
    let lambda = canonical_lambda(s)?;
    let (alice, bob) = match (&s.alice, &s.bob) {
        (Measurements::Pvm(a), Measurements::Pvm(b)) => (a, b),
        _ => {
            return Err(Error::Precondition(
                "synchronous extraction needs a PVM strategy".into(),
            ))
        }
    };
    let nq = g.questions.len();
    let na = g.answers.len();
    if alice.len() != nq || bob.len() != nq {
        return Err(Error::dim(nq, bob.len(), "question count"));
    }
    if bob.iter().chain(alice.iter()).any(|fam| fam.len() != na) {
        return Err(Error::Validation(
            "answer count mismatch with the game".into(),
        ));
    }
    let mut images = BTreeMap::new();
    let mut residuals = BTreeMap::new();
    for i in 0..nq {
        for a in 0..na {
            let name = format!("p[{i},{a}]");
            residuals.insert(
                name.clone(),
                state_transfer_residual(&alice[i][a], &bob[i][a], &lambda),
            );
            images.insert(name, bob[i][a].clone());
        }
    }
    let assignment = MatrixAssignment::new(images)?;
    let report = defect(
        &synchronous_algebra(g),
        &assignment,
        NormKind::Rho,
        Some(&lambda),
    )?;
    let atp_defect = report.atp_defect.unwrap_or_else(T::zero);
    Ok(RhoRepExtraction {
        assignment,
        lambda,
        report,
        atp_defect,
        consistency_residuals: residuals,
    })
}

/// Extract the BCS-algebra representation carried by Bob's per-variable
/// observables (from his two-outcome PVMs) of a canonical strategy; the
/// consistency residuals pair each variable with Alice's marginal
/// observable in every constraint containing it.
pub fn extract_bcs<T: Scalar>(
    b: &BinaryConstraintSystem,
    s: &Strategy<T>,
) -> Result<RhoRepExtraction<T>> {
    let lambda = canonical_lambda(s)?;
    let (alice, bob) = match (&s.alice, &s.bob) {
        (Measurements::Pvm(a), Measurements::Pvm(b)) => (a, b),
        _ => {
            return Err(Error::Precondition(
                "BCS extraction needs a PVM strategy".into(),
            ))
        }
    };
    if bob.len() != b.n {
        return Err(Error::dim(b.n, bob.len(), "per-variable measurement count"));
    }
    if alice.len() != b.constraints.len() {
        return Err(Error::dim(
            b.constraints.len(),
            alice.len(),
            "per-constraint measurement count",
        ));
    }
    for (j, fam) in bob.iter().enumerate() {
        if fam.len() != 2 {
            return Err(Error::Validation(format!(
                "Bob's measurement for variable {} must have two outcomes",
                j + 1
            )));
        }
    }
    // X_j = Q_+ - Q_-.
    let xs: Vec<Matrix<T>> = bob.iter().map(|fam| &fam[0] - &fam[1]).collect();
    let mut images = BTreeMap::new();
    for (j, x) in xs.iter().enumerate() {
        images.insert(format!("x{}", j + 1), x.clone());
    }
    let assignment = MatrixAssignment::new(images)?;
    let report = defect(&bcs_algebra(b)?, &assignment, NormKind::Rho, Some(&lambda))?;
    let atp_defect = report.atp_defect.unwrap_or_else(T::zero);

    // Alice's marginal observable for scope position t of constraint i:
    // sum over her answers of the sign of bit t times the projection.
    let mut residuals = BTreeMap::new();
    for (ci, cons) in b.constraints.iter().enumerate() {
        for (t, &j) in cons.scope.iter().enumerate() {
            let dim = s.dim();
            let mut marginal = Matrix::<T>::zeros(dim);
            for (a, proj) in alice[ci].iter().enumerate() {
                let sign = if (a >> t) & 1 == 1 {
                    -T::one()
                } else {
                    T::one()
                };
                marginal = &marginal + &proj.scale_real(sign);
            }
            residuals.insert(
                format!("x{j}|C{}", ci + 1),
                state_transfer_residual(&marginal, &xs[j - 1], &lambda),
            );
        }
    }
    Ok(RhoRepExtraction {
        assignment,
        lambda,
        report,
        atp_defect,
        consistency_residuals: residuals,
    })
}

/// Extract the solution-algebra representation carried by Bob's observables
/// of a canonical XOR strategy; the residuals are the per-row quantities
/// `||sum_j g_ij X_j lambda - c_i lambda conj(Y_i)||_F`.
pub fn extract_xor<T: Scalar>(
    g: &XorGame<T>,
    s: &Strategy<T>,
    c: &[T],
) -> Result<RhoRepExtraction<T>> {
    let lambda = canonical_lambda(s)?;
    let (alice, bob) = match (&s.alice, &s.bob) {
        (Measurements::Observables(a), Measurements::Observables(b)) => (a, b),
        _ => {
            return Err(Error::Precondition(
                "XOR extraction needs an observables strategy".into(),
            ))
        }
    };
    if c.len() != g.rows() {
        return Err(Error::dim(g.rows(), c.len(), "marginal row biases"));
    }
    if bob.len() != g.cols() || alice.len() != g.rows() {
        return Err(Error::dim(g.cols(), bob.len(), "observable count"));
    }
    let mut images = BTreeMap::new();
    for (j, x) in bob.iter().enumerate() {
        images.insert(format!("s{}", j + 1), x.clone());
    }
    let assignment = MatrixAssignment::new(images)?;
    let report = defect(
        &xor_solution_algebra(g, c)?,
        &assignment,
        NormKind::Rho,
        Some(&lambda),
    )?;
    let atp_defect = report.atp_defect.unwrap_or_else(T::zero);

    let lam = lambda.matrix();
    let mut residuals = BTreeMap::new();
    for i in 0..g.rows() {
        let dim = s.dim();
        let mut row = Matrix::<T>::zeros(dim);
        for (j, x) in bob.iter().enumerate() {
            let w = g.cost(i, j);
            if w.is_zero() {
                continue;
            }
            row = &row + &x.scale_real(w);
        }
        let lhs = &(&row * lam) - &(lam * &alice[i].conj()).scale_real(c[i]);
        residuals.insert(format!("row[{}]", i + 1), lhs.frobenius_norm());
    }
    Ok(RhoRepExtraction {
        assignment,
        lambda,
        report,
        atp_defect,
        consistency_residuals: residuals,
    })
}
