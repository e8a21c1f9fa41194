//! Rounding a rho-seminorm near-representation by self-adjoint unitaries to
//! a unitary near-representation in the little Frobenius norm on a spectral
//! subspace of the density factor.
//!
//! The subspace is a spectral projection `chi_{>= sqrt(alpha_0)}(lambda)`;
//! the threshold is chosen by minimizing a joint defect functional whose
//! exact alpha-average is controlled by the commutators with lambda and the
//! rho-norms of the relations, so a good breakpoint always exists.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matcore::{
    compressed_polar, expand_from_basis, squared_eigenvalue_breakpoints, DensityFactor, Matrix,
};
use crate::scalar::{r, Scalar, C};
use crate::starpoly::{
    defect, evaluate, AlgebraPresentation, DefectReport, MatrixAssignment, NormKind,
};

/// Functional value and rank at one candidate threshold.
#[derive(Clone, Copy, Debug)]
pub struct BreakpointRow<T> {
    /// Squared-eigenvalue breakpoint (the alpha value).
    pub threshold: T,
    pub functional: T,
    pub rank: usize,
}

/// Output of `round_representation`.
#[derive(Clone, Debug)]
pub struct RoundingResult<T: Scalar> {
    /// Chosen spectral projection on the full space.
    pub projection: Matrix<T>,
    pub rank: usize,
    /// Chosen squared-eigenvalue threshold alpha_0.
    pub threshold: T,
    /// Compressed rank x rank unitary images on the subspace, in the
    /// eigenbasis of lambda restricted to the projection.
    pub rounded: MatrixAssignment<T>,
    /// Little-Frobenius defect report on the subspace (dimension = rank).
    pub f_report: DefectReport<T>,
    /// `||X~_j - X_j P||_F / sqrt(rank)` per generator.
    pub per_generator_distance: BTreeMap<String, T>,
    pub functional_value: T,
    pub functional_average: T,
    /// Functional table over all candidate thresholds.
    pub breakpoints: Vec<BreakpointRow<T>>,
}

/// Sorted distinct squared eigenvalues of `lambda` (zero excluded): the
/// breakpoints where the spectral projection changes.
pub fn candidate_thresholds<T: Scalar>(lambda: &DensityFactor<T>) -> Result<Vec<T>> {
    let breaks = squared_eigenvalue_breakpoints(lambda);
    if breaks.is_empty() {
        return Err(Error::Precondition(
            "density factor has empty spectrum".into(),
        ));
    }
    Ok(breaks)
}

/// `(sum_j ||X_j P - P X_j||_F^2 + sum_r ||phi(r) P||_F^2) / tr(P)`.
pub fn joint_defect_functional<T: Scalar>(
    a: &MatrixAssignment<T>,
    pres: &AlgebraPresentation<T>,
    p: &Matrix<T>,
) -> Result<T> {
    let trace = p.trace().re;
    if trace < r::<T>(0.5) {
        return Err(Error::Precondition("projection must be nonzero".into()));
    }
    let images: Result<Vec<&Matrix<T>>> = pres.generators.iter().map(|g| a.get(g)).collect();
    let relations: Result<Vec<Matrix<T>>> = pres
        .relations
        .iter()
        .map(|rel| evaluate(&rel.poly, a))
        .collect();
    Ok(functional_numerator(&images?, &relations?, p) / trace)
}

fn functional_numerator<T: Scalar>(
    generator_images: &[&Matrix<T>],
    relation_images: &[Matrix<T>],
    p: &Matrix<T>,
) -> T {
    let mut acc = T::zero();
    for x in generator_images {
        let comm = &(*x * p) - &(p * *x);
        acc = acc + comm.frobenius_norm().powi(2);
    }
    for img in relation_images {
        acc = acc + (img * p).frobenius_norm().powi(2);
    }
    acc
}

/// Upper bound on the functional's exact alpha-average:
/// `sum_j 2 ||X_j lambda - lambda X_j||_F + sum_r ||phi(r)||_rho^2`.
pub fn connes_average_bound<T: Scalar>(
    a: &MatrixAssignment<T>,
    pres: &AlgebraPresentation<T>,
    lambda: &DensityFactor<T>,
) -> Result<T> {
    let lam = lambda.matrix();
    let mut acc = T::zero();
    for g in &pres.generators {
        let x = a.get(g)?;
        acc = acc + r::<T>(2.0) * (&(x * lam) - &(lam * x)).frobenius_norm();
    }
    for rel in &pres.relations {
        let img = evaluate(&rel.poly, a)?;
        acc = acc + (&img * lam).frobenius_norm().powi(2);
    }
    Ok(acc)
}

/// Round the assignment on the best spectral subspace of `lambda`.
///
/// Every generator image must already be a self-adjoint unitary to 1e-8
/// (run projections through the observable picture first). `tol` is the
/// polar conditioning floor: breakpoints whose compressed blocks have a
/// smaller singular value are skipped.
pub fn round_representation<T: Scalar>(
    a: &MatrixAssignment<T>,
    lambda: &DensityFactor<T>,
    pres: &AlgebraPresentation<T>,
    tol: T,
) -> Result<RoundingResult<T>> {
    if lambda.dim() != a.dim() {
        return Err(Error::dim(a.dim(), lambda.dim(), "density factor"));
    }
    let involution_slack = r::<T>(1e-8);
    let id = Matrix::<T>::identity(a.dim());
    let mut generator_images = Vec::with_capacity(pres.generators.len());
    for g in &pres.generators {
        let x = a.get(g)?;
        let sa = x.hermitian_defect() / r::<T>((a.dim() as f64).sqrt());
        let unit = (&(x * x) - &id).little_frobenius_norm();
        if sa > involution_slack || unit > involution_slack {
            return Err(Error::Precondition(format!(
                "generator `{g}` is not a self-adjoint unitary to 1e-8 (defects {sa:e}, {unit:e})"
            )));
        }
        generator_images.push(x);
    }
    let relation_images: Result<Vec<Matrix<T>>> = pres
        .relations
        .iter()
        .map(|rel| evaluate(&rel.poly, a))
        .collect();
    let relation_images = relation_images?;

    let thresholds = candidate_thresholds(lambda)?;
    let mut rows = Vec::with_capacity(thresholds.len());
    let mut average = T::zero();
    let mut prev = T::zero();
    for &t in &thresholds {
        let p = lambda.spectral_projection_geq(t.sqrt());
        let rank = lambda.count_geq(t.sqrt());
        let num = functional_numerator(&generator_images, &relation_images, &p);
        average = average + (t - prev) * num;
        prev = t;
        rows.push(BreakpointRow {
            threshold: t,
            functional: num / r::<T>(rank as f64),
            rank,
        });
    }
    // The weights (t_k - t_{k-1}) integrate tr(chi) to tr(lambda^2) = 1, so
    // `average` is already normalized.
    let min_functional = rows
        .iter()
        .map(|row| row.functional)
        .fold(T::infinity(), |a, b| if b < a { b } else { a });
    if min_functional > average + r::<T>(1e-9) {
        return Err(Error::Numerical(format!(
            "averaging guarantee violated: min functional {min_functional:e} exceeds the exact alpha-average {average:e}"
        )));
    }

    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&x, &y| {
        rows[x]
            .functional
            .partial_cmp(&rows[y].functional)
            .expect("finite functional")
            .then(rows[y].rank.cmp(&rows[x].rank))
    });

    let eigenvectors = &lambda.spectral().eigenvectors;
    let mut skipped: Vec<String> = Vec::new();
    for &k in &order {
        let row = rows[k];
        let basis: Vec<Vec<C<T>>> = (0..row.rank)
            .map(|col| (0..lambda.dim()).map(|i| eigenvectors[(i, col)]).collect())
            .collect();
        let mut compressed = BTreeMap::new();
        let mut distances = BTreeMap::new();
        let mut ok = true;
        let p = lambda.spectral_projection_geq(row.threshold.sqrt());
        for (g, x) in pres.generators.iter().zip(generator_images.iter()) {
            let (w, min_sv) = compressed_polar(x, &basis);
            if min_sv < tol {
                skipped.push(format!(
                    "alpha={:e}: singular value {min_sv:e} on `{g}`",
                    row.threshold
                ));
                ok = false;
                break;
            }
            let expanded = expand_from_basis(&w, &basis, lambda.dim());
            let dist = (&expanded - &(*x * &p)).frobenius_norm() / r::<T>(row.rank as f64).sqrt();
            distances.insert(g.clone(), dist);
            compressed.insert(g.clone(), w);
        }
        if !ok {
            continue;
        }
        let rounded = MatrixAssignment::new(compressed)?;
        let f_report = defect(pres, &rounded, NormKind::LittleFrobenius, None)?;
        return Ok(RoundingResult {
            projection: p,
            rank: row.rank,
            threshold: row.threshold,
            rounded,
            f_report,
            per_generator_distance: distances,
            functional_value: row.functional,
            functional_average: average,
            breakpoints: rows,
        });
    }
    Err(Error::Numerical(format!(
        "all candidate thresholds are ill-conditioned for polar rounding: {}",
        skipped.join("; ")
    )))
}
