//! Matrix assignments to generators and per-relation defect reports.

use std::collections::BTreeMap;

use super::poly::StarPolynomial;
use super::presentation::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::matcore::{operator_norm, rho_seminorm, DensityFactor, Matrix};
use crate::scalar::Scalar;

/// Map from generator names to same-dimension matrices.
#[derive(Clone, Debug)]
pub struct MatrixAssignment<T: Scalar> {
    dim: usize,
    images: BTreeMap<String, Matrix<T>>,
}

impl<T: Scalar> MatrixAssignment<T> {
    pub fn new(images: BTreeMap<String, Matrix<T>>) -> Result<Self> {
        let dim = images
            .values()
            .next()
            .map(|m| m.dim())
            .ok_or_else(|| Error::Validation("assignment must not be empty".into()))?;
        for (name, m) in &images {
            if m.dim() != dim {
                return Err(Error::dim(dim, m.dim(), &format!("image of `{name}`")));
            }
        }
        Ok(MatrixAssignment { dim, images })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, name: &str) -> Result<&Matrix<T>> {
        self.images
            .get(name)
            .ok_or_else(|| Error::MissingGenerator(name.to_string()))
    }

    pub fn images(&self) -> &BTreeMap<String, Matrix<T>> {
        &self.images
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.images.keys()
    }

    /// Apply a matrix-level transform to every image. The transform may
    /// change the common dimension, but all images must still agree on it.
    pub fn map(&self, mut f: impl FnMut(&str, &Matrix<T>) -> Matrix<T>) -> Self {
        let images: BTreeMap<String, Matrix<T>> = self
            .images
            .iter()
            .map(|(k, v)| (k.clone(), f(k, v)))
            .collect();
        MatrixAssignment::new(images).expect("transformed images share one dimension")
    }

    /// Rename generators; drops entries whose name maps to `None`.
    pub fn rename(&self, mut f: impl FnMut(&str) -> Option<String>) -> Result<Self> {
        let mut images = BTreeMap::new();
        for (k, v) in &self.images {
            if let Some(name) = f(k) {
                images.insert(name, v.clone());
            }
        }
        MatrixAssignment::new(images)
    }
}

/// Norm used when scoring relation images.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    Op,
    Frobenius,
    LittleFrobenius,
    Rho,
}

impl NormKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NormKind::Op => "op",
            NormKind::Frobenius => "F",
            NormKind::LittleFrobenius => "f",
            NormKind::Rho => "rho",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "op" => Ok(NormKind::Op),
            "F" => Ok(NormKind::Frobenius),
            "f" => Ok(NormKind::LittleFrobenius),
            "rho" => Ok(NormKind::Rho),
            other => Err(Error::Validation(format!("unknown norm kind `{other}`"))),
        }
    }
}

/// Per-relation norms of the relation images under an assignment.
#[derive(Clone, Debug)]
pub struct DefectReport<T: Scalar> {
    pub norm_kind: NormKind,
    pub per_relation: BTreeMap<String, T>,
    pub max_defect: T,
    /// Largest commutator norm `||phi(s) lambda - lambda phi(s)||_F` over
    /// the generators, when a density factor is in play.
    pub atp_defect: Option<T>,
}

/// Homomorphic evaluation of a *-polynomial: adjoint letters map to
/// conjugate transposes, the empty word to the identity.
pub fn evaluate<T: Scalar>(p: &StarPolynomial<T>, a: &MatrixAssignment<T>) -> Result<Matrix<T>> {
    let dim = a.dim();
    let mut acc = Matrix::zeros(dim);
    for (word, &coeff) in p.terms() {
        let mut term = Matrix::identity(dim);
        for letter in word {
            let img = a.get(&letter.gen)?;
            let factor = if letter.adjoint {
                img.adjoint()
            } else {
                img.clone()
            };
            term = &term * &factor;
        }
        acc = &acc + &term.scale(coeff);
    }
    Ok(acc)
}

fn relation_norm<T: Scalar>(
    m: &Matrix<T>,
    kind: NormKind,
    lambda: Option<&DensityFactor<T>>,
) -> Result<T> {
    match kind {
        NormKind::Op => Ok(operator_norm(m)),
        NormKind::Frobenius => Ok(m.frobenius_norm()),
        NormKind::LittleFrobenius => Ok(m.little_frobenius_norm()),
        NormKind::Rho => {
            let lam = lambda
                .ok_or_else(|| Error::Precondition("rho norm requires a density factor".into()))?;
            rho_seminorm(m, lam)
        }
    }
}

/// Score every relation of a presentation against an assignment.
pub fn defect<T: Scalar>(
    pres: &AlgebraPresentation<T>,
    a: &MatrixAssignment<T>,
    kind: NormKind,
    lambda: Option<&DensityFactor<T>>,
) -> Result<DefectReport<T>> {
    if let Some(lam) = lambda {
        if lam.dim() != a.dim() {
            return Err(Error::dim(a.dim(), lam.dim(), "density factor"));
        }
    }
    let mut per_relation = BTreeMap::new();
    let mut max_defect = T::zero();
    for rel in &pres.relations {
        let image = evaluate(&rel.poly, a)?;
        let value = relation_norm(&image, kind, lambda)?;
        if value > max_defect {
            max_defect = value;
        }
        per_relation.insert(rel.label.clone(), value);
    }
    let atp_defect = lambda.map(|lam| {
        pres.generators
            .iter()
            .filter_map(|g| a.images().get(g))
            .map(|x| (&(x * lam.matrix()) - &(lam.matrix() * x)).frobenius_norm())
            .fold(T::zero(), |acc, v| if v > acc { v } else { acc })
    });
    Ok(DefectReport {
        norm_kind: kind,
        per_relation,
        max_defect,
        atp_defect,
    })
}

/// Defect of a replacement assignment plus the per-generator distances
/// `||a(s) - replacement(s)||_f` from the original.
#[derive(Clone, Debug)]
pub struct ReplacementReport<T: Scalar> {
    pub report: DefectReport<T>,
    pub distances: BTreeMap<String, T>,
}

pub fn replace_and_recheck<T: Scalar>(
    pres: &AlgebraPresentation<T>,
    a: &MatrixAssignment<T>,
    replacement: &MatrixAssignment<T>,
    kind: NormKind,
    lambda: Option<&DensityFactor<T>>,
) -> Result<ReplacementReport<T>> {
    if a.dim() != replacement.dim() {
        return Err(Error::dim(
            a.dim(),
            replacement.dim(),
            "replacement assignment",
        ));
    }
    let mut distances = BTreeMap::new();
    for g in &pres.generators {
        let old = a.get(g)?;
        let new = replacement.get(g)?;
        distances.insert(g.clone(), (old - new).little_frobenius_norm());
    }
    let report = defect(pres, replacement, kind, lambda)?;
    Ok(ReplacementReport { report, distances })
}
