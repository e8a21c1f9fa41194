//! Workbench for nonlocal games and approximate representations of their
//! finitely presented *-algebras.
//!
//! The crate turns synchronous, binary-constraint-system and XOR games into
//! *-algebra presentations, measures how far finite-dimensional strategies
//! are from representations under several matrix (semi)norms, rounds
//! rho-seminorm near-representations to unitary ones in the little
//! Frobenius norm on a spectral subspace, and lifts little-Frobenius
//! near-representations back to strategies on a maximally entangled state.
//!
//! Module map:
//! - [`matcore`]: dense complex matrices, eigendecomposition/SVD, norms,
//!   and the nearest self-adjoint/unitary/involution/projection roundings;
//! - [`starpoly`]: free *-polynomials, the four game-algebra presentations,
//!   defect reports, and the synchronous/SynchBCS isomorphism;
//! - [`games`]: game models, truth-table polynomials, strategies, values;
//! - [`strategy2rep`]: strategies to rho-seminorm near-representations;
//! - [`xorsdp`]: XOR vector optimization and Clifford strategies;
//! - [`rounding`]: the spectral-subspace rounding of near-representations;
//! - [`lifting`]: near-representations back to exact-measurement strategies;
//! - [`harness`]: instance library, perturbation sweeps, slope fits;
//! - [`json`]: wire formats for every externally visible object.
//!
//! All numerics are generic over the real scalar via [`scalar::Scalar`]
//! (`f32` or `f64`); the `f64` aliases below are what the CLI and the test
//! suite use. The pinned tolerances in type invariants (1e-9 .. 1e-12) are
//! sized for `f64`.

pub mod error;
pub mod games;
pub mod harness;
pub mod json;
pub mod lifting;
pub mod matcore;
pub mod random;
pub mod rounding;
pub mod scalar;
pub mod starpoly;
pub mod strategy2rep;
pub mod xorsdp;

pub use error::{Error, Result};

/// `f64` working aliases, the default precision of the workbench.
pub type Matrix64 = matcore::Matrix<f64>;
pub type DensityFactor64 = matcore::DensityFactor<f64>;
pub type StarPolynomial64 = starpoly::StarPolynomial<f64>;
pub type Assignment64 = starpoly::MatrixAssignment<f64>;
pub type Presentation64 = starpoly::AlgebraPresentation<f64>;
pub type Strategy64 = games::Strategy<f64>;
pub type Game64 = games::Game<f64>;

/// `f32` aliases, for callers trading precision for footprint; the pinned
/// `f64` tolerances apply only to exactly representable data here.
pub type Matrix32 = matcore::Matrix<f32>;
pub type DensityFactor32 = matcore::DensityFactor<f32>;
pub type Strategy32 = games::Strategy<f32>;
