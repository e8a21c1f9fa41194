//! Quantum strategies: per-question PVMs or +-1 observables plus a shared
//! bipartite state, with Schmidt-form canonicalization.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use super::NonlocalGame;
use super::XorGame;
use crate::error::{Error, Result};
use crate::matcore::{svd, DensityFactor, Matrix};
use crate::scalar::{r, Scalar, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyKind {
    Pvm,
    Observable,
}

/// One player's measurements.
#[derive(Clone, Debug)]
pub enum Measurements<T: Scalar> {
    /// Per question, a family of projections summing to the identity.
    Pvm(Vec<Vec<Matrix<T>>>),
    /// Per question, one +-1 observable.
    Observables(Vec<Matrix<T>>),
}

impl<T: Scalar> Measurements<T> {
    pub fn kind(&self) -> StrategyKind {
        match self {
            Measurements::Pvm(_) => StrategyKind::Pvm,
            Measurements::Observables(_) => StrategyKind::Observable,
        }
    }

    pub fn questions(&self) -> usize {
        match self {
            Measurements::Pvm(v) => v.len(),
            Measurements::Observables(v) => v.len(),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Measurements::Pvm(v) => v.first().and_then(|f| f.first()).map(|m| m.dim()),
            Measurements::Observables(v) => v.first().map(|m| m.dim()),
        }
    }

    fn map(&self, mut f: impl FnMut(&Matrix<T>) -> Matrix<T>) -> Self {
        match self {
            Measurements::Pvm(v) => Measurements::Pvm(
                v.iter()
                    .map(|fam| fam.iter().map(&mut f).collect())
                    .collect(),
            ),
            Measurements::Observables(v) => {
                Measurements::Observables(v.iter().map(&mut f).collect())
            }
        }
    }
}

/// Strategy for a two-player game on `H (x) H` with equal local dimensions.
#[derive(Clone, Debug)]
pub struct Strategy<T: Scalar> {
    pub alice: Measurements<T>,
    pub bob: Measurements<T>,
    /// State vector of length `dim^2`, row-major over (Alice, Bob) indices.
    pub state: Vec<C<T>>,
    /// Set when the state is in Schmidt form (diagonal, nonincreasing
    /// coefficient matrix).
    pub canonical: bool,
}

impl<T: Scalar> Strategy<T> {
    pub fn new(alice: Measurements<T>, bob: Measurements<T>, state: Vec<C<T>>) -> Result<Self> {
        let s = Strategy {
            alice,
            bob,
            state,
            canonical: false,
        };
        s.check_shape()?;
        Ok(s)
    }

    pub fn kind(&self) -> StrategyKind {
        self.alice.kind()
    }

    pub fn dim(&self) -> usize {
        self.alice.dim().or_else(|| self.bob.dim()).unwrap_or(1)
    }

    fn check_shape(&self) -> Result<()> {
        if self.alice.kind() != self.bob.kind() {
            return Err(Error::Validation(
                "both players must use the same measurement kind".into(),
            ));
        }
        let d = self.dim();
        let all_dims_ok = |m: &Measurements<T>| match m {
            Measurements::Pvm(v) => v.iter().flatten().all(|op| op.dim() == d),
            Measurements::Observables(v) => v.iter().all(|op| op.dim() == d),
        };
        if !all_dims_ok(&self.alice) || !all_dims_ok(&self.bob) {
            return Err(Error::Validation(
                "all measurement operators must share one local dimension".into(),
            ));
        }
        if self.state.len() != d * d {
            return Err(Error::dim(d * d, self.state.len(), "state vector length"));
        }
        Ok(())
    }

    /// Structural invariants: projectivity/completeness for PVMs,
    /// self-adjoint unitarity for observables (1e-10), unit state (1e-12).
    /// For scalars coarser than `f64` the thresholds floor at a small
    /// multiple of the machine epsilon.
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        let d = self.dim();
        let tol = r::<T>(1e-10).max(T::epsilon() * r::<T>(1e3));
        let check = |m: &Measurements<T>, side: &str| -> Result<()> {
            match m {
                Measurements::Pvm(families) => {
                    for (q, fam) in families.iter().enumerate() {
                        let mut sum = Matrix::zeros(d);
                        for p in fam {
                            if p.hermitian_defect() > tol || (&(p * p) - p).frobenius_norm() > tol {
                                return Err(Error::Validation(format!(
                                    "{side} question {q}: not a projection family"
                                )));
                            }
                            sum = &sum + p;
                        }
                        if (&sum - &Matrix::identity(d)).frobenius_norm() > tol {
                            return Err(Error::Validation(format!(
                                "{side} question {q}: projections do not sum to identity"
                            )));
                        }
                    }
                    Ok(())
                }
                Measurements::Observables(obs) => {
                    for (q, x) in obs.iter().enumerate() {
                        if x.hermitian_defect() > tol
                            || (&(x * x) - &Matrix::identity(d)).frobenius_norm() > tol
                        {
                            return Err(Error::Validation(format!(
                                "{side} question {q}: not a self-adjoint unitary"
                            )));
                        }
                    }
                    Ok(())
                }
            }
        };
        check(&self.alice, "Alice")?;
        check(&self.bob, "Bob")?;
        let norm: T = self.state.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if (norm - T::one()).abs() > r::<T>(1e-12).max(T::epsilon() * r::<T>(16.0)) {
            return Err(Error::Validation(format!("state norm {norm} is not 1")));
        }
        Ok(())
    }

    /// Coefficient matrix `M` with `|psi> = sum_{s,t} M[s,t] |s>|t>`.
    pub fn coefficient_matrix(&self) -> Matrix<T> {
        let d = self.dim();
        Matrix::from_fn(d, |s, t| self.state[s * d + t])
    }

    /// The maximally entangled state on dimension `d`.
    pub fn maximally_entangled_state(d: usize) -> Vec<C<T>> {
        let amp = Complex::new(T::one() / r::<T>(d as f64).sqrt(), T::zero());
        let mut state = vec![Complex::zero(); d * d];
        for t in 0..d {
            state[t * d + t] = amp;
        }
        state
    }

    /// State with the given Schmidt coefficients on the diagonal.
    pub fn schmidt_state(coeffs: &[T]) -> Vec<C<T>> {
        let d = coeffs.len();
        let mut state = vec![Complex::zero(); d * d];
        for (t, &c) in coeffs.iter().enumerate() {
            state[t * d + t] = Complex::new(c, T::zero());
        }
        state
    }
}

/// `<psi| A (x) B |psi> = tr(M* A M B^T)` via the coefficient matrix.
pub fn expectation<T: Scalar>(s: &Strategy<T>, a: &Matrix<T>, b: &Matrix<T>) -> C<T> {
    let m = s.coefficient_matrix();
    let amb = &(a * &m) * &b.transpose();
    m.inner(&amb)
}

/// Winning probability plus the per-input table.
#[derive(Clone, Debug)]
pub struct GameValue<T> {
    pub value: T,
    pub per_input: BTreeMap<(usize, usize), T>,
}

/// Value of a predicate game under a PVM strategy.
pub fn game_value<T: Scalar>(g: &NonlocalGame<T>, s: &Strategy<T>) -> Result<GameValue<T>> {
    let (alice, bob) = match (&s.alice, &s.bob) {
        (Measurements::Pvm(a), Measurements::Pvm(b)) => (a, b),
        _ => {
            return Err(Error::Precondition(
                "game_value requires a PVM strategy".into(),
            ))
        }
    };
    if alice.len() != g.inputs_a.len() || bob.len() != g.inputs_b.len() {
        return Err(Error::dim(g.inputs_a.len(), alice.len(), "question count"));
    }
    for (q, fam) in alice.iter().enumerate() {
        if fam.len() != g.outputs_a.len() {
            return Err(Error::dim(
                g.outputs_a.len(),
                fam.len(),
                &format!("Alice outputs at question {q}"),
            ));
        }
    }
    for (q, fam) in bob.iter().enumerate() {
        if fam.len() != g.outputs_b.len() {
            return Err(Error::dim(
                g.outputs_b.len(),
                fam.len(),
                &format!("Bob outputs at question {q}"),
            ));
        }
    }

    let m = s.coefficient_matrix();
    let mut per_input = BTreeMap::new();
    let mut value = T::zero();
    for i in 0..g.inputs_a.len() {
        for j in 0..g.inputs_b.len() {
            let mut p_ij = T::zero();
            for (a, ea) in alice[i].iter().enumerate() {
                let eam = ea * &m;
                for (b, qb) in bob[j].iter().enumerate() {
                    if !g.wins(i, j, a, b) {
                        continue;
                    }
                    let term = m.inner(&(&eam * &qb.transpose()));
                    p_ij = p_ij + term.re;
                }
            }
            per_input.insert((i, j), p_ij);
            value = value + g.eta(i, j) * p_ij;
        }
    }
    Ok(GameValue { value, per_input })
}

/// Bias of an XOR game under an observables strategy. The imaginary part of
/// the accumulated correlation must stay below 1e-10.
pub fn xor_bias<T: Scalar>(g: &XorGame<T>, s: &Strategy<T>) -> Result<T> {
    let (alice, bob) = match (&s.alice, &s.bob) {
        (Measurements::Observables(a), Measurements::Observables(b)) => (a, b),
        _ => {
            return Err(Error::Precondition(
                "xor_bias requires an observables strategy".into(),
            ))
        }
    };
    if alice.len() != g.rows() || bob.len() != g.cols() {
        return Err(Error::dim(g.rows(), alice.len(), "observable count"));
    }
    let mut bias = Complex::<T>::zero();
    for (i, y) in alice.iter().enumerate() {
        for (j, x) in bob.iter().enumerate() {
            let w = g.cost(i, j);
            if w.is_zero() {
                continue;
            }
            bias = bias + expectation(s, y, x) * Complex::new(w, T::zero());
        }
    }
    if bias.im.abs() > r::<T>(1e-10) {
        return Err(Error::Numerical(format!(
            "bias has imaginary part {:e}; observables are not self-adjoint",
            bias.im
        )));
    }
    Ok(bias.re)
}

/// Rewrite the state in Schmidt form and absorb the basis changes into the
/// measurement operators; correlations are untouched. Zero Schmidt
/// coefficients are kept, so no support truncation happens here.
pub fn canonicalize<T: Scalar>(s: &Strategy<T>) -> Result<(Strategy<T>, DensityFactor<T>)> {
    let m = s.coefficient_matrix();
    let dec = svd(&m);
    // M = U diag(sigma) V*; the new Alice basis is the columns of U, the
    // new Bob basis the columns of conj(V).
    let u = dec.u;
    let bconj = dec.v.conj();
    let alice = s.alice.map(|op| &(&u.adjoint() * op) * &u);
    let bob = s.bob.map(|op| &(&bconj.adjoint() * op) * &bconj);
    let state = Strategy::schmidt_state(&dec.sigma);
    let lambda = DensityFactor::from_schmidt(&dec.sigma)?;
    Ok((
        Strategy {
            alice,
            bob,
            state,
            canonical: true,
        },
        lambda,
    ))
}

#[derive(Clone, Copy, Debug)]
pub struct TensorFactorNorms<T> {
    /// `|| (E (x) 1 - 1 (x) F) |psi> ||`
    pub lhs: T,
    /// `|| lambda conj(E) - F lambda ||_F`
    pub rhs: T,
}

/// Both sides of the state-transfer identity relating a tensor difference
/// on the state to a factor-side Frobenius norm; they agree for canonical
/// strategies and self-adjoint inputs.
pub fn tensor_vs_factor_norm<T: Scalar>(
    e: &Matrix<T>,
    f: &Matrix<T>,
    s: &Strategy<T>,
) -> Result<TensorFactorNorms<T>> {
    if e.hermitian_defect() > r::<T>(1e-9) || f.hermitian_defect() > r::<T>(1e-9) {
        return Err(Error::Precondition("operators must be self-adjoint".into()));
    }
    if !s.canonical {
        return Err(Error::Precondition("strategy must be canonical".into()));
    }
    let m = s.coefficient_matrix();
    e.check_same_dim(&m, "tensor_vs_factor_norm operand")?;
    let lhs = (&(e * &m) - &(&m * &f.transpose())).frobenius_norm();
    // In the canonical basis the coefficient matrix is lambda itself.
    let rhs = (&(&m * &e.conj()) - &(f * &m)).frobenius_norm();
    Ok(TensorFactorNorms { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_pvm(rng: &mut ChaCha8Rng, d: usize, outcomes: usize) -> Vec<Matrix<f64>> {
        // Random orthonormal basis split into `outcomes` groups.
        let u = random::haar_unitary::<f64, _>(rng, d);
        let mut fams = vec![Matrix::zeros(d); outcomes];
        for k in 0..d {
            let which = k % outcomes;
            let col: Vec<_> = (0..d).map(|i| u[(i, k)]).collect();
            let proj = Matrix::from_fn(d, |i, j| col[i] * col[j].conj());
            fams[which] = &fams[which] + &proj;
        }
        fams
    }

    #[test]
    fn canonicalize_preserves_correlations() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let d = 4;
        let alice = Measurements::Pvm(vec![random_pvm(&mut rng, d, 2), random_pvm(&mut rng, d, 2)]);
        let bob = Measurements::Pvm(vec![random_pvm(&mut rng, d, 2), random_pvm(&mut rng, d, 2)]);
        let state = random::unit_vector::<f64, _>(&mut rng, d * d);
        let s = Strategy::new(alice, bob, state).unwrap();
        s.validate().unwrap();
        let (canon, lambda) = canonicalize(&s).unwrap();
        canon.validate().unwrap();
        assert!(canon.canonical);
        // lambda is diagonal nonincreasing with unit purity.
        let evs = lambda.eigenvalues();
        assert!(evs.windows(2).all(|w| w[0] >= w[1]));
        // Correlations match before and after.
        let (a_old, b_old) = match (&s.alice, &s.bob) {
            (Measurements::Pvm(a), Measurements::Pvm(b)) => (a, b),
            _ => unreachable!(),
        };
        let (a_new, b_new) = match (&canon.alice, &canon.bob) {
            (Measurements::Pvm(a), Measurements::Pvm(b)) => (a, b),
            _ => unreachable!(),
        };
        for q in 0..2 {
            for qa in 0..2 {
                for p in 0..2 {
                    for pb in 0..2 {
                        let before = expectation(&s, &a_old[q][qa], &b_old[p][pb]);
                        let after = expectation(&canon, &a_new[q][qa], &b_new[p][pb]);
                        assert!(
                            (before - after).norm() < 1e-10,
                            "correlation changed: {before} vs {after}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn canonicalize_maximally_entangled() {
        let d = 3;
        let alice = Measurements::Observables(vec![Matrix::<f64>::identity(d)]);
        let bob = Measurements::Observables(vec![Matrix::identity(d)]);
        let s = Strategy::new(alice, bob, Strategy::maximally_entangled_state(d)).unwrap();
        let (_, lambda) = canonicalize(&s).unwrap();
        let want = 1.0 / (d as f64).sqrt();
        assert!(lambda
            .eigenvalues()
            .iter()
            .all(|&v| (v - want).abs() < 1e-12));
    }

    #[test]
    fn product_state_has_rank_one_schmidt() {
        let d = 3;
        let alice = Measurements::Observables(vec![Matrix::<f64>::identity(d)]);
        let bob = Measurements::Observables(vec![Matrix::identity(d)]);
        let mut state = vec![Complex::new(0.0, 0.0); d * d];
        state[1] = Complex::new(1.0, 0.0); // |0> (x) |1>
        let s = Strategy::new(alice, bob, state).unwrap();
        let (_, lambda) = canonicalize(&s).unwrap();
        assert!((lambda.eigenvalues()[0] - 1.0).abs() < 1e-12);
        assert!(lambda.eigenvalues()[1..].iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn uniform_answering_on_the_triangle_game() {
        // Independent uniform answers: both players measure the
        // computational basis on the flat product state, so every answer
        // pair has probability 1/9. Same-question pairs then win with
        // probability 1/3 and distinct-question pairs with 2/3.
        let labels: Vec<String> = (0..3).map(|v| v.to_string()).collect();
        let g = crate::games::SynchronousGame::<f64>::from_predicate(
            labels.clone(),
            labels,
            |i, j, a, b| if i == j { a == b } else { a != b },
        )
        .unwrap();
        let basis_pvm: Vec<Matrix<f64>> = (0..3)
            .map(|a| {
                let mut m = Matrix::zeros(3);
                m[(a, a)] = Complex::new(1.0, 0.0);
                m
            })
            .collect();
        let fams = vec![basis_pvm.clone(), basis_pvm.clone(), basis_pvm];
        let amp = Complex::new(1.0 / 3.0, 0.0);
        let state = vec![amp; 9];
        let s = Strategy::new(
            Measurements::Pvm(fams.clone()),
            Measurements::Pvm(fams),
            state,
        )
        .unwrap();
        let gv = game_value(&g.to_nonlocal(), &s).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 / 3.0 } else { 2.0 / 3.0 };
                assert!((gv.per_input[&(i, j)] - want).abs() < 1e-12);
            }
        }
        let expected = (3.0 * (1.0 / 3.0) + 6.0 * (2.0 / 3.0)) / 9.0;
        assert!((gv.value - expected).abs() < 1e-12);
    }

    #[test]
    fn tensor_factor_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..50 {
            let d = 3;
            let alice = Measurements::Observables(vec![Matrix::identity(d)]);
            let bob = Measurements::Observables(vec![Matrix::identity(d)]);
            let s =
                Strategy::new(alice, bob, random::unit_vector::<f64, _>(&mut rng, d * d)).unwrap();
            let (canon, _) = canonicalize(&s).unwrap();
            let e = random::hermitian::<f64, _>(&mut rng, d, 1.0);
            let f = random::hermitian::<f64, _>(&mut rng, d, 1.0);
            let out = tensor_vs_factor_norm(&e, &f, &canon).unwrap();
            assert!(
                (out.lhs - out.rhs).abs() < 1e-10,
                "identity violated: {} vs {}",
                out.lhs,
                out.rhs
            );
        }
    }

    #[test]
    fn tensor_factor_trivial_cases() {
        let d = 2;
        let alice = Measurements::Observables(vec![Matrix::identity(d)]);
        let bob = Measurements::Observables(vec![Matrix::identity(d)]);
        let s = Strategy::new(alice, bob, Strategy::maximally_entangled_state(d)).unwrap();
        let (canon, _) = canonicalize(&s).unwrap();
        let id = Matrix::identity(d);
        let out = tensor_vs_factor_norm(&id, &id, &canon).unwrap();
        assert!(out.lhs < 1e-14 && out.rhs < 1e-14);
        // Real diagonal operators commute with a diagonal lambda.
        let e = Matrix::diag_real(&[0.3, -0.8]);
        let out2 = tensor_vs_factor_norm(&e, &e, &canon).unwrap();
        assert!(out2.lhs < 1e-14 && out2.rhs < 1e-14);
    }
}
