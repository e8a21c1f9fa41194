//! Level-1 vector optimization for XOR games, marginal row biases, and the
//! Clifford-operator strategy carrying a vector solution.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::games::{Measurements, Strategy, XorGame};
use crate::matcore::{pauli_word, Matrix};
use crate::scalar::{r, Scalar};

/// Optimal (or best-found) vector configuration for an XOR game: unit
/// vectors for both players in ambient dimension `m + n`, the bias they
/// achieve, and the marginal row biases `c_i = ||sum_j g_ij v_j||`.
#[derive(Clone, Debug)]
pub struct VectorSolution<T: Scalar> {
    pub r: usize,
    pub u: Vec<Vec<T>>,
    pub v: Vec<Vec<T>>,
    pub bias: T,
    pub c: Vec<T>,
    /// Rows of the cost matrix that are identically zero (their vectors are
    /// pinned to the first basis vector).
    pub degenerate_rows: Vec<usize>,
    pub degenerate_cols: Vec<usize>,
}

impl<T: Scalar> VectorSolution<T> {
    /// Recompute the bias from the stored vectors.
    pub fn bias_of_vectors(&self, g: &XorGame<T>) -> T {
        let mut total = T::zero();
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                total = total + g.cost(i, j) * dot(&self.u[i], &self.v[j]);
            }
        }
        total
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b.iter()).map(|(&x, &y)| x * y).sum()
}

fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn normalize_or_basis<T: Scalar>(mut a: Vec<T>) -> (Vec<T>, bool) {
    let n = norm(&a);
    if n <= T::epsilon() {
        let mut e = vec![T::zero(); a.len()];
        e[0] = T::one();
        return (e, true);
    }
    for x in a.iter_mut() {
        *x = *x / n;
    }
    (a, false)
}

/// Alternating maximization for the XOR bias over unit-vector
/// configurations in ambient dimension `m + n`, best over seeded restarts.
///
/// Each half-step is the closed-form maximizer given the other side, so the
/// bias is nondecreasing along iterations; a decrease beyond rounding noise
/// is reported as a numerical failure.
pub fn optimal_bias<T: Scalar>(
    g: &XorGame<T>,
    restarts: usize,
    tol: T,
    seed: u64,
) -> Result<VectorSolution<T>> {
    if restarts == 0 {
        return Err(Error::Precondition("restarts must be >= 1".into()));
    }
    let m = g.rows();
    let n = g.cols();
    let ambient = m + n;
    let zero_row: Vec<usize> = (0..m)
        .filter(|&i| (0..n).all(|j| g.cost(i, j).is_zero()))
        .collect();
    let zero_col: Vec<usize> = (0..n)
        .filter(|&j| (0..m).all(|i| g.cost(i, j).is_zero()))
        .collect();

    let mut best: Option<VectorSolution<T>> = None;
    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        let mut v: Vec<Vec<T>> = (0..n)
            .map(|_| {
                let raw: Vec<T> = (0..ambient)
                    .map(|_| T::from_f64_lossy(rng.sample::<f64, _>(StandardNormal)))
                    .collect();
                normalize_or_basis(raw).0
            })
            .collect();
        let mut u: Vec<Vec<T>> = vec![vec![T::zero(); ambient]; m];
        let mut bias = -T::infinity();
        for iter in 0..10_000 {
            for (i, ui) in u.iter_mut().enumerate() {
                let mut acc = vec![T::zero(); ambient];
                for (j, vj) in v.iter().enumerate() {
                    let w = g.cost(i, j);
                    if w.is_zero() {
                        continue;
                    }
                    for (a, &x) in acc.iter_mut().zip(vj.iter()) {
                        *a = *a + w * x;
                    }
                }
                *ui = normalize_or_basis(acc).0;
            }
            for (j, vj) in v.iter_mut().enumerate() {
                let mut acc = vec![T::zero(); ambient];
                for (i, ui) in u.iter().enumerate() {
                    let w = g.cost(i, j);
                    if w.is_zero() {
                        continue;
                    }
                    for (a, &x) in acc.iter_mut().zip(ui.iter()) {
                        *a = *a + w * x;
                    }
                }
                *vj = normalize_or_basis(acc).0;
            }
            let mut next = T::zero();
            for i in 0..m {
                for j in 0..n {
                    next = next + g.cost(i, j) * dot(&u[i], &v[j]);
                }
            }
            if iter > 0 && next < bias - r::<T>(1e-12) {
                return Err(Error::Numerical(format!(
                    "alternating maximization decreased the bias: {bias} -> {next}"
                )));
            }
            let gain = next - bias;
            bias = next;
            if iter > 0 && gain < tol {
                break;
            }
        }
        let c: Vec<T> = (0..m)
            .map(|i| {
                let mut acc = vec![T::zero(); ambient];
                for (j, vj) in v.iter().enumerate() {
                    let w = g.cost(i, j);
                    for (a, &x) in acc.iter_mut().zip(vj.iter()) {
                        *a = *a + w * x;
                    }
                }
                norm(&acc)
            })
            .collect();
        let candidate = VectorSolution {
            r: ambient,
            u,
            v,
            bias,
            c,
            degenerate_rows: zero_row.clone(),
            degenerate_cols: zero_col.clone(),
        };
        if best.as_ref().map_or(true, |b| candidate.bias > b.bias) {
            best = Some(candidate);
        }
    }
    let best = best.expect("restarts >= 1");

    // Cross-check against brute force on small games.
    if m * n <= 20 {
        let classical = g.classical_bias();
        if best.bias < classical - r::<T>(1e-9) {
            return Err(Error::Numerical(format!(
                "vector bias {} fell below the classical bias {classical}",
                best.bias
            )));
        }
    }
    Ok(best)
}

/// Pairwise-anticommuting self-adjoint involutions gamma_1..gamma_r of
/// dimension `2^ceil(r/2)`, as tensor words in the Pauli matrices:
/// `gamma_{2k-1} = X^(k-1) Z I..`, `gamma_{2k} = X^(k-1) Y I..`.
pub fn clifford_generators<T: Scalar>(count: usize) -> Vec<Matrix<T>> {
    assert!(count >= 1, "need at least one generator");
    let blocks = count.div_ceil(2);
    let mut out = Vec::with_capacity(count);
    for k in 0..blocks {
        for letter in ["Z", "Y"] {
            if out.len() == count {
                break;
            }
            let mut word = "X".repeat(k);
            word.push_str(letter);
            word.push_str(&"I".repeat(blocks - k - 1));
            out.push(pauli_word(&word));
        }
    }
    out
}

/// Strategy realizing a vector solution on the maximally entangled state:
/// Bob plays `X_j = sum_k v_j[k] gamma_k`, Alice the canonical-basis
/// transposes of `sum_k u_i[k] gamma_k`, so the correlation matrix is the
/// Gram matrix `<u_i, v_j>`.
pub fn tsirelson_strategy<T: Scalar>(sol: &VectorSolution<T>) -> Result<Strategy<T>> {
    let gammas = clifford_generators::<T>(sol.r);
    let dim = gammas[0].dim();
    let combine = |coeffs: &[T]| -> Matrix<T> {
        let mut acc = Matrix::zeros(dim);
        for (k, &w) in coeffs.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            acc = &acc + &gammas[k].scale(Complex::new(w, T::zero()));
        }
        acc
    };
    let bob: Vec<Matrix<T>> = sol.v.iter().map(|vj| combine(vj)).collect();
    let alice: Vec<Matrix<T>> = sol.u.iter().map(|ui| combine(ui).transpose()).collect();
    let state = Strategy::maximally_entangled_state(dim);
    let mut s = Strategy::new(
        Measurements::Observables(alice),
        Measurements::Observables(bob),
        state,
    )?;
    s.canonical = true;
    s.validate()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::xor_bias;
    use crate::starpoly::{defect, xor_solution_algebra, MatrixAssignment, NormKind};

    pub(crate) fn chsh() -> XorGame<f64> {
        XorGame::new(
            vec![vec![0, 0], vec![0, 1]],
            vec![vec![0.25, 0.25], vec![0.25, 0.25]],
        )
        .unwrap()
    }

    #[test]
    fn chsh_bias_and_marginals() {
        let sol = optimal_bias(&chsh(), 8, 1e-14, 99).unwrap();
        let target = 1.0 / 2.0f64.sqrt();
        assert!((sol.bias - target).abs() < 1e-6, "bias {}", sol.bias);
        let c_target = 1.0 / (2.0 * 2.0f64.sqrt());
        assert!((sol.c[0] - c_target).abs() < 1e-6);
        assert!((sol.c[1] - c_target).abs() < 1e-6);
        // Sum of marginals matches the bias at convergence.
        let csum: f64 = sol.c.iter().sum();
        assert!((csum - sol.bias).abs() < 1e-9);
        assert!(sol.bias <= 1.0 + 1e-12);
    }

    #[test]
    fn trivial_games() {
        let unit = XorGame::<f64>::new(vec![vec![0]], vec![vec![1.0]]).unwrap();
        let sol = optimal_bias(&unit, 2, 1e-14, 7).unwrap();
        assert!((sol.bias - 1.0).abs() < 1e-12);
        assert!((sol.c[0] - 1.0).abs() < 1e-12);

        let diag = XorGame::<f64>::new(
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![0.5, 0.0], vec![0.0, 0.5]],
        )
        .unwrap();
        let sol2 = optimal_bias(&diag, 4, 1e-14, 7).unwrap();
        assert!((sol2.bias - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_row_is_flagged() {
        let g = XorGame::new(
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![0.5, 0.5], vec![0.0, 0.0]],
        )
        .unwrap();
        let sol = optimal_bias(&g, 2, 1e-13, 3).unwrap();
        assert_eq!(sol.degenerate_rows, vec![1]);
        assert!(sol.c[1] == 0.0);
    }

    #[test]
    fn clifford_generators_anticommute() {
        for count in 1..=5usize {
            let gammas = clifford_generators::<f64>(count);
            let dim = 1usize << count.div_ceil(2);
            assert_eq!(gammas[0].dim(), dim);
            for (a, ga) in gammas.iter().enumerate() {
                assert!(ga.hermitian_defect() < 1e-12);
                assert!((&(ga * ga) - &Matrix::identity(dim)).frobenius_norm() < 1e-12);
                for gb in gammas.iter().skip(a + 1) {
                    let anti = &(ga * gb) + &(gb * ga);
                    assert!(anti.frobenius_norm() < 1e-12);
                }
            }
        }
        // The single generator is the Pauli Z by convention.
        let one = clifford_generators::<f64>(1);
        assert!((&one[0] - &crate::matcore::pauli_z()).frobenius_norm() == 0.0);
    }

    #[test]
    fn strategy_realizes_the_gram_matrix() {
        let g = chsh();
        let sol = optimal_bias(&g, 8, 1e-14, 42).unwrap();
        let strat = tsirelson_strategy(&sol).unwrap();
        let bias = xor_bias(&g, &strat).unwrap();
        assert!((bias - sol.bias).abs() < 1e-8, "{bias} vs {}", sol.bias);

        let (alice, bob) = match (&strat.alice, &strat.bob) {
            (Measurements::Observables(a), Measurements::Observables(b)) => (a, b),
            _ => unreachable!(),
        };
        for (i, y) in alice.iter().enumerate() {
            for (j, x) in bob.iter().enumerate() {
                let corr = crate::games::expectation(&strat, y, x);
                let want = dot(&sol.u[i], &sol.v[j]);
                assert!((corr.re - want).abs() < 1e-9 && corr.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn strategy_satisfies_solution_algebra() {
        let g = chsh();
        let sol = optimal_bias(&g, 8, 1e-14, 42).unwrap();
        let strat = tsirelson_strategy(&sol).unwrap();
        let bob = match &strat.bob {
            Measurements::Observables(b) => b.clone(),
            _ => unreachable!(),
        };
        let images = bob
            .into_iter()
            .enumerate()
            .map(|(j, x)| (format!("s{}", j + 1), x))
            .collect();
        let assignment = MatrixAssignment::new(images).unwrap();
        let pres = xor_solution_algebra(&g, &sol.c).unwrap();
        let report = defect(&pres, &assignment, NormKind::LittleFrobenius, None).unwrap();
        assert!(report.max_defect <= 1e-8, "defect {}", report.max_defect);
    }
}
