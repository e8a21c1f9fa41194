//! Lifting little-Frobenius near-representations to strategies with exact
//! measurements on the maximally entangled state.
//!
//! Each lift stabilizes the approximate images into exactly structured
//! measurement operators (PVMs, involutions, per-context commuting
//! families), assembles the strategy, and scores it against the game.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::games::{
    bcs_game, game_value, xor_bias, BinaryConstraintSystem, Measurements, Strategy,
    SynchronousGame, XorGame,
};
use crate::matcore::{
    eigh, nearest_self_adjoint, operator_norm, round_to_involution, DensityFactor, Matrix,
};
use crate::scalar::{r, Scalar};
use crate::starpoly::{
    defect, synch_from_synchbcs, synchronous_algebra, DefectReport, MatrixAssignment, NormKind,
};
use crate::xorsdp::VectorSolution;

/// Score of a lifted strategy: winning probability for predicate games or
/// bias for XOR games, plus the distance to the known optimum when one is
/// available.
#[derive(Clone, Debug)]
pub struct Score<T> {
    pub value: Option<T>,
    pub bias: Option<T>,
    pub gap_to_optimum: Option<T>,
}

/// A lifted strategy with its provenance bookkeeping.
#[derive(Clone, Debug)]
pub struct LiftResult<T: Scalar> {
    pub strategy: Strategy<T>,
    /// Little-Frobenius distance from each input image to the measurement
    /// operator that replaced it.
    pub per_generator_distance: BTreeMap<String, T>,
    pub score: Score<T>,
    /// Eigenvalues that sat exactly midway between two answer weights
    /// (resolved toward the lower answer index).
    pub tie_flags: usize,
    /// Joint eigenvectors whose sign pattern violated a constraint and were
    /// reassigned to its first satisfying assignment.
    pub repaired_patterns: usize,
    /// XOR only: `sum_i |c_i| * ||Z_i - Ybar_i||_f`, the proved upper bound
    /// on the bias gap.
    pub chain_bound: Option<T>,
}

/// Weights separating joint eigenspaces in generic linear combinations:
/// square roots of the primes, pairwise incommensurable over the signs.
fn separating_weights<T: Scalar>(k: usize) -> Vec<T> {
    const PRIMES: [f64; 12] = [
        2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0,
    ];
    assert!(
        k <= PRIMES.len(),
        "context size beyond the fixed weight table"
    );
    PRIMES[..k].iter().map(|&p| r::<T>(p).sqrt()).collect()
}

/// Replace nearly commuting involutions by an exactly commuting family:
/// diagonalize the weighted sum, then sign-round each operator's diagonal
/// in that basis. Returns the family plus the sign pattern of each basis
/// vector (bit t set means operator t reads -1 there).
pub fn commuting_involution_family<T: Scalar>(
    ops: &[Matrix<T>],
) -> (Vec<Matrix<T>>, Vec<usize>, Matrix<T>) {
    let dim = ops[0].dim();
    let weights = separating_weights::<T>(ops.len());
    let mut combo = Matrix::zeros(dim);
    for (w, op) in weights.iter().zip(ops.iter()) {
        combo = &combo + &nearest_self_adjoint(op).scale_real(*w);
    }
    let sd = eigh(&combo);
    let u = sd.eigenvectors;
    let mut patterns = vec![0usize; dim];
    let mut family = Vec::with_capacity(ops.len());
    for (t, op) in ops.iter().enumerate() {
        let diag = &(&u.adjoint() * op) * &u;
        let signs: Vec<T> = (0..dim)
            .map(|k| {
                if diag[(k, k)].re < T::zero() {
                    patterns[k] |= 1 << t;
                    -T::one()
                } else {
                    T::one()
                }
            })
            .collect();
        let z = Matrix::from_fn(dim, |i, j| {
            (0..dim)
                .map(|q| u[(i, q)] * Complex::new(signs[q], T::zero()) * u[(j, q)].conj())
                .fold(Complex::zero(), |a, b| a + b)
        });
        family.push(z);
    }
    (family, patterns, u)
}

/// Assemble the BCS-game strategy carried by per-variable involutions:
/// Bob measures `(1 +- X_j)/2`; Alice, per constraint, measures the joint
/// eigenprojections of the stabilized commuting family (transposed for the
/// entangled state), with violating eigenvectors reassigned to the
/// constraint's first satisfying assignment. Answer index bit `t` encodes
/// the sign of scope position `t` (bit set = -1).
pub fn bcs_strategy<T: Scalar>(
    b: &BinaryConstraintSystem,
    xs: &[Matrix<T>],
    schmidt: &[T],
) -> Result<(Strategy<T>, usize)> {
    if xs.len() != b.n {
        return Err(Error::dim(b.n, xs.len(), "per-variable observables"));
    }
    let dim = xs[0].dim();
    if schmidt.len() != dim {
        return Err(Error::dim(dim, schmidt.len(), "Schmidt coefficients"));
    }
    let kmax = b
        .constraints
        .iter()
        .map(|c| c.scope.len())
        .max()
        .unwrap_or(1);
    let num_answers = 1usize << kmax;
    let half = r::<T>(0.5);
    let id = Matrix::<T>::identity(dim);

    let bob: Vec<Vec<Matrix<T>>> = xs
        .iter()
        .map(|x| {
            vec![
                (&id + x).scale_real(half), // answer 0: outcome +1
                (&id - x).scale_real(half), // answer 1: outcome -1
            ]
        })
        .collect();

    let mut repaired = 0usize;
    let mut alice: Vec<Vec<Matrix<T>>> = Vec::with_capacity(b.constraints.len());
    for cons in &b.constraints {
        let ops: Vec<Matrix<T>> = cons.scope.iter().map(|&j| xs[j - 1].clone()).collect();
        let (_, patterns, u) = commuting_involution_family(&ops);
        let first_satisfying =
            cons.satisfying().into_iter().next().ok_or_else(|| {
                Error::Validation("constraint has no satisfying assignment".into())
            })?;
        let mut fams = vec![Matrix::<T>::zeros(dim); num_answers];
        for k in 0..dim {
            let mut answer = patterns[k];
            if !cons.table[answer] {
                repaired += 1;
                answer = first_satisfying;
            }
            let proj = Matrix::from_fn(dim, |i, j| u[(i, k)] * u[(j, k)].conj());
            fams[answer] = &fams[answer] + &proj;
        }
        // Alice holds the transposes so the maximally entangled state reads
        // out matching assignments.
        alice.push(fams.into_iter().map(|f| f.transpose()).collect());
    }

    let strategy = Strategy::new(
        Measurements::Pvm(alice),
        Measurements::Pvm(bob),
        Strategy::schmidt_state(schmidt),
    )?;
    Ok((strategy, repaired))
}

/// Lift a synchronous-algebra assignment to an exact synchronous PVM
/// strategy on the maximally entangled state.
///
/// Per question, the weighted sum of the symmetrized images is
/// diagonalized and every eigenvector is assigned to the answer with the
/// nearest weight (the weights are the answer indices); this yields an
/// exact PVM. Alice plays the entrywise conjugates of Bob's projections.
pub fn lift_synchronous<T: Scalar>(
    a: &MatrixAssignment<T>,
    g: &SynchronousGame<T>,
) -> Result<LiftResult<T>> {
    let nq = g.questions.len();
    let na = g.answers.len();
    let dim = a.dim();
    let mut ties = 0usize;
    let mut bob: Vec<Vec<Matrix<T>>> = Vec::with_capacity(nq);
    let mut distances = BTreeMap::new();
    for i in 0..nq {
        let mut combo = Matrix::<T>::zeros(dim);
        let mut images = Vec::with_capacity(na);
        for answer in 0..na {
            let img = a.get(&format!("p[{i},{answer}]"))?;
            combo = &combo + &nearest_self_adjoint(img).scale_real(r::<T>(answer as f64));
            images.push(img);
        }
        let sd = eigh(&combo);
        let u = &sd.eigenvectors;
        let mut fams = vec![Matrix::<T>::zeros(dim); na];
        for (k, &ev) in sd.eigenvalues.iter().enumerate() {
            let mut best = 0usize;
            let mut best_dist = T::infinity();
            for answer in 0..na {
                let dist = (ev - r::<T>(answer as f64)).abs();
                if dist < best_dist {
                    best = answer;
                    best_dist = dist;
                } else if dist == best_dist {
                    // Exact midpoint: keep the lower answer index.
                    ties += 1;
                }
            }
            let proj = Matrix::from_fn(dim, |x, y| u[(x, k)] * u[(y, k)].conj());
            fams[best] = &fams[best] + &proj;
        }
        for (answer, fam) in fams.iter().enumerate() {
            distances.insert(
                format!("p[{i},{answer}]"),
                (fam - images[answer]).little_frobenius_norm(),
            );
        }
        bob.push(fams);
    }
    let alice: Vec<Vec<Matrix<T>>> = bob
        .iter()
        .map(|fams| fams.iter().map(|q| q.conj()).collect())
        .collect();
    let mut strategy = Strategy::new(
        Measurements::Pvm(alice),
        Measurements::Pvm(bob),
        Strategy::maximally_entangled_state(dim),
    )?;
    strategy.canonical = true;
    strategy.validate()?;
    let gv = game_value(&g.to_nonlocal(), &strategy)?;
    Ok(LiftResult {
        strategy,
        per_generator_distance: distances,
        score: Score {
            value: Some(gv.value),
            bias: None,
            gap_to_optimum: Some(T::one() - gv.value),
        },
        tie_flags: ties,
        repaired_patterns: 0,
        chain_bound: None,
    })
}

/// Map a SynchBCS assignment into the synchronous picture and report the
/// synchronous-algebra defect of the result in the little Frobenius norm.
pub struct SynchFromBcs<T: Scalar> {
    pub assignment: MatrixAssignment<T>,
    pub report: DefectReport<T>,
}

pub fn synch_assignment_from_bcs<T: Scalar>(
    a: &MatrixAssignment<T>,
    g: &SynchronousGame<T>,
) -> Result<SynchFromBcs<T>> {
    let expected = g.questions.len() * g.answers.len();
    if a.images().len() != expected {
        return Err(Error::dim(
            expected,
            a.images().len(),
            "SynchBCS generators",
        ));
    }
    let assignment = synch_from_synchbcs(a)?;
    let pres = synchronous_algebra(g);
    let report = defect(&pres, &assignment, NormKind::LittleFrobenius, None)?;
    Ok(SynchFromBcs { assignment, report })
}

/// Lift a BCS-algebra assignment to an exact-measurement strategy for the
/// BCS game on the maximally entangled state.
pub fn lift_bcs<T: Scalar>(
    a: &MatrixAssignment<T>,
    b: &BinaryConstraintSystem,
) -> Result<LiftResult<T>> {
    let dim = a.dim();
    let mut xs = Vec::with_capacity(b.n);
    let mut distances = BTreeMap::new();
    for j in 1..=b.n {
        let name = format!("x{j}");
        let img = a.get(&name)?;
        let rounded = round_to_involution(img, operator_norm(img) + r::<T>(1e-9))?;
        distances.insert(name, (&rounded - img).little_frobenius_norm());
        xs.push(rounded);
    }
    let schmidt = vec![T::one() / r::<T>(dim as f64).sqrt(); dim];
    let (mut strategy, repaired) = bcs_strategy(b, &xs, &schmidt)?;
    strategy.canonical = true;
    strategy.validate()?;
    let game = bcs_game(b)?;
    let gv = game_value(&game, &strategy)?;
    Ok(LiftResult {
        strategy,
        per_generator_distance: distances,
        score: Score {
            value: Some(gv.value),
            bias: None,
            gap_to_optimum: Some(T::one() - gv.value),
        },
        tie_flags: 0,
        repaired_patterns: repaired,
        chain_bound: None,
    })
}

/// Lift a solution-algebra assignment to an XOR strategy on the maximally
/// entangled state; the achieved-bias gap is bounded by the reported chain
/// `sum_i |c_i| ||Z_i - Ybar_i||_f`.
pub fn lift_xor<T: Scalar>(
    a: &MatrixAssignment<T>,
    g: &XorGame<T>,
    sol: &VectorSolution<T>,
) -> Result<LiftResult<T>> {
    if sol.c.len() != g.rows() {
        return Err(Error::dim(g.rows(), sol.c.len(), "marginal row biases"));
    }
    let dim = a.dim();
    let mut xs = Vec::with_capacity(g.cols());
    let mut distances = BTreeMap::new();
    for j in 1..=g.cols() {
        let name = format!("s{j}");
        let img = a.get(&name)?;
        let rounded = round_to_involution(img, operator_norm(img) + r::<T>(1e-9))?;
        distances.insert(name, (&rounded - img).little_frobenius_norm());
        xs.push(rounded);
    }
    let mut alice = Vec::with_capacity(g.rows());
    let mut chain = T::zero();
    for i in 0..g.rows() {
        let ci = sol.c[i];
        if ci <= T::zero() {
            return Err(Error::Precondition(format!(
                "row {} has zero marginal bias; its observable is undefined",
                i + 1
            )));
        }
        let mut ybar = Matrix::<T>::zeros(dim);
        for (j, x) in xs.iter().enumerate() {
            let w = g.cost(i, j);
            if w.is_zero() {
                continue;
            }
            ybar = &ybar + &x.scale_real(w / ci);
        }
        let z = round_to_involution(&ybar, operator_norm(&ybar) + r::<T>(1e-9))?;
        chain = chain + ci.abs() * (&z - &ybar).little_frobenius_norm();
        alice.push(z.transpose());
    }
    let mut strategy = Strategy::new(
        Measurements::Observables(alice),
        Measurements::Observables(xs),
        Strategy::maximally_entangled_state(dim),
    )?;
    strategy.canonical = true;
    strategy.validate()?;
    let bias = xor_bias(g, &strategy)?;
    // The achieved bias can trail the sum of marginal biases by at most the
    // chain; a violation means the rounding or the scoring broke.
    let marginal_sum: T = sol.c.iter().copied().sum();
    if (marginal_sum - bias).abs() > chain + r::<T>(1e-9) {
        return Err(Error::Numerical(format!(
            "bias gap |{marginal_sum} - {bias}| exceeds the chain bound {chain}"
        )));
    }
    Ok(LiftResult {
        strategy,
        per_generator_distance: distances,
        score: Score {
            value: None,
            bias: Some(bias),
            gap_to_optimum: Some(sol.bias - bias),
        },
        tie_flags: 0,
        repaired_patterns: 0,
        chain_bound: Some(chain),
    })
}

/// Distance from a density factor to the normalized projection, with the
/// dimension-only upper bound `sqrt(2) (1 - sqrt(rank/d))^(1/2)` valid for
/// top-rank spectral projections whose retained eigenvalues are at least
/// `1/sqrt(d)`.
#[derive(Clone, Copy, Debug)]
pub struct StateDistance<T> {
    pub lhs: T,
    pub bound: T,
}

pub fn state_distance_bound<T: Scalar>(
    lambda: &DensityFactor<T>,
    p: &Matrix<T>,
) -> Result<StateDistance<T>> {
    lambda
        .matrix()
        .check_same_dim(p, "state distance operands")?;
    let d = lambda.dim();
    let rank_f = p.trace().re;
    let rank = rank_f.round();
    if rank < r::<T>(0.5) {
        return Err(Error::Precondition("projection must be nonzero".into()));
    }
    let lhs = (lambda.matrix() - &p.scale_real(T::one() / rank.sqrt())).frobenius_norm();
    let ratio = (rank / r::<T>(d as f64)).sqrt();
    let inner = if ratio > T::one() {
        T::zero()
    } else {
        T::one() - ratio
    };
    let bound = r::<T>(2.0).sqrt() * inner.sqrt();
    Ok(StateDistance { lhs, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::Constraint;
    use crate::matcore::{commutator, pauli_word};
    use crate::random;
    use crate::starpoly::synchbcs_from_synch;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> SynchronousGame<f64> {
        let labels: Vec<String> = (0..3).map(|v| v.to_string()).collect();
        SynchronousGame::from_predicate(labels.clone(), labels, |i, j, a, b| {
            if i == j {
                a == b
            } else {
                a != b
            }
        })
        .unwrap()
    }

    fn triangle_assignment() -> MatrixAssignment<f64> {
        let colorings: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut images = BTreeMap::new();
        for i in 0..3 {
            for a in 0..3 {
                let diag: Vec<f64> = colorings
                    .iter()
                    .map(|col| if col[i] == a { 1.0 } else { 0.0 })
                    .collect();
                images.insert(format!("p[{i},{a}]"), Matrix::diag_real(&diag));
            }
        }
        MatrixAssignment::new(images).unwrap()
    }

    fn magic_square() -> BinaryConstraintSystem {
        let mut constraints: Vec<Constraint> = (0..3)
            .map(|row| Constraint::parity(vec![3 * row + 1, 3 * row + 2, 3 * row + 3], 1))
            .collect();
        constraints.push(Constraint::parity(vec![1, 4, 7], 1));
        constraints.push(Constraint::parity(vec![2, 5, 8], 1));
        constraints.push(Constraint::parity(vec![3, 6, 9], -1));
        BinaryConstraintSystem::new(9, constraints).unwrap()
    }

    fn paulis() -> MatrixAssignment<f64> {
        let words = ["XI", "IX", "XX", "IZ", "ZI", "ZZ", "XZ", "ZX", "YY"];
        let images = words
            .iter()
            .enumerate()
            .map(|(k, w)| (format!("x{}", k + 1), pauli_word(w)))
            .collect();
        MatrixAssignment::new(images).unwrap()
    }

    #[test]
    fn exact_synchronous_lift_is_perfect() {
        let g = triangle();
        let lift = lift_synchronous(&triangle_assignment(), &g).unwrap();
        let value = lift.score.value.unwrap();
        assert!(value >= 1.0 - 1e-10, "value {value}");
        assert_eq!(lift.tie_flags, 0);
        assert!(lift.per_generator_distance.values().all(|&v| v < 1e-10));
    }

    #[test]
    fn perturbed_synchronous_lift_loses_quadratically() {
        let g = triangle();
        let base = triangle_assignment();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut losses = Vec::new();
        for &delta in &[1e-2, 1e-3] {
            // Perturb per-question with independent local unitaries so
            // cross-question relations break but PVMs survive.
            let units: Vec<Matrix<f64>> = (0..3)
                .map(|_| random::local_unitary::<f64, _>(&mut rng, 6, delta))
                .collect();
            let perturbed = base.map(|name, m| {
                let (i, _) = crate::starpoly::parse_pair_generator(name).unwrap();
                &(&units[i] * m) * &units[i].adjoint()
            });
            let lift = lift_synchronous(&perturbed, &g).unwrap();
            losses.push(1.0 - lift.score.value.unwrap());
        }
        // delta fell by 10x; the loss should fall by much more than 10x.
        assert!(losses[1] < losses[0] / 50.0, "losses {losses:?}");
    }

    #[test]
    fn synchronous_loss_identity_under_max_entanglement() {
        // Per input, the losing probability equals the sum of
        // ||P~^T Q~||_f^2 over losing answer pairs.
        let g = triangle();
        let base = triangle_assignment();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let units: Vec<Matrix<f64>> = (0..3)
            .map(|_| random::local_unitary::<f64, _>(&mut rng, 6, 5e-2))
            .collect();
        let perturbed = base.map(|name, m| {
            let (i, _) = crate::starpoly::parse_pair_generator(name).unwrap();
            &(&units[i] * m) * &units[i].adjoint()
        });
        let lift = lift_synchronous(&perturbed, &g).unwrap();
        let gv = game_value(&g.to_nonlocal(), &lift.strategy).unwrap();
        let (alice, bob) = match (&lift.strategy.alice, &lift.strategy.bob) {
            (Measurements::Pvm(a), Measurements::Pvm(b)) => (a, b),
            _ => unreachable!(),
        };
        for i in 0..3 {
            for j in 0..3 {
                let mut loss = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        if g.wins(i, j, a, b) {
                            continue;
                        }
                        let prod = &alice[i][a].transpose() * &bob[j][b];
                        loss += prod.little_frobenius_norm().powi(2);
                    }
                }
                let direct = 1.0 - gv.per_input[&(i, j)];
                assert!(
                    (loss - direct).abs() < 1e-10,
                    "loss identity at ({i},{j}): {loss} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn midway_eigenvalue_ties_resolve_to_lower_answer() {
        // Two half-identity images put the weighted combination's spectrum
        // exactly midway between the answer weights 0 and 1.
        let labels = vec!["0".to_string()];
        let answers = vec!["0".to_string(), "1".to_string()];
        let g =
            SynchronousGame::<f64>::from_predicate(labels, answers, |_, _, a, b| a == b).unwrap();
        let mut images = BTreeMap::new();
        images.insert("p[0,0]".to_string(), Matrix::diag_real(&[0.5, 0.5]));
        images.insert("p[0,1]".to_string(), Matrix::diag_real(&[0.5, 0.5]));
        let a = MatrixAssignment::new(images).unwrap();
        let lift = lift_synchronous(&a, &g).unwrap();
        assert!(lift.tie_flags > 0, "midpoint spectrum must be flagged");
        let bob = match &lift.strategy.bob {
            Measurements::Pvm(b) => b,
            _ => unreachable!(),
        };
        // Lower answer index wins both eigenvectors.
        assert!((&bob[0][0] - &Matrix::identity(2)).frobenius_norm() < 1e-12);
        assert!(bob[0][1].frobenius_norm() < 1e-12);
    }

    #[test]
    fn synch_assignment_from_bcs_round() {
        let g = triangle();
        let za = synchbcs_from_synch(&triangle_assignment()).unwrap();
        let out = synch_assignment_from_bcs(&za, &g).unwrap();
        assert!(out.report.max_defect == 0.0);
    }

    #[test]
    fn synch_from_bcs_degrades_linearly() {
        // Perturbed involutions map to a synchronous-algebra assignment
        // whose defect tracks the input defect linearly over a delta grid.
        let g = triangle();
        let za = synchbcs_from_synch(&triangle_assignment()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut input_defects = Vec::new();
        let mut output_defects = Vec::new();
        let zpres = crate::starpoly::synchbcs_algebra::<f64>(&g);
        for &delta in &[1e-4, 1e-3, 1e-2] {
            let units: Vec<Matrix<f64>> = (0..3)
                .map(|_| random::local_unitary::<f64, _>(&mut rng, 6, delta))
                .collect();
            let perturbed = za.map(|name, m| {
                let (i, _) = crate::starpoly::parse_pair_generator(name).unwrap();
                &(&units[i] * m) * &units[i].adjoint()
            });
            let zin = crate::starpoly::defect(
                &zpres,
                &perturbed,
                crate::starpoly::NormKind::LittleFrobenius,
                None,
            )
            .unwrap();
            let out = synch_assignment_from_bcs(&perturbed, &g).unwrap();
            input_defects.push(zin.max_defect);
            output_defects.push(out.report.max_defect);
        }
        for (zin, pout) in input_defects.iter().zip(output_defects.iter()) {
            assert!(pout <= &(4.0 * zin), "output {pout} vs input {zin}");
        }
        let slope = crate::harness::loglog_slope(&input_defects, &output_defects).unwrap();
        assert!((0.8..=1.2).contains(&slope), "degradation slope {slope}");
    }

    #[test]
    fn exact_bcs_lift_is_perfect() {
        let b = magic_square();
        let lift = lift_bcs(&paulis(), &b).unwrap();
        let value = lift.score.value.unwrap();
        assert!(value >= 1.0 - 1e-10, "value {value}");
        assert_eq!(lift.repaired_patterns, 0);
        assert!(lift.per_generator_distance.values().all(|&v| v < 1e-12));
    }

    #[test]
    fn classical_bcs_lift_from_dim_one() {
        // x1 = -1, satisfiable classically in dimension 1.
        let b = BinaryConstraintSystem::new(
            1,
            vec![Constraint {
                scope: vec![1],
                table: vec![false, true],
            }],
        )
        .unwrap();
        let mut images = BTreeMap::new();
        images.insert("x1".to_string(), Matrix::diag_real(&[-1.0f64]));
        let a = MatrixAssignment::new(images).unwrap();
        let lift = lift_bcs(&a, &b).unwrap();
        assert!((lift.score.value.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_bcs_lift_loses_quadratically() {
        let b = magic_square();
        let base = paulis();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut losses = Vec::new();
        for &delta in &[1e-2, 1e-3] {
            let perturbed = base.map(|_, x| {
                let u = random::local_unitary::<f64, _>(&mut rng, 4, delta);
                &(&u * x) * &u.adjoint()
            });
            let lift = lift_bcs(&perturbed, &b).unwrap();
            losses.push(1.0 - lift.score.value.unwrap());
        }
        assert!(losses[1] < losses[0] / 50.0, "losses {losses:?}");
    }

    #[test]
    fn commuting_family_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // Start from genuinely commuting involutions, perturb slightly.
        let u = random::haar_unitary::<f64, _>(&mut rng, 8);
        let diag =
            |signs: [f64; 8]| -> Matrix<f64> { &(&u * &Matrix::diag_real(&signs)) * &u.adjoint() };
        let ops = vec![
            diag([1.0, 1.0, -1.0, -1.0, 1.0, -1.0, 1.0, -1.0]),
            diag([1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0, -1.0]),
            diag([-1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, 1.0]),
        ];
        let perturbed: Vec<Matrix<f64>> = ops
            .iter()
            .map(|x| {
                let w = random::local_unitary::<f64, _>(&mut rng, 8, 1e-3);
                &(&w * x) * &w.adjoint()
            })
            .collect();
        let (family, _, _) = commuting_involution_family(&perturbed);
        let id = Matrix::identity(8);
        for (t, z) in family.iter().enumerate() {
            assert!(z.hermitian_defect() < 1e-12);
            assert!((&(z * z) - &id).frobenius_norm() < 1e-12);
            assert!((z - &perturbed[t]).little_frobenius_norm() < 1e-2);
            for w in family.iter().skip(t + 1) {
                assert!(commutator(z, w).frobenius_norm() < 1e-12);
            }
        }
    }

    #[test]
    fn xor_lift_with_exact_clifford_images() {
        let g = XorGame::new(
            vec![vec![0, 0], vec![0, 1]],
            vec![vec![0.25, 0.25], vec![0.25, 0.25]],
        )
        .unwrap();
        let sol = crate::xorsdp::optimal_bias(&g, 8, 1e-14, 42).unwrap();
        let strat = crate::xorsdp::tsirelson_strategy(&sol).unwrap();
        let bob = match &strat.bob {
            Measurements::Observables(b) => b.clone(),
            _ => unreachable!(),
        };
        let images = bob
            .into_iter()
            .enumerate()
            .map(|(j, x)| (format!("s{}", j + 1), x))
            .collect();
        let a = MatrixAssignment::new(images).unwrap();
        let lift = lift_xor(&a, &g, &sol).unwrap();
        let bias = lift.score.bias.unwrap();
        assert!((bias - 1.0 / 2.0f64.sqrt()).abs() < 1e-8, "bias {bias}");
        let gap = lift.score.gap_to_optimum.unwrap();
        assert!(gap.abs() <= 1e-8);
        assert!(gap <= lift.chain_bound.unwrap() + 1e-9);
    }

    #[test]
    fn xor_lift_trivial_game() {
        let g = XorGame::<f64>::new(vec![vec![0]], vec![vec![1.0]]).unwrap();
        let sol = crate::xorsdp::optimal_bias(&g, 2, 1e-14, 1).unwrap();
        let mut images = BTreeMap::new();
        images.insert("s1".to_string(), crate::matcore::pauli_z::<f64>());
        let a = MatrixAssignment::new(images).unwrap();
        let lift = lift_xor(&a, &g, &sol).unwrap();
        assert!((lift.score.bias.unwrap() - 1.0).abs() < 1e-10);
        assert!(lift.score.gap_to_optimum.unwrap().abs() < 1e-10);
    }

    #[test]
    fn state_distance_examples() {
        // Maximally mixed factor against the full projection.
        let lam = DensityFactor::<f64>::maximally_mixed(3);
        let out = state_distance_bound(&lam, &Matrix::identity(3)).unwrap();
        assert!(out.lhs < 1e-12 && out.bound < 1e-7);

        // Rank-1 projection onto the top eigenvector of a skewed factor.
        let lam2 = DensityFactor::from_schmidt(&[0.9f64.sqrt(), 0.1f64.sqrt()]).unwrap();
        let p = Matrix::diag_real(&[1.0, 0.0]);
        let out2 = state_distance_bound(&lam2, &p).unwrap();
        let expected_lhs = ((0.9f64.sqrt() - 1.0).powi(2) + 0.1f64).sqrt();
        assert!((out2.lhs - expected_lhs).abs() < 1e-12);
        assert!((out2.bound - 0.7653668647301795).abs() < 1e-12);
        assert!(out2.lhs <= out2.bound + 1e-9);
    }

    /// Monomial rearrangement: moving one letter past another in a word of
    /// almost-commuting contractions costs at most the commutator norm
    /// times the operator-norm padding.
    #[test]
    fn monomial_rearrangement_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for trial in 0..500 {
            let d = 2 + (trial % 15);
            let base = random::involution::<f64, _>(&mut rng, d);
            let mk = |rng: &mut ChaCha8Rng| {
                let u = random::local_unitary::<f64, _>(rng, d, 2e-2);
                &(&u * &base) * &u.adjoint()
            };
            let xs: Vec<Matrix<f64>> = (0..4).map(|_| mk(&mut rng)).collect();
            let eps = {
                let mut worst: f64 = 0.0;
                for a in 0..4 {
                    for b in (a + 1)..4 {
                        worst = worst.max(commutator(&xs[a], &xs[b]).little_frobenius_norm());
                    }
                }
                worst
            };
            // Swap positions 1 and 2 inside x0 x1 x2 x3: unitaries pad with
            // operator norm one.
            let w1 = &(&(&xs[0] * &xs[1]) * &xs[2]) * &xs[3];
            let w2 = &(&(&xs[0] * &xs[2]) * &xs[1]) * &xs[3];
            assert!((&w1 - &w2).little_frobenius_norm() <= eps + 1e-12);
        }
    }

    /// Product-squares bound: for four involutions with pairwise
    /// commutators at most eps in the little Frobenius norm,
    /// ||(X1 X2 X3 X4)^2 - 1||_f <= 6 eps (six adjacent swaps).
    #[test]
    fn product_square_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..500 {
            let d = 2 + (trial % 15);
            let mk = |rng: &mut ChaCha8Rng| {
                let z = random::involution::<f64, _>(rng, d);
                let u = random::local_unitary::<f64, _>(rng, d, 2e-2);
                &(&u * &z) * &u.adjoint()
            };
            let xs: Vec<Matrix<f64>> = (0..4).map(|_| mk(&mut rng)).collect();
            let mut eps: f64 = 0.0;
            for a in 0..4 {
                for b in (a + 1)..4 {
                    eps = eps.max(commutator(&xs[a], &xs[b]).little_frobenius_norm());
                }
            }
            let mut prod = Matrix::<f64>::identity(d);
            for x in &xs {
                prod = &prod * x;
            }
            let sq = &prod * &prod;
            let lhs = (&sq - &Matrix::identity(d)).little_frobenius_norm();
            assert!(lhs <= 6.0 * eps + 1e-12, "{lhs} > 6*{eps}");
        }
    }

    /// Subset-product bound: with the full product eps-close to -1, any
    /// subset product is close to minus the complementary product, with the
    /// swap-counted constant.
    #[test]
    fn subset_product_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for trial in 0..500 {
            let d = 2 + (trial % 15);
            // Commuting involutions whose product is exactly -1, perturbed.
            let u = random::haar_unitary::<f64, _>(&mut rng, d);
            let mut signs: Vec<[f64; 3]> = Vec::new();
            for k in 0..d {
                let s1 = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
                let s2 = if k % 2 == 0 { 1.0 } else { -1.0 };
                let s3 = -s1 * s2; // forces the product to -1
                signs.push([s1, s2, s3]);
            }
            let mk_exact = |t: usize| -> Matrix<f64> {
                let diag: Vec<f64> = (0..d).map(|k| signs[k][t]).collect();
                &(&u * &Matrix::diag_real(&diag)) * &u.adjoint()
            };
            let xs: Vec<Matrix<f64>> = (0..3)
                .map(|t| {
                    let w = random::local_unitary::<f64, _>(&mut rng, d, 2e-2);
                    let x = mk_exact(t);
                    &(&w * &x) * &w.adjoint()
                })
                .collect();
            let mut eps: f64 = 0.0;
            for a in 0..3 {
                for b in (a + 1)..3 {
                    eps = eps.max(commutator(&xs[a], &xs[b]).little_frobenius_norm());
                }
            }
            let full = &(&xs[0] * &xs[1]) * &xs[2];
            let eps_prod = (&full + &Matrix::identity(d)).little_frobenius_norm();
            // S = {0}: compare x0 against -(x1 x2).
            let lhs = (&xs[0] + &(&xs[1] * &xs[2])).little_frobenius_norm();
            // One swap to align orders plus the square of the complement:
            // (x1 x2)^2 needs one swap.
            let budget = eps_prod + eps + 1e-12;
            assert!(lhs <= budget, "{lhs} > {budget} (eps={eps})");
        }
    }
}
