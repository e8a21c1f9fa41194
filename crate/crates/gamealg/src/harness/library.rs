//! Built-in instances, each shipping an exact reference representation and
//! strategy verified at load time.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::games::{
    BinaryConstraintSystem, Constraint, Game, Measurements, Strategy, SynchronousGame, XorGame,
};
use crate::lifting::bcs_strategy;
use crate::matcore::{pauli_word, Matrix};
use crate::scalar::{r, Scalar};
use crate::starpoly::{
    bcs_algebra, defect, synchronous_algebra, xor_solution_algebra, MatrixAssignment, NormKind,
};
use crate::xorsdp::{clifford_generators, tsirelson_strategy, VectorSolution};

/// A library instance: the game, an exact assignment into its algebra, an
/// exact canonical strategy, and auxiliary references.
#[derive(Clone, Debug)]
pub struct Instance<T: Scalar> {
    pub name: String,
    pub game: Game<T>,
    pub assignment: MatrixAssignment<T>,
    pub strategy: Strategy<T>,
    /// Dimension-one deterministic strategy, for games that have one.
    pub classical_strategy: Option<Strategy<T>>,
    pub solution: Option<VectorSolution<T>>,
}

pub const INSTANCE_NAMES: [&str; 3] = ["magic-square", "triangle-3col", "chsh"];

/// The magic square: nine variables on a 3x3 grid, rows and the first two
/// columns multiply to +1, the last column to -1.
pub fn magic_square_bcs() -> BinaryConstraintSystem {
    let mut constraints: Vec<Constraint> = (0..3)
        .map(|row| Constraint::parity(vec![3 * row + 1, 3 * row + 2, 3 * row + 3], 1))
        .collect();
    constraints.push(Constraint::parity(vec![1, 4, 7], 1));
    constraints.push(Constraint::parity(vec![2, 5, 8], 1));
    constraints.push(Constraint::parity(vec![3, 6, 9], -1));
    BinaryConstraintSystem::new(9, constraints).expect("static system")
}

/// The two-qubit Pauli realization of the magic square, grid order.
pub fn magic_square_observables<T: Scalar>() -> Vec<Matrix<T>> {
    ["XI", "IX", "XX", "IZ", "ZI", "ZZ", "XZ", "ZX", "YY"]
        .iter()
        .map(|w| pauli_word(w))
        .collect()
}

/// Triangle 3-coloring as a synchronous game: adjacent vertices need
/// distinct colors, equal questions equal answers.
pub fn triangle_game<T: Scalar>() -> SynchronousGame<T> {
    let labels: Vec<String> = (0..3).map(|v| v.to_string()).collect();
    SynchronousGame::from_predicate(
        labels.clone(),
        labels,
        |i, j, a, b| {
            if i == j {
                a == b
            } else {
                a != b
            }
        },
    )
    .expect("static game")
}

/// Permutation representation of the triangle's synchronous algebra: one
/// diagonal slot per proper coloring.
pub fn triangle_assignment<T: Scalar>() -> MatrixAssignment<T> {
    let colorings: [[usize; 3]; 6] = [
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
            let diag: Vec<T> = colorings
                .iter()
                .map(|col| if col[i] == a { T::one() } else { T::zero() })
                .collect();
            images.insert(format!("p[{i},{a}]"), Matrix::diag_real(&diag));
        }
    }
    MatrixAssignment::new(images).expect("static assignment")
}

/// Synchronous strategy carried by a projection assignment: Bob plays the
/// images, Alice their entrywise conjugates, on the given Schmidt state.
pub fn synchronous_strategy<T: Scalar>(
    g: &SynchronousGame<T>,
    a: &MatrixAssignment<T>,
    schmidt: &[T],
) -> Result<Strategy<T>> {
    let nq = g.questions.len();
    let na = g.answers.len();
    let mut bob = Vec::with_capacity(nq);
    for i in 0..nq {
        let mut fam = Vec::with_capacity(na);
        for answer in 0..na {
            fam.push(a.get(&format!("p[{i},{answer}]"))?.clone());
        }
        bob.push(fam);
    }
    let alice: Vec<Vec<Matrix<T>>> = bob
        .iter()
        .map(|fam| fam.iter().map(|m| m.conj()).collect())
        .collect();
    let mut s = Strategy::new(
        Measurements::Pvm(alice),
        Measurements::Pvm(bob),
        Strategy::schmidt_state(schmidt),
    )?;
    s.canonical = true;
    s.validate()?;
    Ok(s)
}

/// Closed-form optimal vector configuration for CHSH in ambient dimension
/// four (padded with zeros): bias 1/sqrt(2), both marginals 1/(2 sqrt(2)).
fn chsh_solution<T: Scalar>(g: &XorGame<T>) -> VectorSolution<T> {
    let h = T::one() / r::<T>(2.0).sqrt();
    let e = |k: usize| -> Vec<T> {
        let mut v = vec![T::zero(); 4];
        v[k] = T::one();
        v
    };
    let u = vec![e(0), e(1)];
    let v = vec![
        vec![h, h, T::zero(), T::zero()],
        vec![h, -h, T::zero(), T::zero()],
    ];
    let mut bias = T::zero();
    let mut c = Vec::with_capacity(2);
    for i in 0..2 {
        let mut acc = vec![T::zero(); 4];
        for (j, vj) in v.iter().enumerate() {
            let w = g.cost(i, j);
            for (slot, &x) in acc.iter_mut().zip(vj.iter()) {
                *slot = *slot + w * x;
            }
        }
        let ci: T = acc.iter().map(|&x| x * x).sum::<T>().sqrt();
        bias = bias + u[i].iter().zip(acc.iter()).map(|(&a, &b)| a * b).sum::<T>();
        c.push(ci);
    }
    VectorSolution {
        r: 4,
        u,
        v,
        bias,
        c,
        degenerate_rows: Vec::new(),
        degenerate_cols: Vec::new(),
    }
}

pub fn chsh_game<T: Scalar>() -> XorGame<T> {
    let q = r::<T>(0.25);
    XorGame::new(vec![vec![0, 0], vec![0, 1]], vec![vec![q, q], vec![q, q]]).expect("static game")
}

/// Look up a library instance by name; the reference objects are verified
/// to have defect at most 1e-12 before they are returned.
pub fn instance_library<T: Scalar>(name: &str) -> Result<Instance<T>> {
    let tol = r::<T>(1e-12);
    match name {
        "magic-square" => {
            let b = magic_square_bcs();
            let xs = magic_square_observables::<T>();
            let mut images = BTreeMap::new();
            for (j, x) in xs.iter().enumerate() {
                images.insert(format!("x{}", j + 1), x.clone());
            }
            let assignment = MatrixAssignment::new(images)?;
            let report = defect(
                &bcs_algebra(&b)?,
                &assignment,
                NormKind::LittleFrobenius,
                None,
            )?;
            if report.max_defect > tol {
                return Err(Error::Numerical(format!(
                    "magic-square reference defect {} exceeds 1e-12",
                    report.max_defect
                )));
            }
            let schmidt = vec![T::one() / r::<T>(2.0); 4];
            let (mut strategy, _) = bcs_strategy(&b, &xs, &schmidt)?;
            strategy.canonical = true;
            strategy.validate()?;
            Ok(Instance {
                name: name.to_string(),
                game: Game::Bcs(b),
                assignment,
                strategy,
                classical_strategy: None,
                solution: None,
            })
        }
        "triangle-3col" => {
            let g = triangle_game::<T>();
            let assignment = triangle_assignment::<T>();
            let report = defect(
                &synchronous_algebra(&g),
                &assignment,
                NormKind::LittleFrobenius,
                None,
            )?;
            if report.max_defect > tol {
                return Err(Error::Numerical(format!(
                    "triangle reference defect {} exceeds 1e-12",
                    report.max_defect
                )));
            }
            let schmidt = vec![T::one() / r::<T>(6.0).sqrt(); 6];
            let strategy = synchronous_strategy(&g, &assignment, &schmidt)?;
            // Deterministic proper coloring: vertex v gets color v.
            let one = Matrix::<T>::identity(1);
            let zero = Matrix::<T>::zeros(1);
            let bob: Vec<Vec<Matrix<T>>> = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|a| if a == i { one.clone() } else { zero.clone() })
                        .collect()
                })
                .collect();
            let mut classical = Strategy::new(
                Measurements::Pvm(bob.clone()),
                Measurements::Pvm(bob),
                Strategy::maximally_entangled_state(1),
            )?;
            classical.canonical = true;
            Ok(Instance {
                name: name.to_string(),
                game: Game::Synchronous(g),
                assignment,
                strategy,
                classical_strategy: Some(classical),
                solution: None,
            })
        }
        "chsh" => {
            let g = chsh_game::<T>();
            let sol = chsh_solution(&g);
            let gammas = clifford_generators::<T>(sol.r);
            let dim = gammas[0].dim();
            let mut images = BTreeMap::new();
            for (j, vj) in sol.v.iter().enumerate() {
                let mut x = Matrix::<T>::zeros(dim);
                for (k, &w) in vj.iter().enumerate() {
                    if !w.is_zero() {
                        x = &x + &gammas[k].scale_real(w);
                    }
                }
                images.insert(format!("s{}", j + 1), x);
            }
            let assignment = MatrixAssignment::new(images)?;
            let report = defect(
                &xor_solution_algebra(&g, &sol.c)?,
                &assignment,
                NormKind::LittleFrobenius,
                None,
            )?;
            if report.max_defect > tol {
                return Err(Error::Numerical(format!(
                    "chsh reference defect {} exceeds 1e-12",
                    report.max_defect
                )));
            }
            let strategy = tsirelson_strategy(&sol)?;
            Ok(Instance {
                name: name.to_string(),
                game: Game::Xor(g),
                assignment,
                strategy,
                classical_strategy: None,
                solution: Some(sol),
            })
        }
        other => Err(Error::UnknownInstance(other.to_string())),
    }
}
