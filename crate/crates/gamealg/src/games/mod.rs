//! Game models: general predicate games, synchronous games, binary
//! constraint systems, XOR games, and the conversions between them.

pub mod fourier;
mod strategy;

pub use fourier::{fourier_polynomial, nand_table, parity_table, FourierPolynomial};
pub use strategy::{
    canonicalize, expectation, game_value, tensor_vs_factor_norm, xor_bias, GameValue,
    Measurements, Strategy, StrategyKind, TensorFactorNorms,
};

use crate::error::{Error, Result};
use crate::scalar::{r, Scalar};

/// Two-player nonlocal game `(eta, I, J, A, B, V)` with an explicit
/// predicate table.
#[derive(Clone, Debug)]
pub struct NonlocalGame<T: Scalar> {
    pub inputs_a: Vec<String>,
    pub inputs_b: Vec<String>,
    pub outputs_a: Vec<String>,
    pub outputs_b: Vec<String>,
    predicate: Vec<u8>,
    eta: Vec<T>,
}

impl<T: Scalar> NonlocalGame<T> {
    pub fn new(
        inputs_a: Vec<String>,
        inputs_b: Vec<String>,
        outputs_a: Vec<String>,
        outputs_b: Vec<String>,
        predicate: Vec<u8>,
        eta: Vec<T>,
    ) -> Result<Self> {
        let (ni, nj, na, nb) = (
            inputs_a.len(),
            inputs_b.len(),
            outputs_a.len(),
            outputs_b.len(),
        );
        if predicate.len() != ni * nj * na * nb {
            return Err(Error::dim(
                ni * nj * na * nb,
                predicate.len(),
                "predicate table",
            ));
        }
        if eta.len() != ni * nj {
            return Err(Error::dim(ni * nj, eta.len(), "input distribution"));
        }
        if eta.iter().any(|&w| w < T::zero()) {
            return Err(Error::Validation(
                "input distribution must be nonnegative".into(),
            ));
        }
        let total: T = eta.iter().copied().sum();
        if (total - T::one()).abs() > r::<T>(1e-12).max(T::epsilon() * r::<T>(16.0)) {
            return Err(Error::Validation(format!(
                "input distribution must sum to 1, got {total}"
            )));
        }
        Ok(NonlocalGame {
            inputs_a,
            inputs_b,
            outputs_a,
            outputs_b,
            predicate,
            eta,
        })
    }

    #[inline]
    pub fn wins(&self, i: usize, j: usize, a: usize, b: usize) -> bool {
        let (nj, na, nb) = (
            self.inputs_b.len(),
            self.outputs_a.len(),
            self.outputs_b.len(),
        );
        self.predicate[((i * nj + j) * na + a) * nb + b] != 0
    }

    #[inline]
    pub fn eta(&self, i: usize, j: usize) -> T {
        self.eta[i * self.inputs_b.len() + j]
    }

    pub fn predicate_table(&self) -> &[u8] {
        &self.predicate
    }

    pub fn eta_table(&self) -> &[T] {
        &self.eta
    }
}

/// Synchronous game: both players share question and answer sets, and equal
/// questions must receive equal answers (enforced at construction).
#[derive(Clone, Debug)]
pub struct SynchronousGame<T: Scalar> {
    pub questions: Vec<String>,
    pub answers: Vec<String>,
    predicate: Vec<u8>,
    eta: Vec<T>,
}

impl<T: Scalar> SynchronousGame<T> {
    pub fn new(
        questions: Vec<String>,
        answers: Vec<String>,
        predicate: Vec<u8>,
        eta: Vec<T>,
    ) -> Result<Self> {
        let (nq, na) = (questions.len(), answers.len());
        if predicate.len() != nq * nq * na * na {
            return Err(Error::dim(
                nq * nq * na * na,
                predicate.len(),
                "predicate table",
            ));
        }
        let g = SynchronousGame {
            questions,
            answers,
            predicate,
            eta,
        };
        for i in 0..nq {
            for a in 0..na {
                for b in 0..na {
                    if a != b && g.wins(i, i, a, b) {
                        return Err(Error::Validation(format!(
                            "not synchronous: V({a},{b}|{i},{i}) = 1"
                        )));
                    }
                }
            }
        }
        // Reuse the general validation for eta.
        let _ = NonlocalGame::new(
            g.questions.clone(),
            g.questions.clone(),
            g.answers.clone(),
            g.answers.clone(),
            g.predicate.clone(),
            g.eta.clone(),
        )?;
        Ok(g)
    }

    /// Build from a predicate closure with the uniform input distribution.
    pub fn from_predicate(
        questions: Vec<String>,
        answers: Vec<String>,
        v: impl Fn(usize, usize, usize, usize) -> bool,
    ) -> Result<Self> {
        let (nq, na) = (questions.len(), answers.len());
        let mut predicate = Vec::with_capacity(nq * nq * na * na);
        for i in 0..nq {
            for j in 0..nq {
                for a in 0..na {
                    for b in 0..na {
                        predicate.push(u8::from(v(i, j, a, b)));
                    }
                }
            }
        }
        let w = T::one() / r::<T>((nq * nq) as f64);
        Self::new(questions, answers, predicate, vec![w; nq * nq])
    }

    #[inline]
    pub fn wins(&self, i: usize, j: usize, a: usize, b: usize) -> bool {
        let na = self.answers.len();
        self.predicate[((i * self.questions.len() + j) * na + a) * na + b] != 0
    }

    pub fn to_nonlocal(&self) -> NonlocalGame<T> {
        NonlocalGame {
            inputs_a: self.questions.clone(),
            inputs_b: self.questions.clone(),
            outputs_a: self.answers.clone(),
            outputs_b: self.answers.clone(),
            predicate: self.predicate.clone(),
            eta: self.eta.clone(),
        }
    }

    /// Ordered zeros of the predicate: all `(i, a, j, b)` with
    /// `V(a,b|i,j) = 0`.
    pub fn predicate_zeros(&self) -> Vec<(usize, usize, usize, usize)> {
        let (nq, na) = (self.questions.len(), self.answers.len());
        let mut zeros = Vec::new();
        for i in 0..nq {
            for j in 0..nq {
                for a in 0..na {
                    for b in 0..na {
                        if !self.wins(i, j, a, b) {
                            zeros.push((i, a, j, b));
                        }
                    }
                }
            }
        }
        zeros
    }
}

/// One constraint of a binary constraint system.
///
/// `scope` holds 1-based variable indices; `table` is the truth table of
/// the constraint's binary function over the scope bits (entry `true` means
/// satisfied), indexed with scope position 1 in the least significant bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub scope: Vec<usize>,
    pub table: Vec<bool>,
}

impl Constraint {
    /// Parity constraint `prod_{j in scope} x_j = sign`.
    pub fn parity(scope: Vec<usize>, sign: i8) -> Self {
        let k = scope.len();
        Constraint {
            scope,
            table: parity_table(k, sign),
        }
    }

    /// Indices of satisfying assignments.
    pub fn satisfying(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&a| self.table[a]).collect()
    }
}

/// Binary constraint system on `n` +-1-valued variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryConstraintSystem {
    pub n: usize,
    pub constraints: Vec<Constraint>,
}

impl BinaryConstraintSystem {
    pub fn new(n: usize, constraints: Vec<Constraint>) -> Result<Self> {
        for (idx, c) in constraints.iter().enumerate() {
            if c.scope.is_empty() {
                return Err(Error::Validation(format!(
                    "constraint {} has empty scope",
                    idx + 1
                )));
            }
            if c.scope.iter().any(|&v| v == 0 || v > n) {
                return Err(Error::Validation(format!(
                    "constraint {} references a variable outside 1..={n}",
                    idx + 1
                )));
            }
            let mut sorted = c.scope.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != c.scope.len() {
                return Err(Error::Validation(format!(
                    "constraint {} has a repeated scope variable",
                    idx + 1
                )));
            }
            if c.table.len() != 1usize << c.scope.len() {
                return Err(Error::dim(
                    1usize << c.scope.len(),
                    c.table.len(),
                    "constraint truth table",
                ));
            }
        }
        Ok(BinaryConstraintSystem { n, constraints })
    }

    /// Brute-force classical satisfiability (intended for n <= 20).
    pub fn classical_solution(&self) -> Option<Vec<i8>> {
        'outer: for bits in 0..(1u64 << self.n) {
            for c in &self.constraints {
                let mut idx = 0usize;
                for (t, &var) in c.scope.iter().enumerate() {
                    if bits & (1 << (var - 1)) != 0 {
                        idx |= 1 << t;
                    }
                }
                if !c.table[idx] {
                    continue 'outer;
                }
            }
            return Some(
                (0..self.n)
                    .map(|v| if bits & (1 << v) != 0 { -1 } else { 1 })
                    .collect(),
            );
        }
        None
    }
}

/// XOR game: target-bit matrix plus an input distribution; the derived cost
/// matrix is `g_ij = (-1)^{t_ij} pi(i,j)`.
#[derive(Clone, Debug)]
pub struct XorGame<T: Scalar> {
    t: Vec<Vec<u8>>,
    pi: Vec<Vec<T>>,
}

impl<T: Scalar> XorGame<T> {
    pub fn new(t: Vec<Vec<u8>>, pi: Vec<Vec<T>>) -> Result<Self> {
        let m = t.len();
        if m == 0 || t[0].is_empty() {
            return Err(Error::Validation(
                "XOR game needs at least one row and column".into(),
            ));
        }
        let n = t[0].len();
        if t.iter().any(|row| row.len() != n)
            || pi.len() != m
            || pi.iter().any(|row| row.len() != n)
        {
            return Err(Error::Validation("ragged XOR game tables".into()));
        }
        if pi.iter().flatten().any(|&w| w < T::zero()) {
            return Err(Error::Validation(
                "input distribution must be nonnegative".into(),
            ));
        }
        let total: T = pi.iter().flatten().copied().sum();
        if (total - T::one()).abs() > r::<T>(1e-12).max(T::epsilon() * r::<T>(16.0)) {
            return Err(Error::Validation(format!(
                "input distribution must sum to 1, got {total}"
            )));
        }
        Ok(XorGame { t, pi })
    }

    /// Build directly from a cost matrix with `sum |g_ij| = 1`.
    pub fn from_cost(g: Vec<Vec<T>>) -> Result<Self> {
        let t = g
            .iter()
            .map(|row| row.iter().map(|&v| u8::from(v < T::zero())).collect())
            .collect();
        let pi = g
            .iter()
            .map(|row| row.iter().map(|&v| v.abs()).collect())
            .collect();
        Self::new(t, pi)
    }

    pub fn rows(&self) -> usize {
        self.t.len()
    }

    pub fn cols(&self) -> usize {
        self.t[0].len()
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> T {
        let sign = if self.t[i][j] == 1 {
            -T::one()
        } else {
            T::one()
        };
        sign * self.pi[i][j]
    }

    pub fn target_table(&self) -> &[Vec<u8>] {
        &self.t
    }

    pub fn pi_table(&self) -> &[Vec<T>] {
        &self.pi
    }

    /// Best deterministic +-1 strategy bias, by enumeration over Bob's
    /// assignments (exact for the small games in the test suite).
    pub fn classical_bias(&self) -> T {
        let n = self.cols();
        let mut best = -T::infinity();
        for bits in 0..(1u64 << n) {
            let mut total = T::zero();
            for i in 0..self.rows() {
                let mut row = T::zero();
                for j in 0..n {
                    let x = if bits & (1 << j) != 0 {
                        -T::one()
                    } else {
                        T::one()
                    };
                    row = row + self.cost(i, j) * x;
                }
                total = total + row.abs();
            }
            if total > best {
                best = total;
            }
        }
        best
    }
}

/// Tagged game variant, mirroring the JSON schema.
#[derive(Clone, Debug)]
pub enum Game<T: Scalar> {
    Predicate(NonlocalGame<T>),
    Synchronous(SynchronousGame<T>),
    Bcs(BinaryConstraintSystem),
    Xor(XorGame<T>),
}

/// Input-distribution convention for the game derived from a BCS.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcsEta {
    /// Uniform over (constraint, variable-in-scope) pairs; out-of-scope
    /// pairs get zero mass since the predicate auto-wins there.
    InScope,
    /// Uniform over all (constraint, variable) pairs.
    AllPairs,
}

/// The nonlocal game of a binary constraint system: Alice answers a
/// constraint with a satisfying assignment (encoded as the truth-table
/// index), Bob answers one variable with a sign.
///
/// Bob's answer 0 encodes +1 and answer 1 encodes -1; Alice's answers
/// beyond the constraint's table, or non-satisfying ones, lose outright.
pub fn bcs_game<T: Scalar>(b: &BinaryConstraintSystem) -> Result<NonlocalGame<T>> {
    bcs_game_with_eta(b, BcsEta::InScope)
}

pub fn bcs_game_with_eta<T: Scalar>(
    b: &BinaryConstraintSystem,
    mode: BcsEta,
) -> Result<NonlocalGame<T>> {
    let m = b.constraints.len();
    let n = b.n;
    let kmax = b
        .constraints
        .iter()
        .map(|c| c.scope.len())
        .max()
        .ok_or_else(|| Error::Validation("BCS has no constraints".into()))?;
    for (i, c) in b.constraints.iter().enumerate() {
        if c.satisfying().is_empty() {
            return Err(Error::Validation(format!(
                "constraint {} has no satisfying assignment",
                i + 1
            )));
        }
    }
    let num_a = 1usize << kmax;
    let inputs_a: Vec<String> = (1..=m).map(|i| format!("C{i}")).collect();
    let inputs_b: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
    let outputs_a: Vec<String> = (0..num_a).map(|a| a.to_string()).collect();
    let outputs_b = vec!["+1".to_string(), "-1".to_string()];

    let mut predicate = Vec::with_capacity(m * n * num_a * 2);
    for ci in 0..m {
        let c = &b.constraints[ci];
        for j in 1..=n {
            let pos = c.scope.iter().position(|&v| v == j);
            for a in 0..num_a {
                let legal = a < c.table.len() && c.table[a];
                for bb in 0..2usize {
                    let win = if !legal {
                        false
                    } else {
                        match pos {
                            None => true,
                            Some(t) => (a >> t) & 1 == bb,
                        }
                    };
                    predicate.push(u8::from(win));
                }
            }
        }
    }

    let mut eta = vec![T::zero(); m * n];
    match mode {
        BcsEta::AllPairs => {
            let w = T::one() / r::<T>((m * n) as f64);
            eta.iter_mut().for_each(|e| *e = w);
        }
        BcsEta::InScope => {
            let pairs: usize = b.constraints.iter().map(|c| c.scope.len()).sum();
            let w = T::one() / r::<T>(pairs as f64);
            for (ci, c) in b.constraints.iter().enumerate() {
                for &j in &c.scope {
                    eta[ci * n + (j - 1)] = w;
                }
            }
        }
    }

    NonlocalGame::new(inputs_a, inputs_b, outputs_a, outputs_b, predicate, eta)
}

/// Index (1-based) of the BCS variable attached to question `i`, answer `a`
/// of a synchronous game with `na` answers.
pub fn synchbcs_variable(i: usize, a: usize, na: usize) -> usize {
    i * na + a + 1
}

/// The BCS version of a synchronous game: one +-1 variable per
/// question/answer pair, a "not both chosen" constraint per predicate zero,
/// and one odd-parity constraint per question so exactly one answer fires.
pub fn synchbcs_game<T: Scalar>(g: &SynchronousGame<T>) -> BinaryConstraintSystem {
    let na = g.answers.len();
    let nq = g.questions.len();
    let n = nq * na;
    let mut constraints = Vec::new();
    for (i, a, j, b) in g.predicate_zeros() {
        let va = synchbcs_variable(i, a, na);
        let vb = synchbcs_variable(j, b, na);
        if va == vb {
            // V(a,a|i,i) = 0 forbids the answer outright: the variable must
            // stay +1.
            constraints.push(Constraint {
                scope: vec![va],
                table: vec![true, false],
            });
        } else {
            constraints.push(Constraint {
                scope: vec![va, vb],
                table: nand_table(),
            });
        }
    }
    for i in 0..nq {
        let scope: Vec<usize> = (0..na).map(|a| synchbcs_variable(i, a, na)).collect();
        constraints.push(Constraint {
            scope,
            table: parity_table(na, -1),
        });
    }
    BinaryConstraintSystem { n, constraints }
}
