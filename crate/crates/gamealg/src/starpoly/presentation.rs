//! Finitely presented *-algebras of nonlocal games, and the isomorphism
//! between a synchronous algebra and the algebra of its BCS form.

use std::collections::{BTreeMap, BTreeSet};

use super::defect::MatrixAssignment;
use super::poly::StarPolynomial;
use crate::error::{Error, Result};
use crate::games::{
    fourier_polynomial, synchbcs_game, BinaryConstraintSystem, FourierPolynomial, SynchronousGame,
    XorGame,
};
use crate::matcore::Matrix;
use crate::scalar::{r, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationClass {
    SelfAdjoint,
    Involution,
    Idempotent,
    Completeness,
    Orthogonality,
    Constraint,
    Commutation,
    Bias,
}

impl RelationClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationClass::SelfAdjoint => "selfadjoint",
            RelationClass::Involution => "involution",
            RelationClass::Idempotent => "idempotent",
            RelationClass::Completeness => "completeness",
            RelationClass::Orthogonality => "orthogonality",
            RelationClass::Constraint => "constraint",
            RelationClass::Commutation => "commutation",
            RelationClass::Bias => "bias",
        }
    }
}

/// One relation, stored as a polynomial with target zero.
#[derive(Clone, Debug)]
pub struct Relation<T: Scalar> {
    pub label: String,
    pub class: RelationClass,
    pub poly: StarPolynomial<T>,
}

/// Generators plus relation polynomials; relations only mention declared
/// generators.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation<T: Scalar> {
    pub generators: Vec<String>,
    pub relations: Vec<Relation<T>>,
    /// Generators asserted self-adjoint unitary by the presentation.
    pub involution_generators: BTreeSet<String>,
}

impl<T: Scalar> AlgebraPresentation<T> {
    pub fn new(
        generators: Vec<String>,
        relations: Vec<Relation<T>>,
        involution_generators: BTreeSet<String>,
    ) -> Result<Self> {
        let declared: BTreeSet<&String> = generators.iter().collect();
        for rel in &relations {
            for name in rel.poly.letters() {
                if !declared.contains(&name) {
                    return Err(Error::Validation(format!(
                        "relation `{}` references undeclared generator `{name}`",
                        rel.label
                    )));
                }
            }
        }
        for name in &involution_generators {
            if !declared.contains(name) {
                return Err(Error::Validation(format!(
                    "involution flag on undeclared generator `{name}`"
                )));
            }
        }
        Ok(AlgebraPresentation {
            generators,
            relations,
            involution_generators,
        })
    }

    pub fn relation(&self, label: &str) -> Option<&Relation<T>> {
        self.relations.iter().find(|rel| rel.label == label)
    }
}

fn gen_p(i: usize, a: usize) -> String {
    format!("p[{i},{a}]")
}

fn gen_z(i: usize, a: usize) -> String {
    format!("z[{i},{a}]")
}

fn gen_x(j: usize) -> String {
    format!("x{j}")
}

fn gen_s(j: usize) -> String {
    format!("s{j}")
}

/// Parse `prefix[i,a]` back into indices.
fn parse_indexed(name: &str, prefix: char) -> Option<(usize, usize)> {
    let rest = name
        .strip_prefix(prefix)?
        .strip_prefix('[')?
        .strip_suffix(']')?;
    let (i, a) = rest.split_once(',')?;
    Some((i.parse().ok()?, a.parse().ok()?))
}

/// Self-adjointness and unitarity relations for one generator.
fn involution_relations<T: Scalar>(name: &str, relations: &mut Vec<Relation<T>>) {
    let g = StarPolynomial::generator(name);
    relations.push(Relation {
        label: format!("sa[{name}]"),
        class: RelationClass::SelfAdjoint,
        poly: g.sub(&g.adjoint()),
    });
    relations.push(Relation {
        label: format!("inv[{name}]"),
        class: RelationClass::Involution,
        poly: g.mul(&g).sub(&StarPolynomial::one()),
    });
}

/// Expand a constraint's +-1 polynomial over named variables and add one,
/// so the relation `f(K) = -1` reads `f(K) + 1 = 0`. Monomials multiply in
/// ascending scope position.
fn constraint_polynomial<T: Scalar>(
    f: &FourierPolynomial<T>,
    vars: &[String],
) -> StarPolynomial<T> {
    let mut poly = StarPolynomial::one();
    for mask in 0..(1usize << f.arity()) {
        let coeff = f.coefficient(mask);
        if coeff.is_zero() {
            continue;
        }
        let mut word = StarPolynomial::one();
        for (t, var) in vars.iter().enumerate() {
            if mask & (1 << t) != 0 {
                word = word.mul(&StarPolynomial::generator(var.clone()));
            }
        }
        poly = poly.add(&word.scale_real(coeff));
    }
    poly
}

/// Synchronous game algebra: per-pair projections, per-question
/// completeness, and one orthogonality relation per predicate zero
/// (same-question distinct-answer pairs included).
pub fn synchronous_algebra<T: Scalar>(g: &SynchronousGame<T>) -> AlgebraPresentation<T> {
    let nq = g.questions.len();
    let na = g.answers.len();
    let mut generators = Vec::new();
    let mut relations = Vec::new();
    for i in 0..nq {
        for a in 0..na {
            let name = gen_p(i, a);
            let p = StarPolynomial::generator(name.clone());
            relations.push(Relation {
                label: format!("idem[{name}]"),
                class: RelationClass::Idempotent,
                poly: p.mul(&p).sub(&p),
            });
            relations.push(Relation {
                label: format!("sa[{name}]"),
                class: RelationClass::SelfAdjoint,
                poly: p.sub(&p.adjoint()),
            });
            generators.push(name);
        }
    }
    for i in 0..nq {
        let mut sum = StarPolynomial::zero();
        for a in 0..na {
            sum = sum.add(&StarPolynomial::generator(gen_p(i, a)));
        }
        relations.push(Relation {
            label: format!("comp[{i}]"),
            class: RelationClass::Completeness,
            poly: sum.sub(&StarPolynomial::one()),
        });
    }
    for (i, a, j, b) in g.predicate_zeros() {
        let poly =
            StarPolynomial::generator(gen_p(i, a)).mul(&StarPolynomial::generator(gen_p(j, b)));
        relations.push(Relation {
            label: format!("orth[{i},{a}|{j},{b}]"),
            class: RelationClass::Orthogonality,
            poly,
        });
    }
    AlgebraPresentation::new(generators, relations, BTreeSet::new())
        .expect("synchronous presentation is closed over its generators")
}

/// BCS game algebra: involutions, one constraint polynomial per constraint
/// (`f_i(K_i) + 1`), and pairwise commutation within every scope.
pub fn bcs_algebra<T: Scalar>(b: &BinaryConstraintSystem) -> Result<AlgebraPresentation<T>> {
    let generators: Vec<String> = (1..=b.n).map(gen_x).collect();
    let mut relations = Vec::new();
    for name in &generators {
        involution_relations(name, &mut relations);
    }
    for (idx, cons) in b.constraints.iter().enumerate() {
        if cons.scope.is_empty() {
            return Err(Error::Validation(format!(
                "constraint {} has empty scope",
                idx + 1
            )));
        }
        let f = fourier_polynomial::<T>(&cons.table)?;
        let vars: Vec<String> = cons.scope.iter().map(|&j| gen_x(j)).collect();
        relations.push(Relation {
            label: format!("con[{}]", idx + 1),
            class: RelationClass::Constraint,
            poly: constraint_polynomial(&f, &vars),
        });
        for t in 0..cons.scope.len() {
            for u in (t + 1)..cons.scope.len() {
                let xa = StarPolynomial::generator(vars[t].clone());
                let xb = StarPolynomial::generator(vars[u].clone());
                relations.push(Relation {
                    label: format!("comm[{};{},{}]", idx + 1, vars[t], vars[u]),
                    class: RelationClass::Commutation,
                    poly: xa.mul(&xb).sub(&xb.mul(&xa)),
                });
            }
        }
    }
    let involutions = generators.iter().cloned().collect();
    AlgebraPresentation::new(generators, relations, involutions)
}

/// SynchBCS algebra of a synchronous game: one +-1 generator per
/// question/answer pair, "not both chosen" per predicate zero, odd product
/// per question, same-question commutation.
pub fn synchbcs_algebra<T: Scalar>(g: &SynchronousGame<T>) -> AlgebraPresentation<T> {
    let nq = g.questions.len();
    let na = g.answers.len();
    let generators: Vec<String> = (0..nq)
        .flat_map(|i| (0..na).map(move |a| gen_z(i, a)))
        .collect();
    let mut relations = Vec::new();
    for name in &generators {
        involution_relations(name, &mut relations);
    }
    for (i, a, j, b) in g.predicate_zeros() {
        let za = StarPolynomial::generator(gen_z(i, a));
        if (i, a) == (j, b) {
            // The zero forbids the answer outright: z must be +1.
            relations.push(Relation {
                label: format!("forbid[{i},{a}]"),
                class: RelationClass::Constraint,
                poly: StarPolynomial::one().sub(&za),
            });
            continue;
        }
        let zb = StarPolynomial::generator(gen_z(j, b));
        // 1 - AND~(z_a, z_b) = (1 - z_a - z_b + z_a z_b) / 2, the "not both
        // chosen" constraint in its f + 1 normal form.
        let poly = StarPolynomial::one()
            .sub(&za)
            .sub(&zb)
            .add(&za.mul(&zb))
            .scale_real(r::<T>(0.5));
        relations.push(Relation {
            label: format!("and[{i},{a}|{j},{b}]"),
            class: RelationClass::Constraint,
            poly,
        });
    }
    for i in 0..nq {
        let mut prod = StarPolynomial::one();
        for a in 0..na {
            prod = prod.mul(&StarPolynomial::generator(gen_z(i, a)));
        }
        relations.push(Relation {
            label: format!("prod[{i}]"),
            class: RelationClass::Constraint,
            poly: prod.add(&StarPolynomial::one()),
        });
        for a in 0..na {
            for b in (a + 1)..na {
                let za = StarPolynomial::generator(gen_z(i, a));
                let zb = StarPolynomial::generator(gen_z(i, b));
                relations.push(Relation {
                    label: format!("comm[{i};{a},{b}]"),
                    class: RelationClass::Commutation,
                    poly: za.mul(&zb).sub(&zb.mul(&za)),
                });
            }
        }
    }
    let involutions = generators.iter().cloned().collect();
    AlgebraPresentation::new(generators, relations, involutions)
        .expect("synchbcs presentation is closed over its generators")
}

/// XOR solution algebra for the given marginal row biases. Rows with
/// `c_i = 0` are omitted (and logged) rather than producing a degenerate
/// relation.
pub fn xor_solution_algebra<T: Scalar>(g: &XorGame<T>, c: &[T]) -> Result<AlgebraPresentation<T>> {
    if c.len() != g.rows() {
        return Err(Error::dim(g.rows(), c.len(), "marginal row biases"));
    }
    if c.iter().any(|&v| v < T::zero()) {
        return Err(Error::Validation(
            "marginal row biases must be nonnegative".into(),
        ));
    }
    let generators: Vec<String> = (1..=g.cols()).map(gen_s).collect();
    let mut relations = Vec::new();
    for name in &generators {
        involution_relations(name, &mut relations);
    }
    for (i, &ci) in c.iter().enumerate() {
        if ci.is_zero() {
            log::warn!(
                "solution algebra: row {} has zero marginal bias; relation omitted",
                i + 1
            );
            continue;
        }
        let mut row = StarPolynomial::zero();
        for j in 0..g.cols() {
            let w = g.cost(i, j);
            if w.is_zero() {
                continue;
            }
            row = row.add(&StarPolynomial::generator(gen_s(j + 1)).scale_real(w));
        }
        relations.push(Relation {
            label: format!("bias[{}]", i + 1),
            class: RelationClass::Bias,
            poly: row.mul(&row).sub(&StarPolynomial::real_constant(ci * ci)),
        });
    }
    let involutions = generators.iter().cloned().collect();
    AlgebraPresentation::new(generators, relations, involutions)
}

/// Symbolic generator map of the synchronous -> SynchBCS isomorphism:
/// `p[i,a] -> (1 - z[i,a]) / 2`.
pub fn synch_to_synchbcs_map<T: Scalar>(
    nq: usize,
    na: usize,
) -> BTreeMap<String, StarPolynomial<T>> {
    let mut map = BTreeMap::new();
    for i in 0..nq {
        for a in 0..na {
            let z = StarPolynomial::generator(gen_z(i, a));
            map.insert(
                gen_p(i, a),
                StarPolynomial::one().sub(&z).scale_real(r::<T>(0.5)),
            );
        }
    }
    map
}

/// Symbolic generator map of the inverse: `z[i,a] -> 1 - 2 p[i,a]`.
pub fn synchbcs_to_synch_map<T: Scalar>(
    nq: usize,
    na: usize,
) -> BTreeMap<String, StarPolynomial<T>> {
    let mut map = BTreeMap::new();
    for i in 0..nq {
        for a in 0..na {
            let p = StarPolynomial::generator(gen_p(i, a));
            map.insert(
                gen_z(i, a),
                StarPolynomial::one().sub(&p.scale_real(r::<T>(2.0))),
            );
        }
    }
    map
}

/// Largest coefficient mass left over after composing the two symbolic
/// generator maps, in both directions; zero for the exact isomorphism.
pub fn iso_symbolic_residual<T: Scalar>(g: &SynchronousGame<T>) -> T {
    let nq = g.questions.len();
    let na = g.answers.len();
    let fwd = synch_to_synchbcs_map::<T>(nq, na);
    let bwd = synchbcs_to_synch_map::<T>(nq, na);
    let mut worst = T::zero();
    for i in 0..nq {
        for a in 0..na {
            let p = StarPolynomial::<T>::generator(gen_p(i, a));
            let round_p = p.substitute(&fwd).substitute(&bwd);
            let z = StarPolynomial::<T>::generator(gen_z(i, a));
            let round_z = z.substitute(&bwd).substitute(&fwd);
            for residual in [round_p.sub(&p), round_z.sub(&z)] {
                let mass = residual.coefficient_mass();
                if mass > worst {
                    worst = mass;
                }
            }
        }
    }
    worst
}

/// Image-wise `p = (1 - z)/2` on an assignment over `z[i,a]` generators.
pub fn synch_from_synchbcs<T: Scalar>(a: &MatrixAssignment<T>) -> Result<MatrixAssignment<T>> {
    let dim = a.dim();
    let id = Matrix::<T>::identity(dim);
    let half = r::<T>(0.5);
    let mut images = BTreeMap::new();
    for (name, z) in a.images() {
        let (i, aa) = parse_indexed(name, 'z').ok_or_else(|| {
            Error::Validation(format!("expected z[i,a] generators, found `{name}`"))
        })?;
        images.insert(gen_p(i, aa), (&id - z).scale_real(half));
    }
    MatrixAssignment::new(images)
}

/// Image-wise `z = 1 - 2p` on an assignment over `p[i,a]` generators.
pub fn synchbcs_from_synch<T: Scalar>(a: &MatrixAssignment<T>) -> Result<MatrixAssignment<T>> {
    let dim = a.dim();
    let id = Matrix::<T>::identity(dim);
    let two = r::<T>(2.0);
    let mut images = BTreeMap::new();
    for (name, p) in a.images() {
        let (i, aa) = parse_indexed(name, 'p').ok_or_else(|| {
            Error::Validation(format!("expected p[i,a] generators, found `{name}`"))
        })?;
        images.insert(gen_z(i, aa), &id - &p.scale_real(two));
    }
    MatrixAssignment::new(images)
}

/// Names of the synchronous-algebra generators of a game, in declaration
/// order.
pub fn synchronous_generator_names<T: Scalar>(g: &SynchronousGame<T>) -> Vec<String> {
    (0..g.questions.len())
        .flat_map(|i| (0..g.answers.len()).map(move |a| gen_p(i, a)))
        .collect()
}

/// `(question, answer)` indices of a synchronous generator name, for either
/// the `p` or `z` picture.
pub fn parse_pair_generator(name: &str) -> Option<(usize, usize)> {
    parse_indexed(name, 'p').or_else(|| parse_indexed(name, 'z'))
}

/// Variable index (1-based) of a BCS generator name `xj`.
pub fn parse_bcs_generator(name: &str) -> Option<usize> {
    name.strip_prefix('x').and_then(|s| s.parse().ok())
}

/// The SynchBCS generator name carried by a BCS variable of the SynchBCS
/// game (inverse of `synchbcs_variable`).
pub fn synchbcs_generator_of_variable(var: usize, na: usize) -> String {
    let idx = var - 1;
    gen_z(idx / na, idx % na)
}

/// Rename the `x_j` assignment over the SynchBCS game's BCS algebra into the
/// `z[i,a]` picture.
pub fn rename_bcs_to_synchbcs<T: Scalar>(
    a: &MatrixAssignment<T>,
    g: &SynchronousGame<T>,
) -> Result<MatrixAssignment<T>> {
    let na = g.answers.len();
    let n = g.questions.len() * na;
    a.rename(|name| {
        let j = parse_bcs_generator(name)?;
        if j == 0 || j > n {
            return None;
        }
        Some(synchbcs_generator_of_variable(j, na))
    })
}

/// Sanity check used by tests: the SynchBCS presentation embeds in the
/// BCS-algebra presentation of the SynchBCS game (on the `z[i,a]` names).
/// The BCS route additionally carries commutation inside each two-variable
/// "not both chosen" scope; those are the only surplus relations allowed.
pub fn synchbcs_presentations_agree<T: Scalar>(g: &SynchronousGame<T>) -> bool {
    let direct = synchbcs_algebra::<T>(g);
    let via_game = match bcs_algebra::<T>(&synchbcs_game(g)) {
        Ok(p) => p,
        Err(_) => return false,
    };
    let na = g.answers.len();
    // Rename x_j -> z[i,a] inside every relation of the BCS route.
    let rename: BTreeMap<String, StarPolynomial<T>> = (1..=g.questions.len() * na)
        .map(|j| {
            (
                gen_x(j),
                StarPolynomial::generator(synchbcs_generator_of_variable(j, na)),
            )
        })
        .collect();
    let mut renamed: Vec<(RelationClass, StarPolynomial<T>)> = via_game
        .relations
        .iter()
        .map(|rel| (rel.class, rel.poly.substitute(&rename)))
        .collect();
    for rel in &direct.relations {
        match renamed.iter().position(|(_, p)| p.sub(&rel.poly).is_zero()) {
            Some(k) => {
                renamed.swap_remove(k);
            }
            None => return false,
        }
    }
    renamed
        .iter()
        .all(|(class, _)| *class == RelationClass::Commutation)
}
