//! JSON wire formats for every externally visible object. Numbers
//! round-trip exactly (shortest-representation float encoding).

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{
    BinaryConstraintSystem, Constraint, Game, Measurements, NonlocalGame, Strategy,
    SynchronousGame, XorGame,
};
use crate::harness::{Perturbation, Pipeline, Slopes, SweepConfig, SweepRow};
use crate::lifting::{LiftResult, Score};
use crate::matcore::{DensityFactor, Matrix};
use crate::rounding::RoundingResult;
use crate::scalar::Scalar;
use crate::starpoly::{
    AlgebraPresentation, DefectReport, Letter, MatrixAssignment, NormKind, Relation, RelationClass,
    StarPolynomial,
};
use crate::strategy2rep::RhoRepExtraction;
use crate::xorsdp::VectorSolution;

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct MatrixWire<T> {
    pub dim: usize,
    pub re: Vec<Vec<T>>,
    pub im: Vec<Vec<T>>,
}

impl<T: Scalar + Serialize + DeserializeOwned> MatrixWire<T> {
    pub fn from_matrix(m: &Matrix<T>) -> Self {
        let d = m.dim();
        MatrixWire {
            dim: d,
            re: (0..d)
                .map(|i| (0..d).map(|j| m[(i, j)].re).collect())
                .collect(),
            im: (0..d)
                .map(|i| (0..d).map(|j| m[(i, j)].im).collect())
                .collect(),
        }
    }

    pub fn into_matrix(self) -> Result<Matrix<T>> {
        let d = self.dim;
        if self.re.len() != d || self.im.len() != d {
            return Err(Error::dim(d, self.re.len(), "matrix row count"));
        }
        let mut rows = Vec::with_capacity(d);
        for (re_row, im_row) in self.re.iter().zip(self.im.iter()) {
            if re_row.len() != d || im_row.len() != d {
                return Err(Error::dim(d, re_row.len(), "matrix column count"));
            }
            rows.push(
                re_row
                    .iter()
                    .zip(im_row.iter())
                    .map(|(&re, &im)| Complex::new(re, im))
                    .collect(),
            );
        }
        Matrix::from_rows(rows)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct AssignmentWire<T> {
    pub dim: usize,
    pub images: BTreeMap<String, MatrixWire<T>>,
}

impl<T: Scalar + Serialize + DeserializeOwned> AssignmentWire<T> {
    pub fn from_assignment(a: &MatrixAssignment<T>) -> Self {
        AssignmentWire {
            dim: a.dim(),
            images: a
                .images()
                .iter()
                .map(|(k, v)| (k.clone(), MatrixWire::from_matrix(v)))
                .collect(),
        }
    }

    pub fn into_assignment(self) -> Result<MatrixAssignment<T>> {
        let mut images = BTreeMap::new();
        for (k, w) in self.images {
            images.insert(k, w.into_matrix()?);
        }
        let a = MatrixAssignment::new(images)?;
        if a.dim() != self.dim {
            return Err(Error::dim(self.dim, a.dim(), "assignment dimension"));
        }
        Ok(a)
    }
}

#[derive(Serialize, Deserialize)]
pub struct ConstraintWire {
    pub scope: Vec<usize>,
    pub table: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub enum GameWire<T> {
    Predicate {
        inputs_a: Vec<String>,
        inputs_b: Vec<String>,
        outputs_a: Vec<String>,
        outputs_b: Vec<String>,
        predicate: Vec<u8>,
        eta: Vec<T>,
    },
    Synchronous {
        questions: Vec<String>,
        answers: Vec<String>,
        predicate: Vec<u8>,
        eta: Vec<T>,
    },
    Bcs {
        n: usize,
        constraints: Vec<ConstraintWire>,
    },
    Xor {
        t: Vec<Vec<u8>>,
        pi: Vec<Vec<T>>,
    },
}

impl<T: Scalar + Serialize + DeserializeOwned> GameWire<T> {
    pub fn from_game(g: &Game<T>) -> Self {
        match g {
            Game::Predicate(p) => GameWire::Predicate {
                inputs_a: p.inputs_a.clone(),
                inputs_b: p.inputs_b.clone(),
                outputs_a: p.outputs_a.clone(),
                outputs_b: p.outputs_b.clone(),
                predicate: p.predicate_table().to_vec(),
                eta: p.eta_table().to_vec(),
            },
            Game::Synchronous(s) => GameWire::Synchronous {
                questions: s.questions.clone(),
                answers: s.answers.clone(),
                predicate: s.to_nonlocal().predicate_table().to_vec(),
                eta: s.to_nonlocal().eta_table().to_vec(),
            },
            Game::Bcs(b) => GameWire::Bcs {
                n: b.n,
                constraints: b
                    .constraints
                    .iter()
                    .map(|c| ConstraintWire {
                        scope: c.scope.clone(),
                        table: c.table.iter().map(|&x| u8::from(x)).collect(),
                    })
                    .collect(),
            },
            Game::Xor(x) => GameWire::Xor {
                t: x.target_table().to_vec(),
                pi: x.pi_table().to_vec(),
            },
        }
    }

    pub fn into_game(self) -> Result<Game<T>> {
        match self {
            GameWire::Predicate {
                inputs_a,
                inputs_b,
                outputs_a,
                outputs_b,
                predicate,
                eta,
            } => Ok(Game::Predicate(NonlocalGame::new(
                inputs_a, inputs_b, outputs_a, outputs_b, predicate, eta,
            )?)),
            GameWire::Synchronous {
                questions,
                answers,
                predicate,
                eta,
            } => Ok(Game::Synchronous(SynchronousGame::new(
                questions, answers, predicate, eta,
            )?)),
            GameWire::Bcs { n, constraints } => {
                let constraints = constraints
                    .into_iter()
                    .map(|c| Constraint {
                        scope: c.scope,
                        table: c.table.into_iter().map(|x| x != 0).collect(),
                    })
                    .collect();
                Ok(Game::Bcs(BinaryConstraintSystem::new(n, constraints)?))
            }
            GameWire::Xor { t, pi } => Ok(Game::Xor(XorGame::new(t, pi)?)),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct StateWire<T> {
    pub re: Vec<T>,
    pub im: Vec<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub enum StrategyWire<T> {
    Pvm {
        alice: Vec<Vec<MatrixWire<T>>>,
        bob: Vec<Vec<MatrixWire<T>>>,
        state: StateWire<T>,
        canonical: bool,
    },
    Observable {
        alice: Vec<MatrixWire<T>>,
        bob: Vec<MatrixWire<T>>,
        state: StateWire<T>,
        canonical: bool,
    },
}

impl<T: Scalar + Serialize + DeserializeOwned> StrategyWire<T> {
    pub fn from_strategy(s: &Strategy<T>) -> Self {
        let state = StateWire {
            re: s.state.iter().map(|z| z.re).collect(),
            im: s.state.iter().map(|z| z.im).collect(),
        };
        match (&s.alice, &s.bob) {
            (Measurements::Pvm(a), Measurements::Pvm(b)) => StrategyWire::Pvm {
                alice: a
                    .iter()
                    .map(|fam| fam.iter().map(MatrixWire::from_matrix).collect())
                    .collect(),
                bob: b
                    .iter()
                    .map(|fam| fam.iter().map(MatrixWire::from_matrix).collect())
                    .collect(),
                state,
                canonical: s.canonical,
            },
            (Measurements::Observables(a), Measurements::Observables(b)) => {
                StrategyWire::Observable {
                    alice: a.iter().map(MatrixWire::from_matrix).collect(),
                    bob: b.iter().map(MatrixWire::from_matrix).collect(),
                    state,
                    canonical: s.canonical,
                }
            }
            _ => unreachable!("mixed measurement kinds are rejected at construction"),
        }
    }

    pub fn into_strategy(self) -> Result<Strategy<T>> {
        let build_state = |w: StateWire<T>| -> Result<Vec<Complex<T>>> {
            if w.re.len() != w.im.len() {
                return Err(Error::dim(w.re.len(), w.im.len(), "state vector parts"));
            }
            Ok(w.re
                .into_iter()
                .zip(w.im)
                .map(|(re, im)| Complex::new(re, im))
                .collect())
        };
        match self {
            StrategyWire::Pvm {
                alice,
                bob,
                state,
                canonical,
            } => {
                let conv = |fams: Vec<Vec<MatrixWire<T>>>| -> Result<Vec<Vec<Matrix<T>>>> {
                    fams.into_iter()
                        .map(|fam| fam.into_iter().map(|m| m.into_matrix()).collect())
                        .collect()
                };
                let mut s = Strategy::new(
                    Measurements::Pvm(conv(alice)?),
                    Measurements::Pvm(conv(bob)?),
                    build_state(state)?,
                )?;
                s.canonical = canonical;
                Ok(s)
            }
            StrategyWire::Observable {
                alice,
                bob,
                state,
                canonical,
            } => {
                let conv = |ops: Vec<MatrixWire<T>>| -> Result<Vec<Matrix<T>>> {
                    ops.into_iter().map(|m| m.into_matrix()).collect()
                };
                let mut s = Strategy::new(
                    Measurements::Observables(conv(alice)?),
                    Measurements::Observables(conv(bob)?),
                    build_state(state)?,
                )?;
                s.canonical = canonical;
                Ok(s)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct TermWire<T> {
    pub word: Vec<(String, bool)>,
    pub re: T,
    pub im: T,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct RelationWire<T> {
    pub label: String,
    pub class: String,
    pub terms: Vec<TermWire<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct PresentationWire<T> {
    pub generators: Vec<String>,
    pub involution_generators: Vec<String>,
    pub relations: Vec<RelationWire<T>>,
}

fn class_name(class: RelationClass) -> String {
    class.as_str().to_string()
}

fn parse_class(s: &str) -> Result<RelationClass> {
    Ok(match s {
        "selfadjoint" => RelationClass::SelfAdjoint,
        "involution" => RelationClass::Involution,
        "idempotent" => RelationClass::Idempotent,
        "completeness" => RelationClass::Completeness,
        "orthogonality" => RelationClass::Orthogonality,
        "constraint" => RelationClass::Constraint,
        "commutation" => RelationClass::Commutation,
        "bias" => RelationClass::Bias,
        other => {
            return Err(Error::Validation(format!(
                "unknown relation class `{other}`"
            )))
        }
    })
}

impl<T: Scalar + Serialize + DeserializeOwned> PresentationWire<T> {
    pub fn from_presentation(p: &AlgebraPresentation<T>) -> Self {
        PresentationWire {
            generators: p.generators.clone(),
            involution_generators: p.involution_generators.iter().cloned().collect(),
            relations: p
                .relations
                .iter()
                .map(|rel| RelationWire {
                    label: rel.label.clone(),
                    class: class_name(rel.class),
                    terms: rel
                        .poly
                        .terms()
                        .map(|(word, coeff)| TermWire {
                            word: word.iter().map(|l| (l.gen.clone(), l.adjoint)).collect(),
                            re: coeff.re,
                            im: coeff.im,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn into_presentation(self) -> Result<AlgebraPresentation<T>> {
        let mut relations = Vec::with_capacity(self.relations.len());
        for rel in self.relations {
            let mut poly = StarPolynomial::zero();
            for term in rel.terms {
                let word = term
                    .word
                    .into_iter()
                    .map(|(gen, adjoint)| Letter { gen, adjoint })
                    .collect();
                poly.add_term(word, Complex::new(term.re, term.im));
            }
            relations.push(Relation {
                label: rel.label,
                class: parse_class(&rel.class)?,
                poly,
            });
        }
        AlgebraPresentation::new(
            self.generators,
            relations,
            self.involution_generators.into_iter().collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct DefectReportWire<T> {
    pub norm: String,
    pub per_relation: BTreeMap<String, T>,
    pub max_defect: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atp_defect: Option<T>,
}

impl<T: Scalar + Serialize + DeserializeOwned> DefectReportWire<T> {
    pub fn from_report(rep: &DefectReport<T>) -> Self {
        DefectReportWire {
            norm: rep.norm_kind.as_str().to_string(),
            per_relation: rep.per_relation.clone(),
            max_defect: rep.max_defect,
            atp_defect: rep.atp_defect,
        }
    }

    pub fn into_report(self) -> Result<DefectReport<T>> {
        Ok(DefectReport {
            norm_kind: NormKind::parse(&self.norm)?,
            per_relation: self.per_relation,
            max_defect: self.max_defect,
            atp_defect: self.atp_defect,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct ExtractionWire<T> {
    pub assignment: AssignmentWire<T>,
    pub lambda: MatrixWire<T>,
    pub report: DefectReportWire<T>,
    pub atp_defect: T,
    pub consistency_residuals: BTreeMap<String, T>,
}

impl<T: Scalar + Serialize + DeserializeOwned> ExtractionWire<T> {
    pub fn from_extraction(e: &RhoRepExtraction<T>) -> Self {
        ExtractionWire {
            assignment: AssignmentWire::from_assignment(&e.assignment),
            lambda: MatrixWire::from_matrix(e.lambda.matrix()),
            report: DefectReportWire::from_report(&e.report),
            atp_defect: e.atp_defect,
            consistency_residuals: e.consistency_residuals.clone(),
        }
    }

    pub fn into_extraction(self) -> Result<RhoRepExtraction<T>> {
        Ok(RhoRepExtraction {
            assignment: self.assignment.into_assignment()?,
            lambda: DensityFactor::new(self.lambda.into_matrix()?)?,
            report: self.report.into_report()?,
            atp_defect: self.atp_defect,
            consistency_residuals: self.consistency_residuals,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct BreakpointWire<T> {
    pub threshold: T,
    pub functional: T,
    pub rank: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct RoundingWire<T> {
    pub threshold: T,
    pub rank: usize,
    pub projection: MatrixWire<T>,
    pub rounded: AssignmentWire<T>,
    pub f_report: DefectReportWire<T>,
    pub per_generator_distance: BTreeMap<String, T>,
    pub functional_value: T,
    pub functional_average: T,
    pub breakpoints: Vec<BreakpointWire<T>>,
}

impl<T: Scalar + Serialize + DeserializeOwned> RoundingWire<T> {
    pub fn from_rounding(out: &RoundingResult<T>) -> Self {
        RoundingWire {
            threshold: out.threshold,
            rank: out.rank,
            projection: MatrixWire::from_matrix(&out.projection),
            rounded: AssignmentWire::from_assignment(&out.rounded),
            f_report: DefectReportWire::from_report(&out.f_report),
            per_generator_distance: out.per_generator_distance.clone(),
            functional_value: out.functional_value,
            functional_average: out.functional_average,
            breakpoints: out
                .breakpoints
                .iter()
                .map(|row| BreakpointWire {
                    threshold: row.threshold,
                    functional: row.functional,
                    rank: row.rank,
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct ScoreWire<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bias: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_to_optimum: Option<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct LiftWire<T> {
    pub strategy: StrategyWire<T>,
    pub per_generator_distance: BTreeMap<String, T>,
    pub score: ScoreWire<T>,
    pub tie_flags: usize,
    pub repaired_patterns: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain_bound: Option<T>,
}

impl<T: Scalar + Serialize + DeserializeOwned> LiftWire<T> {
    pub fn from_lift(out: &LiftResult<T>) -> Self {
        let Score {
            value,
            bias,
            gap_to_optimum,
        } = out.score.clone();
        LiftWire {
            strategy: StrategyWire::from_strategy(&out.strategy),
            per_generator_distance: out.per_generator_distance.clone(),
            score: ScoreWire {
                value,
                bias,
                gap_to_optimum,
            },
            tie_flags: out.tie_flags,
            repaired_patterns: out.repaired_patterns,
            chain_bound: out.chain_bound,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct SolutionWire<T> {
    pub r: usize,
    pub u: Vec<Vec<T>>,
    pub v: Vec<Vec<T>>,
    pub bias: T,
    pub c: Vec<T>,
    #[serde(default)]
    pub degenerate_rows: Vec<usize>,
    #[serde(default)]
    pub degenerate_cols: Vec<usize>,
}

impl<T: Scalar + Serialize + DeserializeOwned> SolutionWire<T> {
    pub fn from_solution(sol: &VectorSolution<T>) -> Self {
        SolutionWire {
            r: sol.r,
            u: sol.u.clone(),
            v: sol.v.clone(),
            bias: sol.bias,
            c: sol.c.clone(),
            degenerate_rows: sol.degenerate_rows.clone(),
            degenerate_cols: sol.degenerate_cols.clone(),
        }
    }

    pub fn into_solution(self) -> VectorSolution<T> {
        VectorSolution {
            r: self.r,
            u: self.u,
            v: self.v,
            bias: self.bias,
            c: self.c,
            degenerate_rows: self.degenerate_rows,
            degenerate_cols: self.degenerate_cols,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct SweepConfigWire<T> {
    pub instance: String,
    pub pipeline: String,
    pub delta_grid: Vec<T>,
    pub trials_per_delta: usize,
    pub seed: u64,
    pub perturbation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schmidt_weights: Option<Vec<T>>,
}

impl<T: Scalar + Serialize + DeserializeOwned> SweepConfigWire<T> {
    pub fn into_config(self) -> Result<SweepConfig<T>> {
        Ok(SweepConfig {
            instance: self.instance,
            pipeline: Pipeline::parse(&self.pipeline)?,
            delta_grid: self.delta_grid,
            trials_per_delta: self.trials_per_delta,
            seed: self.seed,
            perturbation: Perturbation::parse(&self.perturbation)?,
            schmidt_weights: self.schmidt_weights,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct SlopesWire<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_vs_rho: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss_vs_f: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_vs_delta: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_vs_delta: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss_vs_delta: Option<T>,
}

impl<T: Scalar + Serialize + DeserializeOwned> SlopesWire<T> {
    pub fn from_slopes(s: &Slopes<T>) -> Self {
        SlopesWire {
            f_vs_rho: s.f_vs_rho,
            loss_vs_f: s.loss_vs_f,
            rho_vs_delta: s.rho_vs_delta,
            f_vs_delta: s.f_vs_delta,
            loss_vs_delta: s.loss_vs_delta,
        }
    }
}

/// Per-input winning probabilities keyed "i,j".
#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct GameValueWire<T> {
    pub value: T,
    pub per_input: BTreeMap<String, T>,
}

impl<T: Scalar + Serialize + DeserializeOwned> GameValueWire<T> {
    pub fn from_value(v: &crate::games::GameValue<T>) -> Self {
        GameValueWire {
            value: v.value,
            per_input: v
                .per_input
                .iter()
                .map(|(&(i, j), &p)| (format!("{i},{j}"), p))
                .collect(),
        }
    }
}

/// Sweep rows in wire form (the CSV is the primary output; this mirrors it).
#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct SweepRowWire<T> {
    pub delta: T,
    pub trial: usize,
    pub rho_defect: T,
    pub atp_defect: T,
    pub f_defect_after_rounding: T,
    pub rounded_rank: usize,
    pub lifted_score: T,
    pub gap: T,
    pub max_generator_distance: T,
}

impl<T: Scalar + Serialize + DeserializeOwned> SweepRowWire<T> {
    pub fn from_row(row: &SweepRow<T>) -> Self {
        SweepRowWire {
            delta: row.delta,
            trial: row.trial,
            rho_defect: row.rho_defect,
            atp_defect: row.atp_defect,
            f_defect_after_rounding: row.f_defect_after_rounding,
            rounded_rank: row.rounded_rank,
            lifted_score: row.lifted_score,
            gap: row.gap,
            max_generator_distance: row.max_generator_distance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::instance_library;
    use crate::scalar::c;
    use proptest::prelude::*;

    #[test]
    fn game_wire_round_trips() {
        for name in crate::harness::INSTANCE_NAMES {
            let inst = instance_library::<f64>(name).unwrap();
            let json = serde_json::to_string(&GameWire::from_game(&inst.game)).unwrap();
            let back: GameWire<f64> = serde_json::from_str(&json).unwrap();
            let game = back.into_game().unwrap();
            let json2 = serde_json::to_string(&GameWire::from_game(&game)).unwrap();
            assert_eq!(json, json2);
        }
    }

    #[test]
    fn strategy_wire_round_trips() {
        let inst = instance_library::<f64>("chsh").unwrap();
        let json = serde_json::to_string(&StrategyWire::from_strategy(&inst.strategy)).unwrap();
        let back: StrategyWire<f64> = serde_json::from_str(&json).unwrap();
        let s = back.into_strategy().unwrap();
        s.validate().unwrap();
        let json2 = serde_json::to_string(&StrategyWire::from_strategy(&s)).unwrap();
        assert_eq!(json, json2);
    }

    #[test]
    fn presentation_wire_round_trips() {
        let g = crate::harness::triangle_game::<f64>();
        let pres = crate::starpoly::synchbcs_algebra(&g);
        let json = serde_json::to_string(&PresentationWire::from_presentation(&pres)).unwrap();
        let back: PresentationWire<f64> = serde_json::from_str(&json).unwrap();
        let pres2 = back.into_presentation().unwrap();
        assert_eq!(pres.generators, pres2.generators);
        assert_eq!(pres.relations.len(), pres2.relations.len());
        for (a, b) in pres.relations.iter().zip(pres2.relations.iter()) {
            assert_eq!(a.label, b.label);
            assert!(a.poly.sub(&b.poly).is_zero());
        }
    }

    proptest! {
        /// Matrices survive a JSON round trip bit for bit.
        #[test]
        fn matrix_wire_is_exact(values in proptest::collection::vec(
            (any::<f64>(), any::<f64>()), 4,
        )) {
            prop_assume!(values.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
            let m = Matrix::from_rows(vec![
                vec![c(values[0].0, values[0].1), c(values[1].0, values[1].1)],
                vec![c(values[2].0, values[2].1), c(values[3].0, values[3].1)],
            ]).unwrap();
            let json = serde_json::to_string(&MatrixWire::from_matrix(&m)).unwrap();
            let back: MatrixWire<f64> = serde_json::from_str(&json).unwrap();
            let m2 = back.into_matrix().unwrap();
            prop_assert!(m == m2);
        }
    }
}
