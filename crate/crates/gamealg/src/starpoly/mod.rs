//! Free *-algebra over named generators, game-algebra presentations, and
//! defect evaluation of matrix assignments.

mod defect;
mod poly;
mod presentation;

pub use defect::{
    defect, evaluate, replace_and_recheck, DefectReport, MatrixAssignment, NormKind,
    ReplacementReport,
};
pub use poly::{Letter, StarPolynomial, Word};
pub use presentation::{
    bcs_algebra, iso_symbolic_residual, parse_bcs_generator, parse_pair_generator,
    rename_bcs_to_synchbcs, synch_from_synchbcs, synch_to_synchbcs_map, synchbcs_algebra,
    synchbcs_from_synch, synchbcs_generator_of_variable, synchbcs_presentations_agree,
    synchbcs_to_synch_map, synchronous_algebra, synchronous_generator_names, xor_solution_algebra,
    AlgebraPresentation, Relation, RelationClass,
};
