//! The whole pipeline instantiates at `f32` as well as `f64`.
//!
//! The pinned construction tolerances (1e-9/1e-10) are sized for `f64`, so
//! the single-precision checks run on exactly representable data (Paulis,
//! dyadic Schmidt weights) and assert at correspondingly looser thresholds.

use gamealg::games::Game;
use gamealg::harness::instance_library;
use gamealg::lifting::lift_bcs;
use gamealg::matcore::{eigh, nearest_unitary, svd, Matrix};
use gamealg::rounding::round_representation;
use gamealg::scalar::c;
use gamealg::starpoly::{bcs_algebra, defect, NormKind};
use gamealg::strategy2rep::extract_bcs;
use gamealg::{Matrix32, Matrix64};

#[test]
fn decompositions_work_in_single_precision() {
    let m: Matrix32 = Matrix::from_rows(vec![
        vec![c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.5)],
        vec![c(1.0, -1.0), c(-1.0, 0.0), c(0.25, 0.0)],
        vec![c(0.0, -0.5), c(0.25, 0.0), c(0.5, 0.0)],
    ])
    .unwrap();
    let sd = eigh(&m);
    assert!((&sd.reconstruct() - &m).frobenius_norm() < 1e-5);
    let s = svd(&m);
    assert!((&s.reconstruct() - &m).frobenius_norm() < 1e-5);
    let w = nearest_unitary(&Matrix32::diag_real(&[0.5, 1.0])).unwrap();
    assert!((&w - &Matrix32::identity(2)).frobenius_norm() < 1e-6);
}

#[test]
fn magic_square_pipeline_in_single_precision() {
    let inst = instance_library::<f32>("magic-square").unwrap();
    let b = match &inst.game {
        Game::Bcs(b) => b.clone(),
        _ => unreachable!(),
    };
    let pres = bcs_algebra::<f32>(&b).unwrap();
    let report = defect(&pres, &inst.assignment, NormKind::LittleFrobenius, None).unwrap();
    assert!(report.max_defect <= 1e-6);
    let ext = extract_bcs(&b, &inst.strategy).unwrap();
    assert!(ext.report.max_defect <= 1e-5);
    let rounded = round_representation(&ext.assignment, &ext.lambda, &pres, 1e-4).unwrap();
    assert_eq!(rounded.rank, 4);
    let lift = lift_bcs(&rounded.rounded, &b).unwrap();
    assert!(lift.score.value.unwrap() >= 1.0 - 1e-4);
}

#[test]
fn double_precision_alias_matches_generic_path() {
    let id: Matrix64 = Matrix::identity(3);
    assert_eq!(id.little_frobenius_norm(), 1.0);
}
