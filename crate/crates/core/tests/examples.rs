use std::path::PathBuf;

use cobarlab_core::{
    check_hirsch, double_cobar, parse_coalgebra, parse_family, transfer_ainfty, verify_freeness, Error, GradedSpace,
    F2, Q,
};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn bad_differential_names_the_generator() {
    match parse_coalgebra::<Q>(&data("bad.coalg")) {
        Err(Error::BrokenDifferential(msg)) => assert!(msg.contains('w'), "{msg}"),
        other => panic!("expected a broken differential, got {other:?}"),
    }
}

#[test]
fn massey_product_survives_transfer() {
    let c = parse_coalgebra::<Q>(&data("massey.coalg")).unwrap();
    let t = transfer_ainfty(&c, 8);
    let m = t.homology.id("m").unwrap();
    assert!(t.partials[1][m.0].is_zero());
    assert!(!t.partials[2][m.0].is_zero());
}

#[test]
fn sphere_double_loops_over_f2() {
    let c = parse_coalgebra::<F2>(&data("sphere1.coalg")).unwrap();
    let dims = double_cobar(c, 9).unwrap().homology_dims(8).unwrap();
    assert_eq!(dims, vec![1, 1, 1, 2, 2, 2, 3, 4, 4]);
}

#[test]
fn free_model_matches_two_generators() {
    let w = GradedSpace::from_generators([("x", 1), ("y", 2)]).unwrap();
    assert!(verify_freeness::<F2>(&w, 7).unwrap().pass());
    assert!(verify_freeness::<Q>(&w, 7).unwrap().pass());
}

#[test]
fn shipped_families() {
    let (c, fam) = parse_family::<Q>(&data("hirsch_toy.family")).unwrap();
    let r = check_hirsch(&c, &fam, 8).unwrap();
    assert!(r.pass());
    assert!(r.homotopy.signed.is_none());

    let (c, fam) = parse_family::<F2>(&data("hirsch_e21.family")).unwrap();
    let r = check_hirsch(&c, &fam, 8).unwrap();
    assert!(!r.pass() && r.left_high);
}
