//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cobarlab_core::dgc::{random_primitive, random_tensor_coalgebra};
use cobarlab_core::hirsch::random_family;
use cobarlab_core::homology_ring::{check_gerstenhaber, check_restricted, check_well_defined};
use cobarlab_core::{
    check_delta_cm, check_hga_identities, check_hirsch, cobar, double_cobar, double_suspension, hilbert_series,
    parse_coalgebra, parse_family, transfer_ainfty, verify_bv, verify_formality, verify_freeness, DgCoalgebra, Field,
    FreeModel, GradedSpace, Hga, HomologyAlgebra, IdentityRow, TwistingFamily, Word, F2, Q,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn space(gens: &[(&str, i32)]) -> GradedSpace {
    GradedSpace::from_generators(gens.iter().copied()).unwrap()
}

fn spaces() -> Vec<(&'static str, GradedSpace)> {
    vec![("<x>_1", space(&[("x", 1)])), ("<x>_2", space(&[("x", 2)])), ("<x_1,y_2>", space(&[("x", 1), ("y", 2)]))]
}

fn rows_ok(what: &str, rows: &[IdentityRow]) -> Result<(), String> {
    match rows.iter().find(|r| !r.pass()) {
        Some(r) => Err(format!("{what}: {} fails at {}", r.name, r.counterexample.as_deref().unwrap_or("?"))),
        None => Ok(()),
    }
}

fn shipped<K: Field>() -> Vec<(String, DgCoalgebra<K>)> {
    let mut out = Vec::new();
    for f in ["sphere1.coalg", "sphere2.coalg", "two_gen.coalg", "acyclic.coalg", "formality.coalg", "massey.coalg"] {
        out.push((f.to_string(), parse_coalgebra::<K>(&data(f)).unwrap()));
    }
    for f in ["hirsch_reduced.family", "hirsch_e21.family", "hirsch_toy.family"] {
        out.push((f.to_string(), parse_family::<K>(&data(f)).unwrap().0));
    }
    out
}

fn c1() -> Outcome {
    let n = 10;
    let mut words = 0;
    for (name, c) in shipped::<Q>() {
        let o = cobar(c.clone(), n).map_err(|e| e.to_string())?;
        if let Some(w) = o.check_d_squared(n) {
            return Err(format!("{name}: d^2 != 0 on {}", o.word_name(&w)));
        }
        words += o.words_through(n).count();
        if let Ok(a) = double_cobar(c, n) {
            if let Some(w) = a.check_d_squared(n) {
                return Err(format!("{name}: d^2 != 0 on {}", a.word_name(&w)));
            }
            words += a.words_through(n).count();
        }
    }
    Ok(format!("{words} basis words"))
}

fn c2() -> Outcome {
    let mut count = 0;
    for (name, c) in shipped::<Q>() {
        if !c.is_primitive() {
            continue;
        }
        let o = cobar(c, 10).map_err(|e| e.to_string())?;
        let r = o.hopf_report(10).map_err(|e| e.to_string())?;
        if let Some((axiom, w)) = r.rows().into_iter().find(|(_, w)| w.is_some()) {
            return Err(format!("{name}: {axiom} fails on {}", w.as_deref().unwrap_or("?")));
        }
        count += 1;
    }
    Ok(format!("{count} primitive coalgebras, N = 10"))
}

fn c3() -> Outcome {
    let c = double_suspension::<F2>(&space(&[("x", 1)])).unwrap();
    let a = double_cobar(c, 7).map_err(|e| e.to_string())?;
    let hga = Hga::new(&a);
    let rows = check_hga_identities(&hga, 7).map_err(|e| e.to_string())?;
    rows_ok("unperturbed", &rows)?;
    let g = a.inner().words(2)[0].0[0];
    let b = |m: usize| Word::letter(Word(vec![g; m]));
    let bad = hga.perturbed(b(1), b(1), b(1).concat(&b(1)).concat(&b(1)));
    let mutated = check_hga_identities(&bad, 7).map_err(|e| e.to_string())?;
    if mutated.iter().all(IdentityRow::pass) {
        return Err("mutation not caught".into());
    }
    Ok(format!("{} tuples, mutation caught", rows.iter().map(|r| r.checked).sum::<usize>()))
}

fn freeness<K: Field>(n: i32) -> Result<Vec<(&'static str, Vec<usize>)>, String> {
    let mut out = Vec::new();
    for (name, w) in spaces() {
        let r = verify_freeness::<K>(&w, n).map_err(|e| e.to_string())?;
        if let Some(row) = r.rows.iter().find(|r| !r.pass()) {
            return Err(format!(
                "{name} degree {}: H {} model {} generated {}",
                row.degree, row.homology, row.model, row.generated
            ));
        }
        rows_ok(name, &r.checks)?;
        out.push((name, r.rows.iter().map(|r| r.homology).collect()));
    }
    Ok(out)
}

fn c4() -> Outcome {
    freeness::<F2>(8)?;
    let r = verify_freeness::<F2>(&space(&[("x", 1)]), 3).map_err(|e| e.to_string())?;
    let basis: Vec<Vec<String>> = r.rows.iter().map(|r| r.model_basis.clone()).collect();
    let expected = vec![vec!["1"], vec!["x"], vec!["x^2"], vec!["x^3", "xi(x)"]];
    if basis != expected {
        return Err(format!("degree <= 3 basis is {basis:?}"));
    }
    Ok("3 spaces, n <= 8".into())
}

fn c5() -> Outcome {
    let dims = freeness::<Q>(8)?;
    let x2 = &dims.iter().find(|(n, _)| *n == "<x>_2").unwrap().1;
    if x2 != &[1, 0, 1, 0, 1, 1, 1, 1, 1] {
        return Err(format!("<x>_2 dims {x2:?}"));
    }
    Ok("3 spaces, n <= 8".into())
}

fn c6() -> Outcome {
    let mut ws = spaces();
    ws.push(("<x_1,y_1>", space(&[("x", 1), ("y", 1)])));
    ws.push(("<x_3>", space(&[("x", 3)])));
    for (name, w) in &ws {
        hilbert_series::<F2>(w, 12).map_err(|e| format!("{name} over F2: {e}"))?;
        hilbert_series::<Q>(w, 12).map_err(|e| format!("{name} over Q: {e}"))?;
    }
    Ok(format!("{} spaces, both fields, n <= 12", ws.len()))
}

fn c7() -> Outcome {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_tensor_coalgebra::<Q, _>(&mut rng, 8);
        rows_ok(&format!("tensor seed {seed}"), &transfer_ainfty(&c, 8).check())?;
        let c = random_primitive::<Q, _>(&mut rng, 6);
        let t = transfer_ainfty(&c, 8);
        let rows = t.check();
        rows_ok(&format!("primitive seed {seed}"), &rows)?;
        if rows.len() != 3 {
            return Err(format!("primitive seed {seed}: vanishing row missing"));
        }
    }
    Ok("20 seeds, tensor and primitive inputs, N = 8".into())
}

fn c8() -> Outcome {
    let mut inputs = vec![("formality.coalg".to_string(), parse_coalgebra::<Q>(&data("formality.coalg")).unwrap())];
    inputs.push(("acyclic.coalg".into(), parse_coalgebra::<Q>(&data("acyclic.coalg")).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    while inputs.len() < 6 {
        let c = random_primitive::<Q, _>(&mut rng, 6);
        if c.gens_in_degree(2).is_empty() && !c.has_zero_differential() {
            inputs.push((format!("random #{}", inputs.len()), c));
        }
    }
    for (name, c) in &inputs {
        let r = verify_formality(c, 8).map_err(|e| format!("{name}: {e}"))?;
        if let Some((d, x, y)) = r.cobar_dims.iter().chain(&r.double_cobar_dims).find(|(_, x, y)| x != y) {
            return Err(format!("{name}: degree {d} has {x} vs {y}"));
        }
        rows_ok(name, &r.checks)?;
    }
    Ok(format!("{} primitive coalgebras with d != 0, n <= 8", inputs.len()))
}

fn c9() -> Outcome {
    for (name, w) in spaces() {
        let model = FreeModel::<Q>::new(&w, 8).map_err(|e| e.to_string())?;
        let rows = model.check_structure(8);
        if !rows.iter().any(|r| r.name.starts_with("Delta(xy)")) {
            return Err("deviation row missing".into());
        }
        rows_ok(&format!("{name} model"), &rows)?;
        let c = double_suspension::<Q>(&w).unwrap();
        let a = double_cobar(c.clone(), 7).map_err(|e| e.to_string())?;
        rows_ok(&format!("{name} chain level"), &check_delta_cm(&Hga::new(&a), 7))?;
        let r = verify_bv(&c, 6).map_err(|e| e.to_string())?;
        rows_ok(&format!("{name} homology"), &r.checks)?;
    }
    Ok("3 spaces: model <= 8, chain <= 7, classes <= 6".into())
}

fn c10() -> Outcome {
    let (c, fam) = parse_family::<F2>(&data("hirsch_reduced.family")).unwrap();
    let r = check_hirsch(&c, &fam, 8).map_err(|e| e.to_string())?;
    if !r.pass() {
        return Err("reduced family fails".into());
    }
    let (c, fam) = parse_family::<F2>(&data("hirsch_e21.family")).unwrap();
    let r = check_hirsch(&c, &fam, 8).map_err(|e| e.to_string())?;
    if r.left_coideal.pass() || !r.leftsided_iff.pass() {
        return Err("injected E21 not detected".into());
    }
    let c = parse_coalgebra::<Q>("field Q\ngen x 3\ngen y 3\ngen z 5\ngen w 7\nprimitive").unwrap();
    let r = check_hirsch(&c, &TwistingFamily::reduced(&c), 6).map_err(|e| e.to_string())?;
    if !r.left_coideal.pass() {
        return Err("reduced family on the sweep coalgebra is not left-sided".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut high = 0;
    for trial in 0..50 {
        let fam = random_family(&c, 6, trial % 2 == 0, 0.4, &mut rng).map_err(|e| e.to_string())?;
        let r = check_hirsch(&c, &fam, 6).map_err(|e| e.to_string())?;
        if !r.leftsided_iff.pass() {
            return Err(format!("family {trial}: left-sidedness disagrees with E^(i,j), i >= 2"));
        }
        high += r.left_high as usize;
    }
    if high == 0 || high == 50 {
        return Err("sweep did not exercise both directions".into());
    }
    Ok(format!("50 families, {high} with E^(i,j) != 0 for some i >= 2"))
}

fn c11() -> Outcome {
    let mut tuples = 0;
    for (i, (name, w)) in spaces().into_iter().enumerate() {
        let c = double_suspension::<F2>(&w).unwrap();
        let a = double_cobar(c, 8).map_err(|e| e.to_string())?;
        let h = HomologyAlgebra::new(&a, 6).map_err(|e| e.to_string())?;
        let mut rows = check_gerstenhaber(&h, 6);
        rows.extend(check_restricted(&h, 6).map_err(|e| e.to_string())?);
        rows.push(check_well_defined(&h, 6, 100, i as u64).map_err(|e| e.to_string())?);
        rows_ok(name, &rows)?;
        tuples += rows.iter().map(|r| r.checked).sum::<usize>();
    }
    Ok(format!("{tuples} class tuples, 100 boundaries per space"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("differential squares to zero", c1),
        ("Hopf axioms and involutive antipode", c2),
        ("characteristic 2 identity suite", c3),
        ("freeness over F2", c4),
        ("freeness over Q", c5),
        ("free-model oracle equivalence", c6),
        ("transfer", c7),
        ("formality pipeline", c8),
        ("BV suite", c9),
        ("Hirsch coalgebras", c10),
        ("restriction axioms", c11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
