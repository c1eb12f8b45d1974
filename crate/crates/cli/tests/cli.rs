use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect()
}

fn cobarlab(args: &[&str], file: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobarlab"))
        .arg(args[0])
        .arg(data(file))
        .args(&args[1..])
        .env("COBARLAB_THREADS", "2")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_freeness_on_the_sphere() {
    let o = cobarlab(&["verify-freeness", "--field", "F2", "--maxdeg", "8"], "sphere1.coalg");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> =
        out.lines().skip_while(|l| *l != "## freeness").skip(2).take_while(|l| !l.is_empty()).collect();
    assert_eq!(rows.len(), 9);
    for r in rows {
        let cols: Vec<&str> = r.split('\t').collect();
        assert_eq!(cols[1], cols[2], "{r}");
        assert_eq!(cols[4], "PASS");
    }
}

#[test]
fn check_identities_prints_four_rows() {
    let o = cobarlab(&["check-identities", "--maxdeg", "7"], "sphere1.coalg");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.contains("\tPASS\t")).count(), 4);
}

#[test]
fn broken_differential_exits_two() {
    let o = cobarlab(&["homology", "--format", "json"], "bad.coalg");
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "broken-differential");
    assert!(v["error"]["message"].as_str().unwrap().contains('w'));
    assert_eq!(v["pass"], false);
}

#[test]
fn failing_check_exits_one() {
    let o = cobarlab(&["hirsch-check"], "hirsch_e21.family");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("left co-ideal\tFAIL"));
}

#[test]
fn json_schema_and_seed() {
    let o = cobarlab(&["homology", "--format", "json", "--seed", "17", "--maxdeg", "6"], "two_gen.coalg");
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "homology");
    assert_eq!(v["config"]["seed"], 17);
    assert_eq!(v["config"]["field"], "F2");
    for t in v["tables"].as_array().unwrap() {
        let width = t["columns"].as_array().unwrap().len();
        assert!(t["rows"].as_array().unwrap().iter().all(|r| r.as_array().unwrap().len() == width));
    }
    assert_eq!(v["pass"], true);
}

#[test]
fn output_is_deterministic() {
    let run = || stdout(&cobarlab(&["homology", "--seed", "3", "--maxdeg", "6"], "sphere1.coalg"));
    assert_eq!(run(), run());
}

#[test]
fn every_command_runs() {
    let cases: [(&[&str], &str); 11] = [
        (&["validate"], "massey.coalg"),
        (&["cobar", "--maxdeg", "6"], "massey.coalg"),
        (&["double-cobar"], "sphere2.coalg"),
        (&["homology", "--maxdeg", "6"], "formality.coalg"),
        (&["free-dims", "--maxdeg", "12"], "two_gen.coalg"),
        (&["verify-freeness", "--field", "Q"], "two_gen.coalg"),
        (&["verify-bv", "--maxdeg", "6"], "sphere2.coalg"),
        (&["check-identities", "--field", "Q", "--maxdeg", "6"], "sphere2.coalg"),
        (&["htt"], "massey.coalg"),
        (&["formality"], "formality.coalg"),
        (&["hirsch-check"], "hirsch_toy.family"),
    ];
    for (args, file) in cases {
        let o = cobarlab(args, file);
        assert_eq!(o.status.code(), Some(0), "{args:?} {file}\n{}", stdout(&o));
        assert!(stdout(&o).contains("# pass\ttrue"));
    }
}

#[test]
fn input_errors() {
    let o = cobarlab(&["verify-bv", "--field", "F2"], "sphere2.coalg");
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("wrong-field"));
    let o = cobarlab(&["free-dims"], "massey.coalg");
    assert_eq!(o.status.code(), Some(2));
    let o = cobarlab(&["cobar", "--maxdeg", "1"], "sphere1.coalg");
    assert_eq!(o.status.code(), Some(2));
    let o = cobarlab(&["validate"], "missing.coalg");
    assert_eq!(o.status.code(), Some(2));
}
