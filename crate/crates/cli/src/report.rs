//! Deterministic tables, rendered as TSV or JSON.

use std::fmt::Write as _;

use serde::Serialize;

use cobarlab_core::IdentityRow;

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let row: Vec<String> = row.into_iter().map(|s| s.to_string()).collect();
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// One row per identity: name, PASS/FAIL, tuples checked, first counterexample.
    pub fn checks<'a>(name: &str, rows: impl IntoIterator<Item = &'a IdentityRow>) -> Self {
        let mut t = Table::new(name, &["check", "result", "checked", "counterexample"]);
        for r in rows {
            t.push([
                r.name.clone(),
                verdict(r.pass()).into(),
                r.checked.to_string(),
                r.counterexample.clone().unwrap_or_else(|| "-".into()),
            ]);
        }
        t
    }
}

pub fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub input: String,
    pub field: String,
    pub maxdeg: i32,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Config,
    pub tables: Vec<Table>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub command: String,
    pub config: Config,
    pub error: Failure,
    pub pass: bool,
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

fn header(out: &mut String, command: &str, c: &Config) {
    let _ = writeln!(out, "# command\t{command}");
    let _ = writeln!(out, "# input\t{}", c.input);
    let _ = writeln!(out, "# field\t{}", c.field);
    let _ = writeln!(out, "# maxdeg\t{}", c.maxdeg);
    let _ = writeln!(out, "# seed\t{}", c.seed);
}

impl Report {
    pub fn tsv(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.command, &self.config);
        for t in &self.tables {
            let _ = writeln!(out, "\n## {}", t.name);
            let _ = writeln!(out, "{}", t.columns.join("\t"));
            for r in &t.rows {
                let _ = writeln!(out, "{}", r.iter().map(|x| clean(x)).collect::<Vec<_>>().join("\t"));
            }
        }
        let _ = writeln!(out, "\n# pass\t{}", self.pass);
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

impl FailureRecord {
    pub fn tsv(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.command, &self.config);
        let _ = writeln!(out, "# error\t{}\t{}", self.error.kind, clean(&self.error.message));
        let _ = writeln!(out, "# pass\tfalse");
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> Report {
        let mut t = Table::new("dims", &["degree", "dim"]);
        t.push([0, 1]);
        t.push([1, 0]);
        Report {
            command: "cobar".into(),
            config: Config { input: "a.coalg".into(), field: "Q".into(), maxdeg: 4, seed: 9 },
            tables: vec![t],
            pass: true,
        }
    }

    #[test]
    fn tsv_layout() {
        let s = report().tsv();
        assert!(s.starts_with("# command\tcobar\n# input\ta.coalg\n# field\tQ\n# maxdeg\t4\n# seed\t9\n"));
        assert!(s.contains("\n## dims\ndegree\tdim\n0\t1\n1\t0\n"));
        assert!(s.ends_with("# pass\ttrue\n"));
    }

    #[test]
    fn json_keys() {
        let v: serde_json::Value = serde_json::from_str(&report().json()).unwrap();
        assert_eq!(v["tables"][0]["rows"][1][0], "1");
        assert_eq!(v["config"]["maxdeg"], 4);
    }

    #[test]
    fn cells_never_break_rows() {
        let mut r = report();
        r.tables[0].push(["a\tb", "c\nd"]);
        assert!(r.tsv().contains("\na b\tc d\n"));
    }
}
