use cobarlab_core::graded::shift;
use cobarlab_core::homology_ring::{check_gerstenhaber, check_restricted, check_well_defined};
use cobarlab_core::{
    check_delta_cm, check_hga_identities, check_hirsch, cobar, double_cobar, hilbert_series, homology_coalgebra,
    parse_coalgebra, parse_family, transfer_ainfty, verify_bv, verify_formality, verify_freeness, DgCoalgebra, Error,
    Field, GenId, GradedSpace, Hga, HomologyAlgebra, IdentityRow, Lin, Result, Word,
};

use crate::report::{verdict, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Cobar,
    DoubleCobar,
    Homology,
    FreeDims,
    VerifyFreeness,
    VerifyBv,
    CheckIdentities,
    Htt,
    Formality,
    HirschCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cobar => "cobar",
            Command::DoubleCobar => "double-cobar",
            Command::Homology => "homology",
            Command::FreeDims => "free-dims",
            Command::VerifyFreeness => "verify-freeness",
            Command::VerifyBv => "verify-bv",
            Command::CheckIdentities => "check-identities",
            Command::Htt => "htt",
            Command::Formality => "formality",
            Command::HirschCheck => "hirsch-check",
        }
    }
}

/// Tables plus the overall verdict.
pub struct Outcome {
    pub tables: Vec<Table>,
    pub pass: bool,
}

fn all_pass(rows: &[IdentityRow]) -> bool {
    rows.iter().all(IdentityRow::pass)
}

fn opt(x: &Option<String>) -> String {
    x.clone().unwrap_or_else(|| "-".into())
}

fn lin_name<B: Ord + Clone, K: Field>(v: &Lin<B, K>, name: impl Fn(&B) -> String) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.iter().map(|(b, c)| if c.is_one() { name(b) } else { format!("{c}*{}", name(b)) }).collect::<Vec<_>>().join(" + ").replace("+ -", "- ")
}

fn word_name<K: Field>(c: &DgCoalgebra<K>, w: &Word<GenId>) -> String {
    if w.is_unit() {
        return "1".into();
    }
    let letters: Vec<&str> = w.letters().iter().map(|g| c.gen_name(*g)).collect();
    format!("[{}]", letters.join("|"))
}

/// `W = s⁻²C⁺` for a primitive coalgebra with zero differential.
fn desuspended<K: Field>(c: &DgCoalgebra<K>) -> Result<GradedSpace> {
    if !c.is_primitive() {
        return Err(Error::NotReduced("free models need a primitive coalgebra".into()));
    }
    if !c.has_zero_differential() {
        return Err(Error::Unsupported("free models need a coalgebra with zero differential".into()));
    }
    Ok(shift(&c.space(), -2))
}

pub fn run<K: Field>(cmd: Command, text: &str, n: i32, seed: u64) -> Result<Outcome> {
    if n < 2 {
        return Err(Error::CutoffTooSmall(n));
    }
    if cmd == Command::HirschCheck {
        return hirsch_check::<K>(text, n);
    }
    let c = parse_coalgebra::<K>(text)?;
    match cmd {
        Command::Validate => Ok(validate(&c)),
        Command::Cobar => cobar_cmd(c, n),
        Command::DoubleCobar => double_cobar_cmd(c, n),
        Command::Homology => homology_cmd(c, n, seed),
        Command::FreeDims => free_dims::<K>(&c, n),
        Command::VerifyFreeness => freeness::<K>(&c, n),
        Command::VerifyBv => bv(&c, n),
        Command::CheckIdentities => identities(c, n),
        Command::Htt => htt(&c, n),
        Command::Formality => formality(&c, n),
        Command::HirschCheck => unreachable!(),
    }
}

fn validate<K: Field>(c: &DgCoalgebra<K>) -> Outcome {
    let mut gens = Table::new("generators", &["degree", "generator", "d", "reduced coproduct"]);
    for g in c.generators() {
        gens.push([
            c.gen_degree(g).to_string(),
            c.gen_name(g).to_string(),
            lin_name(c.d_of(g), |h| c.gen_name(*h).to_string()),
            lin_name(c.cop_of(g), |(a, b)| format!("{}|{}", c.gen_name(*a), c.gen_name(*b))),
        ]);
    }
    let h = homology_coalgebra(c);
    let mut dims = Table::new("homology", &["degree", "dim C", "dim H"]);
    if let Some(top) = c.top_degree() {
        for d in 2..=top {
            dims.push([d.to_string(), c.gens_in_degree(d).len().to_string(), h.gens_in_degree(d).len().to_string()]);
        }
    }
    let mut checks = Table::new("checks", &["check", "result"]);
    checks.push(["d^2 = 0, coderivation, coassociativity", "PASS"]);
    checks.push(["primitive", if c.is_primitive() { "yes" } else { "no" }]);
    Outcome { tables: vec![gens, dims, checks], pass: true }
}

fn d_squared_row(name: &str, checked: usize, bad: Option<String>) -> IdentityRow {
    IdentityRow { name: name.into(), checked, counterexample: bad }
}

fn cobar_cmd<K: Field>(c: DgCoalgebra<K>, n: i32) -> Result<Outcome> {
    let o = cobar(c, n + 1)?;
    let hd = o.homology_dims(n)?;
    let mut dims = Table::new("cobar", &["degree", "words", "dim H"]);
    for d in 0..=n {
        dims.push([d.to_string(), o.dim(d).to_string(), hd[d as usize].to_string()]);
    }
    let words = o.words_through(n).count();
    let mut rows = vec![d_squared_row("d^2 = 0", words, o.check_d_squared(n).map(|w| o.word_name(&w)))];
    if o.has_nabla0() {
        let hopf = o.hopf_report(n)?;
        rows.extend(hopf.rows().into_iter().map(|(name, bad)| d_squared_row(name, words, bad.clone())));
    }
    let pass = all_pass(&rows);
    Ok(Outcome { tables: vec![dims, Table::checks("checks", &rows)], pass })
}

fn double_cobar_cmd<K: Field>(c: DgCoalgebra<K>, n: i32) -> Result<Outcome> {
    let a = double_cobar(c, n + 1)?;
    let hd = a.homology_dims(n)?;
    let mut dims = Table::new("double cobar", &["degree", "words", "dim H"]);
    for d in 0..=n {
        dims.push([d.to_string(), a.dim(d).to_string(), hd[d as usize].to_string()]);
    }
    let inner = a.inner();
    let rows = vec![
        d_squared_row(
            "d^2 = 0 on the cobar",
            inner.words_through(n).count(),
            inner.check_d_squared(n).map(|w| inner.word_name(&w)),
        ),
        d_squared_row(
            "d^2 = 0 on the double cobar",
            a.words_through(n).count(),
            a.check_d_squared(n).map(|w| a.word_name(&w)),
        ),
    ];
    let pass = all_pass(&rows);
    Ok(Outcome { tables: vec![dims, Table::checks("checks", &rows)], pass })
}

fn homology_cmd<K: Field>(c: DgCoalgebra<K>, n: i32, seed: u64) -> Result<Outcome> {
    let single = cobar(c.clone(), n + 1)?.homology_dims(n)?;
    let double = double_cobar(c.clone(), n + 1).ok();
    let mut dims = Table::new("homology", &["degree", "dim H(cobar)", "dim H(double cobar)"]);
    let hd = match &double {
        Some(a) => Some(a.homology_dims(n)?),
        None => None,
    };
    for d in 0..=n {
        let h2 = hd.as_ref().map_or("-".to_string(), |v| v[d as usize].to_string());
        dims.push([d.to_string(), single[d as usize].to_string(), h2]);
    }
    let mut tables = vec![dims];
    let mut pass = true;
    if let Some(a) = &double {
        let h = HomologyAlgebra::new(a, n)?;
        let top = n.min(6);
        let mut rows = check_gerstenhaber(&h, top);
        if K::CHARACTERISTIC == 2 {
            rows.extend(check_restricted(&h, top)?);
        }
        rows.push(check_well_defined(&h, top, 100, seed)?);
        let mut basis = Table::new("classes", &["degree", "class"]);
        for x in h.basis_through(n.min(5)) {
            basis.push([x.degree.to_string(), h.class_name(&x)]);
        }
        pass = all_pass(&rows);
        tables.push(basis);
        tables.push(Table::checks("induced structure", &rows));
    }
    Ok(Outcome { tables, pass })
}

fn free_dims<K: Field>(c: &DgCoalgebra<K>, n: i32) -> Result<Outcome> {
    let w = desuspended(c)?;
    let s = hilbert_series::<K>(&w, n)?;
    let mut t = Table::new("free model", &["degree", "enumerated", "pbw", "lie enumerated", "lie pbw", "equal"]);
    for d in 0..=n as usize {
        let ok = s.enumerated[d] == s.pbw[d] && s.lie_enumerated[d] == s.lie_pbw[d];
        t.push([
            d.to_string(),
            s.enumerated[d].to_string(),
            s.pbw[d].to_string(),
            s.lie_enumerated[d].to_string(),
            s.lie_pbw[d].to_string(),
            verdict(ok).to_string(),
        ]);
    }
    Ok(Outcome { tables: vec![t], pass: true })
}

fn freeness<K: Field>(c: &DgCoalgebra<K>, n: i32) -> Result<Outcome> {
    let w = desuspended(c)?;
    let r = verify_freeness::<K>(&w, n)?;
    let mut t = Table::new("freeness", &["degree", "dim H", "dim model", "generated", "equal", "model basis"]);
    for row in &r.rows {
        t.push([
            row.degree.to_string(),
            row.homology.to_string(),
            row.model.to_string(),
            row.generated.to_string(),
            verdict(row.pass()).to_string(),
            row.model_basis.join(", "),
        ]);
    }
    Ok(Outcome { tables: vec![t, Table::checks("operations", &r.checks)], pass: r.pass() })
}

fn bv<K: Field>(c: &DgCoalgebra<K>, n: i32) -> Result<Outcome> {
    let r = verify_bv(c, n)?;
    let mut t = Table::new("homology", &["degree", "dim H"]);
    for (d, x) in r.dims.iter().enumerate() {
        t.push([d.to_string(), x.to_string()]);
    }
    Ok(Outcome { tables: vec![t, Table::checks("bv", &r.checks)], pass: r.pass() })
}

fn identities<K: Field>(c: DgCoalgebra<K>, n: i32) -> Result<Outcome> {
    let a = double_cobar(c, n)?;
    let hga = Hga::new(&a);
    let rows = if K::CHARACTERISTIC == 2 { check_hga_identities(&hga, n)? } else { check_delta_cm(&hga, n) };
    let pass = all_pass(&rows);
    Ok(Outcome { tables: vec![Table::checks("identities", &rows)], pass })
}

fn htt<K: Field>(c: &DgCoalgebra<K>, n: i32) -> Result<Outcome> {
    let t = transfer_ainfty(c, n);
    let h = &t.homology;
    let mut gens = Table::new("homology generators", &["degree", "generator"]);
    for g in h.generators() {
        gens.push([h.gen_degree(g).to_string(), h.gen_name(g).to_string()]);
    }
    let mut partials = Table::new("transferred partials", &["degree", "generator", "k", "value"]);
    for g in h.generators() {
        for (k, level) in t.partials.iter().enumerate().skip(1) {
            if let Some(v) = level.get(g.0).filter(|v| !v.is_zero()) {
                partials.push([
                    h.gen_degree(g).to_string(),
                    h.gen_name(g).to_string(),
                    k.to_string(),
                    lin_name(v, |w| word_name(h, w)),
                ]);
            }
        }
    }
    let rows = t.check();
    let pass = all_pass(&rows);
    Ok(Outcome { tables: vec![gens, partials, Table::checks("checks", &rows)], pass })
}

fn formality<K: Field>(c: &DgCoalgebra<K>, n: i32) -> Result<Outcome> {
    let r = verify_formality(c, n)?;
    let dims = |name: &str, v: &[(i32, usize, usize)]| {
        let mut t = Table::new(name, &["degree", "dim H(C)", "dim H(H)", "equal"]);
        for (d, a, b) in v {
            t.push([d.to_string(), a.to_string(), b.to_string(), verdict(a == b).to_string()]);
        }
        t
    };
    Ok(Outcome {
        tables: vec![
            dims("cobar", &r.cobar_dims),
            dims("double cobar", &r.double_cobar_dims),
            Table::checks("checks", &r.checks),
        ],
        pass: r.pass(),
    })
}

fn hirsch_check<K: Field>(text: &str, n: i32) -> Result<Outcome> {
    let (c, fam) = parse_family::<K>(text)?;
    let r = check_hirsch(&c, &fam, n)?;
    let mut support = Table::new("support", &["i", "j"]);
    for (i, j) in fam.support(&c, n) {
        support.push([i.to_string(), j.to_string()]);
    }
    let mut residuals = Table::new("residuals", &["residual", "checked", "signed", "unsigned"]);
    for res in [&r.homotopy, &r.coassoc_defect] {
        residuals.push([res.name.clone(), res.checked.to_string(), opt(&res.signed), opt(&res.unsigned)]);
    }
    let mut summary = Table::new("summary", &["key", "value"]);
    summary.push(["left high components".to_string(), r.left_high.to_string()]);
    summary.push(["first failing coideal length".to_string(), r.coideal_failure.map_or("-".into(), |x| x.to_string())]);
    let rows: Vec<IdentityRow> = r.rows().into_iter().cloned().collect();
    Ok(Outcome { tables: vec![support, Table::checks("checks", &rows), residuals, summary], pass: r.pass() })
}
