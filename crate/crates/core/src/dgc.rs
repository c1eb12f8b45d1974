//! Differential graded coalgebras: type, text format, validation and standard constructors.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::cobar::Coalgebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{ChainComplex, GradedSpace};
use crate::lin::Lin;
use crate::linalg::{invert, SparseMatrix, SparseVec};

/// Index of a generator of `C⁺`. Generators are numbered in name order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GenId(pub usize);

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

/// Which exact field a document asks for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldTag {
    F2,
    Q,
}

impl std::str::FromStr for FieldTag {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "F2" | "f2" => Ok(FieldTag::F2),
            "Q" | "q" => Ok(FieldTag::Q),
            other => Err(format!("unknown field `{other}` (expected F2 or Q)")),
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldTag::F2 => "F2",
            FieldTag::Q => "Q",
        })
    }
}

/// A 1-connected dg-coalgebra `C = k ⊕ C⁺`, stored through its reduced coproduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgCoalgebra<K> {
    names: Vec<String>,
    degrees: Vec<i32>,
    by_degree: BTreeMap<i32, Vec<GenId>>,
    d: Vec<Lin<GenId, K>>,
    cop: Vec<Lin<(GenId, GenId), K>>,
    maxdeg: Option<i32>,
}

impl<K: Field> DgCoalgebra<K> {
    /// A coalgebra with zero differential and primitive coproduct on the given generators.
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, i32)>) -> Result<Self> {
        let mut gens: Vec<(String, i32)> = gens.into_iter().map(|(n, d)| (n.into(), d)).collect();
        gens.sort();
        for w in gens.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Parse { line: 0, msg: format!("duplicate generator `{}`", w[0].0) });
            }
        }
        for (n, d) in &gens {
            if *d < 2 {
                return Err(Error::NotOneConnected { name: n.clone(), degree: *d });
            }
        }
        let mut by_degree: BTreeMap<i32, Vec<GenId>> = BTreeMap::new();
        for (i, (_, d)) in gens.iter().enumerate() {
            by_degree.entry(*d).or_default().push(GenId(i));
        }
        let n = gens.len();
        Ok(DgCoalgebra {
            names: gens.iter().map(|g| g.0.clone()).collect(),
            degrees: gens.iter().map(|g| g.1).collect(),
            by_degree,
            d: vec![Lin::zero(); n],
            cop: vec![Lin::zero(); n],
            maxdeg: None,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn generators(&self) -> impl Iterator<Item = GenId> {
        (0..self.names.len()).map(GenId)
    }

    pub fn id(&self, name: &str) -> Result<GenId> {
        self.names.iter().position(|n| n == name).map(GenId).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn gen_name(&self, g: GenId) -> &str {
        &self.names[g.0]
    }

    pub fn gen_degree(&self, g: GenId) -> i32 {
        self.degrees[g.0]
    }

    pub fn maxdeg(&self) -> Option<i32> {
        self.maxdeg
    }

    pub fn set_maxdeg(&mut self, n: i32) {
        self.maxdeg = Some(n);
    }

    pub fn d_of(&self, g: GenId) -> &Lin<GenId, K> {
        &self.d[g.0]
    }

    pub fn cop_of(&self, g: GenId) -> &Lin<(GenId, GenId), K> {
        &self.cop[g.0]
    }

    pub fn set_differential(&mut self, g: GenId, v: Lin<GenId, K>) -> Result<()> {
        for (h, _) in v.iter() {
            if self.degrees[h.0] != self.degrees[g.0] - 1 {
                return Err(Error::DegreeMismatch(format!(
                    "d {} has a term {} of degree {}",
                    self.names[g.0], self.names[h.0], self.degrees[h.0]
                )));
            }
        }
        self.d[g.0] = v;
        Ok(())
    }

    pub fn set_coproduct(&mut self, g: GenId, v: Lin<(GenId, GenId), K>) -> Result<()> {
        for ((a, b), _) in v.iter() {
            if self.degrees[a.0] + self.degrees[b.0] != self.degrees[g.0] {
                return Err(Error::DegreeMismatch(format!(
                    "coproduct of {} has a term {}|{} of the wrong degree",
                    self.names[g.0], self.names[a.0], self.names[b.0]
                )));
            }
        }
        self.cop[g.0] = v;
        Ok(())
    }

    /// Every element of `C⁺` is primitive.
    pub fn is_primitive(&self) -> bool {
        self.cop.iter().all(Lin::is_zero)
    }

    pub fn has_zero_differential(&self) -> bool {
        self.d.iter().all(Lin::is_zero)
    }

    fn d_lin(&self, v: &Lin<GenId, K>) -> Lin<GenId, K> {
        v.map_linear(|g| self.d[g.0].clone())
    }

    /// `(d⊗1 + 1⊗d)` on `C⁺ ⊗ C⁺`.
    fn d_tensor(&self, t: &Lin<(GenId, GenId), K>) -> Lin<(GenId, GenId), K> {
        t.map_linear(|(a, b)| {
            let mut out = Lin::zero();
            for (x, c) in self.d[a.0].iter() {
                out.add_term((*x, *b), c.clone());
            }
            let s = K::sign(self.degrees[a.0] & 1 == 1);
            for (y, c) in self.d[b.0].iter() {
                out.add_term((*a, *y), c.mul(&s));
            }
            out
        })
    }

    /// Check `d² = 0`, the coderivation law and coassociativity on every generator.
    pub fn validate(&self) -> Result<()> {
        for g in self.generators() {
            if !self.d_lin(&self.d[g.0]).is_zero() {
                return Err(Error::BrokenDifferential(format!("d(d {}) != 0", self.names[g.0])));
            }
        }
        for g in self.generators() {
            let lhs: Lin<(GenId, GenId), K> = self.d[g.0].map_linear(|h| self.cop[h.0].clone());
            let rhs = self.d_tensor(&self.cop[g.0]);
            if lhs != rhs {
                return Err(Error::NotCoderivation(self.names[g.0].clone()));
            }
        }
        for g in self.generators() {
            let left: Lin<(GenId, GenId, GenId), K> = self.cop[g.0]
                .map_linear(|(a, b)| self.cop[a.0].iter().map(|((x, y), c)| ((*x, *y, *b), c.clone())).collect());
            let right: Lin<(GenId, GenId, GenId), K> = self.cop[g.0]
                .map_linear(|(a, b)| self.cop[b.0].iter().map(|((x, y), c)| ((*a, *x, *y), c.clone())).collect());
            if left != right {
                return Err(Error::NotCoassociative(self.names[g.0].clone()));
            }
        }
        Ok(())
    }

    /// Graded space of `C⁺` with generators in name order inside each degree.
    pub fn space(&self) -> GradedSpace {
        GradedSpace::from_generators(self.generators().map(|g| (self.names[g.0].clone(), self.degrees[g.0])))
            .expect("generator names are unique")
    }

    /// Position of a generator inside its degree in `space()`.
    pub fn position(&self, g: GenId) -> usize {
        self.by_degree[&self.degrees[g.0]].iter().position(|h| *h == g).expect("generator is listed")
    }

    pub fn gens_in_degree(&self, n: i32) -> &[GenId] {
        self.by_degree.get(&n).map_or(&[], Vec::as_slice)
    }

    /// Vector of an element of `C⁺_n` in the basis `gens_in_degree(n)`.
    pub fn to_vec(&self, v: &Lin<GenId, K>) -> SparseVec<K> {
        SparseVec::from_pairs(v.iter().map(|(g, c)| (self.position(*g), c.clone())).collect())
    }

    pub fn from_vec(&self, n: i32, v: &SparseVec<K>) -> Lin<GenId, K> {
        let gens = self.gens_in_degree(n);
        v.entries().iter().map(|(i, c)| (gens[*i], c.clone())).collect()
    }

    /// The underlying chain complex `(C⁺, d)`.
    pub fn complex(&self) -> ChainComplex<K> {
        let space = self.space();
        let blocks: Vec<(i32, SparseMatrix<K>)> = self
            .by_degree
            .keys()
            .map(|&n| {
                let cols: Vec<SparseVec<K>> =
                    self.gens_in_degree(n).iter().map(|g| self.to_vec(&self.d[g.0])).collect();
                (n, SparseMatrix::from_columns(space.dim(n - 1), &cols))
            })
            .collect();
        ChainComplex::from_blocks(space, blocks).expect("blocks have matching shapes")
    }

    /// Lowest degree with a generator.
    pub fn connectivity(&self) -> Option<i32> {
        self.by_degree.keys().next().copied()
    }

    pub fn top_degree(&self) -> Option<i32> {
        self.by_degree.keys().last().copied()
    }

    /// Re-express the structure in a new basis `e'_j = Σ_k a_{jk} e_k` in each degree.
    pub fn change_basis(&self, change: &BTreeMap<i32, SparseMatrix<K>>) -> Result<Self> {
        let mut out = self.clone();
        // new generator e'_j as an element of the old basis, and old e_k in the new basis
        let mut new_in_old: Vec<Lin<GenId, K>> = vec![Lin::zero(); self.len()];
        let mut old_in_new: Vec<Lin<GenId, K>> = vec![Lin::zero(); self.len()];
        for (&n, gens) in &self.by_degree {
            let k = gens.len();
            let a = change.get(&n).cloned().unwrap_or_else(|| SparseMatrix::identity(k));
            let inv =
                invert(&a).ok_or_else(|| Error::DimensionMismatch(format!("singular basis change in degree {n}")))?;
            for (j, gj) in gens.iter().enumerate() {
                for (kk, gk) in gens.iter().enumerate() {
                    let x = a.get(j, kk);
                    if !x.is_zero() {
                        new_in_old[gj.0].add_term(*gk, x);
                    }
                    // e_j = Σ_k inv_{jk} e'_k
                    let y = inv.get(j, kk);
                    if !y.is_zero() {
                        old_in_new[gj.0].add_term(*gk, y);
                    }
                }
            }
        }
        for g in self.generators() {
            let dg = self.d_lin(&new_in_old[g.0]).map_linear(|h| old_in_new[h.0].clone());
            let cg = new_in_old[g.0]
                .map_linear(|h| self.cop[h.0].clone())
                .map_linear(|(a, b)| old_in_new[a.0].map_bilinear(&old_in_new[b.0], |x, y| Lin::basis((*x, *y))));
            out.d[g.0] = dg;
            out.cop[g.0] = cg;
        }
        Ok(out)
    }

    /// Render in the text format accepted by `parse_coalgebra`.
    pub fn to_text(&self) -> String {
        let mut s = format!("field {}\n", K::NAME);
        if let Some(n) = self.maxdeg {
            s.push_str(&format!("maxdeg {n}\n"));
        }
        for g in self.generators() {
            s.push_str(&format!("gen {} {}\n", self.names[g.0], self.degrees[g.0]));
        }
        for g in self.generators() {
            if !self.d[g.0].is_zero() {
                let terms: Vec<String> = self.d[g.0].iter().map(|(h, c)| format!("{c}*{}", self.names[h.0])).collect();
                s.push_str(&format!("d {} = {}\n", self.names[g.0], terms.join(" + ")));
            }
        }
        if self.is_primitive() {
            s.push_str("primitive\n");
        } else {
            for g in self.generators() {
                if !self.cop[g.0].is_zero() {
                    let terms: Vec<String> = self.cop[g.0]
                        .iter()
                        .map(|((a, b), c)| format!("{c}*{}|{}", self.names[a.0], self.names[b.0]))
                        .collect();
                    s.push_str(&format!("cop {} = {}\n", self.names[g.0], terms.join(" + ")));
                }
            }
        }
        s
    }
}

impl<K: Field> Coalgebra for DgCoalgebra<K> {
    type Scalar = K;
    type Gen = GenId;

    fn degree(&self, g: &GenId) -> i32 {
        self.degrees[g.0]
    }

    fn basis(&self, n: i32) -> &[GenId] {
        self.gens_in_degree(n)
    }

    fn complete_through(&self) -> i32 {
        i32::MAX
    }

    fn differential(&self, g: &GenId) -> Lin<GenId, K> {
        self.d[g.0].clone()
    }

    fn reduced_coproduct(&self, g: &GenId) -> Lin<(GenId, GenId), K> {
        self.cop[g.0].clone()
    }

    fn name(&self, g: &GenId) -> String {
        self.names[g.0].clone()
    }
}

/// `k ⊕ s²W` with zero differential and primitive coproduct.
pub fn double_suspension<K: Field>(w: &GradedSpace) -> Result<DgCoalgebra<K>> {
    let gens = w.generators();
    if let Some((_, d)) = gens.iter().find(|(_, d)| *d < 1) {
        return Err(Error::DegreeZeroClass(*d));
    }
    DgCoalgebra::new(gens.into_iter().map(|(n, d)| (n, d + 2)))
}

/// `H_*(C)` with zero differential and coproduct `(p⊗p)∇i` for a chosen contraction.
pub fn homology_coalgebra<K: Field>(c: &DgCoalgebra<K>) -> DgCoalgebra<K> {
    crate::transfer::homology_coalgebra_with_maps(c).0
}

// ---------------------------------------------------------------------------------------------
// text format

/// One statement of a coalgebra or family document, with its line number.
#[derive(Clone, Debug)]
pub(crate) struct Statement {
    pub line: usize,
    pub text: String,
}

/// Split a document into statements: newlines and `;` outside `<...>` separate, `#` comments.
pub(crate) fn statements(text: &str) -> Vec<Statement> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut depth = 0i32;
        let mut cur = String::new();
        for ch in line.chars() {
            match ch {
                '<' => depth += 1,
                '>' => depth -= 1,
                _ => {}
            }
            if ch == ';' && depth == 0 {
                if !cur.trim().is_empty() {
                    out.push(Statement { line: i + 1, text: cur.trim().to_string() });
                }
                cur.clear();
            } else {
                cur.push(ch);
            }
        }
        if !cur.trim().is_empty() {
            out.push(Statement { line: i + 1, text: cur.trim().to_string() });
        }
    }
    out
}

/// The field requested by a document's `field` statement, if any.
pub fn detect_field(text: &str) -> Result<Option<FieldTag>> {
    for st in statements(text) {
        let mut it = st.text.split_whitespace();
        if it.next() == Some("field") {
            let f = it.next().unwrap_or("");
            return f.parse().map(Some).map_err(|msg| Error::Parse { line: st.line, msg });
        }
    }
    Ok(None)
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.')
}

/// Split `a + 2*b - c` into signed terms `(coef, atom)`.
pub(crate) fn split_terms<K: Field>(rhs: &str, line: usize) -> Result<Vec<(K, String)>> {
    let perr = |msg: String| Error::Parse { line, msg };
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut negative = false;
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for ch in rhs.chars() {
        match ch {
            '<' => depth += 1,
            '>' => depth -= 1,
            _ => {}
        }
        if (ch == '+' || ch == '-') && depth == 0 && !cur.trim_end().ends_with('*') {
            if !cur.trim().is_empty() {
                pieces.push((negative, cur.trim().to_string()));
                negative = false;
            }
            if ch == '-' {
                negative = !negative;
            }
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() {
        pieces.push((negative, cur.trim().to_string()));
    }
    if pieces.is_empty() {
        return Err(perr("empty right-hand side".into()));
    }
    for (neg, p) in pieces {
        let (coef, atom) = match p.split_once('*') {
            Some((c, a)) => {
                let c = K::parse_literal(c.trim()).ok_or_else(|| perr(format!("bad coefficient `{}`", c.trim())))?;
                (c, a.trim().to_string())
            }
            None => (K::one(), p),
        };
        let coef = if neg { coef.neg() } else { coef };
        out.push((coef, atom));
    }
    Ok(out)
}

/// Parse the coalgebra statements of a document; other statements are handed to `extra`.
pub(crate) fn parse_with<K: Field>(
    text: &str,
    mut extra: impl FnMut(&Statement) -> Result<bool>,
) -> Result<DgCoalgebra<K>> {
    let sts = statements(text);
    let mut gens: Vec<(String, i32, usize)> = Vec::new();
    let mut maxdeg = None;
    for st in &sts {
        let perr = |msg: String| Error::Parse { line: st.line, msg };
        let words: Vec<&str> = st.text.split_whitespace().collect();
        match words[0] {
            "field" => {
                let f = words.get(1).copied().unwrap_or("");
                f.parse::<FieldTag>().map_err(perr)?;
            }
            "maxdeg" => {
                let n: i32 =
                    words.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| perr("maxdeg needs an integer".into()))?;
                if n < 2 {
                    return Err(Error::CutoffTooSmall(n));
                }
                maxdeg = Some(n);
            }
            "gen" => {
                if words.len() != 3 {
                    return Err(perr("expected `gen <name> <degree>`".into()));
                }
                if !is_ident(words[1]) {
                    return Err(perr(format!("bad generator name `{}`", words[1])));
                }
                let d: i32 = words[2].parse().map_err(|_| perr(format!("bad degree `{}`", words[2])))?;
                if gens.iter().any(|g| g.0 == words[1]) {
                    return Err(perr(format!("duplicate generator `{}`", words[1])));
                }
                if d < 2 {
                    return Err(Error::Parse {
                        line: st.line,
                        msg: Error::NotOneConnected { name: words[1].into(), degree: d }.to_string(),
                    });
                }
                gens.push((words[1].to_string(), d, st.line));
            }
            _ => {}
        }
    }
    let mut c = DgCoalgebra::<K>::new(gens.iter().map(|g| (g.0.clone(), g.1)))?;
    if let Some(n) = maxdeg {
        c.set_maxdeg(n);
    }
    let mut primitive_line = None;
    let mut cop_seen = false;
    for st in &sts {
        let perr = |msg: String| Error::Parse { line: st.line, msg };
        let head = st.text.split_whitespace().next().unwrap_or("");
        match head {
            "field" | "maxdeg" | "gen" => {}
            "primitive" => {
                if st.text.trim() != "primitive" {
                    return Err(perr("`primitive` takes no arguments".into()));
                }
                primitive_line = Some(st.line);
            }
            "d" | "cop" => {
                let rest = st.text[head.len()..].trim();
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| perr("missing `=`".into()))?;
                let g = c.id(lhs.trim()).map_err(|e| perr(e.to_string()))?;
                let terms = split_terms::<K>(rhs, st.line)?;
                if head == "d" {
                    let mut v = c.d[g.0].clone();
                    for (k, atom) in terms {
                        let h = c.id(&atom).map_err(|e| perr(e.to_string()))?;
                        v.add_term(h, k);
                    }
                    c.set_differential(g, v).map_err(|e| perr(e.to_string()))?;
                } else {
                    cop_seen = true;
                    let mut v = c.cop[g.0].clone();
                    for (k, atom) in terms {
                        let (a, b) = atom
                            .split_once('|')
                            .ok_or_else(|| perr(format!("coproduct term `{atom}` needs the form a|b")))?;
                        let a = c.id(a.trim()).map_err(|e| perr(e.to_string()))?;
                        let b = c.id(b.trim()).map_err(|e| perr(e.to_string()))?;
                        v.add_term((a, b), k);
                    }
                    c.set_coproduct(g, v).map_err(|e| perr(e.to_string()))?;
                }
            }
            _ => {
                if !extra(st)? {
                    return Err(perr(format!("unknown statement `{head}`")));
                }
            }
        }
    }
    if let (Some(line), true) = (primitive_line, cop_seen) {
        return Err(Error::Parse { line, msg: "`primitive` conflicts with `cop` statements".into() });
    }
    c.validate()?;
    Ok(c)
}

/// Parse and validate a coalgebra document.
pub fn parse_coalgebra<K: Field>(text: &str) -> Result<DgCoalgebra<K>> {
    parse_with(text, |_| Ok(false))
}

// ---------------------------------------------------------------------------------------------
// random inputs

pub(crate) fn random_scalar<K: Field, R: Rng>(rng: &mut R) -> K {
    K::from_i64(rng.gen_range(-3..=3))
}

fn random_nonzero<K: Field, R: Rng>(rng: &mut R) -> K {
    loop {
        let x = random_scalar::<K, R>(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random invertible `n × n` matrix (product of unitriangular factors).
pub fn random_invertible<K: Field, R: Rng>(n: usize, rng: &mut R) -> SparseMatrix<K> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for i in 0..n {
        lower.push((i, i, K::one()));
        upper.push((i, i, random_nonzero(rng)));
        for j in 0..i {
            lower.push((i, j, random_scalar(rng)));
            upper.push((j, i, random_scalar(rng)));
        }
    }
    SparseMatrix::from_entries(n, n, lower).mul(&SparseMatrix::from_entries(n, n, upper))
}

/// Random primitive coalgebra `k ⊕ V` with a random square-zero differential.
pub fn random_primitive<K: Field, R: Rng>(rng: &mut R, max_gen_degree: i32) -> DgCoalgebra<K> {
    let (gens, d) = random_complex_data(rng, max_gen_degree);
    let mut c = DgCoalgebra::<K>::new(gens.clone()).expect("valid generators");
    for (src, tgt) in d {
        let g = c.id(&src).unwrap();
        let h = c.id(&tgt).unwrap();
        let mut v = c.d[g.0].clone();
        v.add_term(h, K::one());
        c.set_differential(g, v).unwrap();
    }
    let change = random_change(&c, rng);
    c.change_basis(&change).expect("invertible change")
}

fn random_change<K: Field, R: Rng>(c: &DgCoalgebra<K>, rng: &mut R) -> BTreeMap<i32, SparseMatrix<K>> {
    c.by_degree.iter().map(|(&n, g)| (n, random_invertible(g.len(), rng))).collect()
}

/// Random invertible matrix made of `n` elementary row operations on a scaled identity.
fn random_sparse_invertible<K: Field, R: Rng>(n: usize, rng: &mut R) -> SparseMatrix<K> {
    let mut m = SparseMatrix::from_entries(n, n, (0..n).map(|i| (i, i, random_nonzero(rng))).collect());
    if n < 2 {
        return m;
    }
    for _ in 0..n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let e = SparseMatrix::from_entries(
                n,
                n,
                (0..n).map(|k| (k, k, K::one())).chain([(i, j, random_nonzero(rng))]).collect(),
            );
            m = e.mul(&m);
        }
    }
    m
}

/// Generators and acyclic pairs `src → tgt` of a random complex in degrees `2..=top`.
fn random_complex_data<R: Rng>(rng: &mut R, top: i32) -> (Vec<(String, i32)>, Vec<(String, String)>) {
    let mut gens = Vec::new();
    let mut d = Vec::new();
    let count = rng.gen_range(2..=4);
    for i in 0..count {
        let deg = rng.gen_range(2..=top);
        if deg < top && rng.gen_bool(0.4) {
            let (x, y) = (format!("x{i}"), format!("y{i}"));
            gens.push((x.clone(), deg + 1));
            gens.push((y.clone(), deg));
            d.push((x, y));
        } else {
            gens.push((format!("z{i}"), deg));
        }
    }
    (gens, d)
}

/// Truncated tensor coalgebra `T^c(V)` with deconcatenation, a random square-zero linear
/// differential on `V` extended as a coderivation, in a random basis. Words of total degree
/// above `cutoff` are dropped, which keeps the structure closed.
pub fn random_tensor_coalgebra<K: Field, R: Rng>(rng: &mut R, cutoff: i32) -> DgCoalgebra<K> {
    let v = random_primitive::<K, R>(rng, 4.min(cutoff));
    // words over V
    let vg: Vec<GenId> = v.generators().collect();
    let mut words: Vec<Vec<GenId>> = Vec::new();
    let mut frontier: Vec<Vec<GenId>> = vg.iter().map(|g| vec![*g]).collect();
    let wdeg = |w: &Vec<GenId>| w.iter().map(|g| v.gen_degree(*g)).sum::<i32>();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in frontier {
            if wdeg(&w) > cutoff {
                continue;
            }
            for g in &vg {
                let mut e = w.clone();
                e.push(*g);
                next.push(e);
            }
            words.push(w);
        }
        frontier = next;
    }
    let name = |w: &Vec<GenId>| w.iter().map(|g| v.gen_name(*g).to_string()).collect::<Vec<_>>().join(".");
    let mut t = DgCoalgebra::<K>::new(words.iter().map(|w| (name(w), wdeg(w)))).expect("distinct words");
    let id_of: BTreeMap<Vec<GenId>, GenId> = words.iter().map(|w| (w.clone(), t.id(&name(w)).unwrap())).collect();
    for w in &words {
        let g = id_of[w];
        let mut dv: Lin<GenId, K> = Lin::zero();
        let mut pre = 0;
        for (i, l) in w.iter().enumerate() {
            let s = K::sign(pre & 1 == 1);
            for (h, c) in v.d_of(*l).iter() {
                let mut e = w.clone();
                e[i] = *h;
                dv.add_term(id_of[&e], c.mul(&s));
            }
            pre += v.gen_degree(*l);
        }
        t.set_differential(g, dv).unwrap();
        let mut cop: Lin<(GenId, GenId), K> = Lin::zero();
        for k in 1..w.len() {
            cop.add_term((id_of[&w[..k].to_vec()], id_of[&w[k..].to_vec()]), K::one());
        }
        t.set_coproduct(g, cop).unwrap();
    }
    let change = t.by_degree.iter().map(|(&n, g)| (n, random_sparse_invertible(g.len(), rng))).collect();
    t.change_basis(&change).expect("invertible change")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F2, Q};
    use rand::SeedableRng;

    #[test]
    fn parse_examples() {
        let c = parse_coalgebra::<Q>("field Q; gen X 3; primitive").unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.is_primitive());
        let c = parse_coalgebra::<Q>("gen u 2; gen v 3; d v = u; primitive").unwrap();
        let v = c.id("v").unwrap();
        assert_eq!(c.d_of(v), &Lin::basis(c.id("u").unwrap()));
        let e = parse_coalgebra::<Q>("gen u 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
    }

    #[test]
    fn parse_errors_are_positioned() {
        let e = parse_coalgebra::<Q>("gen u 2\ngen v 3\nd v = w\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 3, msg: "unknown generator `w`".into() });
        let e = parse_coalgebra::<Q>("gen u 2\ngen v 3\nd v = 2*\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_coalgebra::<Q>("gen u 2\nfrob u\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn broken_differential_names_generator() {
        let e = parse_coalgebra::<Q>("gen a 2\ngen b 3\ngen c 4\nd c = b\nd b = a\n").unwrap_err();
        assert_eq!(e, Error::BrokenDifferential("d(d c) != 0".into()));
    }

    #[test]
    fn coderivation_is_checked() {
        // (d⊗1 + 1⊗d)(a⊗b) = a⊗a but c is a cycle
        let e = parse_coalgebra::<Q>("gen a 2\ngen b 3\ngen c 5\nd b = a\ncop c = a|b\n").unwrap_err();
        assert_eq!(e, Error::NotCoderivation("c".into()));
        parse_coalgebra::<Q>("gen u 2\ngen v 2\ngen w 4\ngen x 3\nd w = x\ncop w = u|v\n").unwrap();
    }

    #[test]
    fn signed_terms_and_round_trip() {
        let text = "field Q\ngen u 2\ngen v 2\ngen w 4\ncop w = 2*u|v - 1/2*v|u\n";
        let c = parse_coalgebra::<Q>(text).unwrap();
        let w = c.id("w").unwrap();
        let (u, v) = (c.id("u").unwrap(), c.id("v").unwrap());
        assert_eq!(c.cop_of(w).coeff(&(v, u)), Q::new(-1, 2));
        assert_eq!(parse_coalgebra::<Q>(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn double_suspension_shifts_by_two() {
        let w = GradedSpace::from_generators([("x", 1), ("y", 2)]).unwrap();
        let c = double_suspension::<F2>(&w).unwrap();
        assert_eq!(c.gen_degree(c.id("x").unwrap()), 3);
        assert_eq!(c.gen_degree(c.id("y").unwrap()), 4);
        assert!(c.is_primitive());
        assert!(crate::graded::validate_complex(&c.complex(), 10).pass);
        let bad = GradedSpace::from_generators([("x", 0)]).unwrap();
        assert_eq!(double_suspension::<F2>(&bad), Err(Error::DegreeZeroClass(0)));
    }

    #[test]
    fn random_tensor_coalgebras_are_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let t = random_tensor_coalgebra::<Q, _>(&mut rng, 8);
            t.validate().unwrap();
            let p = random_primitive::<F2, _>(&mut rng, 5);
            p.validate().unwrap();
            assert!(p.is_primitive());
        }
    }
}
