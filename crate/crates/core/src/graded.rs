//! Graded spaces, homogeneous maps, chain complexes, tensor words and the Koszul sign engine.
//!
//! Sign convention used everywhere: maps act from the left and
//! `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::lin::Lin;
use crate::linalg::{SparseMatrix, SparseVec};

/// Parity of the Koszul sign of a reordering. `order[k]` is the original position of the item
/// that ends up at position `k`.
pub fn koszul_parity(degrees: &[i32], order: &[usize]) -> bool {
    let mut odd = false;
    for a in 0..order.len() {
        if degrees[order[a]] & 1 == 0 {
            continue;
        }
        for b in a + 1..order.len() {
            if order[a] > order[b] && degrees[order[b]] & 1 == 1 {
                odd = !odd;
            }
        }
    }
    odd
}

/// All ways to distribute `items` over `parts` ordered slots, keeping the relative order
/// inside each slot, with the Koszul parity of the distribution.
pub fn unshuffles<T: Clone>(items: &[T], degrees: &[i32], parts: usize) -> Vec<(Vec<Vec<T>>, bool)> {
    let n = items.len();
    if parts == 0 {
        return if n == 0 { vec![(Vec::new(), false)] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    loop {
        let mut slots: Vec<Vec<T>> = vec![Vec::new(); parts];
        let mut order = Vec::with_capacity(n);
        for p in 0..parts {
            for i in 0..n {
                if assign[i] == p {
                    order.push(i);
                    slots[p].push(items[i].clone());
                }
            }
        }
        out.push((slots, koszul_parity(degrees, &order)));
        // next assignment in base `parts`, last letter fastest
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            assign[k] += 1;
            if assign[k] < parts {
                break;
            }
            assign[k] = 0;
        }
    }
}

/// A word in the letters `L`. Words are ordered by length, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word<L>(pub Vec<L>);

impl<L> Word<L> {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: L) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[L] {
        &self.0
    }
}

impl<L: Clone> Word<L> {
    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }
}

impl<L: Ord> PartialOrd for Word<L> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<L: Ord> Ord for Word<L> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl<L: fmt::Display> fmt::Display for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        f.write_str("[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("]")
    }
}

/// Finite-type graded vector space with named basis elements.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct GradedSpace {
    basis: BTreeMap<i32, Vec<String>>,
    cutoff: Option<i32>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from `(name, degree)` pairs. Names must be unique within a degree.
    pub fn from_generators<S: Into<String>>(gens: impl IntoIterator<Item = (S, i32)>) -> Result<Self> {
        let mut sp = Self::new();
        for (name, deg) in gens {
            sp.push(name, deg)?;
        }
        Ok(sp)
    }

    pub fn push(&mut self, name: impl Into<String>, degree: i32) -> Result<usize> {
        let name = name.into();
        if self.cutoff.is_some_and(|n| degree > n) {
            return Err(Error::DegreeMismatch(format!("`{name}` lies above the cutoff")));
        }
        let v = self.basis.entry(degree).or_default();
        if v.contains(&name) {
            return Err(Error::DegreeMismatch(format!("duplicate basis name `{name}` in degree {degree}")));
        }
        v.push(name);
        Ok(v.len() - 1)
    }

    pub fn with_cutoff(mut self, n: i32) -> Self {
        self.basis.retain(|d, _| *d <= n);
        self.cutoff = Some(n);
        self
    }

    pub fn cutoff(&self) -> Option<i32> {
        self.cutoff
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.basis.get(&degree).map_or(0, Vec::len)
    }

    pub fn names(&self, degree: i32) -> &[String] {
        self.basis.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.basis.iter().filter(|(_, v)| !v.is_empty()).map(|(d, _)| *d)
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.degrees().next()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.degrees().last()
    }

    pub fn index_of(&self, degree: i32, name: &str) -> Option<usize> {
        self.names(degree).iter().position(|n| n == name)
    }

    /// All `(name, degree)` pairs in degree order.
    pub fn generators(&self) -> Vec<(String, i32)> {
        self.basis.iter().flat_map(|(d, v)| v.iter().map(move |n| (n.clone(), *d))).collect()
    }
}

/// Decorate a basis name with `s^k`, merging with an existing decoration.
fn shift_name(name: &str, k: i32) -> String {
    let (base, e) = split_shift(name);
    let e = e + k;
    if e == 0 {
        base.to_string()
    } else {
        format!("s^{e}({base})")
    }
}

fn split_shift(name: &str) -> (&str, i32) {
    if let Some(rest) = name.strip_prefix("s^") {
        if let Some((e, tail)) = rest.split_once('(') {
            if let (Ok(e), Some(base)) = (e.parse::<i32>(), tail.strip_suffix(')')) {
                return (base, e);
            }
        }
    }
    (name, 0)
}

/// `s^k V`: the class of degree `n` moves to degree `n + k`. `k = -1` is the desuspension
/// `(s^{-1} V)_n = V_{n+1}`.
pub fn shift(space: &GradedSpace, k: i32) -> GradedSpace {
    let mut out = GradedSpace::new();
    for (name, d) in space.generators() {
        out.push(shift_name(&name, k), d + k).expect("names stay unique under shifts");
    }
    if let Some(n) = space.cutoff {
        out.cutoff = Some(n + k);
    }
    out
}

/// A degree-homogeneous linear map given by one sparse block per source degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap<K> {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub degree: i32,
    blocks: BTreeMap<i32, SparseMatrix<K>>,
}

impl<K: Field> GradedMap<K> {
    pub fn zero(source: GradedSpace, target: GradedSpace, degree: i32) -> Self {
        GradedMap { source, target, degree, blocks: BTreeMap::new() }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let mut m = Self::zero(space.clone(), space.clone(), 0);
        for d in space.degrees().collect::<Vec<_>>() {
            m.blocks.insert(d, SparseMatrix::identity(space.dim(d)));
        }
        m
    }

    /// Set the block on source degree `n`; its shape must be `dim target_{n+deg} × dim source_n`.
    pub fn set_block(&mut self, n: i32, m: SparseMatrix<K>) -> Result<()> {
        let shape = (self.target.dim(n + self.degree), self.source.dim(n));
        if (m.rows(), m.cols()) != shape {
            return Err(Error::DimensionMismatch(format!(
                "block in degree {n} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                shape.0,
                shape.1
            )));
        }
        if !m.is_zero() {
            self.blocks.insert(n, m);
        } else {
            self.blocks.remove(&n);
        }
        Ok(())
    }

    pub fn block(&self, n: i32) -> SparseMatrix<K> {
        self.blocks
            .get(&n)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(self.target.dim(n + self.degree), self.source.dim(n)))
    }

    pub fn apply(&self, n: i32, v: &SparseVec<K>) -> SparseVec<K> {
        match self.blocks.get(&n) {
            Some(b) => b.apply(v),
            None => SparseVec::zero(),
        }
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &GradedMap<K>) -> Result<GradedMap<K>> {
        if rhs.target != self.source {
            return Err(Error::DegreeMismatch("composite of maps with different middle spaces".into()));
        }
        let mut out = GradedMap::zero(rhs.source.clone(), self.target.clone(), self.degree + rhs.degree);
        for d in rhs.source.degrees().collect::<Vec<_>>() {
            let b = self.block(d + rhs.degree).mul(&rhs.block(d));
            out.set_block(d, b)?;
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &GradedMap<K>) -> Result<GradedMap<K>> {
        if rhs.source != self.source || rhs.target != self.target || rhs.degree != self.degree {
            return Err(Error::DegreeMismatch("sum of maps with different shapes".into()));
        }
        let mut out = self.clone();
        for d in self.source.degrees().collect::<Vec<_>>() {
            out.set_block(d, self.block(d).add(&rhs.block(d)))?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &K) -> GradedMap<K> {
        let mut out = GradedMap::zero(self.source.clone(), self.target.clone(), self.degree);
        for (d, b) in &self.blocks {
            out.set_block(*d, b.scale(c)).expect("same shape");
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Basis element of a graded space: `(degree, index)`.
pub type GradedBasis = (i32, usize);

/// Element of a tensor product `V ⊗ W` of graded spaces.
pub type TensorElement<K> = Lin<(GradedBasis, GradedBasis), K>;

/// `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)`, extended linearly.
pub fn koszul_apply<K: Field>(f: &GradedMap<K>, g: &GradedMap<K>, t: &TensorElement<K>) -> Result<TensorElement<K>> {
    let mut out = Lin::zero();
    for (((dx, ix), (dy, iy)), c) in t.iter() {
        if *ix >= f.source.dim(*dx) || *iy >= g.source.dim(*dy) {
            return Err(Error::DegreeMismatch(format!(
                "tensor factor ({dx},{ix})⊗({dy},{iy}) is not in the source of f⊗g"
            )));
        }
        let fx = f.apply(*dx, &SparseVec::unit(*ix));
        let gy = g.apply(*dy, &SparseVec::unit(*iy));
        let sign = K::sign((g.degree * dx) & 1 == 1);
        for (i, a) in fx.entries() {
            for (j, b) in gy.entries() {
                out.add_term(((dx + f.degree, *i), (dy + g.degree, *j)), a.mul(b).mul(&sign).mul(c));
            }
        }
    }
    Ok(out)
}

/// A chain complex: a graded space with a degree `-1` differential.
#[derive(Clone, Debug)]
pub struct ChainComplex<K> {
    pub space: GradedSpace,
    pub d: GradedMap<K>,
}

/// Outcome of `validate_complex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexReport {
    pub pass: bool,
    /// `(degree, basis name)` of the first element with `d(d x) != 0`.
    pub first_failure: Option<(i32, String)>,
}

impl<K: Field> ChainComplex<K> {
    pub fn new(space: GradedSpace, d: GradedMap<K>) -> Result<Self> {
        if d.degree != -1 || d.source != space || d.target != space {
            return Err(Error::DegreeMismatch("differential must be a degree -1 self-map".into()));
        }
        Ok(ChainComplex { space, d })
    }

    /// Complex from per-degree matrices `d_n: C_n → C_{n-1}`.
    pub fn from_blocks(space: GradedSpace, blocks: impl IntoIterator<Item = (i32, SparseMatrix<K>)>) -> Result<Self> {
        let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
        for (n, b) in blocks {
            d.set_block(n, b)?;
        }
        Self::new(space, d)
    }

    pub fn differential(&self, n: i32) -> SparseMatrix<K> {
        self.d.block(n)
    }
}

/// Check `d ∘ d = 0` in every degree `<= n`.
pub fn validate_complex<K: Field>(c: &ChainComplex<K>, n: i32) -> ComplexReport {
    for deg in c.space.degrees().filter(|d| *d <= n).collect::<Vec<_>>() {
        let dd = c.d.block(deg - 1).mul(&c.d.block(deg));
        if let Some((_, col, _)) = dd.transpose().entries().first() {
            return ComplexReport { pass: false, first_failure: Some((deg, c.space.names(deg)[*col].clone())) };
        }
    }
    ComplexReport { pass: true, first_failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F2, Q};

    #[test]
    fn parity_of_swaps() {
        assert!(!koszul_parity(&[2, 3], &[1, 0]));
        assert!(koszul_parity(&[1, 3], &[1, 0]));
        assert!(!koszul_parity(&[1, 1, 1], &[0, 1, 2]));
        // reversing three odd items: three transpositions
        assert!(koszul_parity(&[1, 1, 1], &[2, 1, 0]));
    }

    #[test]
    fn unshuffle_counts_and_signs() {
        let u = unshuffles(&['a', 'b'], &[1, 1], 2);
        assert_eq!(u.len(), 4);
        let swapped = u.iter().find(|(s, _)| s[0] == vec!['b'] && s[1] == vec!['a']).unwrap();
        assert!(swapped.1);
        assert_eq!(unshuffles(&['a', 'b', 'c'], &[2, 2, 2], 3).len(), 27);
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let mut ws = vec![Word(vec![2, 1]), Word(vec![3]), Word(vec![1, 1]), Word(vec![])];
        ws.sort();
        assert_eq!(ws, vec![Word(vec![]), Word(vec![3]), Word(vec![1, 1]), Word(vec![2, 1])]);
        let again = {
            let mut w = ws.clone();
            w.sort();
            w
        };
        assert_eq!(ws, again);
    }

    #[test]
    fn shift_examples() {
        let v = GradedSpace::from_generators([("x", 3)]).unwrap();
        let sv = shift(&v, -1);
        assert_eq!(sv.dim(2), 1);
        assert_eq!(sv.names(2), ["s^-1(x)"]);
        assert_eq!(shift(&sv, 1), v);
        assert_eq!(shift(&v, -2).dim(1), 1);
    }

    fn map_from(src: &GradedSpace, tgt: &GradedSpace, deg: i32, blocks: &[(i32, Vec<Vec<i64>>)]) -> GradedMap<Q> {
        let mut m = GradedMap::zero(src.clone(), tgt.clone(), deg);
        for (d, rows) in blocks {
            let rows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| Q::from_i64(x)).collect()).collect();
            m.set_block(*d, SparseMatrix::from_dense(&rows)).unwrap();
        }
        m
    }

    #[test]
    fn koszul_apply_examples() {
        let v = GradedSpace::from_generators([("e", 2), ("o", 3)]).unwrap();
        let id = GradedMap::<Q>::identity(&v);
        let t: TensorElement<Q> = Lin::basis(((3, 0), (2, 0)));
        assert_eq!(koszul_apply(&id, &id, &t).unwrap(), t);

        let sv = shift(&v, -1);
        let desusp = map_from(&v, &sv, -1, &[(2, vec![vec![1]]), (3, vec![vec![1]])]);
        let even: TensorElement<Q> = Lin::basis(((2, 0), (3, 0)));
        let r = koszul_apply(&desusp, &desusp, &even).unwrap();
        assert_eq!(r.coeff(&((1, 0), (2, 0))), Q::one());
        let odd: TensorElement<Q> = Lin::basis(((3, 0), (2, 0)));
        let r = koszul_apply(&desusp, &desusp, &odd).unwrap();
        assert_eq!(r.coeff(&((2, 0), (1, 0))), Q::from_i64(-1));
    }

    #[test]
    fn validate_complex_examples() {
        let sp = GradedSpace::from_generators([("u", 2), ("v", 3)]).unwrap();
        let c = ChainComplex::<F2>::from_blocks(sp.clone(), []).unwrap();
        assert!(validate_complex(&c, 5).pass);
        let c = ChainComplex::from_blocks(sp, [(3, SparseMatrix::from_dense(&[vec![F2::one()]]))]).unwrap();
        assert!(validate_complex(&c, 5).pass);

        let sp = GradedSpace::from_generators([("w", 1), ("u", 2), ("v", 3)]).unwrap();
        let c = ChainComplex::from_blocks(
            sp,
            [(3, SparseMatrix::from_dense(&[vec![Q::one()]])), (2, SparseMatrix::from_dense(&[vec![Q::one()]]))],
        )
        .unwrap();
        let r = validate_complex(&c, 5);
        assert!(!r.pass);
        assert_eq!(r.first_failure, Some((3, "v".to_string())));
    }
}
