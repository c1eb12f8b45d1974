//! The cobar construction, its shuffle Hopf structure and the double cobar.
//!
//! `ΩC` is the tensor algebra on `s⁻¹C⁺` with
//! `d(s⁻¹c) = -s⁻¹dc + (s⁻¹⊗s⁻¹)∇̄c`, where `(s⁻¹⊗s⁻¹)(u⊗u') = (-1)^{|u|} s⁻¹u ⊗ s⁻¹u'`,
//! extended as a derivation. Words are enumerated degree by degree; since every letter has
//! degree at least one, a word of degree `n` has at most `n` letters.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{koszul_parity, unshuffles, Word};
use crate::lin::Lin;
use crate::linalg::{homology, Homology, SparseMatrix, SparseVec};

/// A 1-connected coalgebra presented by a basis of `C⁺`, its differential and reduced coproduct.
pub trait Coalgebra: Send + Sync {
    type Scalar: Field;
    type Gen: Clone + Ord + Eq + Hash + fmt::Debug + Send + Sync;

    fn degree(&self, g: &Self::Gen) -> i32;
    /// Basis of `C⁺` in degree `n`.
    fn basis(&self, n: i32) -> &[Self::Gen];
    /// `basis(n)` is complete for every `n` up to this degree.
    fn complete_through(&self) -> i32;
    fn differential(&self, g: &Self::Gen) -> Lin<Self::Gen, Self::Scalar>;
    fn reduced_coproduct(&self, g: &Self::Gen) -> Lin<(Self::Gen, Self::Gen), Self::Scalar>;
    fn name(&self, g: &Self::Gen) -> String;
}

pub type CWord<C> = Word<<C as Coalgebra>::Gen>;
pub type Elem<C> = Lin<CWord<C>, <C as Coalgebra>::Scalar>;
pub type Elem2<C> = Lin<(CWord<C>, CWord<C>), <C as Coalgebra>::Scalar>;
pub type Elem3<C> = Lin<(CWord<C>, CWord<C>, CWord<C>), <C as Coalgebra>::Scalar>;

/// `ΩC` truncated at total degree `cutoff`.
#[derive(Clone, Debug)]
pub struct Cobar<C: Coalgebra> {
    inner: C,
    cutoff: i32,
    level: u8,
    primitive: bool,
    basis: Vec<Vec<CWord<C>>>,
    index: Vec<HashMap<CWord<C>, usize>>,
}

impl<C: Coalgebra> Cobar<C> {
    /// Enumerate `ΩC` up to degree `cutoff`. `level` records the nesting depth (1 for `ΩC`).
    fn build(inner: C, cutoff: i32, level: u8, primitive: bool) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::CutoffTooSmall(cutoff));
        }
        if inner.complete_through() < cutoff + 1 {
            return Err(Error::DegreeMismatch(format!(
                "inner coalgebra is only known through degree {}",
                inner.complete_through()
            )));
        }
        for n in -4..=1 {
            if let Some(g) = inner.basis(n).first() {
                return Err(Error::NotOneConnected { name: inner.name(g), degree: n });
            }
        }
        let top = cutoff as usize;
        let mut basis: Vec<Vec<CWord<C>>> = vec![Vec::new(); top + 1];
        basis[0].push(Word::unit());
        for n in 1..=top {
            let mut words = Vec::new();
            for k in 1..=n {
                for g in inner.basis(k as i32 + 1) {
                    for rest in &basis[n - k] {
                        let mut v = Vec::with_capacity(rest.len() + 1);
                        v.push(g.clone());
                        v.extend(rest.0.iter().cloned());
                        words.push(Word(v));
                    }
                }
            }
            words.sort();
            basis[n] = words;
        }
        let index = basis.iter().map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect()).collect();
        Ok(Cobar { inner, cutoff, level, primitive, basis, index })
    }

    pub fn inner(&self) -> &C {
        &self.inner
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    /// Whether the input coalgebra has zero reduced coproduct, so `∇₀` is available.
    pub fn has_nabla0(&self) -> bool {
        self.primitive
    }

    pub fn letter_degree(&self, g: &C::Gen) -> i32 {
        self.inner.degree(g) - 1
    }

    pub fn word_degree(&self, w: &CWord<C>) -> i32 {
        w.0.iter().map(|g| self.letter_degree(g)).sum()
    }

    pub fn dim(&self, n: i32) -> usize {
        self.words(n).len()
    }

    /// Basis of `(ΩC)_n`, including the unit in degree 0.
    pub fn words(&self, n: i32) -> &[CWord<C>] {
        if n < 0 || n > self.cutoff {
            return &[];
        }
        &self.basis[n as usize]
    }

    /// All basis words of positive degree `<= n`.
    pub fn words_through(&self, n: i32) -> impl Iterator<Item = &CWord<C>> {
        (1..=n.min(self.cutoff)).flat_map(move |d| self.words(d).iter())
    }

    pub fn word_index(&self, w: &CWord<C>) -> Option<usize> {
        let n = self.word_degree(w);
        if n < 0 || n > self.cutoff {
            return None;
        }
        self.index[n as usize].get(w).copied()
    }

    pub fn word_name(&self, w: &CWord<C>) -> String {
        if w.is_unit() {
            return "1".into();
        }
        let parts: Vec<String> = w.0.iter().map(|g| self.inner.name(g)).collect();
        format!("[{}]", parts.join("|"))
    }

    pub fn elem_name(&self, x: &Elem<C>) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.iter()
            .map(|(w, c)| if c.is_one() { self.word_name(w) } else { format!("{c}*{}", self.word_name(w)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Degree of a homogeneous element (`None` for zero).
    pub fn elem_degree(&self, x: &Elem<C>) -> Option<i32> {
        x.keys().next().map(|w| self.word_degree(w))
    }

    /// `d` on a single letter.
    pub fn d_letter(&self, g: &C::Gen) -> Elem<C> {
        let mut out = Lin::zero();
        let minus = C::Scalar::one().neg();
        for (h, c) in self.inner.differential(g).iter() {
            out.add_term(Word::letter(h.clone()), c.mul(&minus));
        }
        for ((u, v), c) in self.inner.reduced_coproduct(g).iter() {
            let s = C::Scalar::sign(self.inner.degree(u) & 1 == 1);
            out.add_term(Word(vec![u.clone(), v.clone()]), c.mul(&s));
        }
        out
    }

    /// `d` on a word, as a derivation.
    pub fn d_word(&self, w: &CWord<C>) -> Elem<C> {
        let mut out = Lin::zero();
        let mut pre = 0;
        for (i, g) in w.0.iter().enumerate() {
            let s = C::Scalar::sign(pre & 1 == 1);
            for (x, c) in self.d_letter(g).iter() {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.extend(w.0[..i].iter().cloned());
                v.extend(x.0.iter().cloned());
                v.extend(w.0[i + 1..].iter().cloned());
                out.add_term(Word(v), c.mul(&s));
            }
            pre += self.letter_degree(g);
        }
        out
    }

    pub fn d(&self, x: &Elem<C>) -> Elem<C> {
        x.map_linear(|w| self.d_word(w))
    }

    /// Concatenation product.
    pub fn mul(&self, x: &Elem<C>, y: &Elem<C>) -> Elem<C> {
        x.map_bilinear(y, |a, b| Lin::basis(a.concat(b)))
    }

    pub fn to_vec(&self, n: i32, x: &Elem<C>) -> Result<SparseVec<C::Scalar>> {
        let mut pairs = Vec::with_capacity(x.len());
        for (w, c) in x.iter() {
            let i = self.word_index(w).filter(|_| self.word_degree(w) == n).ok_or_else(|| {
                Error::DegreeMismatch(format!("{} is not a basis word of degree {n}", self.word_name(w)))
            })?;
            pairs.push((i, c.clone()));
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    pub fn from_vec(&self, n: i32, v: &SparseVec<C::Scalar>) -> Elem<C> {
        let ws = self.words(n);
        v.entries().iter().map(|(i, c)| (ws[*i].clone(), c.clone())).collect()
    }

    /// Matrix of `d: (ΩC)_n → (ΩC)_{n-1}` in the word bases.
    pub fn differential_matrix(&self, n: i32) -> SparseMatrix<C::Scalar> {
        let cols: Vec<SparseVec<C::Scalar>> = self
            .words(n)
            .par_iter()
            .map(|w| self.to_vec(n - 1, &self.d_word(w)).expect("d lowers degree by one"))
            .collect();
        SparseMatrix::from_columns(self.dim(n - 1), &cols)
    }

    /// Homology in degree `n < cutoff`.
    pub fn homology(&self, n: i32) -> Result<Homology<C::Scalar>> {
        if n >= self.cutoff {
            return Err(Error::DegreeMismatch(format!("homology in degree {n} needs cutoff > {n}")));
        }
        homology(&self.differential_matrix(n + 1), &self.differential_matrix(n))
    }

    /// `dim H_n` for `n = 0..=top` (needs `top < cutoff`).
    pub fn homology_dims(&self, top: i32) -> Result<Vec<usize>> {
        let mats: Vec<SparseMatrix<C::Scalar>> =
            (0..=top + 1).into_par_iter().map(|n| self.differential_matrix(n)).collect();
        (0..=top as usize).into_par_iter().map(|n| homology(&mats[n + 1], &mats[n]).map(|h| h.dimension)).collect()
    }

    /// `d² = 0` on every basis word of degree `<= n`; returns the first failing word.
    pub fn check_d_squared(&self, n: i32) -> Option<CWord<C>> {
        let ws: Vec<&CWord<C>> = self.words_through(n).collect();
        ws.par_iter().find_first(|w| !self.d(&self.d_word(w)).is_zero()).map(|w| (*w).clone())
    }

    // --- Hopf structure -----------------------------------------------------------------

    fn letter_degrees(&self, w: &CWord<C>) -> Vec<i32> {
        w.0.iter().map(|g| self.letter_degree(g)).collect()
    }

    /// Iterated shuffle coproduct of a word into `n` ordered parts (units allowed).
    pub fn unshuffle(&self, w: &CWord<C>, n: usize) -> Vec<(Vec<CWord<C>>, C::Scalar)> {
        unshuffles(&w.0, &self.letter_degrees(w), n)
            .into_iter()
            .map(|(parts, odd)| (parts.into_iter().map(Word).collect(), C::Scalar::sign(odd)))
            .collect()
    }

    fn require_nabla0(&self) -> Result<()> {
        if self.primitive {
            Ok(())
        } else {
            Err(Error::NotReduced("input coalgebra".into()))
        }
    }

    /// `∇₀` on a word: the signed unshuffle coproduct.
    pub fn nabla0_word(&self, w: &CWord<C>) -> Elem2<C> {
        self.unshuffle(w, 2)
            .into_iter()
            .map(|(mut p, c)| {
                let b = p.pop().unwrap();
                let a = p.pop().unwrap();
                ((a, b), c)
            })
            .collect()
    }

    pub fn nabla0(&self, x: &Elem<C>) -> Result<Elem2<C>> {
        self.require_nabla0()?;
        Ok(x.map_linear(|w| self.nabla0_word(w)))
    }

    /// Antipode `S(v₁…v_k) = (-1)^k ε v_k…v₁` with `ε` the Koszul sign of the reversal.
    pub fn antipode_word(&self, w: &CWord<C>) -> (CWord<C>, C::Scalar) {
        let k = w.len();
        let order: Vec<usize> = (0..k).rev().collect();
        let odd = koszul_parity(&self.letter_degrees(w), &order) ^ (k % 2 == 1);
        let mut v = w.0.clone();
        v.reverse();
        (Word(v), C::Scalar::sign(odd))
    }

    pub fn antipode(&self, x: &Elem<C>) -> Elem<C> {
        x.map_linear(|w| {
            let (v, c) = self.antipode_word(w);
            Lin::term(v, c)
        })
    }

    /// `(d⊗1 + 1⊗d)` on `ΩC ⊗ ΩC`.
    pub fn d_tensor(&self, t: &Elem2<C>) -> Elem2<C> {
        t.map_linear(|(a, b)| {
            let mut out = Lin::zero();
            for (x, c) in self.d_word(a).iter() {
                out.add_term((x.clone(), b.clone()), c.clone());
            }
            let s = C::Scalar::sign(self.word_degree(a) & 1 == 1);
            for (y, c) in self.d_word(b).iter() {
                out.add_term((a.clone(), y.clone()), c.mul(&s));
            }
            out
        })
    }

    /// Product in `ΩC ⊗ ΩC`: `(a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa'⊗bb'`.
    pub fn mul_tensor(&self, s: &Elem2<C>, t: &Elem2<C>) -> Elem2<C> {
        s.map_bilinear(t, |(a, b), (a2, b2)| {
            let sg = C::Scalar::sign((self.word_degree(b) * self.word_degree(a2)) & 1 == 1);
            Lin::term((a.concat(a2), b.concat(b2)), sg)
        })
    }

    /// Check the bialgebra and antipode axioms on all basis words of degree `<= n`.
    pub fn hopf_report(&self, n: i32) -> Result<HopfReport> {
        self.require_nabla0()?;
        let n = n.min(self.cutoff);
        let words: Vec<&CWord<C>> = std::iter::once(&self.basis[0][0]).chain(self.words_through(n)).collect();
        let one = C::Scalar::one();
        let first = |pred: &(dyn Fn(&CWord<C>) -> bool + Sync)| -> Option<String> {
            words.par_iter().find_first(|w| !pred(w)).map(|w| self.word_name(w))
        };
        let coassociativity = first(&|w| {
            let t = self.nabla0_word(w);
            let left: Elem3<C> = t.map_linear(|(a, b)| {
                self.nabla0_word(a).iter().map(|((x, y), c)| ((x.clone(), y.clone(), b.clone()), c.clone())).collect()
            });
            let right: Elem3<C> = t.map_linear(|(a, b)| {
                self.nabla0_word(b).iter().map(|((x, y), c)| ((a.clone(), x.clone(), y.clone()), c.clone())).collect()
            });
            left == right
        });
        let counit = first(&|w| {
            let t = self.nabla0_word(w);
            let left: Elem<C> = t.filtered(|(a, _)| a.is_unit()).map_linear(|(_, b)| Lin::basis(b.clone()));
            let right: Elem<C> = t.filtered(|(_, b)| b.is_unit()).map_linear(|(a, _)| Lin::basis(a.clone()));
            left == Lin::basis((*w).clone()) && right == Lin::basis((*w).clone())
        });
        let chain_map = first(&|w| self.d_tensor(&self.nabla0_word(w)) == self.nabla0(&self.d_word(w)).unwrap());
        let antipode = first(&|w| {
            let t = self.nabla0_word(w);
            let eta_eps: Elem<C> = if w.is_unit() { Lin::basis(Word::unit()) } else { Lin::zero() };
            let left: Elem<C> = t.map_linear(|(a, b)| {
                let (sa, c) = self.antipode_word(a);
                Lin::term(sa.concat(b), c)
            });
            let right: Elem<C> = t.map_linear(|(a, b)| {
                let (sb, c) = self.antipode_word(b);
                Lin::term(a.concat(&sb), c)
            });
            left == eta_eps && right == eta_eps
        });
        let involutive =
            first(&|w| self.antipode(&self.antipode(&Lin::basis((*w).clone()))) == Lin::basis((*w).clone()));
        // algebra morphism on pairs of positive-degree words with total degree <= n
        let pairs: Vec<(&CWord<C>, &CWord<C>)> = words
            .iter()
            .filter(|w| !w.is_unit())
            .flat_map(|a| {
                words
                    .iter()
                    .filter(move |b| !b.is_unit() && self.word_degree(a) + self.word_degree(b) <= n)
                    .map(move |b| (*a, *b))
            })
            .collect();
        let algebra_morphism = pairs
            .par_iter()
            .find_first(|(a, b)| {
                let lhs = self.nabla0_word(&a.concat(b));
                let rhs = self.mul_tensor(&self.nabla0_word(a), &self.nabla0_word(b));
                lhs != rhs
            })
            .map(|(a, b)| format!("{} * {}", self.word_name(a), self.word_name(b)));
        let derivation = pairs
            .par_iter()
            .find_first(|(a, b)| {
                let lhs = self.d_word(&a.concat(b));
                let x = Lin::basis((*a).clone());
                let y = Lin::basis((*b).clone());
                let s = C::Scalar::sign(self.word_degree(a) & 1 == 1);
                let mut rhs = self.mul(&self.d(&x), &y);
                rhs.add_scaled(&self.mul(&x, &self.d(&y)), &s.mul(&one));
                lhs != rhs
            })
            .map(|(a, b)| format!("{} * {}", self.word_name(a), self.word_name(b)));
        Ok(HopfReport { coassociativity, counit, chain_map, algebra_morphism, antipode, involutive, derivation })
    }
}

/// First failing word (by name) for each bialgebra axiom; `None` means the axiom holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HopfReport {
    pub coassociativity: Option<String>,
    pub counit: Option<String>,
    pub chain_map: Option<String>,
    pub algebra_morphism: Option<String>,
    pub antipode: Option<String>,
    pub involutive: Option<String>,
    pub derivation: Option<String>,
}

impl HopfReport {
    pub fn rows(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("coassociativity", &self.coassociativity),
            ("counit", &self.counit),
            ("chain_map", &self.chain_map),
            ("algebra_morphism", &self.algebra_morphism),
            ("antipode", &self.antipode),
            ("involutive", &self.involutive),
            ("derivation", &self.derivation),
        ]
    }

    pub fn pass(&self) -> bool {
        self.rows().iter().all(|(_, r)| r.is_none())
    }
}

impl<C: Coalgebra> Coalgebra for Cobar<C> {
    type Scalar = C::Scalar;
    type Gen = CWord<C>;

    fn degree(&self, w: &CWord<C>) -> i32 {
        self.word_degree(w)
    }

    fn basis(&self, n: i32) -> &[CWord<C>] {
        if n <= 0 {
            &[]
        } else {
            self.words(n)
        }
    }

    fn complete_through(&self) -> i32 {
        self.cutoff
    }

    fn differential(&self, w: &CWord<C>) -> Elem<C> {
        self.d_word(w)
    }

    fn reduced_coproduct(&self, w: &CWord<C>) -> Elem2<C> {
        self.nabla0_word(w).filtered(|(a, b)| !a.is_unit() && !b.is_unit())
    }

    fn name(&self, w: &CWord<C>) -> String {
        self.word_name(w)
    }
}

/// A coalgebra whose reduced coproduct is known to vanish.
pub trait PrimitiveCheck {
    fn is_primitive_coalgebra(&self) -> bool;
    fn degree_two_generator(&self) -> Option<String>;
}

impl<K: Field> PrimitiveCheck for crate::dgc::DgCoalgebra<K> {
    fn is_primitive_coalgebra(&self) -> bool {
        self.is_primitive()
    }
    fn degree_two_generator(&self) -> Option<String> {
        self.gens_in_degree(2).first().map(|g| self.gen_name(*g).to_string())
    }
}

/// `ΩC` up to degree `n`.
pub fn cobar<C: Coalgebra + PrimitiveCheck>(c: C, n: i32) -> Result<Cobar<C>> {
    let primitive = c.is_primitive_coalgebra();
    Cobar::build(c, n, 1, primitive)
}

pub type DoubleCobar<C> = Cobar<Cobar<C>>;

/// `Ω²C = Ω(ΩC, ∇₀)` up to degree `n`. Needs `C` primitive with `C₂ = 0`.
pub fn double_cobar<C: Coalgebra + PrimitiveCheck>(c: C, n: i32) -> Result<DoubleCobar<C>> {
    if n < 2 {
        return Err(Error::CutoffTooSmall(n));
    }
    if let Some(g) = c.degree_two_generator() {
        return Err(Error::DegreeTwoGenerator(g));
    }
    if !c.is_primitive_coalgebra() {
        return Err(Error::NotReduced("input coalgebra".into()));
    }
    let inner = Cobar::build(c, n + 1, 1, true)?;
    Cobar::build(inner, n, 2, false)
}
