//! Contractions onto homology, homotopy transfer of the coalgebra structure, the cobar-level
//! homotopy `Γ` and the formality pipeline for primitive coalgebras.
//!
//! Transferred co-operations are computed on the desuspension `V = s⁻¹C⁺`, where an
//! A∞-coalgebra is the same thing as a square-zero derivation `D` of the free algebra `T(V)`.
//! With `δ` the quadratic part of the cobar differential and `h` the desuspended homotopy,
//! the trees are `T₁ = 1`, `T_n = Σ_{j+l=n} (R_j ⊗ R_l) δ` with `R₁ = 1`, `R_j = T_j h`,
//! where `h = Γ₁` is the desuspended homotopy.
//! Then `∂_{n-1} = p^{⊗n} T_n i` and `τ_{n-1} = p^{⊗n} R_n`. Every `R_j` has degree zero
//! on `V`, so no Koszul signs appear in the tree sums.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::cobar::{cobar, Cobar};
use crate::dgc::{DgCoalgebra, GenId};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{ChainComplex, GradedMap, GradedSpace, Word};
use crate::hga::IdentityRow;
use crate::lin::Lin;
use crate::linalg::{invert, kernel_basis, rref, solve, Echelon, SparseMatrix, SparseVec};

/// `(big, small, p, i, ν)` with `pi = 1`, `ip - 1 = dν + νd` and `pν = νi = ν² = 0`.
#[derive(Clone, Debug)]
pub struct Contraction<K> {
    pub big: ChainComplex<K>,
    pub small: ChainComplex<K>,
    pub p: GradedMap<K>,
    pub i: GradedMap<K>,
    pub nu: GradedMap<K>,
}

fn select_rows<K: Field>(m: &SparseMatrix<K>, rows: std::ops::Range<usize>) -> SparseMatrix<K> {
    let all = m.row_vecs();
    SparseMatrix::from_rows(m.cols(), &all[rows])
}

/// Split every degree as boundaries ⊕ chosen cycle representatives ⊕ a complement on which
/// `d` is injective. `ν` inverts `d` from the boundaries into the complement, so the side
/// conditions hold by construction; they are still asserted by `Contraction::check`.
///
/// A homology class is named after the free column of its kernel vector, primed unless the
/// representative is that basis element itself.
pub fn build_contraction<K: Field>(c: &ChainComplex<K>) -> Contraction<K> {
    struct Split<K> {
        bounds: Vec<SparseVec<K>>,
        reps: Vec<(String, SparseVec<K>)>,
        comp: Vec<SparseVec<K>>,
        inv: SparseMatrix<K>,
    }
    let space = &c.space;
    let degrees: Vec<i32> = space.degrees().collect();
    let mut split: BTreeMap<i32, Split<K>> = BTreeMap::new();
    for &n in &degrees {
        let dim = space.dim(n);
        let mut span = Echelon::new();
        let bounds: Vec<SparseVec<K>> =
            c.differential(n + 1).column_vecs().into_iter().filter(|b| span.insert(b)).collect();
        let dn = c.differential(n);
        let pivots = rref(&dn).pivots;
        let free = (0..dim).filter(|j| !pivots.contains(j));
        let mut reps: Vec<(String, SparseVec<K>)> = free
            .zip(kernel_basis(&dn))
            .filter(|(_, z)| span.insert(z))
            .map(|(f, z)| {
                let base = &space.names(n)[f];
                let name = if z.nnz() == 1 { base.clone() } else { format!("{base}'") };
                (name, z)
            })
            .collect();
        reps.sort_by(|a, b| a.0.cmp(&b.0));
        let comp: Vec<SparseVec<K>> = (0..dim).map(SparseVec::unit).filter(|e| span.insert(e)).collect();
        let cols: Vec<SparseVec<K>> = bounds.iter().chain(reps.iter().map(|r| &r.1)).chain(&comp).cloned().collect();
        let inv = invert(&SparseMatrix::from_columns(dim, &cols)).expect("the split is a basis");
        split.insert(n, Split { bounds, reps, comp, inv });
    }
    let small_space = GradedSpace::from_generators(
        split.iter().flat_map(|(&n, s)| s.reps.iter().map(move |(name, _)| (name.clone(), n))),
    )
    .expect("class names are unique");
    let small = ChainComplex::from_blocks(small_space.clone(), []).expect("zero differential");
    let mut p = GradedMap::zero(space.clone(), small_space.clone(), 0);
    let mut i = GradedMap::zero(small_space.clone(), space.clone(), 0);
    let mut nu = GradedMap::zero(space.clone(), space.clone(), 1);
    for (&n, s) in &split {
        let (nb, nh) = (s.bounds.len(), s.reps.len());
        p.set_block(n, select_rows(&s.inv, nb..nb + nh)).expect("shape");
        let reps: Vec<SparseVec<K>> = s.reps.iter().map(|r| r.1.clone()).collect();
        i.set_block(n, SparseMatrix::from_columns(space.dim(n), &reps)).expect("shape");
        if nb == 0 {
            continue;
        }
        // lift each boundary into the complement one degree up
        let up = &split[&(n + 1)];
        let comp_up = SparseMatrix::from_columns(space.dim(n + 1), &up.comp);
        let image = c.differential(n + 1).mul(&comp_up);
        let lifts: Vec<SparseVec<K>> =
            s.bounds.iter().map(|b| comp_up.apply(&solve(&image, b).expect("d is onto the boundaries"))).collect();
        let lift = SparseMatrix::from_columns(space.dim(n + 1), &lifts);
        let coords = select_rows(&s.inv, 0..nb);
        nu.set_block(n, lift.mul(&coords).scale(&K::one().neg())).expect("shape");
    }
    Contraction { big: c.clone(), small, p, i, nu }
}

impl<K: Field> Contraction<K> {
    /// The five contraction identities in every degree `<= n`; `None` means all hold.
    pub fn check(&self, n: i32) -> Vec<(&'static str, Option<i32>)> {
        let degrees: Vec<i32> = self.big.space.degrees().filter(|d| *d <= n).collect();
        let small: Vec<i32> = self.small.space.degrees().filter(|d| *d <= n).collect();
        let d = |k: i32| self.big.differential(k);
        let first = |ds: &[i32], f: &dyn Fn(i32) -> bool| ds.iter().copied().find(|&k| !f(k));
        vec![
            (
                "pi = 1",
                first(&small, &|k| {
                    self.p.block(k).mul(&self.i.block(k)) == SparseMatrix::identity(self.small.space.dim(k))
                }),
            ),
            (
                "ip - 1 = d nu + nu d",
                first(&degrees, &|k| {
                    let lhs = self.i.block(k).mul(&self.p.block(k)).sub(&SparseMatrix::identity(self.big.space.dim(k)));
                    let rhs = d(k + 1).mul(&self.nu.block(k)).add(&self.nu.block(k - 1).mul(&d(k)));
                    lhs == rhs
                }),
            ),
            ("p nu = 0", first(&degrees, &|k| self.p.block(k + 1).mul(&self.nu.block(k)).is_zero())),
            ("nu i = 0", first(&small, &|k| self.nu.block(k).mul(&self.i.block(k)).is_zero())),
            ("nu nu = 0", first(&degrees, &|k| self.nu.block(k + 1).mul(&self.nu.block(k)).is_zero())),
        ]
    }

    pub fn is_valid(&self, n: i32) -> bool {
        self.check(n).iter().all(|(_, f)| f.is_none())
    }
}

/// Generator-level view of a contraction of `(C⁺, d)` onto the generators of `H`.
#[derive(Clone, Debug)]
pub struct CoalgebraContraction<K> {
    pub contraction: Contraction<K>,
    p: Vec<Lin<GenId, K>>,
    i: Vec<Lin<GenId, K>>,
    nu: Vec<Lin<GenId, K>>,
}

impl<K: Field> CoalgebraContraction<K> {
    fn new(c: &DgCoalgebra<K>, h: &DgCoalgebra<K>, k: Contraction<K>) -> Self {
        let column = |m: &GradedMap<K>, deg: i32, pos: usize| m.apply(deg, &SparseVec::unit(pos));
        let p = c
            .generators()
            .map(|g| h.from_vec(c.gen_degree(g), &column(&k.p, c.gen_degree(g), c.position(g))))
            .collect();
        let i = h
            .generators()
            .map(|g| c.from_vec(h.gen_degree(g), &column(&k.i, h.gen_degree(g), h.position(g))))
            .collect();
        let nu = c
            .generators()
            .map(|g| c.from_vec(c.gen_degree(g) + 1, &column(&k.nu, c.gen_degree(g), c.position(g))))
            .collect();
        CoalgebraContraction { contraction: k, p, i, nu }
    }

    /// `p` on a generator of `C`, as an element of `H`.
    pub fn p(&self, g: GenId) -> &Lin<GenId, K> {
        &self.p[g.0]
    }

    /// `i` on a generator of `H`, as an element of `C`.
    pub fn i(&self, g: GenId) -> &Lin<GenId, K> {
        &self.i[g.0]
    }

    pub fn nu(&self, g: GenId) -> &Lin<GenId, K> {
        &self.nu[g.0]
    }

    /// `Γ₁ = s⁻¹νs` on a letter. Desuspending the odd map `ν` against the sign of the
    /// desuspended differential costs a factor `-1`.
    pub fn gamma_letter(&self, g: GenId) -> Lin<GenId, K> {
        self.nu[g.0].neg()
    }
}

/// `H_*(C)` with zero differential and coproduct `(p⊗p)∇i`, with the contraction used.
pub fn homology_coalgebra_with_maps<K: Field>(c: &DgCoalgebra<K>) -> (DgCoalgebra<K>, CoalgebraContraction<K>) {
    let k = build_contraction(&c.complex());
    let mut h = DgCoalgebra::new(k.small.space.generators()).expect("homology of a 1-connected coalgebra");
    if let Some(n) = c.maxdeg() {
        h.set_maxdeg(n);
    }
    let maps = CoalgebraContraction::new(c, &h, k);
    for g in h.generators().collect::<Vec<_>>() {
        let cop = maps
            .i(g)
            .map_linear(|x| c.cop_of(*x).clone())
            .map_linear(|(a, b)| maps.p(*a).map_bilinear(maps.p(*b), |x, y| Lin::basis((*x, *y))));
        h.set_coproduct(g, cop).expect("p preserves degrees");
    }
    (h, maps)
}

type Tensor<K> = Lin<Word<GenId>, K>;

/// Transferred A∞-coalgebra on `H_*(C)` together with the A∞ quasi-isomorphism `C → H`.
#[derive(Clone, Debug)]
pub struct Transfer<K> {
    pub source: DgCoalgebra<K>,
    pub homology: DgCoalgebra<K>,
    pub maps: CoalgebraContraction<K>,
    /// `partials[k][h]`: `∂_k` on generator `h` of `H`, desuspended (`k >= 1`).
    pub partials: Vec<Vec<Tensor<K>>>,
    /// `taus[k][g]`: `τ_k` on generator `g` of `C`, desuspended (`k >= 0`).
    pub taus: Vec<Vec<Tensor<K>>>,
    pub cutoff: i32,
}

struct Trees<'a, K> {
    c: &'a DgCoalgebra<K>,
    maps: &'a CoalgebraContraction<K>,
    memo: BTreeMap<(GenId, usize), Tensor<K>>,
}

impl<'a, K: Field> Trees<'a, K> {
    /// Quadratic part of the cobar differential on a letter.
    fn delta(&self, g: GenId) -> Tensor<K> {
        self.c
            .cop_of(g)
            .iter()
            .map(|((u, v), x)| (Word(vec![*u, *v]), x.mul(&K::sign(self.c.gen_degree(*u) & 1 == 1))))
            .collect()
    }

    /// `p^{⊗n} T_n` on a generator. Projecting at the leaves keeps the sums small.
    fn t(&mut self, g: GenId, n: usize) -> Tensor<K> {
        if n == 1 {
            return self.maps.p(g).map_linear(|x| Lin::basis(Word::letter(*x)));
        }
        if let Some(v) = self.memo.get(&(g, n)) {
            return v.clone();
        }
        let mut out = Lin::zero();
        for (w, x) in self.delta(g).iter() {
            for j in 1..n {
                let left = self.r(w.0[0], j);
                if left.is_zero() {
                    continue;
                }
                let right = self.r(w.0[1], n - j);
                out.add_scaled(&left.map_bilinear(&right, |a, b| Lin::basis(a.concat(b))), x);
            }
        }
        self.memo.insert((g, n), out.clone());
        out
    }

    /// `p^{⊗j} R_j`, where `R_j = T_j ∘ Γ₁` for `j >= 2`.
    fn r(&mut self, g: GenId, j: usize) -> Tensor<K> {
        if j == 1 {
            return self.t(g, 1);
        }
        let h = self.maps.gamma_letter(g);
        let mut out = Lin::zero();
        for (x, c) in h.iter() {
            out.add_scaled(&self.t(*x, j), c);
        }
        out
    }
}

fn p_tensor<K: Field>(maps: &CoalgebraContraction<K>, t: &Tensor<K>) -> Tensor<K> {
    t.map_linear(|w| {
        w.0.iter().fold(Lin::basis(Word::unit()), |acc: Tensor<K>, g| {
            acc.map_bilinear(maps.p(*g), |a, b| Lin::basis(a.concat(&Word::letter(*b))))
        })
    })
}

/// Homotopy transfer of the coalgebra structure of `C` to `H_*(C)`, with all components
/// whose desuspended degree is at most `cutoff`.
pub fn transfer_ainfty<K: Field>(c: &DgCoalgebra<K>, cutoff: i32) -> Transfer<K> {
    let (h, maps) = homology_coalgebra_with_maps(c);
    // T_n(g) has n letters of degree >= 1 and total degree |g| - 2
    let top = (cutoff + 2).max(2) as usize;
    let mut trees = Trees { c, maps: &maps, memo: BTreeMap::new() };
    let mut partials = vec![vec![Lin::zero(); h.len()]];
    let mut taus = vec![c.generators().map(|g| trees.t(g, 1)).collect()];
    for n in 2..=top {
        let mut dn = Vec::with_capacity(h.len());
        for hg in h.generators() {
            let mut t = Lin::zero();
            if h.gen_degree(hg) - 2 <= cutoff {
                for (x, a) in maps.i(hg).iter() {
                    t.add_scaled(&trees.t(*x, n), a);
                }
            }
            dn.push(t);
        }
        partials.push(dn);
        let mut tn = Vec::with_capacity(c.len());
        for g in c.generators() {
            let t = if c.gen_degree(g) - 1 <= cutoff { trees.r(g, n) } else { Lin::zero() };
            tn.push(t);
        }
        taus.push(tn);
    }
    let h_clone = h.clone();
    Transfer { source: c.clone(), homology: h_clone, maps, partials, taus, cutoff }
}

impl<K: Field> Transfer<K> {
    fn letter_degree(&self, g: GenId) -> i32 {
        self.homology.gen_degree(g) - 1
    }

    /// The transferred derivation `D = Σ_k ∂_k` of `T(s⁻¹H⁺)` on a word.
    pub fn d_word(&self, w: &Word<GenId>) -> Tensor<K> {
        let mut out = Lin::zero();
        let mut pre = 0;
        for (i, g) in w.0.iter().enumerate() {
            let s = K::sign(pre & 1 == 1);
            for part in &self.partials {
                for (x, c) in part[g.0].iter() {
                    let mut v = w.0[..i].to_vec();
                    v.extend_from_slice(&x.0);
                    v.extend_from_slice(&w.0[i + 1..]);
                    out.add_term(Word(v), c.mul(&s));
                }
            }
            pre += self.letter_degree(*g);
        }
        out
    }

    /// The algebra map `T(s⁻¹C⁺) → T(s⁻¹H⁺)` with components `τ_k` on letters.
    pub fn tau_word(&self, w: &Word<GenId>) -> Tensor<K> {
        w.0.iter().fold(Lin::basis(Word::unit()), |acc: Tensor<K>, g| {
            let mut image = Lin::zero();
            for t in &self.taus {
                image += &t[g.0];
            }
            acc.map_bilinear(&image, |a, b| Lin::basis(a.concat(b)))
        })
    }

    /// A∞ relations (`D² = 0` on generators), the morphism equation `τ d = D τ`, and for a
    /// primitive source the vanishing of `∂_{k>=2}` and `τ_{k>=1}`.
    pub fn check(&self) -> Vec<IdentityRow> {
        let n = self.cutoff;
        let hs: Vec<GenId> = self.homology.generators().filter(|g| self.letter_degree(*g) <= n).collect();
        let cs: Vec<GenId> = self.source.generators().filter(|g| self.source.gen_degree(*g) - 1 <= n).collect();
        let d_elem = |x: &Tensor<K>| x.map_linear(|w| self.d_word(w));
        let ainf = hs
            .par_iter()
            .find_first(|g| !d_elem(&self.d_word(&Word::letter(**g))).is_zero())
            .map(|g| self.homology.gen_name(*g).to_string());
        let c_cobar = CobarLetters { c: &self.source };
        let morphism = cs
            .par_iter()
            .find_first(|g| {
                let lhs = c_cobar.d_letter(**g).map_linear(|w| self.tau_word(w));
                let rhs = d_elem(&self.tau_word(&Word::letter(**g)));
                lhs != rhs
            })
            .map(|g| self.source.gen_name(*g).to_string());
        let mut rows = vec![
            IdentityRow { name: "A-infinity relations".into(), checked: hs.len(), counterexample: ainf },
            IdentityRow { name: "tau is an A-infinity morphism".into(), checked: cs.len(), counterexample: morphism },
        ];
        if self.source.is_primitive() {
            let higher = self.partials.iter().skip(2).flatten().chain(self.taus.iter().skip(1).flatten());
            let bad = higher.clone().any(|t| !t.is_zero());
            rows.push(IdentityRow {
                name: "primitive input: higher components vanish".into(),
                checked: higher.count(),
                counterexample: bad.then(|| "nonzero higher component".to_string()),
            });
        }
        rows
    }
}

/// Cobar differential on letters of a bare coalgebra, without enumerating a basis.
struct CobarLetters<'a, K> {
    c: &'a DgCoalgebra<K>,
}

impl<'a, K: Field> CobarLetters<'a, K> {
    fn d_letter(&self, g: GenId) -> Tensor<K> {
        let mut out: Tensor<K> = self.c.d_of(g).iter().map(|(h, x)| (Word::letter(*h), x.neg())).collect();
        for ((u, v), x) in self.c.cop_of(g).iter() {
            out.add_term(Word(vec![*u, *v]), x.mul(&K::sign(self.c.gen_degree(*u) & 1 == 1)));
        }
        out
    }
}

/// The tensor-trick homotopy on `ΩC` for a primitive coalgebra `C`:
/// `Γ[c₁|…|c_n] = Σ_k ± [c₁|…|c_{k-1}|Γ₁c_k|ip c_{k+1}|…|ip c_n]`.
pub struct CobarGamma<'a, K> {
    maps: &'a CoalgebraContraction<K>,
    c: &'a DgCoalgebra<K>,
}

impl<'a, K: Field> CobarGamma<'a, K> {
    pub fn new(c: &'a DgCoalgebra<K>, maps: &'a CoalgebraContraction<K>) -> Result<Self> {
        if let Some(g) = c.generators().find(|g| !c.cop_of(*g).is_zero()) {
            return Err(Error::NotReduced(c.gen_name(g).to_string()));
        }
        Ok(CobarGamma { maps, c })
    }

    fn ip(&self, g: GenId) -> Lin<GenId, K> {
        self.maps.p(g).map_linear(|h| self.maps.i(*h).clone())
    }

    pub fn apply_word(&self, w: &Word<GenId>) -> Tensor<K> {
        let mut out = Lin::zero();
        let mut pre = 0;
        for k in 0..w.len() {
            let s = K::sign(pre & 1 == 1);
            let mut acc: Tensor<K> = Lin::term(Word(w.0[..k].to_vec()), s);
            acc = acc.map_bilinear(&self.maps.gamma_letter(w.0[k]), |a, b| Lin::basis(a.concat(&Word::letter(*b))));
            for g in &w.0[k + 1..] {
                acc = acc.map_bilinear(&self.ip(*g), |a, b| Lin::basis(a.concat(&Word::letter(*b))));
            }
            out += &acc;
            pre += self.c.gen_degree(w.0[k]) - 1;
        }
        out
    }

    pub fn apply(&self, x: &Tensor<K>) -> Tensor<K> {
        x.map_linear(|w| self.apply_word(w))
    }

    /// `Ωp` on a word of `ΩC`.
    pub fn omega_p(&self, w: &Word<GenId>) -> Tensor<K> {
        p_tensor(self.maps, &Lin::basis(w.clone()))
    }

    /// `Ωi` on a word of `ΩH`.
    pub fn omega_i(&self, w: &Word<GenId>) -> Tensor<K> {
        w.0.iter().fold(Lin::basis(Word::unit()), |acc: Tensor<K>, g| {
            acc.map_bilinear(self.maps.i(*g), |a, b| Lin::basis(a.concat(&Word::letter(*b))))
        })
    }

    /// `ΩiΩp - 1 = dΓ + Γd` and `ΩpΓ = ΓΩi = Γ² = 0` on all words of degree `<= n`.
    pub fn check(&self, omega_c: &Cobar<DgCoalgebra<K>>, omega_h: &Cobar<DgCoalgebra<K>>, n: i32) -> Vec<IdentityRow> {
        let words: Vec<&Word<GenId>> = omega_c.words_through(n).collect();
        let hwords: Vec<&Word<GenId>> = omega_h.words_through(n).collect();
        let row = |name: &str,
                   ws: &[&Word<GenId>],
                   f: &(dyn Fn(&Word<GenId>) -> bool + Sync),
                   names: &Cobar<DgCoalgebra<K>>| {
            let counterexample = ws.par_iter().find_first(|w| !f(w)).map(|w| names.word_name(w));
            IdentityRow { name: name.into(), checked: ws.len(), counterexample }
        };
        vec![
            row(
                "Omega i Omega p - 1 = d Gamma + Gamma d",
                &words,
                &|w| {
                    let lhs = self.omega_p(w).map_linear(|v| self.omega_i(v)) - Lin::basis(w.clone());
                    let rhs = omega_c.d(&self.apply_word(w)) + self.apply(&omega_c.d_word(w));
                    lhs == rhs
                },
                omega_c,
            ),
            row(
                "Omega p Gamma = 0",
                &words,
                &|w| self.apply_word(w).map_linear(|v| self.omega_p(v)).is_zero(),
                omega_c,
            ),
            row("Gamma Omega i = 0", &hwords, &|w| self.apply(&self.omega_i(w)).is_zero(), omega_h),
            row("Gamma Gamma = 0", &words, &|w| self.apply(&self.apply_word(w)).is_zero(), omega_c),
        ]
    }
}

/// Outcome of the formality pipeline on a primitive coalgebra.
#[derive(Clone, Debug)]
pub struct FormalityReport {
    /// `(n, dim H_n(ΩC), dim H_n(ΩH))`.
    pub cobar_dims: Vec<(i32, usize, usize)>,
    /// `(n, dim H_n(Ω²C), dim H_n(Ω²H))`.
    pub double_cobar_dims: Vec<(i32, usize, usize)>,
    pub checks: Vec<IdentityRow>,
}

impl FormalityReport {
    pub fn pass(&self) -> bool {
        self.cobar_dims.iter().chain(&self.double_cobar_dims).all(|(_, a, b)| a == b)
            && self.checks.iter().all(IdentityRow::pass)
    }
}

/// `Ωp: ΩC → ΩH` is a dg-algebra quasi-isomorphism through degree `n`, `Ω²C` and `Ω²H` have
/// equal homology, and `Γ` satisfies its identities.
pub fn verify_formality<K: Field>(c: &DgCoalgebra<K>, n: i32) -> Result<FormalityReport> {
    if let Some(g) = c.generators().find(|g| !c.cop_of(*g).is_zero()) {
        return Err(Error::NotReduced(c.gen_name(g).to_string()));
    }
    let (h, maps) = homology_coalgebra_with_maps(c);
    let gamma = CobarGamma::new(c, &maps)?;
    let oc = cobar(c.clone(), n + 1)?;
    let oh = cobar(h.clone(), n + 1)?;
    let mut checks = Vec::new();
    let words: Vec<&Word<GenId>> = oc.words_through(n + 1).collect();
    let chain = words
        .par_iter()
        .find_first(|w| oc.d_word(w).map_linear(|v| gamma.omega_p(v)) != gamma.omega_p(w).map_linear(|v| oh.d_word(v)))
        .map(|w| oc.word_name(w));
    checks.push(IdentityRow { name: "Omega p is a chain map".into(), checked: words.len(), counterexample: chain });
    let mut cobar_dims = Vec::new();
    let mut induced = None;
    for k in 0..=n {
        let hc = oc.homology(k)?;
        let hh = oh.homology(k)?;
        cobar_dims.push((k, hc.dimension, hh.dimension));
        if hc.dimension != hh.dimension {
            continue;
        }
        let cols: Vec<SparseVec<K>> = hc
            .representatives
            .iter()
            .map(|z| {
                let img = oc.from_vec(k, z).map_linear(|w| gamma.omega_p(w));
                let v = oh.to_vec(k, &img).expect("Omega p preserves degree");
                SparseVec::from_dense(&hh.coordinates(&v).expect("image of a cycle is a cycle"))
            })
            .collect();
        let m = SparseMatrix::from_columns(hh.dimension, &cols);
        if invert(&m).is_none() && induced.is_none() {
            induced = Some(format!("degree {k}"));
        }
    }
    checks.push(IdentityRow {
        name: "H(Omega p) is invertible".into(),
        checked: (n + 1) as usize,
        counterexample: induced,
    });
    checks.extend(gamma.check(&oc, &oh, n));
    let c2 = crate::cobar::double_cobar(c.clone(), n + 1)?.homology_dims(n)?;
    let h2 = crate::cobar::double_cobar(h, n + 1)?.homology_dims(n)?;
    let double_cobar_dims = (0..=n).map(|k| (k, c2[k as usize], h2[k as usize])).collect();
    Ok(FormalityReport { cobar_dims, double_cobar_dims, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgc::{parse_coalgebra, random_primitive, random_tensor_coalgebra};
    use crate::field::{F2, Q};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn contraction_examples() {
        let c = parse_coalgebra::<Q>("gen x 3; gen y 4; primitive").unwrap();
        let k = build_contraction(&c.complex());
        assert!(k.nu.is_zero());
        assert_eq!(k.p.block(3), SparseMatrix::identity(1));
        assert!(k.is_valid(10));

        let c = parse_coalgebra::<Q>("gen u 2; gen v 3; d v = u; primitive").unwrap();
        let k = build_contraction(&c.complex());
        assert_eq!(k.small.space.generators(), vec![]);
        assert_eq!(k.nu.block(2), SparseMatrix::from_dense(&[vec![Q::from_i64(-1)]]));
        assert!(k.is_valid(10));
    }

    #[test]
    fn random_contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let c = random_primitive::<Q, _>(&mut rng, 6);
            assert!(build_contraction(&c.complex()).is_valid(10));
            let c = random_tensor_coalgebra::<F2, _>(&mut rng, 8);
            assert!(build_contraction(&c.complex()).is_valid(10));
        }
    }

    #[test]
    fn homology_coalgebra_examples() {
        let c = parse_coalgebra::<Q>("gen x 3; gen y 4; primitive").unwrap();
        assert_eq!(homology_coalgebra_with_maps(&c).0, c);
        let c = parse_coalgebra::<Q>("gen u 2; gen v 3; d v = u; primitive").unwrap();
        assert!(homology_coalgebra_with_maps(&c).0.is_empty());
        let c = parse_coalgebra::<Q>("gen x 3; gen u 4; gen v 5; d v = u; primitive").unwrap();
        let h = homology_coalgebra_with_maps(&c).0;
        assert_eq!(h.len(), 1);
        assert!(h.is_primitive());
    }

    #[test]
    fn transfer_on_random_coalgebras() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let c = random_tensor_coalgebra::<Q, _>(&mut rng, 8);
            c.validate().unwrap();
            let t = transfer_ainfty(&c, 8);
            t.homology.validate().unwrap();
            for row in t.check() {
                assert!(row.pass(), "{row:?}\n{}", c.to_text());
            }
        }
    }

    #[test]
    fn primitive_input_has_no_higher_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_primitive::<Q, _>(&mut rng, 6);
        let t = transfer_ainfty(&c, 8);
        assert!(t.check().iter().all(IdentityRow::pass));
        assert!(t.partials.iter().flatten().all(Lin::is_zero));
    }

    /// A coalgebra carrying a triple Massey product: `∂₁ = 0` on `H` but `∂₂ m ≠ 0`.
    pub(crate) const MASSEY: &str = "field Q\n\
        gen a 2\ngen b 2\ngen c 2\ngen U 3\ngen W 3\ngen ab 4\ngen bc 4\ngen m 5\n\
        d ab = U\nd bc = W\ncop ab = a|b\ncop bc = b|c\ncop m = U|c - a|W\n";

    /// `∂₂ = p⊗³(δh⊗1 + 1⊗δh)δ i`, expanded by hand, against the tree recursion.
    fn direct_second_partial(c: &DgCoalgebra<Q>) -> usize {
        let t = transfer_ainfty(c, 8);
        assert!(t.check().iter().all(IdentityRow::pass));
        let maps = &t.maps;
        let trees = Trees { c, maps, memo: BTreeMap::new() };
        let h = |g: GenId| maps.gamma_letter(g);
        let mut nontrivial = 0;
        for hg in t.homology.generators() {
            let mut direct: Tensor<Q> = Lin::zero();
            for (x, a) in maps.i(hg).iter() {
                for (w, b) in trees.delta(*x).iter() {
                    let (u, v) = (w.0[0], w.0[1]);
                    for (y, e) in h(u).iter() {
                        for (z, f) in trees.delta(*y).iter() {
                            direct.add_term(Word(vec![z.0[0], z.0[1], v]), a.mul(b).mul(e).mul(f));
                        }
                    }
                    for (y, e) in h(v).iter() {
                        for (z, f) in trees.delta(*y).iter() {
                            direct.add_term(Word(vec![u, z.0[0], z.0[1]]), a.mul(b).mul(e).mul(f));
                        }
                    }
                }
            }
            let direct = p_tensor(maps, &direct);
            nontrivial += usize::from(!direct.is_zero());
            assert_eq!(direct, t.partials[2][hg.0]);
        }
        nontrivial
    }

    #[test]
    fn second_partial_matches_direct_expansion() {
        let c = parse_coalgebra::<Q>(MASSEY).unwrap();
        assert_eq!(direct_second_partial(&c), 1);
        let t = transfer_ainfty(&c, 8);
        let m = t.homology.id("m").unwrap();
        assert!(t.partials[1][m.0].is_zero());
        assert_eq!(t.partials[2][m.0].len(), 1);
        for seed in 0..6 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            direct_second_partial(&random_tensor_coalgebra::<Q, _>(&mut rng, 8));
        }
    }

    #[test]
    fn formality_of_primitive_coalgebras() {
        let c = parse_coalgebra::<Q>("gen u 4; gen v 5; d v = u; primitive").unwrap();
        let r = verify_formality(&c, 8).unwrap();
        assert!(r.pass(), "{r:?}");
        assert!(r.cobar_dims.iter().all(|(n, a, _)| *a == usize::from(*n == 0)));
        let c = parse_coalgebra::<F2>("gen x 3; gen u 4; gen v 5; d v = u; primitive").unwrap();
        let r = verify_formality(&c, 8).unwrap();
        assert!(r.pass(), "{r:?}");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let c = random_primitive::<Q, _>(&mut rng, 5);
            if c.gens_in_degree(2).is_empty() {
                let r = verify_formality(&c, 7).unwrap();
                assert!(r.pass(), "{r:?}");
            }
        }
    }
}
