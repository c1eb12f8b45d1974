//! Homotopy G-algebra operations on `Ω𝓗` for `𝓗 = ΩC` with `C` primitive.
//!
//! A word `[a₁|…|a_m]` of `Ω𝓗` is read as the token string `σa₁ σa₂ … σa_m` where `σ` has
//! degree `-1`. All signs below are Koszul signs of token permutations.
//!
//! `x ∪₁ y` inserts the word `y = [b₁|…|b_n]` into one letter `a_i` of `x`: the letter is
//! split by the iterated coproduct of `𝓗` into `a_i⁽¹⁾ ⊗ … ⊗ a_i⁽ⁿ⁾` and replaced by the
//! block `[a_i⁽¹⁾b₁ | … | a_i⁽ⁿ⁾b_n]`, with an overall factor `(-1)^{|x|+1}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::cobar::{Coalgebra, DoubleCobar};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{koszul_parity, Word};
use crate::lin::Lin;

/// A letter of `Ω𝓗`: a word of `𝓗 = ΩC`.
pub type Letter<C> = Word<<C as Coalgebra>::Gen>;
/// A word of `Ω𝓗`.
pub type HWord<C> = Word<Letter<C>>;
/// An element of `Ω𝓗`.
pub type HElem<C> = Lin<HWord<C>, <C as Coalgebra>::Scalar>;

/// The cup-1 product, `E_{1,2}`, bracket, restriction and Connes–Moscovici operator on a
/// double cobar construction.
pub struct Hga<'a, C: Coalgebra> {
    a: &'a DoubleCobar<C>,
    perturbation: Option<(HWord<C>, HWord<C>, HWord<C>)>,
}

impl<'a, C: Coalgebra> Clone for Hga<'a, C> {
    fn clone(&self) -> Self {
        Hga { a: self.a, perturbation: self.perturbation.clone() }
    }
}

impl<'a, C: Coalgebra> Hga<'a, C> {
    pub fn new(a: &'a DoubleCobar<C>) -> Self {
        Hga { a, perturbation: None }
    }

    /// A copy whose cup-1 product has one extra term `x ∪₁ y += z`; used for mutation tests.
    pub fn perturbed(&self, x: HWord<C>, y: HWord<C>, z: HWord<C>) -> Self {
        Hga { a: self.a, perturbation: Some((x, y, z)) }
    }

    pub fn carrier(&self) -> &'a DoubleCobar<C> {
        self.a
    }

    fn hdeg(&self, h: &Letter<C>) -> i32 {
        self.a.inner().word_degree(h)
    }

    pub fn degree(&self, w: &HWord<C>) -> i32 {
        self.a.word_degree(w)
    }

    fn sign(odd: bool) -> C::Scalar {
        C::Scalar::sign(odd)
    }

    /// Signed insertion of `y` into letter `i` of `x` (no overall factor).
    fn insert_at(&self, x: &HWord<C>, i: usize, y: &HWord<C>) -> HElem<C> {
        let n = y.len();
        let pre: i32 = x.0[..i].iter().map(|h| self.hdeg(h) - 1).sum();
        let post: i32 = x.0[i + 1..].iter().map(|h| self.hdeg(h) - 1).sum();
        let s0 = Self::sign((self.degree(y) * post + pre) & 1 == 1);
        // tokens: p_0..p_{n-1}, then σ_j b_j; target σ_j p_j b_j
        let mut degs: Vec<i32> = vec![0; n];
        for b in &y.0 {
            degs.push(-1);
            degs.push(self.hdeg(b));
        }
        let order: Vec<usize> = (0..n).flat_map(|j| [n + 2 * j, j, n + 2 * j + 1]).collect();
        let mut out = Lin::zero();
        for (parts, s) in self.a.inner().unshuffle(&x.0[i], n) {
            for (j, p) in parts.iter().enumerate() {
                degs[j] = self.hdeg(p);
            }
            let tok = Self::sign(koszul_parity(&degs, &order));
            let mut v = Vec::with_capacity(x.len() + n - 1);
            v.extend(x.0[..i].iter().cloned());
            v.extend(parts.iter().zip(&y.0).map(|(p, b)| p.concat(b)));
            v.extend(x.0[i + 1..].iter().cloned());
            out.add_term(Word(v), s.mul(&tok).mul(&s0));
        }
        out
    }

    /// `x ∪₁ y` on basis words.
    pub fn cup1_words(&self, x: &HWord<C>, y: &HWord<C>) -> HElem<C> {
        let mut out = Lin::zero();
        if x.is_unit() || y.is_unit() {
            return out;
        }
        for i in 0..x.len() {
            out += &self.insert_at(x, i, y);
        }
        let mut out = out.scaled(&Self::sign((self.degree(x) + 1) & 1 == 1));
        if let Some((px, py, pz)) = &self.perturbation {
            if px == x && py == y {
                out.add_term(pz.clone(), C::Scalar::one());
            }
        }
        out
    }

    pub fn cup1(&self, x: &HElem<C>, y: &HElem<C>) -> Result<HElem<C>> {
        if x.keys().chain(y.keys()).any(Word::is_unit) {
            return Err(Error::UnitArgument);
        }
        Ok(x.map_bilinear(y, |a, b| self.cup1_words(a, b)))
    }

    /// `E_{1,2}(x; y, z)`: `y` and `z` inserted into two different letters of `x`, `y` first.
    pub fn e12_words(&self, x: &HWord<C>, y: &HWord<C>, z: &HWord<C>) -> HElem<C> {
        let mut out = Lin::zero();
        if x.is_unit() || y.is_unit() || z.is_unit() {
            return out;
        }
        let shift = y.len() - 1;
        for i in 0..x.len() {
            let first = self.insert_at(x, i, y);
            for j in i + 1..x.len() {
                for (w, c) in first.iter() {
                    out.add_scaled(&self.insert_at(w, j + shift, z), c);
                }
            }
        }
        // product of the overall factors of the two cup-1 steps
        out.scaled(&Self::sign(self.degree(y) & 1 == 0))
    }

    pub fn e12(&self, x: &HElem<C>, y: &HElem<C>, z: &HElem<C>) -> Result<HElem<C>> {
        if x.keys().chain(y.keys()).chain(z.keys()).any(Word::is_unit) {
            return Err(Error::UnitArgument);
        }
        let mut out = Lin::zero();
        for (a, p) in x.iter() {
            for (b, q) in y.iter() {
                for (c, r) in z.iter() {
                    out.add_scaled(&self.e12_words(a, b, c), &p.mul(q).mul(r));
                }
            }
        }
        Ok(out)
    }

    /// `{x; y} = x ∪₁ y - (-1)^{(|x|+1)(|y|+1)} y ∪₁ x`.
    pub fn bracket_words(&self, x: &HWord<C>, y: &HWord<C>) -> HElem<C> {
        let s = Self::sign(((self.degree(x) + 1) * (self.degree(y) + 1)) & 1 == 1);
        let mut out = self.cup1_words(x, y);
        out.add_scaled(&self.cup1_words(y, x), &s.neg());
        out
    }

    pub fn bracket(&self, x: &HElem<C>, y: &HElem<C>) -> Result<HElem<C>> {
        if x.keys().chain(y.keys()).any(Word::is_unit) {
            return Err(Error::UnitArgument);
        }
        Ok(x.map_bilinear(y, |a, b| self.bracket_words(a, b)))
    }

    /// `ξ₁(x) = x ∪₁ x`, over `F2` only.
    pub fn xi1(&self, x: &HElem<C>) -> Result<HElem<C>> {
        if C::Scalar::CHARACTERISTIC != 2 {
            return Err(Error::WrongField("F2"));
        }
        self.cup1(x, x)
    }

    // --- Connes–Moscovici operator -------------------------------------------------------

    fn antipode_letter(&self, h: &Letter<C>) -> (Letter<C>, C::Scalar) {
        self.a.inner().antipode_word(h)
    }

    /// `σ₋₁[h₁|…|h_n] = Σ [S(h₁)⁽¹⁾h₂ | … | S(h₁)⁽ⁿ⁻¹⁾h_n]`, zero on one-letter words.
    fn sigma_m1(&self, h: &HWord<C>) -> HElem<C> {
        let n = h.len();
        let mut out = Lin::zero();
        if n < 2 {
            return out;
        }
        let k = n - 1;
        let (s1, ss) = self.antipode_letter(&h.0[0]);
        let mut degs: Vec<i32> = vec![0; k];
        for g in &h.0[1..] {
            degs.push(-1);
            degs.push(self.hdeg(g));
        }
        let order: Vec<usize> = (0..k).flat_map(|j| [k + 2 * j, j, k + 2 * j + 1]).collect();
        for (parts, s) in self.a.inner().unshuffle(&s1, k) {
            for (j, p) in parts.iter().enumerate() {
                degs[j] = self.hdeg(p);
            }
            let tok = Self::sign(koszul_parity(&degs, &order));
            let w: Vec<Letter<C>> = parts.iter().zip(&h.0[1..]).map(|(p, g)| p.concat(g)).collect();
            out.add_term(Word(w), ss.mul(&s).mul(&tok));
        }
        out
    }

    /// Cyclic operator `τ[g₁|…|g_k] = Σ [S(g₁)⁽¹⁾g₂ | … | S(g₁)⁽ᵏ⁻¹⁾g_k | S(g₁)⁽ᵏ⁾]`.
    /// Unit letters are allowed in input and output.
    fn tau(&self, g: &HWord<C>) -> HElem<C> {
        let k = g.len();
        let mut out = Lin::zero();
        if k == 0 {
            return out;
        }
        let (s1, ss) = self.antipode_letter(&g.0[0]);
        // tokens: σ_0, p_0..p_{k-1}, then σ_j g_j for j = 1..k-1
        let mut degs: Vec<i32> = vec![-1];
        degs.extend(std::iter::repeat_n(0, k));
        for x in &g.0[1..] {
            degs.push(-1);
            degs.push(self.hdeg(x));
        }
        let mut order: Vec<usize> = (1..k).flat_map(|j| [k + 2 * j - 1, j, k + 2 * j]).collect();
        order.push(0);
        order.push(k);
        for (parts, s) in self.a.inner().unshuffle(&s1, k) {
            for (j, p) in parts.iter().enumerate() {
                degs[1 + j] = self.hdeg(p);
            }
            let tok = Self::sign(koszul_parity(&degs, &order));
            let mut w: Vec<Letter<C>> = parts.iter().zip(&g.0[1..]).map(|(p, x)| p.concat(x)).collect();
            w.push(parts[k - 1].clone());
            out.add_term(Word(w), ss.mul(&s).mul(&tok));
        }
        out
    }

    /// `Δ_CM = N ∘ σ₋₁` with `N = Σ_{j=0}^{k} λ^j` on words of length `k` and `λ = -τ`.
    pub fn delta_cm_word(&self, h: &HWord<C>) -> HElem<C> {
        let first = self.sigma_m1(h);
        if first.is_zero() {
            return first;
        }
        let k = h.len() - 1;
        let mut total = first.clone();
        let mut cur = first;
        let minus = C::Scalar::one().neg();
        for _ in 0..k {
            cur = cur.map_linear(|w| self.tau(w)).scaled(&minus);
            total += &cur;
        }
        total
    }

    pub fn delta_cm(&self, x: &HElem<C>) -> HElem<C> {
        x.map_linear(|w| self.delta_cm_word(w))
    }
}

/// Outcome of one quantified identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityRow {
    pub name: String,
    pub checked: usize,
    /// Names of the first failing tuple, if any.
    pub counterexample: Option<String>,
}

impl IdentityRow {
    pub fn pass(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// All basis tuples of positive-degree words with total degree `<= n`.
fn tuples<W: Sync>(words: &[(W, i32)], arity: usize, n: i32) -> Vec<Vec<&W>> {
    let mut out: Vec<(Vec<&W>, i32)> = vec![(Vec::new(), 0)];
    for _ in 0..arity {
        let mut next = Vec::new();
        for (t, d) in &out {
            for (w, e) in words {
                if d + e <= n {
                    let mut t2 = t.clone();
                    t2.push(w);
                    next.push((t2, d + e));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(t, _)| t).collect()
}

fn run_check<C, F>(hga: &Hga<'_, C>, name: &str, tuples: &[Vec<&HWord<C>>], f: F) -> IdentityRow
where
    C: Coalgebra,
    F: Fn(&[&HWord<C>]) -> bool + Sync,
{
    let counterexample = tuples
        .par_iter()
        .find_first(|t| !f(t))
        .map(|t| t.iter().map(|w| hga.carrier().word_name(w)).collect::<Vec<_>>().join(" , "));
    IdentityRow { name: name.to_string(), checked: tuples.len(), counterexample }
}

/// Check the four defining relations of a homotopy G-algebra in characteristic 2 on all
/// basis tuples of total degree `<= n`:
/// `ab + ba = d(a∪₁b) + da∪₁b + a∪₁db`,
/// `(a∪₁b)∪₁c + a∪₁(b∪₁c) = E(a;b,c) + E(a;c,b)`,
/// `ab∪₁c + a(b∪₁c) + (a∪₁c)b = 0`,
/// `a∪₁bc + (a∪₁b)c + b(a∪₁c) = dE(a;b,c) + E(da;b,c) + E(a;db,c) + E(a;b,dc)`.
pub fn check_hga_identities<C: Coalgebra>(hga: &Hga<'_, C>, n: i32) -> Result<Vec<IdentityRow>> {
    if C::Scalar::CHARACTERISTIC != 2 {
        return Err(Error::WrongField("F2"));
    }
    let a = hga.carrier();
    let words: Vec<(HWord<C>, i32)> = a.words_through(n).map(|w| (w.clone(), a.word_degree(w))).collect();
    let pairs = tuples(&words, 2, n);
    let triples = tuples(&words, 3, n);
    let b = |w: &HWord<C>| -> HElem<C> { Lin::basis(w.clone()) };
    let cup = |x: &HElem<C>, y: &HElem<C>| x.map_bilinear(y, |p, q| hga.cup1_words(p, q));
    let e = |x: &HElem<C>, y: &HElem<C>, z: &HElem<C>| hga.e12(x, y, z).unwrap_or_default();
    let mul = |x: &HElem<C>, y: &HElem<C>| a.mul(x, y);
    let d = |x: &HElem<C>| a.d(x);

    let r1 = run_check(hga, "commutator = boundary of cup-1", &pairs, |t| {
        let (x, y) = (b(t[0]), b(t[1]));
        let lhs = mul(&x, &y) + mul(&y, &x);
        let rhs = d(&cup(&x, &y)) + cup(&d(&x), &y) + cup(&x, &d(&y));
        lhs == rhs
    });
    let r2 = run_check(hga, "cup-1 associator = E12 symmetrized", &triples, |t| {
        let (x, y, z) = (b(t[0]), b(t[1]), b(t[2]));
        let lhs = cup(&cup(&x, &y), &z) + cup(&x, &cup(&y, &z));
        lhs == e(&x, &y, &z) + e(&x, &z, &y)
    });
    let r3 = run_check(hga, "left Hirsch formula", &triples, |t| {
        let (x, y, z) = (b(t[0]), b(t[1]), b(t[2]));
        (cup(&mul(&x, &y), &z) + mul(&x, &cup(&y, &z)) + mul(&cup(&x, &z), &y)).is_zero()
    });
    let r4 = run_check(hga, "right Hirsch formula up to E12", &triples, |t| {
        let (x, y, z) = (b(t[0]), b(t[1]), b(t[2]));
        let lhs = cup(&x, &mul(&y, &z)) + mul(&cup(&x, &y), &z) + mul(&y, &cup(&x, &z));
        let rhs = d(&e(&x, &y, &z)) + e(&d(&x), &y, &z) + e(&x, &d(&y), &z) + e(&x, &y, &d(&z));
        lhs == rhs
    });
    Ok(vec![r1, r2, r3, r4])
}

/// Chain-level properties of `Δ_CM` on all words of degree `<= n`: square zero,
/// anticommutes with `d`, vanishes on one-letter words, outputs have no unit letters.
pub fn check_delta_cm<C: Coalgebra>(hga: &Hga<'_, C>, n: i32) -> Vec<IdentityRow> {
    let a = hga.carrier();
    let words: Vec<Vec<&HWord<C>>> = a.words_through(n).map(|w| vec![w]).collect();
    let b = |w: &HWord<C>| -> HElem<C> { Lin::basis(w.clone()) };
    vec![
        run_check(hga, "Delta^2 = 0", &words, |t| hga.delta_cm(&hga.delta_cm(&b(t[0]))).is_zero()),
        run_check(hga, "d Delta + Delta d = 0", &words, |t| {
            let x = b(t[0]);
            (a.d(&hga.delta_cm(&x)) + hga.delta_cm(&a.d(&x))).is_zero()
        }),
        run_check(hga, "Delta vanishes on one-letter words", &words, |t| {
            t[0].len() != 1 || hga.delta_cm_word(t[0]).is_zero()
        }),
        run_check(hga, "Delta output is normalized", &words, |t| {
            hga.delta_cm_word(t[0]).keys().all(|w| w.0.iter().all(|h| !h.is_unit()))
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobar::double_cobar;
    use crate::dgc::{double_suspension, DgCoalgebra};
    use crate::field::{F2, Q};
    use crate::graded::GradedSpace;

    fn sphere<K: Field>(deg: i32) -> DgCoalgebra<K> {
        double_suspension(&GradedSpace::from_generators([("x", deg)]).unwrap()).unwrap()
    }

    /// `b_m = s⁻¹(a^m)` as a one-letter word.
    fn b<K: Field>(a: &DoubleCobar<DgCoalgebra<K>>, m: usize) -> HWord<DgCoalgebra<K>> {
        let g = a.inner().words(2)[0].0[0];
        Word::letter(Word(vec![g; m]))
    }

    #[test]
    fn cup1_of_generators() {
        let a = double_cobar(sphere::<F2>(1), 6).unwrap();
        let h = Hga::new(&a);
        assert_eq!(h.cup1_words(&b(&a, 1), &b(&a, 1)), Lin::basis(b(&a, 2)));
        let q = double_cobar(sphere::<Q>(1), 6).unwrap();
        let hq = Hga::new(&q);
        assert_eq!(hq.cup1_words(&b(&q, 1), &b(&q, 1)), Lin::basis(b(&q, 2)));
        assert!(hq.bracket_words(&b(&q, 1), &b(&q, 1)).is_zero());
        // one-letter ∪₁ one-letter has the length of the second argument
        let y = b(&a, 1).concat(&b(&a, 1));
        assert!(h.cup1_words(&b(&a, 2), &y).keys().all(|w| w.len() == 2));
    }

    #[test]
    fn xi1_examples() {
        let a = double_cobar(sphere::<F2>(1), 6).unwrap();
        let h = Hga::new(&a);
        let x = Lin::basis(b(&a, 1));
        assert_eq!(h.xi1(&x).unwrap(), Lin::basis(b(&a, 2)));
        assert!(h.bracket(&x, &x).unwrap().is_zero());
        let q = double_cobar(sphere::<Q>(1), 4).unwrap();
        assert_eq!(Hga::new(&q).xi1(&Lin::basis(b(&q, 1))), Err(Error::WrongField("F2")));
        assert_eq!(h.cup1(&Lin::basis(Word::unit()), &x), Err(Error::UnitArgument));
    }

    #[test]
    fn cup1_is_associative_on_b1_mod_two() {
        let a = double_cobar(sphere::<F2>(1), 6).unwrap();
        let h = Hga::new(&a);
        let x = Lin::basis(b(&a, 1));
        let l = h.cup1(&h.cup1(&x, &x).unwrap(), &x).unwrap();
        let r = h.cup1(&x, &h.cup1(&x, &x).unwrap()).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn identities_hold_over_f2() {
        let a = double_cobar(sphere::<F2>(1), 6).unwrap();
        let h = Hga::new(&a);
        for row in check_hga_identities(&h, 5).unwrap() {
            assert!(row.pass(), "{row:?}");
            assert!(row.checked > 0);
        }
        let w = GradedSpace::from_generators([("x", 1), ("y", 2)]).unwrap();
        let a = double_cobar(double_suspension::<F2>(&w).unwrap(), 6).unwrap();
        for row in check_hga_identities(&Hga::new(&a), 5).unwrap() {
            assert!(row.pass(), "{row:?}");
        }
    }

    #[test]
    fn mutation_is_detected() {
        let a = double_cobar(sphere::<F2>(1), 6).unwrap();
        let x = b(&a, 1);
        let z = x.concat(&x).concat(&x);
        let h = Hga::new(&a).perturbed(x.clone(), x, z);
        let rows = check_hga_identities(&h, 5).unwrap();
        assert!(rows.iter().any(|r| !r.pass()));
    }

    #[test]
    fn delta_cm_properties() {
        let q = double_cobar(sphere::<Q>(2), 7).unwrap();
        let h = Hga::new(&q);
        assert!(h.delta_cm(&Lin::basis(Word::unit())).is_zero());
        for row in check_delta_cm(&h, 7) {
            assert!(row.pass(), "{row:?}");
        }
        let w = GradedSpace::from_generators([("x", 1), ("y", 2)]).unwrap();
        let q = double_cobar(double_suspension::<Q>(&w).unwrap(), 6).unwrap();
        for row in check_delta_cm(&Hga::new(&q), 6) {
            assert!(row.pass(), "{row:?}");
        }
    }

    /// Signed forms over Q: the associator of ∪₁ is the graded-symmetric E12 sum and the
    /// boundary of ∪₁ is the graded commutator.
    #[test]
    fn signed_relations_over_q() {
        let w = GradedSpace::from_generators([("x", 1), ("y", 2)]).unwrap();
        let q = double_cobar(double_suspension::<Q>(&w).unwrap(), 6).unwrap();
        let h = Hga::new(&q);
        let words: Vec<HWord<DgCoalgebra<Q>>> = q.words_through(4).cloned().collect();
        for x in &words {
            for y in &words {
                let (dx, dy) = (h.degree(x), h.degree(y));
                if dx + dy > 5 {
                    continue;
                }
                let (bx, by) = (Lin::basis(x.clone()), Lin::basis(y.clone()));
                let cup =
                    |u: &HElem<DgCoalgebra<Q>>, v: &HElem<DgCoalgebra<Q>>| u.map_bilinear(v, |p, r| h.cup1_words(p, r));
                let sx = Q::sign(dx & 1 == 1);
                let mut lhs = q.d(&cup(&bx, &by));
                lhs -= &cup(&q.d(&bx), &by);
                lhs.add_scaled(&cup(&bx, &q.d(&by)), &sx);
                let mut comm = q.mul(&bx, &by);
                comm.add_scaled(&q.mul(&by, &bx), &Q::sign((dx * dy) & 1 == 0));
                assert_eq!(lhs, comm.scaled(&sx.neg()), "{x:?} {y:?}");
                for z in &words {
                    let dz = h.degree(z);
                    if dx + dy + dz > 5 {
                        continue;
                    }
                    let bz = Lin::basis(z.clone());
                    let assoc = cup(&cup(&bx, &by), &bz) - cup(&bx, &cup(&by, &bz));
                    let mut e = h.e12_words(x, y, z);
                    e.add_scaled(&h.e12_words(x, z, y), &Q::sign(((dy + 1) * (dz + 1)) & 1 == 1));
                    assert_eq!(assoc, e);
                }
            }
        }
    }
}
