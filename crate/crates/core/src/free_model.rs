//! Free Gerstenhaber models on a graded space `W`, used as an independent oracle for the
//! homology of `Ω²(k ⊕ s²W)`.
//!
//! The degree-1 Lie algebra is `L₁(W) = s⁻¹L(sW)` with `[x;y]₁ = s⁻¹[sx, sy]`, where `L(sW)`
//! is the free Lie algebra inside the tensor algebra `T(sW)`. Over `F2` the restriction is
//! `ξ₁(x) = s⁻¹((sx)²)`. Every computation on `L₁` is carried out in `T(sW)` and read back in
//! the basis of elementary products by exact elimination.
//!
//! Over `Q` the model is the graded-commutative algebra `S(L₁(W))`; over `F2` it is the
//! polynomial algebra on `{ξ₁ᵏ(y)}` for `y` running through the elementary products.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{koszul_parity, GradedSpace};
use crate::hga::IdentityRow;
use crate::lin::Lin;
use crate::linalg::{Echelon, SparseVec};

/// How an elementary product is built from earlier ones (indices into the product list).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    Generator(usize),
    Bracket(usize, usize),
    /// `[y;y]` for `y` with `sy` of odd degree, only over `Q`.
    Square(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementaryProduct {
    pub shape: Shape,
    pub weight: usize,
    /// Degree in `L₁(W)`: leaf degrees plus `weight - 1`.
    pub degree: i32,
    pub name: String,
}

/// Generators of `W` ordered by degree, then name.
fn ordered_generators(w: &GradedSpace) -> Vec<(String, i32)> {
    let mut g = w.generators();
    g.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    g
}

/// All elementary products of degree `<= maxdeg`, weight by weight. `[x;y]` is admissible
/// when `x < y` and, if `y = [z;t]`, `z <= x`; the order is the order of creation, which
/// increases with weight. With `squares`, `[y;y]` is adjoined for every product `y` of even
/// degree (odd degree after suspension).
pub fn elementary_products(w: &GradedSpace, maxdeg: i32, squares: bool) -> Vec<ElementaryProduct> {
    let mut out: Vec<ElementaryProduct> = ordered_generators(w)
        .into_iter()
        .enumerate()
        .filter(|(_, (_, d))| *d <= maxdeg)
        .map(|(i, (name, degree))| ElementaryProduct { shape: Shape::Generator(i), weight: 1, degree, name })
        .collect();
    let max_weight = ((maxdeg + 1) / 2).max(1) as usize;
    for weight in 2..=max_weight {
        let mut fresh = Vec::new();
        for (yi, y) in out.iter().enumerate() {
            if y.weight >= weight || matches!(y.shape, Shape::Square(_)) {
                continue;
            }
            for (xi, x) in out.iter().enumerate().take(yi) {
                if x.weight + y.weight != weight || matches!(x.shape, Shape::Square(_)) {
                    continue;
                }
                if let Shape::Bracket(z, _) = y.shape {
                    if z > xi {
                        continue;
                    }
                }
                let degree = x.degree + y.degree + 1;
                if degree <= maxdeg {
                    fresh.push(ElementaryProduct {
                        shape: Shape::Bracket(xi, yi),
                        weight,
                        degree,
                        name: format!("[{};{}]", x.name, y.name),
                    });
                }
            }
        }
        out.extend(fresh);
    }
    if squares {
        let sq: Vec<ElementaryProduct> = out
            .iter()
            .enumerate()
            .filter(|(_, y)| y.degree % 2 == 0 && 2 * y.degree < maxdeg)
            .map(|(i, y)| ElementaryProduct {
                shape: Shape::Square(i),
                weight: 2 * y.weight,
                degree: 2 * y.degree + 1,
                name: format!("[{};{}]", y.name, y.name),
            })
            .collect();
        out.extend(sq);
    }
    out
}

/// Word in the generators of `sW`.
type TWord = Vec<usize>;
type TElem<K> = Lin<TWord, K>;

fn t_mul<K: Field>(a: &TElem<K>, b: &TElem<K>) -> TElem<K> {
    a.map_bilinear(b, |x, y| {
        let mut v = x.clone();
        v.extend_from_slice(y);
        Lin::basis(v)
    })
}

/// Graded commutator in `T(sW)`; `da`, `db` are the degrees in `sW`.
fn t_commutator<K: Field>(a: &TElem<K>, da: i32, b: &TElem<K>, db: i32) -> TElem<K> {
    let mut out = t_mul(a, b);
    out.add_scaled(&t_mul(b, a), &K::sign((da * db) & 1 == 0));
    out
}

/// A generator of the free model's symmetric algebra.
#[derive(Clone, Debug, Serialize)]
pub struct ModelGenerator {
    pub name: String,
    pub degree: i32,
    /// Index of the underlying elementary product.
    pub product: usize,
    /// Number of restrictions applied (always 0 over `Q`).
    pub xi_power: u32,
}

/// A monomial: generator indices in non-decreasing order.
pub type Mono = Vec<usize>;
pub type ModelElem<K> = Lin<Mono, K>;

/// The free Gerstenhaber (over `Q`) or 2-restricted Gerstenhaber (over `F2`) algebra on `W`,
/// truncated at `maxdeg`.
pub struct FreeModel<K: Field> {
    pub w: GradedSpace,
    pub maxdeg: i32,
    pub products: Vec<ElementaryProduct>,
    pub generators: Vec<ModelGenerator>,
    t_elems: Vec<TElem<K>>,
    /// Per `sW`-degree: echelon of the generators' tensor images and the generator per tag.
    solvers: BTreeMap<i32, (Echelon<K>, Vec<usize>, BTreeMap<TWord, usize>)>,
    gen_brackets: HashMap<(usize, usize), Lin<usize, K>>,
    gen_xi: Vec<Option<usize>>,
    bracket_memo: Mutex<HashMap<(Mono, Mono), ModelElem<K>>>,
    monomials: BTreeMap<i32, Vec<Mono>>,
}

impl<K: Field> fmt::Debug for FreeModel<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeModel").field("maxdeg", &self.maxdeg).field("generators", &self.generators).finish()
    }
}

impl<K: Field> FreeModel<K> {
    pub fn new(w: &GradedSpace, maxdeg: i32) -> Result<Self> {
        if let Some(d) = w.min_degree().filter(|d| *d < 1) {
            return Err(Error::DegreeZeroClass(d));
        }
        let char2 = K::CHARACTERISTIC == 2;

        let products = elementary_products(w, maxdeg, !char2);
        // tensor images of the products
        let mut p_elems: Vec<TElem<K>> = Vec::with_capacity(products.len());
        for p in &products {
            let e = match p.shape {
                Shape::Generator(i) => Lin::basis(vec![i]),
                Shape::Bracket(x, y) => {
                    t_commutator(&p_elems[x], products[x].degree + 1, &p_elems[y], products[y].degree + 1)
                }
                Shape::Square(y) => {
                    let d = products[y].degree + 1;
                    t_commutator(&p_elems[y], d, &p_elems[y], d)
                }
            };
            p_elems.push(e);
        }
        let mut generators = Vec::new();
        let mut t_elems = Vec::new();
        for (i, p) in products.iter().enumerate() {
            let mut e = p_elems[i].clone();
            let mut degree = p.degree;
            let mut k = 0;
            loop {
                generators.push(ModelGenerator {
                    name: match k {
                        0 => p.name.clone(),
                        1 => format!("xi({})", p.name),
                        _ => format!("xi^{k}({})", p.name),
                    },
                    degree,
                    product: i,
                    xi_power: k,
                });
                t_elems.push(e.clone());
                degree = 2 * degree + 1;
                if !char2 || degree > maxdeg {
                    break;
                }
                e = t_mul(&e, &e);
                k += 1;
            }
        }
        let mut model = FreeModel {
            w: w.clone(),
            maxdeg,
            products,
            generators,
            t_elems,
            solvers: BTreeMap::new(),
            gen_brackets: HashMap::new(),
            gen_xi: Vec::new(),
            bracket_memo: Mutex::new(HashMap::new()),
            monomials: BTreeMap::new(),
        };
        model.build_solvers()?;
        model.build_tables();
        model.monomials = model.enumerate_monomials();
        Ok(model)
    }

    /// Index the generators' tensor images per degree; they must be independent.
    fn build_solvers(&mut self) -> Result<()> {
        let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            by_degree.entry(g.degree + 1).or_default().push(i);
        }
        for (d, gens) in by_degree {
            let mut index: BTreeMap<TWord, usize> = BTreeMap::new();
            for g in &gens {
                for w in self.t_elems[*g].keys() {
                    let n = index.len();
                    index.entry(w.clone()).or_insert(n);
                }
            }
            let mut ech = Echelon::new();
            for g in &gens {
                if !ech.insert(&self.t_vec(&index, &self.t_elems[*g])) {
                    return Err(Error::IdentityFailure(format!(
                        "elementary products of degree {} are dependent in the tensor algebra",
                        d - 1
                    )));
                }
            }
            self.solvers.insert(d, (ech, gens, index));
        }
        Ok(())
    }

    fn t_vec(&self, index: &BTreeMap<TWord, usize>, e: &TElem<K>) -> SparseVec<K> {
        SparseVec::from_pairs(e.iter().filter_map(|(w, c)| index.get(w).map(|i| (*i, c.clone()))).collect())
    }

    /// Express a Lie element of `T(sW)` in the generator basis. Words outside the span of the
    /// generators mean the element is not in the Lie algebra.
    fn solve_t(&self, e: &TElem<K>, degree: i32) -> Option<Lin<usize, K>> {
        if e.is_zero() {
            return Some(Lin::zero());
        }
        let (ech, gens, index) = self.solvers.get(&degree)?;
        if e.keys().any(|w| !index.contains_key(w)) {
            return None;
        }
        let (r, acc) = ech.reduce(&self.t_vec(index, e));
        r.is_zero().then(|| acc.entries().iter().map(|(t, c)| (gens[*t], c.clone())).collect())
    }

    fn build_tables(&mut self) {
        let n = self.generators.len();
        let mut brackets = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                let (da, db) = (self.generators[a].degree + 1, self.generators[b].degree + 1);
                if da + db - 1 > self.maxdeg {
                    continue;
                }
                let e = t_commutator(&self.t_elems[a], da, &self.t_elems[b], db);
                let v = self.solve_t(&e, da + db).unwrap_or_else(|| {
                    panic!(
                        "bracket of {} and {} left the Lie algebra",
                        self.generators[a].name, self.generators[b].name
                    )
                });
                if !v.is_zero() {
                    brackets.insert((a, b), v);
                }
            }
        }
        self.gen_brackets = brackets;
        self.gen_xi = (0..n)
            .map(|a| {
                let g = &self.generators[a];
                if K::CHARACTERISTIC != 2 || 2 * g.degree + 1 > self.maxdeg {
                    return None;
                }
                self.generators.iter().position(|h| h.product == g.product && h.xi_power == g.xi_power + 1)
            })
            .collect();
    }

    fn enumerate_monomials(&self) -> BTreeMap<i32, Vec<Mono>> {
        let mut out: BTreeMap<i32, Vec<Mono>> = BTreeMap::new();
        let char2 = K::CHARACTERISTIC == 2;
        fn rec(
            gens: &[ModelGenerator],
            start: usize,
            cur: &mut Mono,
            deg: i32,
            max: i32,
            char2: bool,
            out: &mut BTreeMap<i32, Vec<Mono>>,
        ) {
            out.entry(deg).or_default().push(cur.clone());
            for g in start..gens.len() {
                let d = gens[g].degree;
                if deg + d > max {
                    continue;
                }
                // odd generators square to zero over Q
                let next = if !char2 && d % 2 == 1 { g + 1 } else { g };
                cur.push(g);
                rec(gens, next, cur, deg + d, max, char2, out);
                cur.pop();
            }
        }
        rec(&self.generators, 0, &mut Vec::new(), 0, self.maxdeg, char2, &mut out);
        for v in out.values_mut() {
            v.sort();
        }
        out
    }

    pub fn monomials(&self, n: i32) -> &[Mono] {
        self.monomials.get(&n).map_or(&[], Vec::as_slice)
    }

    /// Monomials of degree `1..=n`.
    pub fn monomials_through(&self, n: i32) -> impl Iterator<Item = &Mono> {
        (1..=n.min(self.maxdeg)).flat_map(move |d| self.monomials(d).iter())
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.maxdeg).map(|n| self.monomials(n).len()).collect()
    }

    pub fn degree(&self, m: &Mono) -> i32 {
        m.iter().map(|g| self.generators[*g].degree).sum()
    }

    pub fn generator(&self, g: usize) -> ModelElem<K> {
        Lin::basis(vec![g])
    }

    /// Index of the model generator for a generator of `W`.
    pub fn generator_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| {
            g.xi_power == 0 && matches!(self.products[g.product].shape, Shape::Generator(_)) && g.name == name
        })
    }

    pub fn mono_name(&self, m: &Mono) -> String {
        if m.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < m.len() {
            let j = m[i..].iter().take_while(|g| **g == m[i]).count();
            let name = &self.generators[m[i]].name;
            parts.push(if j == 1 { name.clone() } else { format!("{name}^{j}") });
            i += j;
        }
        parts.join(" ")
    }

    /// Product of monomials with the Koszul sign of sorting the factors.
    pub fn mul_mono(&self, a: &Mono, b: &Mono) -> ModelElem<K> {
        let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
        if self.degree(&all) > self.maxdeg {
            return Lin::zero();
        }
        let degrees: Vec<i32> = all.iter().map(|g| self.generators[*g].degree).collect();
        let mut order: Vec<usize> = (0..all.len()).collect();
        order.sort_by_key(|&i| all[i]);
        let odd = K::CHARACTERISTIC != 2 && koszul_parity(&degrees, &order);
        all.sort();
        if K::CHARACTERISTIC != 2 && all.windows(2).any(|p| p[0] == p[1] && self.generators[p[0]].degree % 2 == 1) {
            return Lin::zero();
        }
        Lin::term(all, K::sign(odd))
    }

    pub fn mul(&self, x: &ModelElem<K>, y: &ModelElem<K>) -> ModelElem<K> {
        x.map_bilinear(y, |a, b| self.mul_mono(a, b))
    }

    fn gen_bracket(&self, a: usize, b: usize) -> ModelElem<K> {
        self.gen_brackets.get(&(a, b)).map_or_else(Lin::zero, |v| v.map_linear(|g| Lin::basis(vec![*g])))
    }

    /// `[a;b]₁` on monomials, extended from generators by the Poisson rule
    /// `[x; yz] = [x;y]z + (-1)^{(|x|+1)|y|} y[x;z]` and the symmetry
    /// `[a;b] = -(-1)^{(|a|+1)(|b|+1)} [b;a]`.
    pub fn bracket_mono(&self, a: &Mono, b: &Mono) -> ModelElem<K> {
        if a.is_empty() || b.is_empty() || self.degree(a) + self.degree(b) + 1 > self.maxdeg {
            return Lin::zero();
        }
        if a.len() == 1 && b.len() == 1 {
            return self.gen_bracket(a[0], b[0]);
        }
        let key = (a.clone(), b.clone());
        if let Some(v) = self.bracket_memo.lock().expect("memo lock").get(&key) {
            return v.clone();
        }
        let (da, db) = (self.degree(a), self.degree(b));
        let out = if b.len() >= 2 {
            let y = vec![b[0]];
            let rest = b[1..].to_vec();
            let dy = self.generators[b[0]].degree;
            let mut out = self.mul(&self.bracket_mono(a, &y), &Lin::basis(rest.clone()));
            let s = K::sign(((da + 1) * dy) & 1 == 1);
            out.add_scaled(&self.mul(&Lin::basis(y), &self.bracket_mono(a, &rest)), &s);
            out
        } else {
            self.bracket_mono(b, a).scaled(&K::sign(((da + 1) * (db + 1)) & 1 == 0))
        };
        self.bracket_memo.lock().expect("memo lock").insert(key, out.clone());
        out
    }

    pub fn bracket(&self, x: &ModelElem<K>, y: &ModelElem<K>) -> ModelElem<K> {
        x.map_bilinear(y, |a, b| self.bracket_mono(a, b))
    }

    /// `ξ₁` on a monomial (over `F2`): `ξ(xy) = x²ξ(y) + ξ(x)y² + x[x;y]y`.
    pub fn xi_mono(&self, m: &Mono) -> Result<ModelElem<K>> {
        if K::CHARACTERISTIC != 2 {
            return Err(Error::WrongField("F2"));
        }
        if m.is_empty() {
            return Err(Error::UnitArgument);
        }
        if 2 * self.degree(m) + 1 > self.maxdeg {
            return Ok(Lin::zero());
        }
        if m.len() == 1 {
            return Ok(self.gen_xi[m[0]].map_or_else(Lin::zero, |g| Lin::basis(vec![g])));
        }
        let x: ModelElem<K> = Lin::basis(vec![m[0]]);
        let y: ModelElem<K> = Lin::basis(m[1..].to_vec());
        let mut out = self.mul(&self.mul(&x, &x), &self.xi_mono(&m[1..].to_vec())?);
        out += &self.mul(&self.xi_mono(&vec![m[0]])?, &self.mul(&y, &y));
        out += &self.mul(&self.mul(&x, &self.bracket(&x, &y)), &y);
        Ok(out)
    }

    /// `ξ₁` on an element: `ξ(Σ mᵢ) = Σ ξ(mᵢ) + Σ_{i<j} [mᵢ;mⱼ]`.
    pub fn xi(&self, x: &ModelElem<K>) -> Result<ModelElem<K>> {
        let terms: Vec<&Mono> = x.keys().collect();
        let mut out = Lin::zero();
        for (i, a) in terms.iter().enumerate() {
            out += &self.xi_mono(a)?;
            for b in &terms[i + 1..] {
                out += &self.bracket_mono(a, b);
            }
        }
        Ok(out)
    }

    /// Canonical BV operator (over `Q`): zero on generators and
    /// `Δ(x·m) = (-1)^{|x|}(xΔ(m) + [x;m])` for a generator `x`.
    pub fn delta_mono(&self, m: &Mono) -> Result<ModelElem<K>> {
        if K::CHARACTERISTIC == 2 {
            return Err(Error::WrongField("Q"));
        }
        if m.len() <= 1 {
            return Ok(Lin::zero());
        }
        let x: ModelElem<K> = Lin::basis(vec![m[0]]);
        let rest = m[1..].to_vec();
        let mut out = self.mul(&x, &self.delta_mono(&rest)?);
        out += &self.bracket_mono(&vec![m[0]], &rest);
        Ok(out.scaled(&K::sign(self.generators[m[0]].degree & 1 == 1)))
    }

    pub fn delta(&self, x: &ModelElem<K>) -> Result<ModelElem<K>> {
        let mut out = Lin::zero();
        for (m, c) in x.iter() {
            out.add_scaled(&self.delta_mono(m)?, c);
        }
        Ok(out)
    }

    /// Number of elementary products per `L₁`-degree `0..=maxdeg`.
    pub fn lie_dims(&self) -> Vec<usize> {
        let mut v = vec![0; self.maxdeg as usize + 1];
        for p in &self.products {
            v[p.degree as usize] += 1;
        }
        v
    }

    /// Structure identities on all basis tuples whose total degree stays `<= n`.
    pub fn check_structure(&self, n: i32) -> Vec<IdentityRow> {
        let monos: Vec<(Mono, i32)> = self.monomials_through(n).map(|m| (m.clone(), self.degree(m))).collect();
        let mut pairs: Vec<(&Mono, &Mono)> = Vec::new();
        let mut triples: Vec<(&Mono, &Mono, &Mono)> = Vec::new();
        for (a, da) in &monos {
            for (b, db) in &monos {
                if da + db < n {
                    pairs.push((a, b));
                }
                for (c, dc) in &monos {
                    if da + db + dc + 2 <= n {
                        triples.push((a, b, c));
                    }
                }
            }
        }
        let b = |m: &Mono| -> ModelElem<K> { Lin::basis(m.clone()) };
        let deg = |m: &Mono| self.degree(m);
        let row2 = |name: &str, f: &(dyn Fn(&Mono, &Mono) -> bool + Sync)| IdentityRow {
            name: name.into(),
            checked: pairs.len(),
            counterexample: pairs
                .par_iter()
                .find_first(|(x, y)| !f(x, y))
                .map(|(x, y)| format!("{} , {}", self.mono_name(x), self.mono_name(y))),
        };
        let row3 = |name: &str, f: &(dyn Fn(&Mono, &Mono, &Mono) -> bool + Sync)| IdentityRow {
            name: name.into(),
            checked: triples.len(),
            counterexample: triples
                .par_iter()
                .find_first(|(x, y, z)| !f(x, y, z))
                .map(|(x, y, z)| format!("{} , {} , {}", self.mono_name(x), self.mono_name(y), self.mono_name(z))),
        };
        let mut rows = vec![
            row2("graded commutativity", &|x, y| {
                self.mul_mono(x, y) == self.mul_mono(y, x).scaled(&K::sign((deg(x) * deg(y)) & 1 == 1))
            }),
            row2("bracket symmetry", &|x, y| {
                self.bracket_mono(x, y)
                    == self.bracket_mono(y, x).scaled(&K::sign(((deg(x) + 1) * (deg(y) + 1)) & 1 == 0))
            }),
            row3("Poisson", &|x, y, z| {
                let lhs = self.bracket(&b(x), &self.mul_mono(y, z));
                let mut rhs = self.mul(&self.bracket_mono(x, y), &b(z));
                rhs.add_scaled(&self.mul(&b(y), &self.bracket_mono(x, z)), &K::sign(((deg(x) + 1) * deg(y)) & 1 == 1));
                lhs == rhs
            }),
            row3("Jacobi", &|x, y, z| {
                let lhs = self.bracket(&b(x), &self.bracket_mono(y, z));
                let mut rhs = self.bracket(&self.bracket_mono(x, y), &b(z));
                rhs.add_scaled(
                    &self.bracket(&b(y), &self.bracket_mono(x, z)),
                    &K::sign(((deg(x) + 1) * (deg(y) + 1)) & 1 == 1),
                );
                lhs == rhs
            }),
        ];
        if K::CHARACTERISTIC == 2 {
            let xi = |e: &ModelElem<K>| self.xi(e).expect("F2");
            rows.push(row2("[x;x] = 0", &|x, _| self.bracket_mono(x, x).is_zero()));
            rows.push(row2("[xi(x);y] = [x;[x;y]]", &|x, y| {
                self.bracket(&xi(&b(x)), &b(y)) == self.bracket(&b(x), &self.bracket_mono(x, y))
            }));
            rows.push(row2("xi(x+y) = xi(x) + [x;y] + xi(y)", &|x, y| {
                x == y || xi(&(b(x) + b(y))) == xi(&b(x)) + self.bracket_mono(x, y) + xi(&b(y))
            }));
            rows.push(row2("xi(xy) = x^2 xi(y) + xi(x) y^2 + x[x;y]y", &|x, y| {
                let (bx, by) = (b(x), b(y));
                let lhs = xi(&self.mul_mono(x, y));
                let rhs = self.mul(&self.mul(&bx, &bx), &xi(&by))
                    + self.mul(&xi(&bx), &self.mul(&by, &by))
                    + self.mul(&self.mul(&bx, &self.bracket_mono(x, y)), &by);
                lhs == rhs
            }));
        } else {
            let delta = |e: &ModelElem<K>| self.delta(e).expect("Q");
            let singles: Vec<&Mono> = monos.iter().map(|(m, _)| m).filter(|m| deg(m) + 2 <= n).collect();
            rows.push(IdentityRow {
                name: "Delta^2 = 0".into(),
                checked: singles.len(),
                counterexample: singles
                    .par_iter()
                    .find_first(|m| !delta(&delta(&b(m))).is_zero())
                    .map(|m| self.mono_name(m)),
            });
            rows.push(row2("Delta(xy) = Delta(x)y + (-1)^|x| x Delta(y) + (-1)^|x| [x;y]", &|x, y| {
                let s = K::sign(deg(x) & 1 == 1);
                let lhs = delta(&self.mul_mono(x, y));
                let mut rhs = self.mul(&delta(&b(x)), &b(y));
                rhs.add_scaled(&self.mul(&b(x), &delta(&b(y))), &s);
                rhs.add_scaled(&self.bracket_mono(x, y), &s);
                lhs == rhs
            }));
            rows.push(row2("Delta[x;y] = [Delta x;y] + (-1)^(|x|-1) [x;Delta y]", &|x, y| {
                let lhs = delta(&self.bracket_mono(x, y));
                let mut rhs = self.bracket(&delta(&b(x)), &b(y));
                rhs.add_scaled(&self.bracket(&b(x), &delta(&b(y))), &K::sign((deg(x) - 1) & 1 == 1));
                lhs == rhs
            }));
        }
        rows
    }
}

// ---------------------------------------------------------------------------------------------
// power series

type Series = Vec<i128>;

fn series_mul(a: &Series, b: &Series) -> Series {
    let n = a.len();
    let mut out = vec![0; n];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(1 - t^d)^{-c}` truncated to `len` terms.
fn polynomial_factor(d: usize, c: i128, len: usize) -> Series {
    let mut out = vec![0; len];
    out[0] = 1;
    for _ in 0..c {
        for i in d..len {
            out[i] += out[i - d];
        }
    }
    out
}

/// `(1 + t^d)^c` truncated to `len` terms.
fn exterior_factor(d: usize, c: i128, len: usize) -> Series {
    let mut out = vec![0; len];
    out[0] = 1;
    for _ in 0..c {
        for i in (d..len).rev() {
            out[i] += out[i - d];
        }
    }
    out
}

/// Dimensions `c_n` of the free Lie algebra on `sW`, by inverting the Poincaré–Birkhoff–Witt
/// factorization of `1/(1 - P_{sW}(t))`. In characteristic 2 every factor is polynomial.
pub fn lie_dims_pbw(w: &GradedSpace, char2: bool, top: usize) -> Vec<i128> {
    let len = top + 1;
    let mut tensor = vec![0i128; len];
    tensor[0] = 1;
    for n in 1..len {
        for (_, d) in w.generators() {
            let s = (d + 1) as usize;
            if s <= n {
                tensor[n] += tensor[n - s];
            }
        }
    }
    let mut c = vec![0i128; len];
    let mut acc: Series = vec![0; len];
    acc[0] = 1;
    for n in 1..len {
        c[n] = tensor[n] - acc[n];
        let factor = if char2 || n % 2 == 0 { polynomial_factor(n, c[n], len) } else { exterior_factor(n, c[n], len) };
        acc = series_mul(&acc, &factor);
    }
    c
}

/// Hilbert series of the free model from the PBW Lie dimensions, without enumerating
/// anything: over `Q` even classes are polynomial and odd ones exterior; over `F2` every
/// class `y` of `L₁`-degree `m` contributes polynomial factors in degrees `2ᵏ(m+1) - 1`.
pub fn series_from_pbw(w: &GradedSpace, char2: bool, top: usize) -> Vec<i128> {
    let len = top + 1;
    let c = lie_dims_pbw(w, char2, top + 1);
    let mut acc: Series = vec![0; len];
    acc[0] = 1;
    for (n, &cn) in c.iter().enumerate().skip(1) {
        if cn == 0 {
            continue;
        }
        let m = n - 1;
        if char2 {
            let mut d = m;
            while d <= top && d > 0 {
                acc = series_mul(&acc, &polynomial_factor(d, cn, len));
                d = 2 * d + 1;
            }
        } else if m > 0 && m <= top {
            let f = if m % 2 == 0 { polynomial_factor(m, cn, len) } else { exterior_factor(m, cn, len) };
            acc = series_mul(&acc, &f);
        }
    }
    acc
}

/// Outcome of comparing the two Hilbert series computations.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesComparison {
    pub enumerated: Vec<usize>,
    pub pbw: Vec<usize>,
    pub lie_enumerated: Vec<usize>,
    pub lie_pbw: Vec<usize>,
}

/// Hilbert series of the free model through degree `n`, computed by counting enumerated
/// monomials and by PBW inversion; any disagreement is an oracle breach.
pub fn hilbert_series<K: Field>(w: &GradedSpace, n: i32) -> Result<SeriesComparison> {
    let model = FreeModel::<K>::new(w, n)?;
    let char2 = K::CHARACTERISTIC == 2;
    let enumerated = model.dims();
    let pbw: Vec<usize> = series_from_pbw(w, char2, n as usize).into_iter().map(|x| x as usize).collect();
    let lie_enumerated = model.lie_dims();
    let lie_pbw: Vec<usize> = lie_dims_pbw(w, char2, n as usize + 1).into_iter().skip(1).map(|x| x as usize).collect();
    for k in 0..=n as usize {
        if enumerated[k] != pbw[k] {
            return Err(Error::OracleBreach { degree: k as i32, enumerated: enumerated[k], series: pbw[k] });
        }
        if lie_enumerated[k] != lie_pbw[k] {
            return Err(Error::OracleBreach { degree: k as i32, enumerated: lie_enumerated[k], series: lie_pbw[k] });
        }
    }
    Ok(SeriesComparison { enumerated, pbw, lie_enumerated, lie_pbw })
}
