//! Homology of `Ω²C` with the induced product, bracket, restriction and BV operator, and its
//! comparison with the free models.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cobar::{double_cobar, Coalgebra, DoubleCobar};
use crate::dgc::{double_suspension, random_scalar, DgCoalgebra};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::free_model::{FreeModel, ModelElem, Mono, Shape};
use crate::graded::{GradedSpace, Word};
use crate::hga::{HElem, HWord, Hga, IdentityRow};
use crate::lin::Lin;
use crate::linalg::{Echelon, Homology, SparseVec};

/// A homogeneous homology class in coordinates of the chosen basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class<K> {
    pub degree: i32,
    pub coords: Vec<K>,
}

impl<K: Field> Class<K> {
    pub fn zero(degree: i32, dim: usize) -> Self {
        Class { degree, coords: vec![K::zero(); dim] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Field::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        Class { degree: self.degree, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scaled(&self, c: &K) -> Self {
        Class { degree: self.degree, coords: self.coords.iter().map(|a| a.mul(c)).collect() }
    }

    fn to_sparse(&self) -> SparseVec<K> {
        SparseVec::from_dense(&self.coords)
    }
}

/// `H_*(Ω²C)` through degree `top`, with cycle representatives and the operations induced
/// from the chain level.
pub struct HomologyAlgebra<'a, C: Coalgebra> {
    hga: Hga<'a, C>,
    top: i32,
    homs: Vec<Homology<C::Scalar>>,
    reps: Vec<Vec<HElem<C>>>,
}

impl<'a, C: Coalgebra> Clone for HomologyAlgebra<'a, C> {
    fn clone(&self) -> Self {
        HomologyAlgebra { hga: self.hga.clone(), top: self.top, homs: self.homs.clone(), reps: self.reps.clone() }
    }
}

impl<'a, C: Coalgebra> HomologyAlgebra<'a, C> {
    /// Needs `top < cutoff` of the double cobar.
    pub fn new(a: &'a DoubleCobar<C>, top: i32) -> Result<Self> {
        if top >= a.cutoff() {
            return Err(Error::CutoffTooSmall(a.cutoff()));
        }
        let homs: Vec<Homology<C::Scalar>> = (0..=top).into_par_iter().map(|n| a.homology(n)).collect::<Result<_>>()?;
        let reps = homs
            .iter()
            .enumerate()
            .map(|(n, h)| h.representatives.iter().map(|v| a.from_vec(n as i32, v)).collect())
            .collect();
        Ok(HomologyAlgebra { hga: Hga::new(a), top, homs, reps })
    }

    pub fn carrier(&self) -> &'a DoubleCobar<C> {
        self.hga.carrier()
    }

    pub fn hga(&self) -> &Hga<'a, C> {
        &self.hga
    }

    pub fn top(&self) -> i32 {
        self.top
    }

    pub fn dim(&self, n: i32) -> usize {
        if n < 0 || n > self.top {
            return 0;
        }
        self.homs[n as usize].dimension
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.top).map(|n| self.dim(n)).collect()
    }

    pub fn basis(&self, n: i32) -> Vec<Class<C::Scalar>> {
        let d = self.dim(n);
        (0..d)
            .map(|i| {
                let mut c = Class::zero(n, d);
                c.coords[i] = C::Scalar::one();
                c
            })
            .collect()
    }

    /// Basis classes of degree `1..=n`.
    pub fn basis_through(&self, n: i32) -> Vec<Class<C::Scalar>> {
        (1..=n.min(self.top)).flat_map(|d| self.basis(d)).collect()
    }

    pub fn zero(&self, n: i32) -> Class<C::Scalar> {
        Class::zero(n, self.dim(n))
    }

    pub fn unit(&self) -> Class<C::Scalar> {
        self.classify(&Lin::basis(Word::unit()), 0).expect("the unit is a cycle")
    }

    pub fn representative(&self, x: &Class<C::Scalar>) -> HElem<C> {
        let mut out = Lin::zero();
        for (c, r) in x.coords.iter().zip(&self.reps[x.degree as usize]) {
            if !c.is_zero() {
                out.add_scaled(r, c);
            }
        }
        out
    }

    /// Class of a cycle of degree `n`.
    pub fn classify(&self, z: &HElem<C>, n: i32) -> Result<Class<C::Scalar>> {
        if n < 0 || n > self.top {
            return Err(Error::DegreeMismatch(format!("degree {n} is outside 0..={}", self.top)));
        }
        let v = self.carrier().to_vec(n, z)?;
        let coords =
            self.homs[n as usize].coordinates(&v).ok_or_else(|| Error::NotACycle(self.carrier().elem_name(z)))?;
        Ok(Class { degree: n, coords })
    }

    /// Class of a one-letter word `[h]`.
    pub fn letter_class(&self, h: Word<C::Gen>) -> Result<Class<C::Scalar>> {
        let w: HWord<C> = Word::letter(h);
        let n = self.carrier().word_degree(&w);
        self.classify(&Lin::basis(w), n)
    }

    fn out_degree(&self, n: i32) -> Result<()> {
        if n > self.top {
            return Err(Error::DegreeMismatch(format!("result degree {n} exceeds {}", self.top)));
        }
        Ok(())
    }

    pub fn product(&self, x: &Class<C::Scalar>, y: &Class<C::Scalar>) -> Result<Class<C::Scalar>> {
        let n = x.degree + y.degree;
        self.out_degree(n)?;
        let z = self.carrier().mul(&self.representative(x), &self.representative(y));
        self.classify(&z, n)
    }

    /// `[x;y]₁`; zero when either argument has degree 0.
    pub fn bracket(&self, x: &Class<C::Scalar>, y: &Class<C::Scalar>) -> Result<Class<C::Scalar>> {
        let n = x.degree + y.degree + 1;
        self.out_degree(n)?;
        if x.degree == 0 || y.degree == 0 {
            return Ok(self.zero(n));
        }
        let z = self.hga.bracket(&self.representative(x), &self.representative(y))?;
        self.classify(&z, n)
    }

    /// `ξ₁(x)`, over `F2`.
    pub fn xi(&self, x: &Class<C::Scalar>) -> Result<Class<C::Scalar>> {
        if x.degree == 0 {
            return Err(Error::UnitArgument);
        }
        let n = 2 * x.degree + 1;
        self.out_degree(n)?;
        let z = self.hga.xi1(&self.representative(x))?;
        self.classify(&z, n)
    }

    /// `H(Δ_CM)(x)`.
    pub fn delta(&self, x: &Class<C::Scalar>) -> Result<Class<C::Scalar>> {
        let n = x.degree + 1;
        self.out_degree(n)?;
        let z = self.hga.delta_cm(&self.representative(x));
        self.classify(&z, n)
    }

    /// Replace a representative by `rep + d(chain)`.
    pub fn shift_representative(&mut self, degree: i32, index: usize, chain: &HElem<C>) {
        let b = self.carrier().d(chain);
        self.reps[degree as usize][index] += &b;
    }

    pub fn class_name(&self, x: &Class<C::Scalar>) -> String {
        let terms: Vec<String> = x
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let r = self.carrier().elem_name(&self.reps[x.degree as usize][i]);
                if c.is_one() {
                    format!("[{r}]")
                } else {
                    format!("{c}*[{r}]")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn sign<K: Field>(odd: bool) -> K {
    K::sign(odd)
}

type Check<'f, K> = dyn Fn(&[&Class<K>]) -> Result<bool> + Sync + 'f;

/// Basis tuples of positive-degree classes whose degrees plus `extra` stay `<= n`.
fn class_tuples<K: Clone>(basis: &[Class<K>], arity: usize, extra: i32, n: i32) -> Vec<Vec<&Class<K>>> {
    let mut out: Vec<(Vec<&Class<K>>, i32)> = vec![(Vec::new(), extra)];
    for _ in 0..arity {
        let mut next = Vec::new();
        for (t, d) in &out {
            for c in basis {
                if d + c.degree <= n {
                    let mut t2 = t.clone();
                    t2.push(c);
                    next.push((t2, d + c.degree));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(t, _)| t).collect()
}

fn class_row<C: Coalgebra>(
    h: &HomologyAlgebra<'_, C>,
    name: &str,
    tuples: &[Vec<&Class<C::Scalar>>],
    f: &Check<'_, C::Scalar>,
) -> IdentityRow {
    let counterexample = tuples.par_iter().find_map_first(|t| match f(t) {
        Ok(true) => None,
        Ok(false) => Some(t.iter().map(|x| h.class_name(x)).collect::<Vec<_>>().join(" , ")),
        Err(e) => Some(format!("{}: {e}", t.iter().map(|x| h.class_name(x)).collect::<Vec<_>>().join(" , "))),
    });
    IdentityRow { name: name.into(), checked: tuples.len(), counterexample }
}

/// Gerstenhaber axioms on basis classes of degree `<= n`: graded commutativity, bracket
/// symmetry, Poisson and Jacobi. Signs vanish in characteristic 2.
pub fn check_gerstenhaber<C: Coalgebra>(h: &HomologyAlgebra<'_, C>, n: i32) -> Vec<IdentityRow> {
    let basis = h.basis_through(n);
    let pairs0 = class_tuples(&basis, 2, 0, n);
    let pairs1 = class_tuples(&basis, 2, 1, n);
    let triples = class_tuples(&basis, 3, 1, n);
    let triples2 = class_tuples(&basis, 3, 2, n);
    type K<C> = <C as Coalgebra>::Scalar;
    vec![
        class_row(h, "graded commutativity", &pairs0, &|t| {
            let (x, y) = (t[0], t[1]);
            Ok(h.product(x, y)? == h.product(y, x)?.scaled(&sign::<K<C>>(x.degree * y.degree % 2 != 0)))
        }),
        class_row(h, "bracket symmetry", &pairs1, &|t| {
            let (x, y) = (t[0], t[1]);
            let s = sign::<K<C>>((x.degree + 1) * (y.degree + 1) % 2 == 0);
            Ok(h.bracket(x, y)? == h.bracket(y, x)?.scaled(&s))
        }),
        class_row(h, "Poisson", &triples, &|t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            let lhs = h.bracket(x, &h.product(y, z)?)?;
            let s = sign::<K<C>>((x.degree + 1) * y.degree % 2 != 0);
            let rhs = h.product(&h.bracket(x, y)?, z)?.add(&h.product(y, &h.bracket(x, z)?)?.scaled(&s));
            Ok(lhs == rhs)
        }),
        class_row(h, "Jacobi", &triples2, &|t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            let lhs = h.bracket(x, &h.bracket(y, z)?)?;
            let s = sign::<K<C>>((x.degree + 1) * (y.degree + 1) % 2 != 0);
            let rhs = h.bracket(&h.bracket(x, y)?, z)?.add(&h.bracket(y, &h.bracket(x, z)?)?.scaled(&s));
            Ok(lhs == rhs)
        }),
    ]
}

/// Axioms of a 2-restricted Gerstenhaber algebra on `F2` basis classes of degree `<= n`.
pub fn check_restricted<C: Coalgebra>(h: &HomologyAlgebra<'_, C>, n: i32) -> Result<Vec<IdentityRow>> {
    if C::Scalar::CHARACTERISTIC != 2 {
        return Err(Error::WrongField("F2"));
    }
    let basis = h.basis_through(n);
    let singles: Vec<Vec<&Class<C::Scalar>>> = basis.iter().filter(|x| 2 * x.degree < n).map(|x| vec![x]).collect();
    let pairs1 = class_tuples(&basis, 2, 1, n);
    let triples1 = class_tuples(&basis, 3, 1, n);
    let triples2 = class_tuples(&basis, 3, 2, n);
    // [ξ(x);y] has degree 2|x| + |y| + 2
    let xi_pairs: Vec<Vec<&Class<C::Scalar>>> =
        pairs1.iter().filter(|t| 2 * t[0].degree + t[1].degree + 2 <= n).cloned().collect();
    let sum_pairs: Vec<Vec<&Class<C::Scalar>>> =
        pairs1.iter().filter(|t| t[0].degree == t[1].degree && 2 * t[0].degree < n).cloned().collect();
    let prod_pairs: Vec<Vec<&Class<C::Scalar>>> =
        pairs1.iter().filter(|t| 2 * (t[0].degree + t[1].degree) < n).cloned().collect();
    let mut rows = vec![
        class_row(h, "bracket is symmetric", &pairs1, &|t| Ok(h.bracket(t[0], t[1])? == h.bracket(t[1], t[0])?)),
        class_row(h, "xi(kx) = k^2 xi(x)", &singles, &|t| {
            let x = t[0];
            let zero = x.scaled(&C::Scalar::zero());
            Ok(h.xi(&zero)?.is_zero() && h.xi(&x.scaled(&C::Scalar::one()))? == h.xi(x)?)
        }),
        class_row(h, "Jacobi", &triples2, &|t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            let s = h.bracket(x, &h.bracket(y, z)?)?.add(&h.bracket(y, &h.bracket(z, x)?)?);
            Ok(s.add(&h.bracket(z, &h.bracket(x, y)?)?).is_zero())
        }),
        class_row(h, "[xi(x);y] = [x;[x;y]]", &xi_pairs, &|t| {
            let (x, y) = (t[0], t[1]);
            Ok(h.bracket(&h.xi(x)?, y)? == h.bracket(x, &h.bracket(x, y)?)?)
        }),
        class_row(h, "xi(x+y) = xi(x) + [x;y] + xi(y)", &sum_pairs, &|t| {
            let (x, y) = (t[0], t[1]);
            Ok(h.xi(&x.add(y))? == h.xi(x)?.add(&h.bracket(x, y)?).add(&h.xi(y)?))
        }),
        class_row(h, "[x;yz] = [x;y]z + y[x;z]", &triples1, &|t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            let rhs = h.product(&h.bracket(x, y)?, z)?.add(&h.product(y, &h.bracket(x, z)?)?);
            Ok(h.bracket(x, &h.product(y, z)?)? == rhs)
        }),
        class_row(h, "xi(xy) = x^2 xi(y) + xi(x) y^2 + x[x;y]y", &prod_pairs, &|t| {
            let (x, y) = (t[0], t[1]);
            let xx = h.product(x, x)?;
            let yy = h.product(y, y)?;
            let rhs = h
                .product(&xx, &h.xi(y)?)?
                .add(&h.product(&h.xi(x)?, &yy)?)
                .add(&h.product(&h.product(x, &h.bracket(x, y)?)?, y)?);
            Ok(h.xi(&h.product(x, y)?)? == rhs)
        }),
    ];
    rows.retain(|r| r.checked > 0);
    Ok(rows)
}

/// Re-run every induced operation after adding seeded random boundaries to representatives,
/// one boundary per trial, and compare class coordinates with the unperturbed tables.
pub fn check_well_defined<C: Coalgebra>(
    h: &HomologyAlgebra<'_, C>,
    n: i32,
    trials: usize,
    seed: u64,
) -> Result<IdentityRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = h.carrier();
    let candidates: Vec<i32> =
        (1..=n.min(h.top)).filter(|d| h.dim(*d) > 0 && !a.differential_matrix(d + 1).is_zero()).collect();
    let basis = h.basis_through(n);
    let char2 = C::Scalar::CHARACTERISTIC == 2;
    let mut checked = 0;
    for _ in 0..trials {
        let Some(&d) = candidates.get(rng.gen_range(0..candidates.len().max(1))) else { break };
        let index = rng.gen_range(0..h.dim(d));
        let words = a.words(d + 1);
        let mut chain: HElem<C> = Lin::zero();
        while a.d(&chain).is_zero() {
            for _ in 0..3 {
                let w = words[rng.gen_range(0..words.len())].clone();
                chain.add_term(w, random_scalar(&mut rng));
            }
        }
        let mut moved = h.clone();
        moved.shift_representative(d, index, &chain);
        let x = &h.basis(d)[index];
        let mut failure: Option<String> = None;
        let mut same = |what: &str, l: Result<Class<C::Scalar>>, r: Result<Class<C::Scalar>>| -> Result<()> {
            checked += 1;
            if l? != r? && failure.is_none() {
                failure = Some(format!("{what} with [{}] shifted in degree {d}", h.class_name(x)));
            }
            Ok(())
        };
        for y in basis.iter().filter(|y| y.degree + d <= h.top) {
            same("product", h.product(x, y), moved.product(x, y))?;
            same("product", h.product(y, x), moved.product(y, x))?;
            if y.degree + d < h.top {
                same("bracket", h.bracket(x, y), moved.bracket(x, y))?;
                same("bracket", h.bracket(y, x), moved.bracket(y, x))?;
            }
        }
        if char2 && 2 * d < h.top {
            same("xi", h.xi(x), moved.xi(x))?;
        }
        if !char2 && d < h.top {
            same("Delta", h.delta(x), moved.delta(x))?;
        }
        if let Some(f) = failure {
            return Ok(IdentityRow { name: "representative change".into(), checked, counterexample: Some(f) });
        }
    }
    Ok(IdentityRow { name: "representative change".into(), checked, counterexample: None })
}

// ---------------------------------------------------------------------------------------------
// comparison with the free model

/// The map from the free model to homology sending `x ∈ W` to the class of `[[s²x]]`,
/// extended multiplicatively and through brackets and restrictions.
pub struct ModelMap<'h, 'a, K: Field> {
    pub h: &'h HomologyAlgebra<'a, DgCoalgebra<K>>,
    pub model: &'h FreeModel<K>,
    generator_classes: Vec<Class<K>>,
}

impl<'h, 'a, K: Field> ModelMap<'h, 'a, K> {
    pub fn new(h: &'h HomologyAlgebra<'a, DgCoalgebra<K>>, model: &'h FreeModel<K>) -> Result<Self> {
        let c = h.carrier().inner().inner();
        let mut product_classes: Vec<Class<K>> = Vec::with_capacity(model.products.len());
        for p in &model.products {
            let class = match p.shape {
                Shape::Generator(_) => h.letter_class(Word::letter(c.id(&p.name)?))?,
                Shape::Bracket(x, y) => h.bracket(&product_classes[x], &product_classes[y])?,
                Shape::Square(y) => h.bracket(&product_classes[y], &product_classes[y])?,
            };
            product_classes.push(class);
        }
        let mut generator_classes: Vec<Class<K>> = Vec::with_capacity(model.generators.len());
        for (i, g) in model.generators.iter().enumerate() {
            let class =
                if g.xi_power == 0 { product_classes[g.product].clone() } else { h.xi(&generator_classes[i - 1])? };
            generator_classes.push(class);
        }
        Ok(ModelMap { h, model, generator_classes })
    }

    pub fn apply_mono(&self, m: &Mono) -> Result<Class<K>> {
        let mut acc = self.h.unit();
        for g in m {
            acc = self.h.product(&acc, &self.generator_classes[*g])?;
        }
        Ok(acc)
    }

    pub fn apply(&self, x: &ModelElem<K>, degree: i32) -> Result<Class<K>> {
        let mut acc = self.h.zero(degree);
        for (m, c) in x.iter() {
            acc = acc.add(&self.apply_mono(m)?.scaled(c));
        }
        Ok(acc)
    }

    /// Rank of the map in degree `n`.
    pub fn rank(&self, n: i32) -> Result<usize> {
        let mut ech = Echelon::new();
        for m in self.model.monomials(n) {
            ech.insert(&self.apply_mono(m)?.to_sparse());
        }
        Ok(ech.rank())
    }

    /// Compatibility with bracket, restriction (`F2`) and `Δ` (`Q`) on model basis elements.
    pub fn check_morphism(&self, n: i32) -> Vec<IdentityRow> {
        let model = self.model;
        let monos: Vec<&Mono> = model.monomials_through(n).collect();
        let pairs: Vec<(&Mono, &Mono)> = monos
            .iter()
            .flat_map(|a| monos.iter().map(move |b| (*a, *b)))
            .filter(|(a, b)| model.degree(a) + model.degree(b) < n)
            .collect();
        let name2 = |a: &Mono, b: &Mono| format!("{} , {}", model.mono_name(a), model.mono_name(b));
        let mut rows = vec![IdentityRow {
            name: "map preserves the bracket".into(),
            checked: pairs.len(),
            counterexample: pairs
                .par_iter()
                .find_first(|(a, b)| {
                    let d = model.degree(a) + model.degree(b) + 1;
                    let ok = (|| -> Result<bool> {
                        let l = self.apply(&model.bracket_mono(a, b), d)?;
                        Ok(l == self.h.bracket(&self.apply_mono(a)?, &self.apply_mono(b)?)?)
                    })();
                    !matches!(ok, Ok(true))
                })
                .map(|(a, b)| name2(a, b)),
        }];
        let singles: Vec<&Mono> = monos
            .iter()
            .copied()
            .filter(|m| if K::CHARACTERISTIC == 2 { 2 * model.degree(m) < n } else { model.degree(m) < n })
            .collect();
        let (name, f): (&str, Box<dyn Fn(&Mono) -> Result<bool> + Sync>) = if K::CHARACTERISTIC == 2 {
            (
                "map preserves xi",
                Box::new(|m: &Mono| {
                    let d = 2 * model.degree(m) + 1;
                    Ok(self.apply(&model.xi_mono(m)?, d)? == self.h.xi(&self.apply_mono(m)?)?)
                }),
            )
        } else {
            (
                "map intertwines the canonical Delta with H(Delta_CM)",
                Box::new(|m: &Mono| {
                    let d = model.degree(m) + 1;
                    Ok(self.apply(&model.delta_mono(m)?, d)? == self.h.delta(&self.apply_mono(m)?)?)
                }),
            )
        };
        rows.push(IdentityRow {
            name: name.into(),
            checked: singles.len(),
            counterexample: singles.par_iter().find_first(|m| !matches!(f(m), Ok(true))).map(|m| model.mono_name(m)),
        });
        rows
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FreenessRow {
    pub degree: i32,
    pub homology: usize,
    pub model: usize,
    /// Rank of the map from the free model, i.e. the dimension generated by `s⁻²W`.
    pub generated: usize,
    pub model_basis: Vec<String>,
}

impl FreenessRow {
    pub fn pass(&self) -> bool {
        self.homology == self.model && self.generated == self.model
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FreenessReport {
    pub rows: Vec<FreenessRow>,
    pub checks: Vec<IdentityRow>,
}

impl FreenessReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(FreenessRow::pass) && self.checks.iter().all(IdentityRow::pass)
    }
}

/// Compare `H_*(Ω² double_suspension(W))` with the free model through degree `n`: dimensions,
/// rank of the comparison map and its compatibility with the operations.
pub fn verify_freeness<K: Field>(w: &GradedSpace, n: i32) -> Result<FreenessReport> {
    let c = double_suspension::<K>(w)?;
    let a = double_cobar(c, n + 1)?;
    let h = HomologyAlgebra::new(&a, n)?;
    let model = FreeModel::<K>::new(w, n)?;
    let map = ModelMap::new(&h, &model)?;
    let rows = (0..=n)
        .into_par_iter()
        .map(|d| {
            Ok(FreenessRow {
                degree: d,
                homology: h.dim(d),
                model: model.monomials(d).len(),
                generated: map.rank(d)?,
                model_basis: model.monomials(d).iter().map(|m| model.mono_name(m)).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FreenessReport { rows, checks: map.check_morphism(n) })
}

#[derive(Clone, Debug, Serialize)]
pub struct BvReport {
    pub dims: Vec<usize>,
    pub checks: Vec<IdentityRow>,
}

impl BvReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(IdentityRow::pass)
    }
}

/// BV checks on `H_*(Ω²C; Q)` through degree `n`: `H(Δ_CM)` vanishes on the classes of
/// one-letter words `[[c]]`, `Δ² = 0`, and `Δ(xy) - Δ(x)y - (-1)^{|x|}xΔ(y) = (-1)^{|x|}[x;y]`
/// on class pairs. For a double suspension the comparison with the canonical free BV model
/// is added.
pub fn verify_bv<K: Field>(c: &DgCoalgebra<K>, n: i32) -> Result<BvReport> {
    if K::CHARACTERISTIC == 2 {
        return Err(Error::WrongField("Q"));
    }
    let a = double_cobar(c.clone(), n + 1)?;
    let h = HomologyAlgebra::new(&a, n)?;
    let letters: Vec<Class<K>> = c
        .generators()
        .filter(|g| c.gen_degree(*g) - 2 <= n)
        .filter_map(|g| h.letter_class(Word::letter(g)).ok())
        .collect();
    let basis = h.basis_through(n);
    let singles: Vec<Vec<&Class<K>>> = basis.iter().filter(|x| x.degree + 2 <= n).map(|x| vec![x]).collect();
    let pairs = class_tuples(&basis, 2, 1, n);
    let letter_refs: Vec<Vec<&Class<K>>> = letters.iter().filter(|x| x.degree < n).map(|x| vec![x]).collect();
    let mut checks = vec![
        class_row(&h, "H(Delta) vanishes on generator classes", &letter_refs, &|t| Ok(h.delta(t[0])?.is_zero())),
        class_row(&h, "Delta^2 = 0", &singles, &|t| Ok(h.delta(&h.delta(t[0])?)?.is_zero())),
        class_row(&h, "Delta(xy) - Delta(x)y - (-1)^|x| x Delta(y) = (-1)^|x| [x;y]", &pairs, &|t| {
            let (x, y) = (t[0], t[1]);
            let s = sign::<K>(x.degree % 2 != 0);
            let lhs = h
                .delta(&h.product(x, y)?)?
                .add(&h.product(&h.delta(x)?, y)?.scaled(&K::one().neg()))
                .add(&h.product(x, &h.delta(y)?)?.scaled(&s.neg()));
            Ok(lhs == h.bracket(x, y)?.scaled(&s))
        }),
    ];
    if c.is_primitive() && c.has_zero_differential() {
        let w = GradedSpace::from_generators(c.generators().map(|g| (c.gen_name(g).to_string(), c.gen_degree(g) - 2)))?;
        let model = FreeModel::<K>::new(&w, n)?;
        let map = ModelMap::new(&h, &model)?;
        let iso = (0..=n)
            .map(|d| Ok(h.dim(d) == model.monomials(d).len() && map.rank(d)? == h.dim(d)))
            .collect::<Result<Vec<bool>>>()?;
        checks.push(IdentityRow {
            name: "isomorphic to the free model".into(),
            checked: iso.len(),
            counterexample: iso.iter().position(|ok| !ok).map(|d| format!("degree {d}")),
        });
        checks.extend(map.check_morphism(n));
    }
    Ok(BvReport { dims: h.dims(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F2, Q};

    fn space(gens: &[(&str, i32)]) -> GradedSpace {
        GradedSpace::from_generators(gens.iter().map(|(n, d)| (n.to_string(), *d))).unwrap()
    }

    fn b<K: Field>(h: &HomologyAlgebra<'_, DgCoalgebra<K>>, m: usize) -> Result<Class<K>> {
        let g = h.carrier().inner().inner().id("x").unwrap();
        h.letter_class(Word(vec![g; m]))
    }

    #[test]
    fn induced_operation_examples() {
        let c = double_suspension::<F2>(&space(&[("x", 1)])).unwrap();
        let a = double_cobar(c, 7).unwrap();
        let h = HomologyAlgebra::new(&a, 6).unwrap();
        let b1 = b(&h, 1).unwrap();
        let b2 = b(&h, 2).unwrap();
        let sq = h.product(&b1, &b1).unwrap();
        assert!(!sq.is_zero());
        assert_eq!(h.xi(&b1).unwrap(), b2);
        assert!(h.bracket(&h.unit(), &b1).unwrap().is_zero());
        assert!(h.bracket(&b1, &h.unit()).unwrap().is_zero());
        assert!(matches!(h.xi(&h.unit()), Err(Error::UnitArgument)));

        let c = double_suspension::<Q>(&space(&[("x", 1)])).unwrap();
        let a = double_cobar(c, 7).unwrap();
        let h = HomologyAlgebra::new(&a, 6).unwrap();
        let b1 = b(&h, 1).unwrap();
        assert!(h.product(&b1, &b1).unwrap().is_zero());
        assert_eq!(h.dims(), [1, 1, 0, 0, 0, 0, 0]);
        // b₂ is not a cycle over Q
        assert!(matches!(b(&h, 2), Err(Error::NotACycle(_))));
    }

    #[test]
    fn freeness_over_f2() {
        let r = verify_freeness::<F2>(&space(&[("x", 1)]), 8).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.rows[3].model_basis, ["x^3", "xi(x)"]);
        assert_eq!(r.rows[3].homology, 2);
    }

    #[test]
    fn freeness_over_q() {
        let r = verify_freeness::<Q>(&space(&[("x", 2)]), 8).unwrap();
        assert!(r.pass(), "{r:?}");
        let dims: Vec<usize> = r.rows.iter().map(|x| x.homology).collect();
        assert_eq!(dims, [1, 0, 1, 0, 1, 1, 1, 1, 1]);
        let r = verify_freeness::<Q>(&space(&[("x", 1)]), 6).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn axioms_on_homology() {
        let c = double_suspension::<F2>(&space(&[("x", 1)])).unwrap();
        let a = double_cobar(c, 7).unwrap();
        let h = HomologyAlgebra::new(&a, 6).unwrap();
        for row in check_restricted(&h, 6).unwrap().into_iter().chain(check_gerstenhaber(&h, 6)) {
            assert!(row.pass(), "{row:?}");
        }
        let row = check_well_defined(&h, 6, 20, 7).unwrap();
        assert!(row.pass() && row.checked > 0, "{row:?}");
    }

    #[test]
    fn bv_over_q() {
        let c = double_suspension::<Q>(&space(&[("x", 2)])).unwrap();
        let r = verify_bv(&c, 6).unwrap();
        for row in &r.checks {
            assert!(row.pass(), "{row:?}");
        }
    }
}
