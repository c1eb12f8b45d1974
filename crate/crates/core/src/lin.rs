//! Finite linear combinations over an ordered basis.

use std::collections::btree_map::{self, BTreeMap, Entry};
use std::fmt;

use crate::field::Field;

/// A finitely supported linear combination `Σ c_b · b`. Zero coefficients are never stored and
/// terms iterate in basis order.
#[derive(Clone, PartialEq, Eq)]
pub struct Lin<B: Ord, K> {
    terms: BTreeMap<B, K>,
}

impl<B: Ord, K> Default for Lin<B, K> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<B: Ord + Clone, K: Field> Lin<B, K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B) -> Self {
        Self::term(b, K::one())
    }

    pub fn term(b: B, c: K) -> Self {
        let mut out = Self::zero();
        out.add_term(b, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &B) -> K {
        self.terms.get(b).cloned().unwrap_or_else(K::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, B, K> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, b: B, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: &K) {
        if c.is_zero() {
            return;
        }
        for (b, x) in other.iter() {
            self.add_term(b.clone(), x.mul(c));
        }
    }

    pub fn scaled(&self, c: &K) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&K::one().neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &K::one().neg());
        out
    }

    /// Apply a linear map given on basis elements.
    pub fn map_linear<B2, F>(&self, mut f: F) -> Lin<B2, K>
    where
        B2: Ord + Clone,
        F: FnMut(&B) -> Lin<B2, K>,
    {
        let mut out = Lin::zero();
        for (b, c) in self.iter() {
            out.add_scaled(&f(b), c);
        }
        out
    }

    /// Apply a bilinear map given on pairs of basis elements.
    pub fn map_bilinear<B2, B3, F>(&self, other: &Lin<B2, K>, mut f: F) -> Lin<B3, K>
    where
        B2: Ord + Clone,
        B3: Ord + Clone,
        F: FnMut(&B, &B2) -> Lin<B3, K>,
    {
        let mut out = Lin::zero();
        for (a, x) in self.iter() {
            for (b, y) in other.iter() {
                out.add_scaled(&f(a, b), &x.mul(y));
            }
        }
        out
    }

    /// Keep only terms whose basis element satisfies `pred`.
    pub fn filtered(&self, mut pred: impl FnMut(&B) -> bool) -> Self {
        Lin { terms: self.terms.iter().filter(|(b, _)| pred(b)).map(|(b, c)| (b.clone(), c.clone())).collect() }
    }
}

impl<B: Ord + Clone, K: Field> std::ops::AddAssign<&Lin<B, K>> for Lin<B, K> {
    fn add_assign(&mut self, rhs: &Lin<B, K>) {
        self.add_scaled(rhs, &K::one());
    }
}

impl<B: Ord + Clone, K: Field> std::ops::SubAssign<&Lin<B, K>> for Lin<B, K> {
    fn sub_assign(&mut self, rhs: &Lin<B, K>) {
        self.add_scaled(rhs, &K::one().neg());
    }
}

impl<B: Ord + Clone, K: Field> std::ops::Add for Lin<B, K> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<B: Ord + Clone, K: Field> std::ops::Sub for Lin<B, K> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl<B: Ord + Clone, K: Field> FromIterator<(B, K)> for Lin<B, K> {
    fn from_iter<I: IntoIterator<Item = (B, K)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (b, c) in iter {
            out.add_term(b, c);
        }
        out
    }
}

impl<B: Ord + fmt::Display, K: Field> fmt::Display for Lin<B, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *c == K::one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{c}*{b}")?;
            }
        }
        Ok(())
    }
}

impl<B: Ord + fmt::Debug, K: fmt::Debug> fmt::Debug for Lin<B, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F2, Q};

    #[test]
    fn cancellation_removes_terms() {
        let mut x: Lin<u32, Q> = Lin::term(1, Q::from_i64(2));
        x.add_term(1, Q::from_i64(-2));
        assert!(x.is_zero());
        let mut y: Lin<u32, F2> = Lin::basis(3);
        y.add_term(3, F2::one());
        assert!(y.is_zero());
    }

    #[test]
    fn bilinear_extension() {
        let a: Lin<u32, Q> = [(1, Q::from_i64(1)), (2, Q::from_i64(3))].into_iter().collect();
        let b: Lin<u32, Q> = Lin::term(10, Q::from_i64(2));
        let p = a.map_bilinear(&b, |x, y| Lin::basis(x + y));
        assert_eq!(p.coeff(&11), Q::from_i64(2));
        assert_eq!(p.coeff(&12), Q::from_i64(6));
    }
}
