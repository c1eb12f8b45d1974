//! Sparse exact linear algebra: echelon forms, kernels, solving and homology.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// A sparse vector: sorted `(index, coefficient)` pairs, no zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseVec<K>(Vec<(usize, K)>);

impl<K> Default for SparseVec<K> {
    fn default() -> Self {
        SparseVec(Vec::new())
    }
}

impl<K: Field> SparseVec<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        SparseVec(vec![(i, K::one())])
    }

    /// Build from arbitrary pairs; duplicates are summed and zeros dropped.
    pub fn from_pairs(mut pairs: Vec<(usize, K)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut out: Vec<(usize, K)> = Vec::with_capacity(pairs.len());
        for (i, c) in pairs {
            match out.last_mut() {
                Some((j, d)) if *j == i => *d = d.add(&c),
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        SparseVec(out)
    }

    pub fn from_dense(v: &[K]) -> Self {
        SparseVec(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect())
    }

    pub fn to_dense(&self, n: usize) -> Vec<K> {
        let mut out = vec![K::zero(); n];
        for (i, c) in &self.0 {
            out[*i] = c.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, K)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> K {
        match self.0.binary_search_by_key(&i, |p| p.0) {
            Ok(k) => self.0[k].1.clone(),
            Err(_) => K::zero(),
        }
    }

    pub fn leading(&self) -> Option<(usize, &K)> {
        self.0.first().map(|(i, c)| (*i, c))
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVec(self.0.iter().map(|(i, x)| (*i, x.mul(c))).collect())
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: &K, other: &Self) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y.mul(c)));
                        b.next();
                    } else {
                        let s = x.add(&y.mul(c));
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y.mul(c)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        self.0 = out;
    }

    pub fn dot(&self, other: &Self) -> K {
        let mut acc = K::zero();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc.add(&self.0[i].1.mul(&other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// A sparse matrix with sorted entry list, canonical for a given map and basis order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMatrix<K> {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, K)>,
}

impl<K: Field> SparseMatrix<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, cols: n, entries: (0..n).map(|i| (i, i, K::one())).collect() }
    }

    pub fn from_entries(rows: usize, cols: usize, mut entries: Vec<(usize, usize, K)>) -> Self {
        entries.sort_by_key(|e| (e.0, e.1));
        let mut out: Vec<(usize, usize, K)> = Vec::with_capacity(entries.len());
        for (r, c, x) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            match out.last_mut() {
                Some((r2, c2, y)) if *r2 == r && *c2 == c => *y = y.add(&x),
                _ => out.push((r, c, x)),
            }
        }
        out.retain(|e| !e.2.is_zero());
        SparseMatrix { rows, cols, entries: out }
    }

    pub fn from_dense(rows: &[Vec<K>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut e = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                e.push((i, j, x.clone()));
            }
        }
        Self::from_entries(rows.len(), cols, e)
    }

    pub fn from_columns(rows: usize, columns: &[SparseVec<K>]) -> Self {
        let mut e = Vec::new();
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.entries() {
                e.push((*i, j, x.clone()));
            }
        }
        Self::from_entries(rows, columns.len(), e)
    }

    pub fn from_rows(cols: usize, rows: &[SparseVec<K>]) -> Self {
        let mut e = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.entries() {
                e.push((i, *j, x.clone()));
            }
        }
        Self::from_entries(rows.len(), cols, e)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, K)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> K {
        match self.entries.binary_search_by_key(&(r, c), |e| (e.0, e.1)) {
            Ok(k) => self.entries[k].2.clone(),
            Err(_) => K::zero(),
        }
    }

    pub fn row_vecs(&self) -> Vec<SparseVec<K>> {
        let mut rows = vec![Vec::new(); self.rows];
        for (r, c, x) in &self.entries {
            rows[*r].push((*c, x.clone()));
        }
        rows.into_iter().map(SparseVec).collect()
    }

    pub fn column_vecs(&self) -> Vec<SparseVec<K>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, c, x) in &self.entries {
            cols[*c].push((*r, x.clone()));
        }
        cols.into_iter().map(SparseVec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.cols, self.rows, self.entries.iter().map(|(r, c, x)| (*c, *r, x.clone())).collect())
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut acc = Vec::new();
        for (r, c, x) in &self.entries {
            let y = v.get(*c);
            if !y.is_zero() {
                acc.push((*r, x.mul(&y)));
            }
        }
        SparseVec::from_pairs(acc)
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let rrows = rhs.row_vecs();
        let mut e = Vec::new();
        for (r, c, x) in &self.entries {
            for (j, y) in rrows[*c].entries() {
                e.push((*r, *j, x.mul(y)));
            }
        }
        Self::from_entries(self.rows, rhs.cols, e)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut e = self.entries.clone();
        e.extend(rhs.entries.iter().cloned());
        Self::from_entries(self.rows, self.cols, e)
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::from_entries(self.rows, self.cols, self.entries.iter().map(|(r, s, x)| (*r, *s, x.mul(c))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&K::one().neg()))
    }

    pub fn rank(&self) -> usize {
        rref(self).pivots.len()
    }
}

impl<K: Field> fmt::Display for SparseMatrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref<K> {
    pub matrix: SparseMatrix<K>,
    pub pivots: Vec<usize>,
    /// Row `i` of `matrix` equals `Σ transform[i][j] · (row j of the input)`.
    pub transform: Vec<SparseVec<K>>,
}

/// Reduced row echelon form. Pivoting takes the first row with a nonzero entry in the
/// current column, so the result is deterministic.
pub fn rref<K: Field>(m: &SparseMatrix<K>) -> Rref<K> {
    let mut rows = m.row_vecs();
    let mut tr: Vec<SparseVec<K>> = (0..m.rows).map(SparseVec::unit).collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..m.cols {
        if top == rows.len() {
            break;
        }
        let Some(p) = (top..rows.len()).find(|&r| !rows[r].get(col).is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        tr.swap(top, p);
        let inv = rows[top].get(col).inv().expect("nonzero pivot");
        rows[top] = rows[top].scale(&inv);
        tr[top] = tr[top].scale(&inv);
        let (prow, ptr) = (rows[top].clone(), tr[top].clone());
        for r in 0..rows.len() {
            if r == top {
                continue;
            }
            let c = rows[r].get(col);
            if !c.is_zero() {
                let c = c.neg();
                rows[r].axpy(&c, &prow);
                tr[r].axpy(&c, &ptr);
            }
        }
        pivots.push(col);
        top += 1;
    }
    Rref { matrix: SparseMatrix::from_rows(m.cols, &rows), pivots, transform: tr }
}

/// Basis of the kernel: one vector per free column `f`, equal to `e_f` minus the pivot
/// entries of column `f` in the reduced form.
pub fn kernel_basis<K: Field>(m: &SparseMatrix<K>) -> Vec<SparseVec<K>> {
    let r = rref(m);
    let rows = r.matrix.row_vecs();
    let pivot_set: std::collections::BTreeSet<usize> = r.pivots.iter().copied().collect();
    (0..m.cols)
        .filter(|c| !pivot_set.contains(c))
        .map(|f| {
            let mut pairs = vec![(f, K::one())];
            for (k, &p) in r.pivots.iter().enumerate() {
                let x = rows[k].get(f);
                if !x.is_zero() {
                    pairs.push((p, x.neg()));
                }
            }
            SparseVec::from_pairs(pairs)
        })
        .collect()
}

/// An incrementally built echelon basis that remembers how each row was formed from the
/// inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon<K> {
    rows: BTreeMap<usize, (SparseVec<K>, SparseVec<K>)>,
    inserted: usize,
}

impl<K: Field> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new(), inserted: 0 }
    }
}

impl<K: Field> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors passed to `insert` so far.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduce `v` against the basis. Returns the remainder and `a` with
    /// `v = remainder + Σ a_t · (inserted vector t)`.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<K>) {
        let mut v = v.clone();
        let mut acc = SparseVec::zero();
        let mut last: Option<usize> = None;
        loop {
            let next = v
                .entries()
                .iter()
                .find(|(i, _)| last.is_none_or(|l| *i > l) && self.rows.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            let Some((p, c)) = next else { break };
            let (row, combo) = &self.rows[&p];
            v.axpy(&c.neg(), row);
            acc.axpy(&c, combo);
            last = Some(p);
        }
        (v, acc)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Insert a vector; it gets tag `self.inserted()`. Returns whether it was independent.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let tag = self.inserted;
        self.inserted += 1;
        let (r, acc) = self.reduce(v);
        let Some((p, lead)) = r.leading() else { return false };
        let inv = lead.inv().expect("nonzero leading coefficient");
        let mut combo = SparseVec::unit(tag);
        combo.axpy(&K::one().neg(), &acc);
        self.rows.insert(p, (r.scale(&inv), combo.scale(&inv)));
        true
    }
}

/// Solve `m · x = b`; `None` if `b` is not in the image.
pub fn solve<K: Field>(m: &SparseMatrix<K>, b: &SparseVec<K>) -> Option<SparseVec<K>> {
    let mut ech = Echelon::new();
    for c in m.column_vecs() {
        ech.insert(&c);
    }
    let (r, acc) = ech.reduce(b);
    r.is_zero().then_some(acc)
}

/// Inverse of a square matrix, `None` if singular.
pub fn invert<K: Field>(m: &SparseMatrix<K>) -> Option<SparseMatrix<K>> {
    if m.rows() != m.cols() {
        return None;
    }
    let r = rref(m);
    (r.pivots.len() == m.rows()).then(|| SparseMatrix::from_rows(m.cols(), &r.transform))
}

/// Homology of `C_{n+1} → C_n → C_{n-1}` at the middle spot.
#[derive(Clone, Debug)]
pub struct Homology<K> {
    pub dimension: usize,
    /// Cycle representatives, one per homology basis class.
    pub representatives: Vec<SparseVec<K>>,
    solver: Echelon<K>,
    boundary_tags: usize,
}

impl<K: Field> Homology<K> {
    /// Coordinates of a cycle in the homology basis; `None` if `z` is not a cycle.
    pub fn coordinates(&self, z: &SparseVec<K>) -> Option<Vec<K>> {
        let (r, acc) = self.solver.reduce(z);
        if !r.is_zero() {
            return None;
        }
        let mut out = vec![K::zero(); self.dimension];
        for (t, c) in acc.entries() {
            if *t >= self.boundary_tags {
                out[*t - self.boundary_tags] = c.clone();
            }
        }
        Some(out)
    }

    /// Whether a chain is a boundary.
    pub fn is_boundary(&self, z: &SparseVec<K>) -> bool {
        self.coordinates(z).is_some_and(|c| c.iter().all(|x| x.is_zero()))
    }
}

/// Homology at the source of `dn`, given the incoming differential `dn_plus_1`.
pub fn homology<K: Field>(dn_plus_1: &SparseMatrix<K>, dn: &SparseMatrix<K>) -> Result<Homology<K>> {
    if dn_plus_1.rows() != dn.cols() {
        return Err(Error::DimensionMismatch(format!(
            "incoming map has {} rows, outgoing map has {} columns",
            dn_plus_1.rows(),
            dn.cols()
        )));
    }
    if !dn.mul(dn_plus_1).is_zero() {
        return Err(Error::BrokenDifferential("composite of consecutive differentials is nonzero".into()));
    }
    let boundaries = dn_plus_1.column_vecs();
    let boundary_tags = boundaries.len();
    let mut span = Echelon::new();
    for b in &boundaries {
        span.insert(b);
    }
    let reps: Vec<_> = kernel_basis(dn).into_iter().filter(|z| span.insert(z)).collect();
    // tags: boundaries first, then representatives
    let mut solver = Echelon::new();
    for b in &boundaries {
        solver.insert(b);
    }
    for z in &reps {
        solver.insert(z);
    }
    Ok(Homology { dimension: reps.len(), representatives: reps, solver, boundary_tags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F2, Q};

    fn q(rows: &[&[i64]]) -> SparseMatrix<Q> {
        SparseMatrix::from_dense(&rows.iter().map(|r| r.iter().map(|&x| Q::from_i64(x)).collect()).collect::<Vec<_>>())
    }

    fn f2(rows: &[&[i64]]) -> SparseMatrix<F2> {
        SparseMatrix::from_dense(&rows.iter().map(|r| r.iter().map(|&x| F2::from_i64(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn rref_examples() {
        let r = rref(&q(&[&[1, 0], &[0, 1]]));
        assert_eq!(r.matrix, q(&[&[1, 0], &[0, 1]]));
        assert_eq!(r.pivots, vec![0, 1]);

        let r = rref(&f2(&[&[1, 1], &[1, 1]]));
        assert_eq!(r.matrix, f2(&[&[1, 1], &[0, 0]]));
        assert_eq!(r.pivots, vec![0]);

        let m = q(&[&[2, 4], &[1, 2]]);
        let r = rref(&m);
        assert_eq!(r.matrix, q(&[&[1, 2], &[0, 0]]));
        // transform record reproduces the result rows
        let rows = m.row_vecs();
        for (i, t) in r.transform.iter().enumerate() {
            let mut acc = SparseVec::zero();
            for (j, c) in t.entries() {
                acc.axpy(c, &rows[*j]);
            }
            assert_eq!(acc, r.matrix.row_vecs()[i]);
        }
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&q(&[&[0, 0], &[0, 0]]));
        assert_eq!(k, vec![SparseVec::unit(0), SparseVec::unit(1)]);
        assert!(kernel_basis(&q(&[&[1, 0], &[0, 1]])).is_empty());
        let k = kernel_basis(&f2(&[&[1, 1]]));
        assert_eq!(k, vec![SparseVec::from_dense(&[F2::one(), F2::one()])]);
    }

    #[test]
    fn homology_examples() {
        let h = homology(&SparseMatrix::<Q>::zero(3, 0), &SparseMatrix::zero(0, 3)).unwrap();
        assert_eq!(h.dimension, 3);
        let h = homology(&SparseMatrix::<Q>::identity(2), &SparseMatrix::zero(0, 2)).unwrap();
        assert_eq!(h.dimension, 0);
        let h = homology(&SparseMatrix::<Q>::zero(2, 0), &q(&[&[1, 1]])).unwrap();
        assert_eq!(h.dimension, 1);
        let z = SparseVec::from_dense(&[Q::from_i64(3), Q::from_i64(-3)]);
        let c = h.coordinates(&z).unwrap();
        assert_eq!(c.len(), 1);
        assert!(!c[0].is_zero());
        assert!(h.coordinates(&SparseVec::unit(0)).is_none());
    }

    #[test]
    fn homology_rejects_nonzero_composite() {
        let e = homology(&q(&[&[1]]), &q(&[&[1]]));
        assert!(matches!(e, Err(Error::BrokenDifferential(_))));
    }

    #[test]
    fn solve_finds_preimage() {
        let m = q(&[&[1, 2], &[0, 1], &[1, 3]]);
        let b = SparseVec::from_dense(&[Q::from_i64(5), Q::from_i64(2), Q::from_i64(7)]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.apply(&x), b);
        assert!(solve(&m, &SparseVec::unit(0)).is_none());
    }
}
