//! Exact linear algebra over a [`Field`].
//!
//! [`ScalarMatrix`] is a small dense matrix with RREF, kernels and span
//! membership. [`SparseEchelon`] is the incremental row echelon form used by
//! the degreewise engines: vectors are inserted one at a time and normal forms
//! modulo the accumulated span are read off the non-pivot columns.

use crate::error::{Error, Result};
use crate::field::Field;

/// Sorted by column, no explicit zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Sort by column, merge duplicates and drop zeros.
pub fn normalize_sparse<F: Field>(mut v: Vec<(usize, F::Elem)>, field: &F) -> SparseVec<F::Elem> {
    v.sort_unstable_by_key(|(c, _)| *c);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx = field.add(lx, &x),
            _ => out.push((c, x)),
        }
    }
    out.retain(|(_, x)| !field.is_zero(x));
    out
}

// v[..at] ++ (v[at+1..] - factor * row[1..]); row[0] is the pivot, cancelling v[at].
fn eliminate<F: Field>(v: &[(usize, F::Elem)], at: usize, factor: &F::Elem, row: &[(usize, F::Elem)], field: &F) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(v.len() + row.len());
    out.extend_from_slice(&v[..at]);
    let (mut i, mut j) = (at + 1, 1);
    while i < v.len() || j < row.len() {
        match (v.get(i), row.get(j)) {
            (Some((ci, xi)), Some((cj, xj))) if ci == cj => {
                let s = field.sub_mul(xi, factor, xj);
                if !field.is_zero(&s) {
                    out.push((*ci, s));
                }
                i += 1;
                j += 1;
            }
            (Some((ci, xi)), Some((cj, _))) if ci < cj => {
                out.push((*ci, xi.clone()));
                i += 1;
            }
            (Some((ci, xi)), None) => {
                out.push((*ci, xi.clone()));
                i += 1;
            }
            (_, Some((cj, xj))) => {
                out.push((*cj, field.neg(&field.mul(factor, xj))));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// A stored pivot row, absent where the column has no pivot.
type PivotRow<E> = Option<Box<[(usize, E)]>>;

fn reduce_with<F: Field>(rows: &[PivotRow<F::Elem>], mut v: SparseVec<F::Elem>, field: &F) -> SparseVec<F::Elem> {
    let mut i = 0;
    while i < v.len() {
        let c = v[i].0;
        if let Some(row) = &rows[c] {
            let factor = v[i].1.clone();
            v = eliminate(&v, i, &factor, row, field);
        } else {
            i += 1;
        }
    }
    v
}

/// Row echelon form built by insertion. Each stored row has leading entry one
/// at its pivot column; tails may touch later pivot columns.
#[derive(Clone, Debug)]
pub struct SparseEchelon<E> {
    ncols: usize,
    rows: Vec<PivotRow<E>>,
    rank: usize,
}

impl<E: Clone + Eq> SparseEchelon<E> {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon { ncols, rows: vec![None; ncols], rank: 0 }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows[col].is_some()
    }

    /// Normal form of `v` modulo the stored span: supported on non-pivot columns only.
    pub fn reduce<F: Field<Elem = E>>(&self, v: SparseVec<E>, field: &F) -> SparseVec<E> {
        reduce_with(&self.rows, v, field)
    }

    /// Insert `v`; returns whether it enlarged the span.
    pub fn insert<F: Field<Elem = E>>(&mut self, v: SparseVec<E>, field: &F) -> bool {
        let r = self.reduce(v, field);
        let Some((lead, x)) = r.first() else { return false };
        let lead = *lead;
        let inv = field.inv(x).expect("normal form entries are nonzero");
        let row: Box<[(usize, E)]> = r.iter().map(|(c, y)| (*c, field.mul(y, &inv))).collect();
        self.rows[lead] = Some(row);
        self.rank += 1;
        true
    }

    pub fn contains<F: Field<Elem = E>>(&self, v: SparseVec<E>, field: &F) -> bool {
        self.reduce(v, field).is_empty()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.rows[c].is_none()).collect()
    }

    /// Fully reduced rows in pivot order: the sparse RREF.
    pub fn reduced_rows<F: Field<Elem = E>>(&self, field: &F) -> Vec<SparseVec<E>> {
        let pivots: Vec<usize> = (0..self.ncols).filter(|&c| self.rows[c].is_some()).collect();
        let mut done: Vec<PivotRow<E>> = vec![None; self.ncols];
        for &c in pivots.iter().rev() {
            let row = self.rows[c].as_ref().expect("pivot row");
            let tail: SparseVec<E> = row[1..].to_vec();
            // tails only meet pivots further right, which are already reduced
            let reduced = reduce_with(&done, tail, field);
            let mut full = vec![(c, field.one())];
            full.extend(reduced);
            done[c] = Some(full.into_boxed_slice());
        }
        pivots.iter().map(|&c| done[c].take().expect("reduced").into_vec()).collect()
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<E> {
    pub matrix: ScalarMatrix<E>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl<E: Clone + Eq> ScalarMatrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ScalarMatrix { rows, cols, data }
    }

    pub fn zeros<F: Field<Elem = E>>(rows: usize, cols: usize, field: &F) -> Self {
        ScalarMatrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity<F: Field<Elem = E>>(n: usize, field: &F) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    pub fn from_rows<F: Field<Elem = E>>(rows: &[Vec<E>], cols: usize, field: &F) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols, field);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns<F: Field<Elem = E>>(columns: &[Vec<E>], nrows: usize, field: &F) -> Result<Self> {
        Ok(Self::from_rows(columns, nrows, field)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: E) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, v: &[E], field: &F) -> Result<Vec<E>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
            })
            .collect())
    }

    fn density<F: Field<Elem = E>>(&self, field: &F) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.data.iter().filter(|x| !field.is_zero(x)).count() as f64 / self.data.len() as f64
    }

    /// Reduced row echelon form. Matrices with fewer than 10% nonzeros go
    /// through the sparse eliminator; both paths give the same (unique) RREF.
    pub fn rref<F: Field<Elem = E>>(&self, field: &F) -> Rref<E> {
        if self.density(field) < 0.1 {
            self.rref_sparse(field)
        } else {
            self.rref_dense(field)
        }
    }

    pub fn rref_dense<F: Field<Elem = E>>(&self, field: &F) -> Rref<E> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !field.is_zero(m.get(i, c))) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = field.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let x = field.mul(m.get(r, j), &inv);
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || field.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let x = field.sub_mul(m.get(i, j), &factor, m.get(r, j));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        Rref { matrix: m, pivots, rank }
    }

    pub fn rref_sparse<F: Field<Elem = E>>(&self, field: &F) -> Rref<E> {
        let mut ech = SparseEchelon::new(self.cols);
        for i in 0..self.rows {
            let v: SparseVec<E> = self
                .row(i)
                .iter()
                .enumerate()
                .filter(|(_, x)| !field.is_zero(x))
                .map(|(j, x)| (j, x.clone()))
                .collect();
            ech.insert(v, field);
        }
        let reduced = ech.reduced_rows(field);
        let mut m = Self::zeros(self.rows, self.cols, field);
        let mut pivots = Vec::with_capacity(reduced.len());
        for (i, row) in reduced.iter().enumerate() {
            pivots.push(row[0].0);
            for (j, x) in row {
                m.set(i, *j, x.clone());
            }
        }
        let rank = pivots.len();
        Rref { matrix: m, pivots, rank }
    }

    pub fn rank<F: Field<Elem = E>>(&self, field: &F) -> usize {
        self.rref(field).rank
    }

    /// Basis of the right null space, one vector per free column (ascending).
    pub fn kernel_basis<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<E>> {
        let Rref { matrix, pivots, .. } = self.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![field.zero(); self.cols];
                v[free] = field.one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = field.neg(matrix.get(i, free));
                }
                v
            })
            .collect()
    }

    /// Whether `v` lies in the column span; on success the witness `x` has `M x = v`.
    pub fn in_span<F: Field<Elem = E>>(&self, v: &[E], field: &F) -> Result<Option<Vec<E>>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                v[i].clone()
            }
        });
        let Rref { matrix, pivots, .. } = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![field.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = matrix.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }
}

/// Basis of `span(a) ∩ span(b)` inside a space of dimension `dim`.
pub fn intersect_spans<F: Field>(a: &[Vec<F::Elem>], b: &[Vec<F::Elem>], dim: usize, field: &F) -> Vec<Vec<F::Elem>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<Vec<F::Elem>> = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|x| field.neg(x)).collect()));
    let m = ScalarMatrix::from_columns(&cols, dim, field).expect("vectors share the ambient dimension");
    let mut ech = SparseEchelon::new(dim);
    let mut out = Vec::new();
    for k in m.kernel_basis(field) {
        let mut w = vec![field.zero(); dim];
        for (coef, col) in k.iter().zip(a) {
            if field.is_zero(coef) {
                continue;
            }
            for (wi, ci) in w.iter_mut().zip(col) {
                *wi = field.add(wi, &field.mul(coef, ci));
            }
        }
        if ech.insert(dense_to_sparse(&w, field), field) {
            out.push(w);
        }
    }
    out
}

pub fn dense_to_sparse<F: Field>(v: &[F::Elem], field: &F) -> SparseVec<F::Elem> {
    v.iter().enumerate().filter(|(_, x)| !field.is_zero(x)).map(|(i, x)| (i, x.clone())).collect()
}

pub fn span_rank<F: Field>(vectors: &[Vec<F::Elem>], dim: usize, field: &F) -> usize {
    let mut ech = SparseEchelon::new(dim);
    for v in vectors {
        ech.insert(dense_to_sparse(v, field), field);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use proptest::prelude::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn mat(rows: &[&[u32]]) -> ScalarMatrix<u32> {
        let cols = rows.first().map_or(0, |r| r.len());
        ScalarMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), cols, &f7()).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = f7();
        let id = ScalarMatrix::identity(3, &f);
        let r = id.rref(&f);
        assert_eq!((r.matrix, r.rank), (id, 3));
        let z = ScalarMatrix::zeros(2, 3, &f);
        assert_eq!(z.rref(&f).rank, 0);
        let r = mat(&[&[1, 2], &[2, 4]]).rref(&f);
        assert_eq!(r.matrix, mat(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernel_examples() {
        let f = f7();
        assert!(ScalarMatrix::identity(3, &f).kernel_basis(&f).is_empty());
        assert_eq!(ScalarMatrix::zeros(2, 3, &f).kernel_basis(&f).len(), 3);
        assert_eq!(mat(&[&[1, 1]]).kernel_basis(&f), vec![vec![6, 1]]);
    }

    #[test]
    fn span_examples() {
        let f = f7();
        let m = mat(&[&[1, 1], &[0, 1]]);
        assert_eq!(m.in_span(&[0, 1], &f).unwrap(), Some(vec![6, 1]));
        assert_eq!(m.in_span(&m.column(0), &f).unwrap(), Some(vec![1, 0]));
        let empty = ScalarMatrix::zeros(2, 0, &f);
        assert_eq!(empty.in_span(&[0, 0], &f).unwrap(), Some(vec![]));
        assert_eq!(empty.in_span(&[1, 0], &f).unwrap(), None);
        assert!(matches!(m.in_span(&[1], &f), Err(Error::Dimension(_))));
    }

    #[test]
    fn intersection_of_planes() {
        let q = RationalField;
        let e = |v: &[i64]| v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        let a = vec![e(&[1, 0, 0]), e(&[0, 1, 0])];
        let b = vec![e(&[0, 1, 0]), e(&[0, 0, 1])];
        let i = intersect_spans(&a, &b, 3, &q);
        assert_eq!(i.len(), 1);
        assert_eq!(span_rank(&[i[0].clone(), e(&[0, 1, 0])], 3, &q), 1);
    }

    fn arb_matrix() -> impl Strategy<Value = ScalarMatrix<u32>> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(prop_oneof![3 => Just(0u32), 1 => 0u32..7], r * c)
                .prop_map(move |data| ScalarMatrix { rows: r, cols: c, data })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity_and_transpose(m in arb_matrix()) {
            let f = f7();
            let rank = m.rank(&f);
            prop_assert_eq!(rank, m.transpose().rank(&f));
            let ker = m.kernel_basis(&f);
            prop_assert_eq!(rank + ker.len(), m.cols());
            for v in &ker {
                prop_assert!(m.mul_vec(v, &f).unwrap().iter().all(|x| *x == 0));
            }
        }

        #[test]
        fn rref_is_idempotent_and_paths_agree(m in arb_matrix()) {
            let f = f7();
            let dense = m.rref_dense(&f);
            let sparse = m.rref_sparse(&f);
            prop_assert_eq!(&dense, &sparse);
            prop_assert_eq!(dense.matrix.rref(&f).matrix, dense.matrix.clone());
        }

        #[test]
        fn span_witness_is_exact(m in arb_matrix(), seed in proptest::collection::vec(0u32..7, 7)) {
            let f = f7();
            let x: Vec<u32> = seed.into_iter().take(m.cols()).chain(std::iter::repeat(0)).take(m.cols()).collect();
            let v = m.mul_vec(&x, &f).unwrap();
            let w = m.in_span(&v, &f).unwrap().expect("image vector is in the span");
            prop_assert_eq!(m.mul_vec(&w, &f).unwrap(), v);
        }

        #[test]
        fn echelon_normal_form_is_canonical(m in arb_matrix(), v in proptest::collection::vec(0u32..7, 7)) {
            let f = f7();
            let mut ech = SparseEchelon::new(m.cols());
            for i in 0..m.rows() {
                ech.insert(dense_to_sparse(m.row(i), &f), &f);
            }
            let v: Vec<u32> = v.into_iter().take(m.cols()).chain(std::iter::repeat(0)).take(m.cols()).collect();
            let nf = ech.reduce(dense_to_sparse(&v, &f), &f);
            prop_assert!(nf.iter().all(|(c, _)| !ech.is_pivot(*c)));
            // v - nf lies in the row space
            let mut diff = v.clone();
            for (c, x) in &nf {
                diff[*c] = f.sub(&diff[*c], x);
            }
            prop_assert!(ech.contains(dense_to_sparse(&diff, &f), &f));
            prop_assert_eq!(ech.rank(), m.rank(&f));
        }
    }
}
