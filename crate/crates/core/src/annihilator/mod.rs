//! The bidiagonal family `A_n` over `k[u,v]`, maximal minors, graded
//! annihilators of cokernels up to a degree cap, and the intersection
//! experiment over the family.
//!
//! Everything is exact degreewise linear algebra: `ann(coker A)_d` is the kernel
//! of `t ↦ (t e_i mod image(A))_i` on `T_d`.

mod ideal;

use std::collections::HashMap;

use serde::Serialize;

pub use ideal::{canonicalize, ideal_equal_upto, Discrepancy, GradedIdeal, IdealComparison};
use ideal::{from_coords, to_coords};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{dense_to_sparse, intersect_spans, ScalarMatrix, SparseEchelon, SparseVec};
use crate::ring::{CoeffPoly, CoeffRing, Monomial, PolyMatrix};

/// `n x (n+1)` with the first `u`-variable on the diagonal and the second on
/// the superdiagonal.
pub fn build_an<F: Field>(ring: &CoeffRing<F>, n: usize) -> Result<PolyMatrix<F::Elem>> {
    if n == 0 {
        return Err(Error::Usage("A_n needs n >= 1".into()));
    }
    if ring.m() < 2 {
        return Err(Error::Ring("A_n needs two u-variables".into()));
    }
    let m = ring.m();
    let (u, v) = (Monomial::var(m, 0), Monomial::var(m, 1));
    if !ring.contains(&u) || !ring.contains(&v) {
        return Err(Error::Ring("A_n needs the u-variables themselves to lie in T".into()));
    }
    let field = ring.field();
    Ok(PolyMatrix::from_fn(n, n + 1, |i, j| {
        if j == i {
            CoeffPoly::monomial(u.clone(), field)
        } else if j == i + 1 {
            CoeffPoly::monomial(v.clone(), field)
        } else {
            CoeffPoly::zero()
        }
    }))
}

fn check_matrix<F: Field>(ring: &CoeffRing<F>, a: &PolyMatrix<F::Elem>) -> Result<()> {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let e = a.get(i, j);
            ring.check_element(e)?;
            if !e.is_zero() && !e.is_homogeneous() {
                return Err(Error::Poly(format!("matrix entry ({i},{j}) = {} is not homogeneous", ring.format(e))));
            }
        }
    }
    Ok(())
}

fn det_rec<F: Field>(
    a: &PolyMatrix<F::Elem>,
    row: usize,
    mask: u64,
    memo: &mut HashMap<u64, CoeffPoly<F::Elem>>,
    nvars: usize,
    field: &F,
) -> CoeffPoly<F::Elem> {
    if row == a.rows() {
        return CoeffPoly::one(nvars, field);
    }
    if let Some(d) = memo.get(&mask) {
        return d.clone();
    }
    let mut acc = CoeffPoly::zero();
    let mut sign_neg = false;
    for j in 0..a.cols() {
        if mask & (1 << j) == 0 {
            continue;
        }
        let entry = a.get(row, j);
        if !entry.is_zero() {
            let minor = det_rec(a, row + 1, mask & !(1 << j), memo, nvars, field);
            let term = entry.mul(&minor, field);
            acc = if sign_neg { acc.sub(&term, field) } else { acc.add(&term, field) };
        }
        sign_neg = !sign_neg;
    }
    memo.insert(mask, acc.clone());
    acc
}

/// Determinant of the square submatrix on the columns in `mask`, expanded
/// along rows with the minors memoized by column set.
pub fn minor<F: Field>(ring: &CoeffRing<F>, a: &PolyMatrix<F::Elem>, cols: &[usize]) -> CoeffPoly<F::Elem> {
    let sub = a.submatrix(&(0..a.rows()).collect::<Vec<_>>(), cols);
    let mut memo = HashMap::new();
    det_rec(&sub, 0, (1u64 << sub.cols()) - 1, &mut memo, ring.m(), ring.field())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            if n - j < k - cur.len() {
                break;
            }
            cur.push(j);
            go(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Ideal of all `rows x rows` minors.
pub fn maximal_minors<F: Field>(ring: &CoeffRing<F>, a: &PolyMatrix<F::Elem>) -> Result<GradedIdeal<F::Elem>> {
    let (r, c) = (a.rows(), a.cols());
    if r > c {
        return Err(Error::Dimension(format!("maximal minors need rows <= cols, got {r}x{c}")));
    }
    if c > 63 {
        return Err(Error::Dimension(format!("at most 63 columns supported, got {c}")));
    }
    check_matrix(ring, a)?;
    let field = ring.field();
    // one memo shared by every column subset: the minor on rows row.. and a
    // column mask is the same whichever full subset it came from
    let mut memo = HashMap::new();
    let mut gens = Vec::new();
    for cols in combinations(c, r) {
        let mask = cols.iter().fold(0u64, |m, &j| m | (1 << j));
        gens.push(det_rec(a, 0, mask, &mut memo, ring.m(), field));
    }
    GradedIdeal::new(gens, ring)
}

/// Degrees `a_i` of the target basis and `b_j` of the source basis making
/// `A` a degree-preserving map: `deg A_ij = b_j - a_i` for nonzero entries,
/// normalized so every connected block has `min a_i = 0`.
pub fn degree_shifts<E: Clone + Eq>(a: &PolyMatrix<E>) -> Result<(Vec<i64>, Vec<i64>)> {
    let (r, c) = (a.rows(), a.cols());
    let mut row_deg: Vec<Option<i64>> = vec![None; r];
    let mut col_deg: Vec<Option<i64>> = vec![None; c];
    for start in 0..r {
        if row_deg[start].is_some() {
            continue;
        }
        row_deg[start] = Some(0);
        let mut rows_seen = vec![start];
        let mut cols_seen = Vec::new();
        let mut stack = vec![(true, start)];
        while let Some((is_row, k)) = stack.pop() {
            if is_row {
                let ai = row_deg[k].unwrap();
                for j in 0..c {
                    let Some(d) = a.get(k, j).homogeneous_degree() else { continue };
                    let want = ai + d as i64;
                    match col_deg[j] {
                        None => {
                            col_deg[j] = Some(want);
                            cols_seen.push(j);
                            stack.push((false, j));
                        }
                        Some(b) if b != want => {
                            return Err(Error::Poly(format!("no consistent grading: column {j} needs degrees {b} and {want}")))
                        }
                        _ => {}
                    }
                }
            } else {
                let bj = col_deg[k].unwrap();
                for i in 0..r {
                    let Some(d) = a.get(i, k).homogeneous_degree() else { continue };
                    let want = bj - d as i64;
                    match row_deg[i] {
                        None => {
                            row_deg[i] = Some(want);
                            rows_seen.push(i);
                            stack.push((true, i));
                        }
                        Some(ai) if ai != want => {
                            return Err(Error::Poly(format!("no consistent grading: row {i} needs degrees {ai} and {want}")))
                        }
                        _ => {}
                    }
                }
            }
        }
        let low = rows_seen.iter().map(|&i| row_deg[i].unwrap()).min().unwrap_or(0);
        for &i in &rows_seen {
            row_deg[i] = row_deg[i].map(|d| d - low);
        }
        for &j in &cols_seen {
            col_deg[j] = col_deg[j].map(|d| d - low);
        }
    }
    Ok((row_deg.into_iter().map(|d| d.unwrap_or(0)).collect(), col_deg.into_iter().map(|d| d.unwrap_or(0)).collect()))
}

struct ImageAt<E> {
    offsets: Vec<Option<usize>>,
    echelon: SparseEchelon<E>,
}

fn image_at<F: Field>(ring: &CoeffRing<F>, a: &PolyMatrix<F::Elem>, rows: &[i64], cols: &[i64], big_d: i64) -> ImageAt<F::Elem> {
    let field = ring.field();
    let mut offsets = Vec::with_capacity(rows.len());
    let mut width = 0;
    for &ai in rows {
        if big_d >= ai {
            offsets.push(Some(width));
            width += ring.degree_basis((big_d - ai) as u32).len();
        } else {
            offsets.push(None);
        }
    }
    let mut echelon = SparseEchelon::new(width);
    for (j, &bj) in cols.iter().enumerate() {
        if big_d < bj {
            continue;
        }
        for s in &ring.degree_basis((big_d - bj) as u32).monomials {
            let mut v: SparseVec<F::Elem> = Vec::new();
            for (i, off) in offsets.iter().enumerate() {
                let e = a.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let off = off.expect("nonzero entry lands in a nonnegative degree");
                let basis = ring.degree_basis((big_d - rows[i]) as u32);
                v.extend(to_coords(&e.mul_monomial(s), &basis).into_iter().map(|(k, x)| (k + off, x)));
            }
            echelon.insert(v, field);
        }
    }
    ImageAt { offsets, echelon }
}

/// Basis (in monomial coordinates of `T_d`) of `ann(coker A)_d` for each
/// `d <= cap`.
pub fn ann_degree_spans<F: Field>(ring: &CoeffRing<F>, a: &PolyMatrix<F::Elem>, cap: u32) -> Result<Vec<Vec<SparseVec<F::Elem>>>> {
    check_matrix(ring, a)?;
    let field = ring.field();
    let (rows, cols) = degree_shifts(a)?;
    let mut images: HashMap<i64, ImageAt<F::Elem>> = HashMap::new();
    let mut out = Vec::with_capacity(cap as usize + 1);
    for d in 0..=cap {
        let td = ring.degree_basis(d);
        let mut columns: Vec<SparseVec<F::Elem>> = vec![Vec::new(); td.len()];
        let mut height = 0;
        for (i, &ai) in rows.iter().enumerate() {
            let big_d = d as i64 + ai;
            let img = images.entry(big_d).or_insert_with(|| image_at(ring, a, &rows, &cols, big_d));
            let off = img.offsets[i].expect("row degree is nonnegative");
            for (k, col) in columns.iter_mut().enumerate() {
                let nf = img.echelon.reduce(vec![(off + k, field.one())], field);
                col.extend(nf.into_iter().map(|(c, x)| (c + height, x)));
            }
            height += img.echelon.ncols();
        }
        let dense: Vec<Vec<F::Elem>> = columns
            .iter()
            .map(|c| {
                let mut v = vec![field.zero(); height];
                for (k, x) in c {
                    v[*k] = x.clone();
                }
                v
            })
            .collect();
        let kernel = if height == 0 {
            (0..td.len()).map(|k| vec![(k, field.one())]).collect()
        } else {
            let m = ScalarMatrix::from_columns(&dense, height, field)?;
            let mut ech = SparseEchelon::new(td.len());
            for k in m.kernel_basis(field) {
                ech.insert(dense_to_sparse(&k, field), field);
            }
            ech.reduced_rows(field)
        };
        out.push(kernel);
        images.retain(|&k, _| k > d as i64 + rows.iter().copied().min().unwrap_or(0));
    }
    Ok(out)
}

/// Minimal homogeneous generators of `ann(coker A)` in degrees `<= cap`.
pub fn ann_coker_upto<F: Field>(ring: &CoeffRing<F>, a: &PolyMatrix<F::Elem>, cap: u32) -> Result<GradedIdeal<F::Elem>> {
    if cap == 0 {
        return Err(Error::Usage("annihilator cap must be at least 1".into()));
    }
    let spans = ann_degree_spans(ring, a, cap)?;
    Ok(GradedIdeal { generators: minimal_generators(ring, &spans), degree_cap: Some(cap) }.canonical(ring))
}

impl<E: Clone + Eq + std::hash::Hash> GradedIdeal<E> {
    fn canonical<F: Field<Elem = E>>(mut self, ring: &CoeffRing<F>) -> Self {
        self.generators = canonicalize(self.generators, ring.field());
        self
    }
}

fn minimal_generators<F: Field>(ring: &CoeffRing<F>, spans: &[Vec<SparseVec<F::Elem>>]) -> Vec<CoeffPoly<F::Elem>> {
    let field = ring.field();
    let gens = ring.maximal_ideal_generators();
    let mut out = Vec::new();
    for (d, basis_vecs) in spans.iter().enumerate() {
        if basis_vecs.is_empty() {
            continue;
        }
        let td = ring.degree_basis(d as u32);
        let mut ech = SparseEchelon::new(td.len());
        for g in &gens {
            let gd = g.degree() as usize;
            if gd > d {
                continue;
            }
            let lower = ring.degree_basis((d - gd) as u32);
            for v in &spans[d - gd] {
                let p = from_coords(v, &lower, field).mul_monomial(g);
                ech.insert(to_coords(&p, &td), field);
            }
        }
        for v in basis_vecs {
            if ech.insert(v.clone(), field) {
                out.push(from_coords(v, &td, field));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnFamilyRow {
    pub n: usize,
    pub ann_equals_uv_pow_n: bool,
    pub minors_equal: bool,
    /// Least degree of a nonzero element of the annihilators for `1..=n`.
    pub mindeg_intersection_so_far: Option<u32>,
    pub ann_discrepancy: Option<Discrepancy>,
    pub minors_discrepancy: Option<Discrepancy>,
}

fn intersection_mindeg<F: Field>(ring: &CoeffRing<F>, spans: &[Vec<Vec<SparseVec<F::Elem>>>], cap: u32) -> (Option<u32>, Vec<Vec<Vec<F::Elem>>>) {
    let field = ring.field();
    let to_dense = |v: &SparseVec<F::Elem>, dim: usize| {
        let mut w = vec![field.zero(); dim];
        for (k, x) in v {
            w[*k] = x.clone();
        }
        w
    };
    let mut running: Vec<Vec<Vec<F::Elem>>> = Vec::new();
    for d in 0..=cap as usize {
        let dim = ring.degree_basis(d as u32).len();
        let mut acc: Vec<Vec<F::Elem>> = spans[0][d].iter().map(|v| to_dense(v, dim)).collect();
        for s in &spans[1..] {
            let next: Vec<Vec<F::Elem>> = s[d].iter().map(|v| to_dense(v, dim)).collect();
            acc = intersect_spans(&acc, &next, dim, field);
        }
        running.push(acc);
    }
    let mindeg = running.iter().position(|s| !s.is_empty()).map(|d| d as u32);
    (mindeg, running)
}

/// Least degree of a nonzero element of `ann M_1 ∩ … ∩ ann M_N`, computed
/// exactly through `cap`; `None` if the intersection vanishes through `cap`.
pub fn family_intersection_mindeg<F: Field>(ring: &CoeffRing<F>, big_n: usize, cap: u32) -> Result<Option<u32>> {
    if big_n == 0 {
        return Err(Error::Usage("N must be at least 1".into()));
    }
    if (cap as usize) < big_n {
        return Err(Error::Usage(format!("cap {cap} is below N = {big_n}; the intersection cannot be resolved")));
    }
    let spans = (1..=big_n).map(|n| ann_degree_spans(ring, &build_an(ring, n)?, cap)).collect::<Result<Vec<_>>>()?;
    Ok(intersection_mindeg(ring, &spans, cap).0)
}

/// Per-`n` comparison rows for `n = 1..=n_max`. Per-`n` work fans out over
/// `jobs` workers when the `parallel` feature is on.
pub fn ann_family<F: Field>(ring: &CoeffRing<F>, n_max: usize, cap: u32, jobs: usize) -> Result<Vec<AnnFamilyRow>> {
    if n_max == 0 {
        return Err(Error::Usage("--n-max must be at least 1".into()));
    }
    if (cap as usize) < n_max {
        return Err(Error::Usage(format!("cap {cap} is below n-max = {n_max}; the intersection cannot be resolved")));
    }
    let per_n = |n: usize| -> Result<_> {
        let a = build_an(ring, n)?;
        let target = GradedIdeal::maximal_power(ring, n as u32);
        let spans = ann_degree_spans(ring, &a, cap)?;
        let ann = GradedIdeal { generators: minimal_generators(ring, &spans), degree_cap: Some(cap) }.canonical(ring);
        let minors = maximal_minors(ring, &a)?;
        let ann_cmp = ideal_equal_upto(&ann, &target, ring, cap);
        let minors_cmp = ideal_equal_upto(&minors, &target, ring, cap);
        Ok((spans, ann_cmp, minors_cmp))
    };
    let ns: Vec<usize> = (1..=n_max).collect();
    let results: Vec<_> = run_jobs(&ns, jobs, per_n)?;
    let mut rows = Vec::with_capacity(n_max);
    let mut spans_so_far = Vec::new();
    for (n, (spans, ann_cmp, minors_cmp)) in ns.into_iter().zip(results) {
        spans_so_far.push(spans);
        let (mindeg, _) = intersection_mindeg(ring, &spans_so_far, cap);
        rows.push(AnnFamilyRow {
            n,
            ann_equals_uv_pow_n: ann_cmp.equal,
            minors_equal: minors_cmp.equal,
            mindeg_intersection_so_far: mindeg,
            ann_discrepancy: ann_cmp.discrepancy,
            minors_discrepancy: minors_cmp.discrepancy,
        });
    }
    Ok(rows)
}

fn run_jobs<T: Copy + Send + Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    #[cfg(feature = "parallel")]
    if jobs > 1 && items.len() > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
        return pool.install(|| items.par_iter().map(|&t| f(t)).collect());
    }
    let _ = jobs;
    items.iter().map(|&t| f(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use crate::parse::parse_poly;
    use crate::ring::RingDescriptor;
    use proptest::prelude::*;

    fn kuv() -> CoeffRing<PrimeField> {
        CoeffRing::new(RingDescriptor::polynomial(32003, &["u", "v"], &["x"]), PrimeField::default()).unwrap()
    }

    fn matrix(r: &CoeffRing<PrimeField>, rows: &[&[&str]]) -> PolyMatrix<u32> {
        let names = r.u_names().to_vec();
        PolyMatrix::from_fn(rows.len(), rows[0].len(), |i, j| parse_poly(rows[i][j], &names, r.field()).unwrap())
    }

    #[test]
    fn an_pattern() {
        let r = kuv();
        let fmt = |n| build_an(&r, n).unwrap().format_rows(r.u_names(), r.field());
        assert_eq!(fmt(1), vec![vec!["u", "v"]]);
        assert_eq!(fmt(2), vec![vec!["u", "v", "0"], vec!["0", "u", "v"]]);
        assert_eq!(fmt(3)[2], vec!["0", "0", "u", "v"]);
        assert!(build_an(&r, 0).is_err());
    }

    #[test]
    fn minors_of_small_matrices() {
        let r = kuv();
        assert_eq!(maximal_minors(&r, &build_an(&r, 1).unwrap()).unwrap().format(&r), "(u, v)");
        assert_eq!(maximal_minors(&r, &build_an(&r, 2).unwrap()).unwrap().format(&r), "(u^2, u*v, v^2)");
        assert!(maximal_minors(&r, &matrix(&r, &[&["0", "0"]])).unwrap().is_zero());
        assert!(maximal_minors(&r, &matrix(&r, &[&["u"], &["v"]])).is_err());
        // cofactor signs: det [[u, v], [v, u]] = u^2 - v^2
        assert_eq!(minor(&r, &matrix(&r, &[&["u", "v"], &["v", "u"]]), &[0, 1]).format(r.u_names(), r.field()), "u^2 - v^2");
    }

    #[test]
    fn annihilators_of_small_cokernels() {
        let r = kuv();
        let a1 = ann_coker_upto(&r, &build_an(&r, 1).unwrap(), 5).unwrap();
        assert_eq!(a1.format(&r), "(u, v)");
        let a2 = ann_coker_upto(&r, &build_an(&r, 2).unwrap(), 6).unwrap();
        assert_eq!(a2.format(&r), "(u^2, u*v, v^2)");
        // coker [u^2 v] is T/(u^2, v)
        let a = ann_coker_upto(&r, &matrix(&r, &[&["u^2", "v"]]), 4).unwrap();
        assert_eq!(a.format(&r), "(v, u^2)");
        // coker of the zero map T -> T has zero annihilator
        assert!(ann_coker_upto(&r, &matrix(&r, &[&["0"]]), 4).unwrap().is_zero());
    }

    #[test]
    fn mixed_degree_matrix() {
        let r = kuv();
        // T^2 -> T^2 with row degrees (0, 1): coker = T/(u) ⊕ T(-1)/(u, v)
        let a = matrix(&r, &[&["u", "0", "0"], &["0", "u", "v"]]);
        assert_eq!(degree_shifts(&a).unwrap(), (vec![0, 0], vec![1, 1, 1]));
        let ann = ann_coker_upto(&r, &a, 5).unwrap();
        assert_eq!(ann.format(&r), "(u)");
        let b = matrix(&r, &[&["u", "v^2"], &["0", "u"]]);
        assert_eq!(degree_shifts(&b).unwrap(), (vec![0, 1], vec![1, 2]));
        let inconsistent = matrix(&r, &[&["u", "v"], &["u", "v^2"]]);
        assert!(degree_shifts(&inconsistent).is_err());
    }

    #[test]
    fn intersection_family() {
        let r = kuv();
        assert_eq!(family_intersection_mindeg(&r, 1, 3).unwrap(), Some(1));
        assert_eq!(family_intersection_mindeg(&r, 4, 8).unwrap(), Some(4));
        assert!(family_intersection_mindeg(&r, 5, 4).is_err());
    }

    #[test]
    fn family_rows_are_schedule_independent() {
        let r = kuv();
        let a = ann_family(&r, 5, 12, 1).unwrap();
        let b = ann_family(&r, 5, 12, 4).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|row| row.ann_equals_uv_pow_n && row.minors_equal));
        let mindegs: Vec<_> = a.iter().map(|row| row.mindeg_intersection_so_far).collect();
        assert_eq!(mindegs, (1..=5).map(Some).collect::<Vec<_>>());
    }

    #[test]
    fn rational_backend_agrees() {
        let q = CoeffRing::new(RingDescriptor::polynomial(0, &["u", "v"], &["x"]), RationalField).unwrap();
        let ann = ann_coker_upto(&q, &build_an(&q, 3).unwrap(), 8).unwrap();
        assert!(ideal_equal_upto(&ann, &GradedIdeal::maximal_power(&q, 3), &q, 8).equal);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn minors_lie_in_the_annihilator(n in 1usize..6) {
            let r = kuv();
            let a = build_an(&r, n).unwrap();
            let cap = 2 * n as u32 + 2;
            let ann = ann_coker_upto(&r, &a, cap).unwrap();
            for g in &maximal_minors(&r, &a).unwrap().generators {
                prop_assert!(ann.contains(&r, g).unwrap());
            }
            prop_assert_eq!(ann.min_degree(), Some(n as u32));
        }

        #[test]
        fn monomial_row_annihilator(a in (0u32..4, 0u32..4), b in (0u32..4, 0u32..4)) {
            // coker [m1 m2] = T/(m1, m2)
            let r = kuv();
            let mono = |(x, y): (u32, u32)| CoeffPoly::monomial(Monomial(vec![x, y]), r.field());
            let m = PolyMatrix::from_fn(1, 2, |_, j| mono(if j == 0 { a } else { b }));
            let cap = 8;
            let ann = ann_coker_upto(&r, &m, cap).unwrap();
            let expected = GradedIdeal::new(vec![mono(a), mono(b)], &r).unwrap();
            prop_assert!(ideal_equal_upto(&ann, &expected, &r, cap).equal);
            for g in &maximal_minors(&r, &m).unwrap().generators {
                prop_assert!(ann.contains(&r, g).unwrap());
            }
        }
    }
}
