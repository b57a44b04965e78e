//! Graded pieces of the top local cohomology `H^n_I(R)` and `H^n_I(R/fR)`.
//!
//! `H^n_I(R)_{-ell}` is free over `T` on the inverse monomials `x^{-alpha}`
//! with every `alpha_i >= 1` and `|alpha| = ell`. Multiplying by `f` (x-degree
//! `p`) maps the piece at `ell + p` to the piece at `ell`, and the cokernel is
//! `H^n_I(R/fR)_{-ell}`.
//!
//! To split the cokernel into finite-dimensional vector spaces we use a
//! combined grading: `u`-variables have degree one and `x_i` has weight `w_i`,
//! chosen so that `f` is homogeneous. The element `t * x^{-alpha}` then has
//! combined degree `deg t - w.alpha`. Reports index a piece by the normalized
//! degree `d = deg t - w.alpha + max_alpha(w.alpha)`, which starts at zero and
//! coincides with the `T`-degree when all weights agree.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{normalize_sparse, SparseEchelon, SparseVec};
use crate::parse::parse_poly;
use crate::ring::{CoeffPoly, CoeffRing, DegreeBasis, Monomial, PolyMatrix};

pub const MAX_WEIGHT: u32 = 64;

/// The basis symbol `x^{-alpha}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InverseMonomial {
    pub alpha: Vec<u32>,
    pub ell: u32,
    pub weighted_deg: u64,
}

impl InverseMonomial {
    pub fn new(alpha: Vec<u32>, weights: &[u32]) -> Result<Self> {
        if alpha.len() != weights.len() {
            return Err(Error::Dimension(format!("{} exponents for {} weights", alpha.len(), weights.len())));
        }
        if alpha.contains(&0) {
            return Err(Error::Usage("inverse monomial exponents must all be at least 1".into()));
        }
        let ell = alpha.iter().sum();
        let weighted_deg = alpha.iter().zip(weights).map(|(&a, &w)| a as u64 * w as u64).sum();
        Ok(InverseMonomial { alpha, ell, weighted_deg })
    }

    /// `x^-2*y^-1`
    pub fn format(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (a, name) in self.alpha.iter().zip(names) {
            if !out.is_empty() {
                out.push('*');
            }
            let _ = write!(out, "{name}^-{a}");
        }
        out
    }
}

fn compositions(n: usize, ell: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        let slots_after = (n - prefix.len() - 1) as u32;
        for a in (1..=left - slots_after).rev() {
            prefix.push(a);
            rec(n, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 || (ell as usize) < n {
        return out;
    }
    rec(n, ell, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All `x^{-alpha}` with `|alpha| = ell`, descending lex, with unit weights.
pub fn inverse_basis(n: usize, ell: u32) -> Vec<InverseMonomial> {
    inverse_basis_weighted(&vec![1; n], ell)
}

pub fn inverse_basis_weighted(weights: &[u32], ell: u32) -> Vec<InverseMonomial> {
    compositions(weights.len(), ell)
        .into_iter()
        .map(|alpha| InverseMonomial::new(alpha, weights).expect("compositions are positive"))
        .collect()
}

/// Weights making `f` homogeneous, and the resulting degree of `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grading {
    pub weights: Vec<u32>,
    /// `deg c + w.gamma`, common to every term `c * x^gamma`.
    pub f_degree: i64,
}

/// An x-homogeneous polynomial `f = sum c_j x^{gamma_j}` over `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypersurfaceF<E> {
    /// Sorted by x-exponent, descending lex.
    terms: Vec<(CoeffPoly<E>, Vec<u32>)>,
    p: u32,
}

impl<E: Clone + Eq + std::hash::Hash> HypersurfaceF<E> {
    pub fn new<F: Field<Elem = E>>(terms: Vec<(CoeffPoly<E>, Vec<u32>)>, ring: &CoeffRing<F>) -> Result<Self> {
        let n = ring.n();
        let mut terms: Vec<_> = terms.into_iter().filter(|(c, _)| !c.is_zero()).collect();
        if terms.is_empty() {
            return Err(Error::Poly("f is zero".into()));
        }
        for (c, gamma) in &terms {
            if gamma.len() != n {
                return Err(Error::Poly(format!("x-exponent has length {}, expected {n}", gamma.len())));
            }
            ring.check_element(c)?;
        }
        terms.sort_by(|a, b| b.1.cmp(&a.1));
        if terms.windows(2).any(|w| w[0].1 == w[1].1) {
            return Err(Error::Poly("two terms share an x-exponent".into()));
        }
        let p: u32 = terms[0].1.iter().sum();
        if terms.iter().any(|(_, g)| g.iter().sum::<u32>() != p) {
            return Err(Error::Poly("f is not homogeneous in the x-variables".into()));
        }
        Ok(HypersurfaceF { terms, p })
    }

    /// Parse an expression over the ring's declared `u`- and `x`-variables.
    pub fn parse<F: Field<Elem = E>>(src: &str, ring: &CoeffRing<F>) -> Result<Self> {
        let names = ring.descriptor().all_var_names();
        let joint = parse_poly(src, &names, ring.field())?;
        let m = ring.m();
        let mut grouped: HashMap<Vec<u32>, CoeffPoly<E>> = HashMap::new();
        for (mono, c) in joint.terms() {
            let (u, x) = mono.exponents().split_at(m);
            grouped
                .entry(x.to_vec())
                .or_insert_with(CoeffPoly::zero)
                .add_term(Monomial(u.to_vec()), c, ring.field());
        }
        Self::new(grouped.into_iter().map(|(g, c)| (c, g)).collect(), ring)
    }

    pub fn terms(&self) -> &[(CoeffPoly<E>, Vec<u32>)] {
        &self.terms
    }

    /// Common x-degree of the terms.
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.terms[0].1.len()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &CoeffPoly<E>> + '_ {
        self.terms.iter().map(|(c, _)| c)
    }

    pub fn scale<F: Field<Elem = E>>(&self, c: &E, field: &F) -> Self {
        assert!(!field.is_zero(c), "scaling by zero");
        HypersurfaceF { terms: self.terms.iter().map(|(k, g)| (k.scale(c, field), g.clone())).collect(), p: self.p }
    }

    /// Rename x-variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_x(&self, perm: &[usize]) -> Self {
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .map(|(c, g)| {
                let mut h = vec![0; g.len()];
                for (i, &e) in g.iter().enumerate() {
                    h[perm[i]] = e;
                }
                (c.clone(), h)
            })
            .collect();
        terms.sort_by(|a, b| b.1.cmp(&a.1));
        HypersurfaceF { terms, p: self.p }
    }

    pub fn format<F: Field<Elem = E>>(&self, ring: &CoeffRing<F>) -> String {
        let xs = &ring.descriptor().x_var_names;
        let mut parts = Vec::new();
        for (c, g) in &self.terms {
            let coef = ring.format(c);
            let coef = if c.len() > 1 { format!("({coef})") } else { coef };
            let xm = Monomial(g.clone()).format(xs);
            parts.push(match (coef.as_str(), xm.as_str()) {
                (_, "1") => coef.clone(),
                ("1", _) => xm.clone(),
                _ => format!("{coef}*{xm}"),
            });
        }
        parts.join(" + ")
    }

    /// Weights from the ring descriptor if declared, otherwise the
    /// lexicographically least weights in `[1, MAX_WEIGHT]^n` that work.
    pub fn grading<F: Field<Elem = E>>(&self, ring: &CoeffRing<F>) -> Result<Grading> {
        let mut degs = Vec::with_capacity(self.terms.len());
        for (c, _) in &self.terms {
            match c.homogeneous_degree() {
                Some(d) => degs.push(d as i64),
                None => {
                    return Err(Error::NotHomogenizable {
                        reason: format!("coefficient {} is not homogeneous", ring.format(c)),
                        max_weight: MAX_WEIGHT,
                    })
                }
            }
        }
        let weights = match &ring.descriptor().x_weights {
            Some(w) => w.clone(),
            None => self.search_weights(&degs).ok_or_else(|| Error::NotHomogenizable {
                reason: "no weight vector balances the terms".into(),
                max_weight: MAX_WEIGHT,
            })?,
        };
        let total = |j: usize| degs[j] + dot(&weights, &self.terms[j].1);
        let f_degree = total(0);
        if (1..self.terms.len()).any(|j| total(j) != f_degree) {
            return Err(Error::NotHomogenizable {
                reason: format!("declared weights {weights:?} do not make f homogeneous"),
                max_weight: MAX_WEIGHT,
            });
        }
        Ok(Grading { weights, f_degree })
    }

    // Depth-first search in lex order; each constraint
    // w.(gamma_j - gamma_0) = deg c_0 - deg c_j is pruned by interval bounds.
    fn search_weights(&self, degs: &[i64]) -> Option<Vec<u32>> {
        let n = self.n();
        let rows: Vec<(Vec<i64>, i64)> = (1..self.terms.len())
            .map(|j| {
                let a = (0..n).map(|i| self.terms[j].1[i] as i64 - self.terms[0].1[i] as i64).collect();
                (a, degs[0] - degs[j])
            })
            .collect();
        let lo = 1i64;
        let hi = MAX_WEIGHT as i64;
        // suffix bounds of sum_{i >= k} a_i w_i
        let bounds: Vec<Vec<(i64, i64)>> = rows
            .iter()
            .map(|(a, _)| {
                let mut b = vec![(0, 0); n + 1];
                for k in (0..n).rev() {
                    let (x, y) = (a[k] * lo, a[k] * hi);
                    b[k] = (b[k + 1].0 + x.min(y), b[k + 1].1 + x.max(y));
                }
                b
            })
            .collect();
        fn dfs(k: usize, n: usize, w: &mut Vec<i64>, partial: &mut [i64], rows: &[(Vec<i64>, i64)], bounds: &[Vec<(i64, i64)>], lo: i64, hi: i64) -> bool {
            for (r, (_, target)) in rows.iter().enumerate() {
                let need = target - partial[r];
                if need < bounds[r][k].0 || need > bounds[r][k].1 {
                    return false;
                }
            }
            if k == n {
                return true;
            }
            for x in lo..=hi {
                for (r, (a, _)) in rows.iter().enumerate() {
                    partial[r] += a[k] * x;
                }
                w.push(x);
                if dfs(k + 1, n, w, partial, rows, bounds, lo, hi) {
                    return true;
                }
                w.pop();
                for (r, (a, _)) in rows.iter().enumerate() {
                    partial[r] -= a[k] * x;
                }
            }
            false
        }
        if rows.is_empty() {
            return Some(vec![1; n]);
        }
        let mut w = Vec::with_capacity(n);
        let mut partial = vec![0; rows.len()];
        dfs(0, n, &mut w, &mut partial, &rows, &bounds, lo, hi).then(|| w.into_iter().map(|x| x as u32).collect())
    }
}

fn dot(w: &[u32], g: &[u32]) -> i64 {
    w.iter().zip(g).map(|(&a, &b)| a as i64 * b as i64).sum()
}

/// `f * x^{-beta}`: each term `c x^gamma` contributes `c x^{gamma - beta}`
/// when every exponent of `gamma - beta` stays at most `-1`, otherwise it dies.
pub fn mult_action<E: Clone + Eq + std::hash::Hash>(f: &HypersurfaceF<E>, b: &InverseMonomial, weights: &[u32]) -> Vec<(CoeffPoly<E>, InverseMonomial)> {
    f.terms
        .iter()
        .filter_map(|(c, gamma)| {
            let alpha: Option<Vec<u32>> = b.alpha.iter().zip(gamma).map(|(&a, &g)| (a > g).then(|| a - g)).collect();
            alpha.map(|a| (c.clone(), InverseMonomial::new(a, weights).expect("positive exponents")))
        })
        .collect()
}

/// A map between free `T`-modules with named bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap<E> {
    pub source_basis: Vec<InverseMonomial>,
    pub target_basis: Vec<InverseMonomial>,
    /// Rows index the target basis, columns the source basis.
    pub entries: PolyMatrix<E>,
}

/// Multiplication by `f` from the piece at `ell + p` to the piece at `ell`.
pub fn mult_matrix<E: Clone + Eq + std::hash::Hash>(f: &HypersurfaceF<E>, ell: u32, weights: &[u32]) -> GradedMap<E> {
    let target_basis = inverse_basis_weighted(weights, ell);
    let source_basis = inverse_basis_weighted(weights, ell + f.p());
    let index: HashMap<&[u32], usize> = target_basis.iter().enumerate().map(|(i, b)| (b.alpha.as_slice(), i)).collect();
    let mut entries = PolyMatrix::zeros(target_basis.len(), source_basis.len());
    for (j, b) in source_basis.iter().enumerate() {
        for (c, a) in mult_action(f, b, weights) {
            let i = index[a.alpha.as_slice()];
            entries.set(i, j, c);
        }
    }
    GradedMap { source_basis, target_basis, entries }
}

/// Inverse monomials of one `ell`, with a lookup table.
#[derive(Debug)]
pub struct EllBasis {
    pub ell: u32,
    pub elements: Vec<InverseMonomial>,
    index: HashMap<Vec<u32>, usize>,
    /// max and min of `w.alpha`; zero when empty.
    pub max_wdeg: i64,
    pub min_wdeg: i64,
}

impl EllBasis {
    fn new(weights: &[u32], ell: u32) -> Self {
        let elements = inverse_basis_weighted(weights, ell);
        let index = elements.iter().enumerate().map(|(i, b)| (b.alpha.clone(), i)).collect();
        let max_wdeg = elements.iter().map(|b| b.weighted_deg as i64).max().unwrap_or(0);
        let min_wdeg = elements.iter().map(|b| b.weighted_deg as i64).min().unwrap_or(0);
        EllBasis { ell, elements, index, max_wdeg, min_wdeg }
    }

    pub fn index_of(&self, alpha: &[u32]) -> Option<usize> {
        self.index.get(alpha).copied()
    }
}

#[derive(Debug)]
struct Block {
    alpha_idx: usize,
    offset: usize,
    basis: Arc<DegreeBasis>,
}

/// One combined-degree component of the cokernel at a fixed `ell`: the free
/// part `V` (pairs `t * x^{-alpha}` of that degree), the echelonized image `W`
/// of multiplication by `f`, and the standard (non-pivot) columns spanning `V/W`.
#[derive(Debug)]
pub struct Component<E> {
    pub ell: u32,
    pub degree: i64,
    blocks: Vec<Block>,
    block_of_alpha: Vec<Option<usize>>,
    dim: usize,
    image: SparseEchelon<E>,
    free: Vec<usize>,
    free_pos: HashMap<usize, usize>,
}

impl<E: Clone + Eq> Component<E> {
    /// Dimension of the free part `V`.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the cokernel component.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn is_zero(&self) -> bool {
        self.free.is_empty()
    }

    pub fn column(&self, alpha_idx: usize, mono: &Monomial) -> Option<usize> {
        let b = &self.blocks[(*self.block_of_alpha.get(alpha_idx)?)?];
        b.basis.index_of(mono).map(|k| b.offset + k)
    }

    /// `(alpha index, T-monomial)` of a column.
    pub fn decode(&self, col: usize) -> (usize, &Monomial) {
        let k = self.blocks.partition_point(|b| b.offset <= col) - 1;
        let b = &self.blocks[k];
        (b.alpha_idx, &b.basis.monomials[col - b.offset])
    }

    /// Standard columns: their classes form a basis of the cokernel component.
    pub fn standard_columns(&self) -> &[usize] {
        &self.free
    }

    /// Coordinates of the class of `v` in the standard basis.
    pub fn class_of<F: Field<Elem = E>>(&self, v: SparseVec<E>, field: &F) -> SparseVec<E> {
        self.image
            .reduce(v, field)
            .into_iter()
            .map(|(c, x)| (self.free_pos[&c], x))
            .collect()
    }
}

/// Cokernel components of multiplication by `f`, built lazily per
/// `(ell, combined degree)` and cached.
pub struct CokerEngine<'r, F: Field> {
    ring: &'r CoeffRing<F>,
    f: &'r HypersurfaceF<F::Elem>,
    grading: Grading,
    bases: HashMap<u32, Arc<EllBasis>>,
    components: HashMap<(u32, i64), Arc<Component<F::Elem>>>,
}

impl<'r, F: Field> CokerEngine<'r, F> {
    pub fn new(ring: &'r CoeffRing<F>, f: &'r HypersurfaceF<F::Elem>) -> Result<Self> {
        if f.n() != ring.n() {
            return Err(Error::Poly(format!("f has {} x-variables, ring has {}", f.n(), ring.n())));
        }
        let grading = f.grading(ring)?;
        Ok(CokerEngine { ring, f, grading, bases: HashMap::new(), components: HashMap::new() })
    }

    pub fn ring(&self) -> &'r CoeffRing<F> {
        self.ring
    }

    pub fn hypersurface(&self) -> &'r HypersurfaceF<F::Elem> {
        self.f
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn weights(&self) -> &[u32] {
        &self.grading.weights
    }

    pub fn ell_basis(&mut self, ell: u32) -> Arc<EllBasis> {
        let weights = &self.grading.weights;
        Arc::clone(self.bases.entry(ell).or_insert_with(|| Arc::new(EllBasis::new(weights, ell))))
    }

    /// Shift between combined degree and normalized degree at `ell`.
    pub fn offset(&mut self, ell: u32) -> i64 {
        self.ell_basis(ell).max_wdeg
    }

    /// Normalized degree below which every component at `ell` is spanned by
    /// generators: the cokernel is generated in normalized degrees `[0, top]`.
    pub fn generation_top(&mut self, ell: u32) -> i64 {
        let b = self.ell_basis(ell);
        b.max_wdeg - b.min_wdeg
    }

    pub fn normalized_to_combined(&mut self, ell: u32, d: i64) -> i64 {
        d - self.offset(ell)
    }

    /// Component of the cokernel at `ell` in combined degree `e`.
    pub fn component(&mut self, ell: u32, e: i64) -> Arc<Component<F::Elem>> {
        if let Some(c) = self.components.get(&(ell, e)) {
            return Arc::clone(c);
        }
        let comp = Arc::new(self.build_component(ell, e));
        self.components.insert((ell, e), Arc::clone(&comp));
        comp
    }

    /// Drop cached components of `ell` with combined degree below `e`.
    pub fn evict_below(&mut self, ell: u32, e: i64) {
        self.components.retain(|&(l, d), _| l != ell || d >= e);
    }

    /// `dim_k` of the cokernel at `ell` in normalized degree `d`.
    pub fn component_dim(&mut self, ell: u32, d: i64) -> usize {
        let e = self.normalized_to_combined(ell, d);
        self.component(ell, e).dim()
    }

    fn build_component(&mut self, ell: u32, e: i64) -> Component<F::Elem> {
        let field = self.ring.field().clone();
        let target = self.ell_basis(ell);
        let mut blocks = Vec::new();
        let mut block_of_alpha = vec![None; target.elements.len()];
        let mut dim = 0;
        for (idx, a) in target.elements.iter().enumerate() {
            let t_deg = e + a.weighted_deg as i64;
            if t_deg < 0 {
                continue;
            }
            let basis = self.ring.degree_basis(t_deg as u32);
            if basis.is_empty() {
                continue;
            }
            block_of_alpha[idx] = Some(blocks.len());
            let len = basis.len();
            blocks.push(Block { alpha_idx: idx, offset: dim, basis });
            dim += len;
        }
        let mut comp = Component {
            ell,
            degree: e,
            blocks,
            block_of_alpha,
            dim,
            image: SparseEchelon::new(dim),
            free: Vec::new(),
            free_pos: HashMap::new(),
        };
        if dim > 0 {
            let source = self.ell_basis(ell + self.f.p());
            let mut echelon = SparseEchelon::new(dim);
            for beta in &source.elements {
                let s_deg = e + beta.weighted_deg as i64 - self.grading.f_degree;
                if s_deg < 0 {
                    continue;
                }
                // surviving terms: (target alpha index, coefficient)
                let hits: Vec<(usize, &CoeffPoly<F::Elem>)> = self
                    .f
                    .terms
                    .iter()
                    .filter_map(|(c, gamma)| {
                        let alpha: Option<Vec<u32>> =
                            beta.alpha.iter().zip(gamma).map(|(&b, &g)| (b > g).then(|| b - g)).collect();
                        alpha.and_then(|a| target.index_of(&a)).map(|i| (i, c))
                    })
                    .collect();
                if hits.is_empty() {
                    continue;
                }
                let s_basis = self.ring.degree_basis(s_deg as u32);
                for s in &s_basis.monomials {
                    let mut v = Vec::new();
                    for (aidx, c) in &hits {
                        for (mu, x) in c.terms() {
                            let col = comp
                                .column(*aidx, &s.mul(mu))
                                .expect("product lands in the target component");
                            v.push((col, x.clone()));
                        }
                    }
                    echelon.insert(normalize_sparse(v, &field), &field);
                    if echelon.rank() == dim {
                        break;
                    }
                }
                if echelon.rank() == dim {
                    break;
                }
            }
            comp.free = echelon.free_columns();
            comp.free_pos = comp.free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            comp.image = echelon;
        }
        comp
    }
}

/// `dim_k` of `H^n_I(R/fR)_{-ell}` in normalized degree `d`.
pub fn coker_component_dim<F: Field>(ring: &CoeffRing<F>, f: &HypersurfaceF<F::Elem>, ell: u32, d: i64) -> Result<usize> {
    Ok(CokerEngine::new(ring, f)?.component_dim(ell, d))
}
