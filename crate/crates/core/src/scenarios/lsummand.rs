//! The direct summand spanned by `x^{-s d - 1} y^{-t e - 1}` (`s + t = q`) for a
//! two-term `f = c_1 x^d + c_2 y^e` whose terms live in disjoint blocks of
//! x-variables, and the bidiagonal matrix of `f` between consecutive summands.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ring::{CoeffPoly, CoeffRing, PolyMatrix};
use crate::toplc::{mult_matrix, HypersurfaceF, InverseMonomial};

/// Exponents of the two terms, in the order `f` stores them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTerm<E> {
    pub c1: CoeffPoly<E>,
    pub d: Vec<u32>,
    pub c2: CoeffPoly<E>,
    pub e: Vec<u32>,
}

pub fn two_term<E: Clone + Eq + std::hash::Hash>(f: &HypersurfaceF<E>) -> Result<TwoTerm<E>> {
    let [(c1, d), (c2, e)] = f.terms() else {
        return Err(Error::Hypothesis(format!("f must have exactly two terms, it has {}", f.terms().len())));
    };
    for i in 0..d.len() {
        match (d[i] > 0, e[i] > 0) {
            (true, true) => return Err(Error::Hypothesis(format!("the two terms share x-variable {}", i + 1))),
            (false, false) => {
                return Err(Error::Hypothesis(format!("x-variable {} occurs in neither term", i + 1)));
            }
            _ => {}
        }
    }
    Ok(TwoTerm { c1: c1.clone(), d: d.clone(), c2: c2.clone(), e: e.clone() })
}

/// `ell(q) = q p + n`.
pub fn ell_of_q<E: Clone + Eq + std::hash::Hash>(f: &HypersurfaceF<E>, q: u32) -> u32 {
    q * f.p() + f.n() as u32
}

/// Whether `f` has the two-term disjoint-support shape.
pub fn is_two_term<E: Clone + Eq + std::hash::Hash>(f: &HypersurfaceF<E>) -> bool {
    two_term(f).is_ok()
}

/// The `q + 1` basis elements at `ell(q)`, ordered by `s` descending.
pub fn l_summand_basis<F: Field>(ring: &CoeffRing<F>, f: &HypersurfaceF<F::Elem>, q: u32) -> Result<Vec<InverseMonomial>> {
    let tt = two_term(f)?;
    let weights = f.grading(ring)?.weights;
    (0..=q)
        .rev()
        .map(|s| {
            let t = q - s;
            let alpha = tt.d.iter().zip(&tt.e).map(|(&di, &ei)| s * di + t * ei + 1).collect();
            InverseMonomial::new(alpha, &weights)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaCheck {
    pub q: u32,
    pub ell: u32,
    pub ok: bool,
    /// Rows index the summand at `ell(q)`, columns the one at `ell(q + 1)`.
    pub matrix: Vec<Vec<String>>,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
}

/// Restriction of multiplication by `f` to the summands at `ell(q + 1)` and
/// `ell(q)`.
pub fn delta_matrix<F: Field>(ring: &CoeffRing<F>, f: &HypersurfaceF<F::Elem>, q: u32) -> Result<PolyMatrix<F::Elem>> {
    let weights = f.grading(ring)?.weights;
    let map = mult_matrix(f, ell_of_q(f, q), &weights);
    let rows = positions(&map.target_basis, &l_summand_basis(ring, f, q)?);
    let cols = positions(&map.source_basis, &l_summand_basis(ring, f, q + 1)?);
    Ok(map.entries.submatrix(&rows, &cols))
}

fn positions(basis: &[InverseMonomial], want: &[InverseMonomial]) -> Vec<usize> {
    want.iter()
        .map(|w| basis.iter().position(|b| b.alpha == w.alpha).expect("summand element lies in the basis"))
        .collect()
}

/// The matrix of `f` between the summands is `(q+1) x (q+2)` with `c_1` on the
/// diagonal, `c_2` on the superdiagonal and zeros elsewhere.
pub fn delta_matrix_check<F: Field>(ring: &CoeffRing<F>, f: &HypersurfaceF<F::Elem>, q: u32) -> Result<DeltaCheck> {
    let tt = two_term(f)?;
    let m = delta_matrix(ring, f, q)?;
    let expected = PolyMatrix::from_fn(q as usize + 1, q as usize + 2, |i, j| {
        if j == i {
            tt.c1.clone()
        } else if j == i + 1 {
            tt.c2.clone()
        } else {
            CoeffPoly::zero()
        }
    });
    let xs = &ring.descriptor().x_var_names;
    Ok(DeltaCheck {
        q,
        ell: ell_of_q(f, q),
        ok: m == expected,
        matrix: m.format_rows(ring.u_names(), ring.field()),
        rows: l_summand_basis(ring, f, q)?.iter().map(|b| b.format(xs)).collect(),
        cols: l_summand_basis(ring, f, q + 1)?.iter().map(|b| b.format(xs)).collect(),
    })
}

/// No basis element at `ell(q + 1)` outside the summand maps to anything with
/// a nonzero component on the summand at `ell(q)`.
pub fn complement_closure_check<F: Field>(ring: &CoeffRing<F>, f: &HypersurfaceF<F::Elem>, q: u32) -> Result<bool> {
    let weights = f.grading(ring)?.weights;
    let map = mult_matrix(f, ell_of_q(f, q), &weights);
    let rows = positions(&map.target_basis, &l_summand_basis(ring, f, q)?);
    let inside = positions(&map.source_basis, &l_summand_basis(ring, f, q + 1)?);
    Ok((0..map.source_basis.len())
        .filter(|j| !inside.contains(j))
        .all(|j| rows.iter().all(|&i| map.entries.get(i, j).is_zero())))
}
