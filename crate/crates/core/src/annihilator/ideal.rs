use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{SparseEchelon, SparseVec};
use crate::ring::{CoeffPoly, CoeffRing, DegreeBasis, Monomial};

/// Homogeneous ideal of `T` given by generators. Degreewise spans are exact at
/// every degree; `degree_cap` records how far the generator list itself is
/// known to be complete (annihilators are only computed up to a cap).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedIdeal<E> {
    pub generators: Vec<CoeffPoly<E>>,
    pub degree_cap: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub degree: u32,
    /// Rendered element lying in one ideal but not the other.
    pub witness: String,
    /// `true` if the witness lies in the first ideal.
    pub in_first: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealComparison {
    pub equal: bool,
    pub cap: u32,
    pub discrepancy: Option<Discrepancy>,
}

fn canonical_order<E: Clone + Eq>(a: &CoeffPoly<E>, b: &CoeffPoly<E>) -> Ordering {
    a.homogeneous_degree().cmp(&b.homogeneous_degree()).then_with(|| b.monomials().cmp(a.monomials()))
}

/// Monic, deduplicated, sorted by degree and then by descending monomials.
pub fn canonicalize<F: Field>(gens: Vec<CoeffPoly<F::Elem>>, field: &F) -> Vec<CoeffPoly<F::Elem>> {
    let mut out: Vec<_> = gens.into_iter().filter(|g| !g.is_zero()).map(|g| g.monic(field)).collect();
    out.sort_by(canonical_order);
    out.dedup();
    out
}

pub(crate) fn to_coords<E: Clone + Eq>(p: &CoeffPoly<E>, basis: &DegreeBasis) -> SparseVec<E> {
    let mut v: SparseVec<E> = p
        .terms()
        .map(|(m, c)| (basis.index_of(m).expect("monomial of the right degree in T"), c.clone()))
        .collect();
    v.sort_by_key(|&(i, _)| i);
    v
}

pub(crate) fn from_coords<F: Field>(v: &SparseVec<F::Elem>, basis: &DegreeBasis, field: &F) -> CoeffPoly<F::Elem> {
    CoeffPoly::from_terms(v.iter().map(|(i, c)| (basis.monomials[*i].clone(), c.clone())), field)
}

impl<E: Clone + Eq + std::hash::Hash> GradedIdeal<E> {
    /// Validates homogeneity and membership in `T`; zero generators are dropped.
    pub fn new<F: Field<Elem = E>>(gens: Vec<CoeffPoly<E>>, ring: &CoeffRing<F>) -> Result<Self> {
        for g in &gens {
            ring.check_element(g)?;
            if !g.is_zero() && !g.is_homogeneous() {
                return Err(Error::Poly(format!("ideal generator {} is not homogeneous", ring.format(g))));
            }
        }
        Ok(GradedIdeal { generators: canonicalize(gens, ring.field()), degree_cap: None })
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.degree_cap = Some(cap);
        self
    }

    /// `m^k`, generated by all products of `k` generators of `m`.
    pub fn maximal_power<F: Field<Elem = E>>(ring: &CoeffRing<F>, k: u32) -> Self {
        let mut monos = vec![Monomial::one(ring.m())];
        let gens = ring.maximal_ideal_generators();
        for _ in 0..k {
            let mut next: Vec<Monomial> = monos.iter().flat_map(|a| gens.iter().map(move |g| a.mul(g))).collect();
            next.sort();
            next.dedup();
            monos = next;
        }
        let field = ring.field();
        GradedIdeal {
            generators: canonicalize(monos.into_iter().map(|m| CoeffPoly::monomial(m, field)).collect(), field),
            degree_cap: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.generators.iter().filter_map(|g| g.homogeneous_degree()).min()
    }

    /// Echelon form of `I_d` in the monomial coordinates of `T_d`.
    pub fn span_at<F: Field<Elem = E>>(&self, ring: &CoeffRing<F>, d: u32) -> SparseEchelon<E> {
        let field = ring.field();
        let basis = ring.degree_basis(d);
        let mut ech = SparseEchelon::new(basis.len());
        for g in &self.generators {
            let Some(gd) = g.homogeneous_degree() else { continue };
            if gd > d {
                continue;
            }
            for s in &ring.degree_basis(d - gd).monomials {
                if ech.rank() == basis.len() {
                    return ech;
                }
                ech.insert(to_coords(&g.mul_monomial(s), &basis), field);
            }
        }
        ech
    }

    pub fn contains<F: Field<Elem = E>>(&self, ring: &CoeffRing<F>, p: &CoeffPoly<E>) -> Result<bool> {
        if p.is_zero() {
            return Ok(true);
        }
        let d = p.homogeneous_degree().ok_or_else(|| Error::Poly("membership test needs a homogeneous element".into()))?;
        ring.check_element(p)?;
        let basis = ring.degree_basis(d);
        Ok(self.span_at(ring, d).contains(to_coords(p, &basis), ring.field()))
    }

    pub fn format<F: Field<Elem = E>>(&self, ring: &CoeffRing<F>) -> String {
        if self.generators.is_empty() {
            return "(0)".into();
        }
        let parts: Vec<String> = self.generators.iter().map(|g| ring.format(g)).collect();
        format!("({})", parts.join(", "))
    }
}

fn first_missing<F: Field>(
    from: &SparseEchelon<F::Elem>,
    into: &SparseEchelon<F::Elem>,
    basis: &DegreeBasis,
    ring: &CoeffRing<F>,
) -> Option<String> {
    let field = ring.field();
    from.reduced_rows(field)
        .into_iter()
        .find(|v| !into.contains(v.clone(), field))
        .map(|v| ring.format(&from_coords(&v, basis, field)))
}

/// Compare `a_d` and `b_d` for every `d <= cap`.
pub fn ideal_equal_upto<F: Field>(
    a: &GradedIdeal<F::Elem>,
    b: &GradedIdeal<F::Elem>,
    ring: &CoeffRing<F>,
    cap: u32,
) -> IdealComparison {
    for d in 0..=cap {
        let basis = ring.degree_basis(d);
        let sa = a.span_at(ring, d);
        let sb = b.span_at(ring, d);
        let witness = first_missing(&sa, &sb, &basis, ring)
            .map(|w| (w, true))
            .or_else(|| first_missing(&sb, &sa, &basis, ring).map(|w| (w, false)));
        if let Some((witness, in_first)) = witness {
            return IdealComparison { equal: false, cap, discrepancy: Some(Discrepancy { degree: d, witness, in_first }) };
        }
    }
    IdealComparison { equal: true, cap, discrepancy: None }
}
