use std::collections::BTreeMap;

use crate::field::Field;
use crate::ring::Monomial;

/// Sparse element of the coefficient ring: monomial -> nonzero scalar.
///
/// Zero coefficients are never stored, so structural equality is ring
/// equality. Iteration via [`CoeffPoly::terms`] is in descending lex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffPoly<E> {
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone + Eq> CoeffPoly<E> {
    pub fn zero() -> Self {
        CoeffPoly { terms: BTreeMap::new() }
    }

    pub fn constant<F: Field<Elem = E>>(c: E, nvars: usize, field: &F) -> Self {
        Self::term(Monomial::one(nvars), c, field)
    }

    pub fn one<F: Field<Elem = E>>(nvars: usize, field: &F) -> Self {
        Self::constant(field.one(), nvars, field)
    }

    pub fn term<F: Field<Elem = E>>(mono: Monomial, c: E, field: &F) -> Self {
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(mono, c);
        }
        CoeffPoly { terms }
    }

    pub fn monomial<F: Field<Elem = E>>(mono: Monomial, field: &F) -> Self {
        Self::term(mono, field.one(), field)
    }

    pub fn from_terms<F: Field<Elem = E>>(
        terms: impl IntoIterator<Item = (Monomial, E)>,
        field: &F,
    ) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c, field);
        }
        p
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

    /// Terms in canonical (descending lex) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &E)> + '_ {
        self.terms.iter().rev()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.keys().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    pub fn leading(&self) -> Option<(&Monomial, &E)> {
        self.terms.iter().next_back()
    }

    /// The common degree of all terms; `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    pub fn constant_term(&self, nvars: usize) -> Option<&E> {
        self.terms.get(&Monomial::one(nvars))
    }

    pub fn add_term<F: Field<Elem = E>>(&mut self, m: Monomial, c: &E, field: &F) {
        if field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = field.add(v, c);
                if field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c, field);
        }
        out
    }

    pub fn neg<F: Field<Elem = E>>(&self, field: &F) -> Self {
        CoeffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> Self {
        self.add(&other.neg(field), field)
    }

    pub fn scale<F: Field<Elem = E>>(&self, c: &E, field: &F) -> Self {
        if field.is_zero(c) {
            return Self::zero();
        }
        CoeffPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), field.mul(v, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        CoeffPoly { terms: self.terms.iter().map(|(m, v)| (m.mul(mono), v.clone())).collect() }
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &field.mul(ca, cb), field);
            }
        }
        out
    }

    pub fn pow<F: Field<Elem = E>>(&self, k: u32, nvars: usize, field: &F) -> Self {
        let mut acc = Self::one(nvars, field);
        for _ in 0..k {
            acc = acc.mul(self, field);
        }
        acc
    }

    /// Scaled so the leading coefficient is one. Zero stays zero.
    pub fn monic<F: Field<Elem = E>>(&self, field: &F) -> Self {
        match self.leading() {
            Some((_, c)) => {
                let inv = field.inv(c).expect("stored coefficients are nonzero");
                self.scale(&inv, field)
            }
            None => Self::zero(),
        }
    }

    pub fn format<F: Field<Elem = E>>(&self, names: &[String], field: &F) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let shown = field.display(c);
            let (negative, magnitude) = match shown.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, shown),
            };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let body = m.format(names);
            match (magnitude == "1", m.is_one()) {
                (true, _) => out.push_str(&body),
                (false, true) => out.push_str(&magnitude),
                (false, false) => {
                    out.push_str(&magnitude);
                    out.push('*');
                    out.push_str(&body);
                }
            }
        }
        out
    }
}
