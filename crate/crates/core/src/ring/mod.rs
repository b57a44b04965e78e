//! The coefficient ring `T` and the variable layout of `R = T[x_1..x_n]`.
//!
//! `T` is either the full polynomial ring `k[u_1..u_m]` or the monomial
//! subalgebra generated by finitely many monomials (an affine semigroup ring).
//! Both are graded by total `u`-degree; all computations happen one degree at a
//! time over the basis returned by [`CoeffRing::degree_basis`].

mod matrix;
mod monomial;
mod poly;

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, RwLock};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use matrix::PolyMatrix;
pub use monomial::{all_of_degree, Monomial};
pub use poly::CoeffPoly;

use crate::error::{Error, Result};
use crate::field::{Field, RationalField};
use crate::linalg::ScalarMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingBackend {
    FullPolynomial,
    Semigroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub characteristic: u64,
    pub backend: RingBackend,
    pub u_var_names: Vec<String>,
    /// Exponent vectors; only meaningful for the semigroup backend.
    pub semigroup_generators: Vec<Monomial>,
    pub x_var_names: Vec<String>,
    /// Combined-grading weights. `None` lets the engine search for them.
    pub x_weights: Option<Vec<u32>>,
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl RingDescriptor {
    pub fn polynomial(characteristic: u64, u_vars: &[&str], x_vars: &[&str]) -> Self {
        RingDescriptor {
            characteristic,
            backend: RingBackend::FullPolynomial,
            u_var_names: names(u_vars),
            semigroup_generators: Vec::new(),
            x_var_names: names(x_vars),
            x_weights: None,
        }
    }

    pub fn semigroup(
        characteristic: u64,
        u_vars: &[&str],
        generators: Vec<Monomial>,
        x_vars: &[&str],
    ) -> Self {
        RingDescriptor {
            characteristic,
            backend: RingBackend::Semigroup,
            u_var_names: names(u_vars),
            semigroup_generators: generators,
            x_var_names: names(x_vars),
            x_weights: None,
        }
    }

    pub fn with_weights(mut self, weights: Vec<u32>) -> Self {
        self.x_weights = Some(weights);
        self
    }

    pub fn m(&self) -> usize {
        self.u_var_names.len()
    }

    pub fn n(&self) -> usize {
        self.x_var_names.len()
    }

    /// `u` names followed by `x` names: the variable order of the expression parser.
    pub fn all_var_names(&self) -> Vec<String> {
        self.u_var_names.iter().chain(&self.x_var_names).cloned().collect()
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = (self.m(), self.n());
        if m == 0 {
            return Err(Error::Ring("at least one coefficient variable is required".into()));
        }
        if n == 0 {
            return Err(Error::Ring("at least one x-variable is required".into()));
        }
        let mut seen = HashSet::new();
        for name in self.u_var_names.iter().chain(&self.x_var_names) {
            let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::Ring(format!("`{name}` is not a valid variable name")));
            }
            if !seen.insert(name) {
                return Err(Error::Ring(format!("variable `{name}` declared twice")));
            }
        }
        if self.backend == RingBackend::Semigroup {
            if self.semigroup_generators.is_empty() {
                return Err(Error::Ring("semigroup backend needs at least one generator".into()));
            }
            let mut gens = HashSet::new();
            for g in &self.semigroup_generators {
                if g.nvars() != m {
                    return Err(Error::Ring(format!(
                        "generator has {} exponents, expected {m}",
                        g.nvars()
                    )));
                }
                if g.is_one() {
                    return Err(Error::Ring("semigroup generators must be nonconstant".into()));
                }
                if !gens.insert(g) {
                    return Err(Error::Ring(format!(
                        "duplicate semigroup generator {}",
                        g.format(&self.u_var_names)
                    )));
                }
            }
        }
        if let Some(w) = &self.x_weights {
            if w.len() != n {
                return Err(Error::Ring(format!("{} x-weights given for {n} x-variables", w.len())));
            }
            if w.contains(&0) {
                return Err(Error::Ring("x-weights must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Monomials of `T` in one degree, in canonical order, with a reverse index.
#[derive(Debug)]
pub struct DegreeBasis {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    fn new(degree: u32, mut monomials: Vec<Monomial>) -> Self {
        monomials.sort_unstable_by(|a, b| b.cmp(a));
        monomials.dedup();
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        DegreeBasis { degree, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// A validated ring descriptor paired with its scalar field.
///
/// Degree bases are memoized; population is idempotent so concurrent readers
/// may race to fill the same slot harmlessly.
#[derive(Debug)]
pub struct CoeffRing<F: Field> {
    desc: RingDescriptor,
    field: F,
    bases: RwLock<HashMap<u32, Arc<DegreeBasis>>>,
}

impl<F: Field> CoeffRing<F> {
    pub fn new(desc: RingDescriptor, field: F) -> Result<Self> {
        desc.validate()?;
        if desc.characteristic != field.characteristic() {
            return Err(Error::Config(format!(
                "ring declares characteristic {} but the field has characteristic {}",
                desc.characteristic,
                field.characteristic()
            )));
        }
        Ok(CoeffRing { desc, field, bases: RwLock::new(HashMap::new()) })
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.desc
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.desc.m()
    }

    pub fn n(&self) -> usize {
        self.desc.n()
    }

    pub fn u_names(&self) -> &[String] {
        &self.desc.u_var_names
    }

    pub fn backend(&self) -> RingBackend {
        self.desc.backend
    }

    /// Monomial generators of the homogeneous maximal ideal `m` of `T`.
    pub fn maximal_ideal_generators(&self) -> Vec<Monomial> {
        match self.desc.backend {
            RingBackend::FullPolynomial => (0..self.m()).map(|j| Monomial::var(self.m(), j)).collect(),
            RingBackend::Semigroup => self.desc.semigroup_generators.clone(),
        }
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.maximal_ideal_generators().iter().map(Monomial::degree).max().unwrap_or(1)
    }

    /// Krull dimension: `m` for the polynomial ring, rank of the generator
    /// lattice for a semigroup ring.
    pub fn krull_dim(&self) -> usize {
        match self.desc.backend {
            RingBackend::FullPolynomial => self.m(),
            RingBackend::Semigroup => {
                let gens = &self.desc.semigroup_generators;
                let q = RationalField;
                let mat = ScalarMatrix::from_fn(gens.len(), self.m(), |i, j| {
                    BigRational::from_integer(gens[i].exponents()[j].into())
                });
                mat.rank(&q)
            }
        }
    }

    pub fn degree_basis(&self, d: u32) -> Arc<DegreeBasis> {
        if let Some(b) = self.bases.read().expect("basis cache poisoned").get(&d) {
            return Arc::clone(b);
        }
        let monos = match self.desc.backend {
            RingBackend::FullPolynomial => all_of_degree(self.m(), d),
            RingBackend::Semigroup => self.semigroup_degree(d),
        };
        let basis = Arc::new(DegreeBasis::new(d, monos));
        self.bases
            .write()
            .expect("basis cache poisoned")
            .entry(d)
            .or_insert(basis)
            .clone()
    }

    // T_d = union over generators g of g * T_{d - deg g}, T_0 = {1}.
    fn semigroup_degree(&self, d: u32) -> Vec<Monomial> {
        if d == 0 {
            return vec![Monomial::one(self.m())];
        }
        let mut out = HashSet::new();
        for g in &self.desc.semigroup_generators {
            let gd = g.degree();
            if gd > d {
                continue;
            }
            for t in &self.degree_basis(d - gd).monomials {
                out.insert(t.mul(g));
            }
        }
        out.into_iter().collect()
    }

    /// All monomials of `T` of degree `d`, in canonical order.
    pub fn t_degree_basis(&self, d: u32) -> Vec<Monomial> {
        self.degree_basis(d).monomials.clone()
    }

    /// Whether `e` is a nonnegative integer combination of the semigroup generators.
    pub fn semigroup_member(&self, e: &[u32]) -> Result<bool> {
        if self.desc.backend != RingBackend::Semigroup {
            return Err(Error::Usage("semigroup_member requires the semigroup backend".into()));
        }
        if e.len() != self.m() {
            return Err(Error::Usage(format!("exponent vector has length {}, expected {}", e.len(), self.m())));
        }
        Ok(self.contains(&Monomial(e.to_vec())))
    }

    pub fn contains(&self, mono: &Monomial) -> bool {
        match self.desc.backend {
            RingBackend::FullPolynomial => true,
            RingBackend::Semigroup => self.degree_basis(mono.degree()).index_of(mono).is_some(),
        }
    }

    /// Check that every monomial of `p` lies in `T`.
    pub fn check_element(&self, p: &CoeffPoly<F::Elem>) -> Result<()> {
        for m in p.monomials() {
            if m.nvars() != self.m() {
                return Err(Error::Poly(format!("element has {} variables, ring has {}", m.nvars(), self.m())));
            }
            if !self.contains(m) {
                return Err(Error::Poly(format!(
                    "monomial {} is not in the coefficient ring",
                    m.format(self.u_names())
                )));
            }
        }
        Ok(())
    }

    pub fn poly_mul(&self, a: &CoeffPoly<F::Elem>, b: &CoeffPoly<F::Elem>) -> CoeffPoly<F::Elem> {
        a.mul(b, &self.field)
    }

    pub fn format(&self, p: &CoeffPoly<F::Elem>) -> String {
        p.format(self.u_names(), &self.field)
    }
}
