//! End-to-end pipelines: coefficient ideals, system-of-parameters and
//! finite-length checks, the unit-coefficient vanishing check, the two-term
//! summand structure, and the full verification run behind `verify`.

mod config;
mod lsummand;

use std::collections::HashSet;

use serde::Serialize;

pub use config::{preset_source, BackendName, EllRange, Scenario, ScenarioSpec, PRESET_NAMES};
pub use lsummand::{
    complement_closure_check, delta_matrix, delta_matrix_check, ell_of_q, is_two_term, l_summand_basis, two_term,
    DeltaCheck, TwoTerm,
};

use crate::annihilator::GradedIdeal;
use crate::error::Result;
use crate::field::Field;
use crate::ring::{CoeffPoly, CoeffRing};
use crate::socle::{component_table, star_socle_table, SocleReport, WindowPolicy};
use crate::toplc::HypersurfaceF;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Inconclusive,
}

impl TriState {
    pub fn as_str(self) -> &'static str {
        match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// `C_f`: the ideal of `T` generated by the coefficients of `f`.
pub fn coefficient_ideal<F: Field>(ring: &CoeffRing<F>, f: &HypersurfaceF<F::Elem>) -> Result<GradedIdeal<F::Elem>> {
    GradedIdeal::new(f.coefficients().cloned().collect(), ring)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimaryCheck {
    pub state: TriState,
    pub cap: u32,
    /// `dim_k (T/I)_d` for `d = 0..=cap`.
    pub quotient_dims: Vec<usize>,
    pub note: String,
}

/// Whether `T/I` has finite length, judged from `dim (T/I)_d` for `d <= cap`.
///
/// `yes` needs a zero band `[cap - slack, cap]` with `slack` at least the
/// largest generator degree of `m`, which forces `(T/I)_d = 0` beyond the cap.
/// `no` is reported for the unit ideal, the zero ideal, or when some generator
/// of `m` has no power in `I` through the cap while the quotient dimensions
/// are nondecreasing across the band. Anything else is inconclusive.
pub fn is_m_primary_upto<F: Field>(ring: &CoeffRing<F>, ideal: &GradedIdeal<F::Elem>, cap: u32) -> PrimaryCheck {
    let cap = cap.max(1);
    let quotient_dims: Vec<usize> =
        (0..=cap).map(|d| ring.degree_basis(d).len() - ideal.span_at(ring, d).rank()).collect();
    let done = |state, note: String| PrimaryCheck { state, cap, quotient_dims: quotient_dims.clone(), note };
    if ideal.is_zero() {
        return done(TriState::No, "the zero ideal".into());
    }
    if quotient_dims[0] == 0 {
        return done(TriState::No, "the unit ideal".into());
    }
    let gen_deg = ideal.generators.iter().filter_map(|g| g.homogeneous_degree()).max().unwrap_or(0);
    let slack = gen_deg.max(ring.max_generator_degree());
    if cap >= slack && quotient_dims[(cap - slack) as usize..].iter().all(|&d| d == 0) {
        return done(TriState::Yes, format!("(T/I)_d = 0 for d in [{}, {cap}]", cap - slack));
    }
    let band = &quotient_dims[cap.saturating_sub(slack) as usize..];
    let nondecreasing = band.windows(2).all(|w| w[0] <= w[1]) && band.iter().all(|&d| d > 0);
    let field = ring.field();
    let powerless = ring.maximal_ideal_generators().into_iter().find(|g| {
        let gd = g.degree().max(1);
        (1..=cap / gd).all(|k| {
            let p = CoeffPoly::monomial(g.pow(k), field);
            !ideal.contains(ring, &p).unwrap_or(false)
        })
    });
    match (powerless, nondecreasing) {
        (Some(g), true) => {
            let names = ring.u_names();
            done(TriState::No, format!("no power of {} lies in I through degree {cap}", g.format(names)))
        }
        _ => done(TriState::Inconclusive, format!("quotient does not vanish by degree {cap}")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SopCheck {
    pub state: TriState,
    pub distinct_coefficients: usize,
    pub krull_dim: usize,
    pub note: String,
}

/// The distinct coefficients of `f` number `dim T`, lie in `m`, and generate an
/// `m`-primary ideal.
pub fn check_sop<F: Field>(ring: &CoeffRing<F>, f: &HypersurfaceF<F::Elem>, cap: u32) -> Result<SopCheck> {
    let distinct: HashSet<&CoeffPoly<F::Elem>> = f.coefficients().collect();
    let krull_dim = ring.krull_dim();
    let done = |state, note: String| SopCheck { state, distinct_coefficients: distinct.len(), krull_dim, note };
    if distinct.len() != krull_dim {
        return Ok(done(TriState::No, format!("{} distinct coefficients but dim T = {krull_dim}", distinct.len())));
    }
    if let Some(c) = f.coefficients().find(|c| c.constant_term(ring.m()).is_some()) {
        return Ok(done(TriState::No, format!("coefficient {} is not in m", ring.format(c))));
    }
    let primary = is_m_primary_upto(ring, &coefficient_ideal(ring, f)?, cap);
    Ok(done(primary.state, format!("m-primary check: {}", primary.note)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingRow {
    pub ell: u32,
    pub component_total: usize,
    pub first_nonzero_degree: Option<i64>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    /// `f` with every coefficient reduced modulo `m`.
    pub f_bar: String,
    pub f_bar_nonzero: bool,
    pub rows: Vec<VanishingRow>,
    pub all_zero: bool,
    /// `f_bar != 0` exactly when every scanned component vanished.
    pub consistent: bool,
}

/// Reduction of `f` modulo `m`: the terms whose coefficient has a nonzero
/// scalar part, with that scalar as coefficient.
pub fn reduce_mod_m<F: Field>(ring: &CoeffRing<F>, f: &HypersurfaceF<F::Elem>) -> Vec<(F::Elem, Vec<u32>)> {
    f.terms()
        .iter()
        .filter_map(|(c, g)| c.constant_term(ring.m()).map(|s| (s.clone(), g.clone())))
        .collect()
}

fn format_f_bar<F: Field>(ring: &CoeffRing<F>, terms: &[(F::Elem, Vec<u32>)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let field = ring.field();
    let polys: Vec<_> = terms
        .iter()
        .map(|(s, g)| (CoeffPoly::constant(s.clone(), ring.m(), field), g.clone()))
        .collect();
    HypersurfaceF::new(polys, ring).map(|h| h.format(ring)).unwrap_or_else(|_| "?".into())
}

pub fn vanishing_check<F: Field>(
    ring: &CoeffRing<F>,
    f: &HypersurfaceF<F::Elem>,
    ells: &[u32],
    policy: WindowPolicy,
    jobs: usize,
) -> Result<VanishingReport> {
    let f_bar = reduce_mod_m(ring, f);
    let table = component_table(ring, f, ells, policy, jobs)?;
    let rows: Vec<VanishingRow> = table
        .iter()
        .map(|r| VanishingRow {
            ell: r.ell,
            component_total: r.total(),
            first_nonzero_degree: r.dims.iter().find(|(_, &c)| c > 0).map(|(&d, _)| d),
            certified: r.certified_zero_above,
        })
        .collect();
    let all_zero = rows.iter().all(|r| r.component_total == 0);
    let nonzero = !f_bar.is_empty();
    Ok(VanishingReport { f_bar: format_f_bar(ring, &f_bar), f_bar_nonzero: nonzero, rows, all_zero, consistent: nonzero == all_zero })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub scenario: Option<String>,
    pub f: String,
    pub sop_check: TriState,
    pub support_check: TriState,
    pub socle_table: Vec<SocleReport>,
    /// `ell` values whose star socle must be nonzero for a pass.
    pub required_ells: Vec<u32>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// For a two-term `f` the nonvanishing is claimed along `ell(q)`; otherwise
/// along every `ell` in range.
pub fn required_ells<E: Clone + Eq + std::hash::Hash>(f: &HypersurfaceF<E>, ells: &[u32]) -> Vec<u32> {
    if !is_two_term(f) {
        return ells.to_vec();
    }
    let (p, n) = (f.p(), f.n() as u32);
    ells.iter().copied().filter(|&l| l >= n && (l - n) % p == 0).collect()
}

pub fn verify_theorem<F: Field>(scn: &Scenario<F>, jobs: usize) -> Result<VerificationReport> {
    let (ring, f) = (&scn.ring, &scn.f);
    let cap = scn.ideal_cap();
    let sop = check_sop(ring, f, cap)?;
    let support = is_m_primary_upto(ring, &coefficient_ideal(ring, f)?, cap);
    let table = star_socle_table(ring, f, &scn.ells, scn.policy, jobs)?;
    let required = required_ells(f, &scn.ells);

    let mut notes = vec![format!("sop: {}", sop.note), format!("support: {}", support.note)];
    let mut missing_certified = false;
    let mut missing_uncertified = false;
    for row in &table {
        let needed = required.contains(&row.ell);
        let star = row.star_socle_total();
        if star == 0 {
            match (needed, row.certified_zero_above) {
                (true, true) => missing_certified = true,
                (true, false) => missing_uncertified = true,
                (false, _) => notes.push(format!("ell {}: star socle is zero (not required)", row.ell)),
            }
        }
        if !row.certified_zero_above {
            notes.push(format!(
                "ell {}: window [{}, {}] not certified; totals are lower bounds",
                row.ell, row.window.0, row.window.1
            ));
        }
    }
    let verdict = if sop.state == TriState::No || support.state == TriState::No || missing_certified {
        Verdict::Fail
    } else if sop.state == TriState::Inconclusive || support.state == TriState::Inconclusive || missing_uncertified {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(VerificationReport {
        scenario: scn.name.clone(),
        f: f.format(ring),
        sop_check: sop.state,
        support_check: support.state,
        socle_table: table,
        required_ells: required,
        verdict,
        notes,
    })
}
