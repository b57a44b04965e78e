//! Socle and `*`socle dimensions of the cokernel pieces `H^n_I(R/fR)_{-ell}`.
//!
//! For a class `v` in normalized degree `d`, the socle condition is
//! `g * v = 0` for every monomial generator `g` of the maximal ideal of `T`;
//! the `*`socle adds `x_i * v = 0` in the piece at `ell - 1`, where `x_i`
//! lowers `alpha_i` by one and kills the symbol when `alpha_i = 1`. Both are
//! kernels of stacked maps into cokernel components, computed with the normal
//! forms of [`crate::toplc::Component`].

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::field::Field;
use crate::linalg::{SparseEchelon, SparseVec};
use crate::ring::CoeffRing;
use crate::toplc::{CokerEngine, HypersurfaceF};

pub const DEFAULT_DEGREE_CAP: i64 = 200;
const ZERO_RUN: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SocleCell {
    pub component_dim: usize,
    pub t_socle_dim: usize,
    pub star_socle_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SocleReport {
    pub ell: u32,
    /// Rank of the free module `H^n_I(R)_{-ell}`.
    pub free_rank: usize,
    /// Keyed by normalized degree.
    pub per_degree: BTreeMap<i64, SocleCell>,
    pub window: (i64, i64),
    /// The cokernel vanishes above the window, so the totals are exact.
    pub certified_zero_above: bool,
}

impl SocleReport {
    pub fn star_socle_total(&self) -> usize {
        self.per_degree.values().map(|c| c.star_socle_dim).sum()
    }

    pub fn t_socle_total(&self) -> usize {
        self.per_degree.values().map(|c| c.t_socle_dim).sum()
    }

    pub fn component_total(&self) -> usize {
        self.per_degree.values().map(|c| c.component_dim).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowPolicy {
    /// Upper end of the first window; `None` uses the default heuristic.
    pub initial_hi: Option<i64>,
    /// Keep widening until the top of the window is certified zero.
    pub widen: bool,
    pub hard_cap: i64,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy { initial_hi: None, widen: true, hard_cap: DEFAULT_DEGREE_CAP }
    }
}

impl WindowPolicy {
    pub fn with_cap(hard_cap: i64) -> Self {
        WindowPolicy { hard_cap, ..Self::default() }
    }

    pub fn fixed(hi: i64) -> Self {
        WindowPolicy { initial_hi: Some(hi), widen: false, hard_cap: hi }
    }
}

/// `(ell + p) * (max coefficient degree) + 2m`.
pub fn default_window_hi<F: Field>(ring: &CoeffRing<F>, f: &HypersurfaceF<F::Elem>, ell: u32) -> i64 {
    let max_deg = f.coefficients().filter_map(|c| c.homogeneous_degree()).max().unwrap_or(0) as i64;
    (ell + f.p()) as i64 * max_deg + 2 * ring.m() as i64
}

/// Socle and `*`socle dimensions of the piece at `ell`, degree by degree.
pub fn socle_report<F: Field>(engine: &mut CokerEngine<'_, F>, ell: u32, policy: WindowPolicy) -> SocleReport {
    scan(engine, ell, policy, true)
}

/// Cokernel dimensions of the piece at `ell` over a certified window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentProfile {
    pub ell: u32,
    pub free_rank: usize,
    pub dims: BTreeMap<i64, usize>,
    pub window: (i64, i64),
    pub certified_zero_above: bool,
}

impl ComponentProfile {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }
}

pub fn component_profile<F: Field>(engine: &mut CokerEngine<'_, F>, ell: u32, policy: WindowPolicy) -> ComponentProfile {
    let r = scan(engine, ell, policy, false);
    ComponentProfile {
        ell,
        free_rank: r.free_rank,
        dims: r.per_degree.iter().map(|(&d, c)| (d, c.component_dim)).collect(),
        window: r.window,
        certified_zero_above: r.certified_zero_above,
    }
}

fn scan<F: Field>(engine: &mut CokerEngine<'_, F>, ell: u32, policy: WindowPolicy, with_socle: bool) -> SocleReport {
    let ring = engine.ring();
    let f = engine.hypersurface();
    let basis = engine.ell_basis(ell);
    let gens = ring.maximal_ideal_generators();
    let gmax = ring.max_generator_degree() as i64;
    let run = ZERO_RUN.max(gmax);
    let mut hi = policy.initial_hi.unwrap_or_else(|| default_window_hi(ring, f, ell)).min(policy.hard_cap);
    let lo = 0;
    let mut report = SocleReport {
        ell,
        free_rank: basis.elements.len(),
        per_degree: BTreeMap::new(),
        window: (lo, hi),
        certified_zero_above: false,
    };
    let top = engine.generation_top(ell);
    let min_w = engine.weights().iter().copied().min().unwrap_or(1) as i64;
    let mut d = lo;
    loop {
        while d <= hi {
            let cell = if with_socle {
                socle_cell(engine, ell, d, &gens)
            } else {
                let dim = engine.component_dim(ell, d);
                SocleCell { component_dim: dim, t_socle_dim: 0, star_socle_dim: 0 }
            };
            report.per_degree.insert(d, cell);
            let e = engine.normalized_to_combined(ell, d);
            engine.evict_below(ell, e + 1);
            if ell > 0 {
                engine.evict_below(ell - 1, e + 1 + min_w);
            }
            d += 1;
        }
        // generated in degrees <= top, so a zero run of length >= gmax above top
        // forces every later component to vanish
        let certified = hi >= top
            && hi - lo + 1 >= run
            && (hi - run + 1..=hi).all(|k| report.per_degree[&k].component_dim == 0);
        if certified || basis.elements.is_empty() {
            report.certified_zero_above = true;
            break;
        }
        if !policy.widen || hi >= policy.hard_cap {
            break;
        }
        hi = (hi + run.max(hi / 4)).min(policy.hard_cap);
    }
    report.window = (lo, hi);
    report
}

fn socle_cell<F: Field>(engine: &mut CokerEngine<'_, F>, ell: u32, d: i64, gens: &[crate::ring::Monomial]) -> SocleCell {
    let field = engine.ring().field().clone();
    let e = engine.normalized_to_combined(ell, d);
    let comp = engine.component(ell, e);
    let dim = comp.dim();
    if dim == 0 {
        return SocleCell { component_dim: 0, t_socle_dim: 0, star_socle_dim: 0 };
    }
    let u_targets: Vec<_> = gens.iter().map(|g| engine.component(ell, e + g.degree() as i64)).collect();
    let weights = engine.weights().to_vec();
    let here = engine.ell_basis(ell);
    let below = (ell > 0).then(|| engine.ell_basis(ell - 1));
    let x_targets: Vec<_> = match &below {
        Some(_) => weights.iter().map(|&w| Some(engine.component(ell - 1, e + w as i64))).collect(),
        None => vec![None; weights.len()],
    };

    let mut u_offsets = Vec::with_capacity(u_targets.len());
    let mut width = 0;
    for t in &u_targets {
        u_offsets.push(width);
        width += t.dim();
    }
    let u_width = width;
    let mut x_offsets = Vec::with_capacity(x_targets.len());
    for t in &x_targets {
        x_offsets.push(width);
        width += t.as_ref().map_or(0, |c| c.dim());
    }

    let mut u_rank = SparseEchelon::new(u_width);
    let mut all_rank = SparseEchelon::new(width);
    for &col in comp.standard_columns() {
        let (aidx, t) = comp.decode(col);
        let mut image: SparseVec<F::Elem> = Vec::new();
        for ((g, target), off) in gens.iter().zip(&u_targets).zip(&u_offsets) {
            if target.is_zero() {
                continue;
            }
            let c = target.column(aidx, &t.mul(g)).expect("u-multiple stays in the component");
            image.extend(target.class_of(vec![(c, field.one())], &field).into_iter().map(|(k, x)| (k + off, x)));
        }
        u_rank.insert(image.clone(), &field);
        let alpha = &here.elements[aidx].alpha;
        if let Some(below) = &below {
            for (i, (target, off)) in x_targets.iter().zip(&x_offsets).enumerate() {
                let Some(target) = target else { continue };
                if alpha[i] < 2 || target.is_zero() {
                    continue;
                }
                let mut lowered = alpha.clone();
                lowered[i] -= 1;
                let bidx = below.index_of(&lowered).expect("lowered exponent is a basis element");
                let c = target.column(bidx, t).expect("x-image stays in the component");
                image.extend(target.class_of(vec![(c, field.one())], &field).into_iter().map(|(k, x)| (k + off, x)));
            }
        }
        all_rank.insert(image, &field);
    }
    SocleCell { component_dim: dim, t_socle_dim: dim - u_rank.rank(), star_socle_dim: dim - all_rank.rank() }
}

/// `T`-socle dimension per normalized degree at `ell`.
pub fn t_socle_dims<F: Field>(ring: &CoeffRing<F>, f: &HypersurfaceF<F::Elem>, ell: u32, policy: WindowPolicy) -> Result<BTreeMap<i64, usize>> {
    let mut engine = CokerEngine::new(ring, f)?;
    let report = socle_report(&mut engine, ell, policy);
    Ok(report.per_degree.iter().map(|(&d, c)| (d, c.t_socle_dim)).collect())
}

pub fn star_socle_dim<F: Field>(ring: &CoeffRing<F>, f: &HypersurfaceF<F::Elem>, ell: u32, policy: WindowPolicy) -> Result<SocleReport> {
    let mut engine = CokerEngine::new(ring, f)?;
    Ok(socle_report(&mut engine, ell, policy))
}

/// One report per `ell`, in the order given. With `jobs > 1` (and the
/// `parallel` feature) the rows are computed concurrently; the result does not
/// depend on the schedule.
pub fn star_socle_table<F: Field>(
    ring: &CoeffRing<F>,
    f: &HypersurfaceF<F::Elem>,
    ells: &[u32],
    policy: WindowPolicy,
    jobs: usize,
) -> Result<Vec<SocleReport>> {
    per_ell(ring, f, ells, jobs, |engine, ell| socle_report(engine, ell, policy))
}

pub fn component_table<F: Field>(
    ring: &CoeffRing<F>,
    f: &HypersurfaceF<F::Elem>,
    ells: &[u32],
    policy: WindowPolicy,
    jobs: usize,
) -> Result<Vec<ComponentProfile>> {
    per_ell(ring, f, ells, jobs, |engine, ell| component_profile(engine, ell, policy))
}

fn per_ell<F: Field, R: Send>(
    ring: &CoeffRing<F>,
    f: &HypersurfaceF<F::Elem>,
    ells: &[u32],
    jobs: usize,
    work: impl Fn(&mut CokerEngine<'_, F>, u32) -> R + Sync,
) -> Result<Vec<R>> {
    // surface grading errors before fanning out
    CokerEngine::new(ring, f)?;
    let row = |ell: u32| {
        let mut engine = CokerEngine::new(ring, f).expect("grading checked above");
        work(&mut engine, ell)
    };
    #[cfg(feature = "parallel")]
    if jobs > 1 && ells.len() > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| crate::error::Error::Config(format!("cannot start worker pool: {e}")))?;
        return Ok(pool.install(|| ells.par_iter().map(|&ell| row(ell)).collect()));
    }
    let _ = jobs;
    Ok(ells.iter().map(|&ell| row(ell)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use crate::ring::{Monomial, RingDescriptor};

    fn hartshorne<F: Field>(field: F) -> (CoeffRing<F>, HypersurfaceF<F::Elem>) {
        let r = CoeffRing::new(RingDescriptor::polynomial(field.characteristic(), &["u", "v"], &["x", "y"]), field).unwrap();
        let f = HypersurfaceF::parse("u*x + v*y", &r).unwrap();
        (r, f)
    }

    #[test]
    fn hartshorne_small_pieces() {
        let (r, f) = hartshorne(PrimeField::default());
        let rep = star_socle_dim(&r, &f, 2, WindowPolicy::default()).unwrap();
        assert_eq!(rep.per_degree[&0], SocleCell { component_dim: 1, t_socle_dim: 1, star_socle_dim: 1 });
        assert_eq!(rep.t_socle_total(), 1);
        assert!(rep.certified_zero_above);

        let rep = star_socle_dim(&r, &f, 3, WindowPolicy::default()).unwrap();
        assert_eq!(rep.per_degree[&0], SocleCell { component_dim: 2, t_socle_dim: 0, star_socle_dim: 0 });
        assert_eq!(rep.per_degree[&1], SocleCell { component_dim: 1, t_socle_dim: 1, star_socle_dim: 1 });
        assert_eq!((rep.t_socle_total(), rep.star_socle_total()), (1, 1));
    }

    #[test]
    fn zero_module_below_n() {
        let (r, f) = hartshorne(PrimeField::default());
        let rep = star_socle_dim(&r, &f, 1, WindowPolicy::default()).unwrap();
        assert_eq!((rep.free_rank, rep.star_socle_total(), rep.component_total()), (0, 0, 0));
        assert!(rep.certified_zero_above);
    }

    #[test]
    fn unit_coefficient_has_no_socle() {
        let r = CoeffRing::new(RingDescriptor::polynomial(32003, &["u", "v"], &["x", "y"]), PrimeField::default()).unwrap();
        let f = HypersurfaceF::parse("x + u*y", &r).unwrap();
        let ells: Vec<u32> = (2..=10).collect();
        for rep in star_socle_table(&r, &f, &ells, WindowPolicy::default(), 1).unwrap() {
            assert_eq!((rep.t_socle_total(), rep.star_socle_total()), (0, 0));
        }
        assert!(star_socle_table(&r, &f, &[], WindowPolicy::default(), 1).unwrap().is_empty());
    }

    #[test]
    fn backends_agree() {
        let (rp, fp) = hartshorne(PrimeField::default());
        let (rq, fq) = hartshorne(RationalField);
        let ells: Vec<u32> = (2..=6).collect();
        let a = star_socle_table(&rp, &fp, &ells, WindowPolicy::default(), 1).unwrap();
        let b = star_socle_table(&rq, &fq, &ells, WindowPolicy::default(), 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fixed_window_without_zero_run_is_not_certified() {
        let (r, f) = hartshorne(PrimeField::default());
        let rep = star_socle_dim(&r, &f, 6, WindowPolicy::fixed(2)).unwrap();
        assert_eq!(rep.window, (0, 2));
        assert!(!rep.certified_zero_above);
    }

    #[test]
    fn semigroup_piece_uses_generator_action() {
        let gens = vec![Monomial(vec![4, 0]), Monomial(vec![3, 1]), Monomial(vec![1, 3]), Monomial(vec![0, 4])];
        let desc = RingDescriptor::semigroup(32003, &["u", "v"], gens, &["x", "y", "z"]).with_weights(vec![4, 2, 2]);
        let r = CoeffRing::new(desc, PrimeField::default()).unwrap();
        let f = HypersurfaceF::parse("u^4*x^2 + v^8*y*z", &r).unwrap();
        // ell = 3: T / (u^4, v^8) on the single symbol x^-1 y^-1 z^-1
        let rep = star_socle_dim(&r, &f, 3, WindowPolicy::default()).unwrap();
        assert!(rep.certified_zero_above);
        assert!(rep.star_socle_total() >= 1);
        assert!(rep.per_degree.values().all(|c| c.star_socle_dim <= c.t_socle_dim));
    }

    #[test]
    fn profile_matches_socle_dims() {
        let (r, f) = hartshorne(PrimeField::default());
        let ells: Vec<u32> = (2..=7).collect();
        let socles = star_socle_table(&r, &f, &ells, WindowPolicy::default(), 1).unwrap();
        let dims = component_table(&r, &f, &ells, WindowPolicy::default(), 1).unwrap();
        for (s, p) in socles.iter().zip(&dims) {
            assert_eq!(s.component_total(), p.total());
            assert_eq!(s.window, p.window);
            assert_eq!(s.certified_zero_above, p.certified_zero_above);
        }
    }

    mod props {
        use super::*;
        use crate::ring::CoeffPoly;
        use proptest::prelude::*;

        /// `f = c_1 x^a + c_2 y^b` with unit weights after balancing.
        fn build(a: u32, ca: (u32, u32), cb: (u32, u32)) -> Option<(CoeffRing<PrimeField>, HypersurfaceF<u32>)> {
            let r = CoeffRing::new(RingDescriptor::polynomial(32003, &["u", "v"], &["x", "y"]), PrimeField::default()).unwrap();
            let field = *r.field();
            let f = HypersurfaceF::new(
                vec![
                    (CoeffPoly::monomial(Monomial(vec![ca.0, ca.1]), &field), vec![a, 0]),
                    (CoeffPoly::monomial(Monomial(vec![cb.0, cb.1]), &field), vec![0, a]),
                ],
                &r,
            )
            .ok()?;
            Some((r, f))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn star_socle_inside_t_socle(a in 1u32..3, i in 0u32..3, j in 0u32..3, ell in 2u32..7) {
                let deg = (i + j).max(1);
                let Some((r, f)) = build(a, (i.min(deg), deg - i.min(deg)), (j.min(deg), deg - j.min(deg))) else { return Ok(()) };
                let rep = star_socle_dim(&r, &f, ell, WindowPolicy::default()).unwrap();
                for c in rep.per_degree.values() {
                    prop_assert!(c.star_socle_dim <= c.t_socle_dim);
                    prop_assert!(c.t_socle_dim <= c.component_dim);
                }
            }

            #[test]
            fn swapping_x_variables_preserves_dims(a in 1u32..3, i in 0u32..3, j in 0u32..3, ell in 2u32..7) {
                let deg = (i + j).max(1);
                let Some((r, f)) = build(a, (i.min(deg), deg - i.min(deg)), (j.min(deg), deg - j.min(deg))) else { return Ok(()) };
                let g = f.permute_x(&[1, 0]);
                let x = star_socle_dim(&r, &f, ell, WindowPolicy::default()).unwrap();
                let y = star_socle_dim(&r, &g, ell, WindowPolicy::default()).unwrap();
                prop_assert_eq!(x.per_degree, y.per_degree);
            }

            #[test]
            fn zero_above_means_full_socle(a in 1u32..3, i in 0u32..3, j in 0u32..3, ell in 2u32..7) {
                let deg = (i + j).max(1);
                let Some((r, f)) = build(a, (i.min(deg), deg - i.min(deg)), (j.min(deg), deg - j.min(deg))) else { return Ok(()) };
                let rep = star_socle_dim(&r, &f, ell, WindowPolicy::default()).unwrap();
                // with the polynomial ring, a piece whose next degree vanishes is all socle
                for (d, c) in &rep.per_degree {
                    if rep.per_degree.get(&(d + 1)).is_some_and(|n| n.component_dim == 0) {
                        prop_assert_eq!(c.t_socle_dim, c.component_dim);
                    }
                }
            }
        }
    }
}
