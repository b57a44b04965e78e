//! Brute-force reference computations shared by the integration tests.
//!
//! Nothing here touches the library's linear algebra or ring code: monomials
//! are enumerated exhaustively, semigroup membership is decided by recursive
//! subtraction, and ranks come from a plain dense elimination mod `P`.

#![allow(dead_code)]

use std::collections::HashMap;

pub const P: u64 = 32003;

pub type Exps = Vec<u32>;

/// `f = sum_j c_j x^{gamma_j}` with `c_j = sum coef * u^exps`.
#[derive(Clone, Debug)]
pub struct Case {
    pub m: usize,
    /// `None` for the full polynomial ring.
    pub gens: Option<Vec<Exps>>,
    pub weights: Vec<u32>,
    pub terms: Vec<(Vec<(Exps, i64)>, Exps)>,
}

pub fn rank_mod_p(mut rows: Vec<Vec<u64>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][col], P - 2);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % P;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let c = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + P - c * y % P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

fn all_vectors(nvars: usize, total: u32, min: u32) -> Vec<Exps> {
    if nvars == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in min..=total {
        for mut rest in all_vectors(nvars - 1, total - first, min) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Exponent vectors with entries `>= 1` and sum `ell`, found by checking
/// every vector in `[1, ell]^n`.
pub fn compositions_brute(n: usize, ell: u32) -> Vec<Exps> {
    let mut out = Vec::new();
    let mut v = vec![1u32; n];
    if n == 0 {
        return out;
    }
    loop {
        if v.iter().sum::<u32>() == ell {
            out.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if v[i] < ell {
                v[i] += 1;
                break;
            }
            v[i] = 1;
            i += 1;
        }
    }
}

pub fn in_semigroup(e: &[u32], gens: &[Exps]) -> bool {
    if e.iter().all(|&x| x == 0) {
        return true;
    }
    gens.iter().any(|g| {
        g.iter().zip(e).all(|(a, b)| a <= b) && {
            let rest: Exps = e.iter().zip(g).map(|(a, b)| a - b).collect();
            in_semigroup(&rest, gens)
        }
    })
}

pub fn t_monomials(case: &Case, d: i64) -> Vec<Exps> {
    if d < 0 {
        return Vec::new();
    }
    match &case.gens {
        None => all_vectors(case.m, d as u32, 0),
        Some(g) => semigroup_layer(g, d as usize),
    }
}

/// Semigroup elements of degree `d`, built up layer by layer from the
/// generators.
fn semigroup_layer(gens: &[Exps], d: usize) -> Vec<Exps> {
    let m = gens[0].len();
    let mut layers: Vec<std::collections::BTreeSet<Exps>> = vec![Default::default(); d + 1];
    layers[0].insert(vec![0; m]);
    for k in 1..=d {
        for g in gens {
            let gd = g.iter().sum::<u32>() as usize;
            if gd == 0 || gd > k {
                continue;
            }
            let below: Vec<Exps> = layers[k - gd].iter().cloned().collect();
            layers[k].extend(below.into_iter().map(|e| add_exps(&e, g)));
        }
    }
    layers.swap_remove(d).into_iter().collect()
}

fn wdot(w: &[u32], a: &[u32]) -> i64 {
    w.iter().zip(a).map(|(&x, &y)| x as i64 * y as i64).sum()
}

/// `max w.alpha` over the basis at `ell`.
pub fn offset(case: &Case, ell: u32) -> i64 {
    compositions_brute(case.weights.len(), ell).iter().map(|a| wdot(&case.weights, a)).max().unwrap_or(0)
}

/// Coordinates of the free piece at `ell` in combined degree `e`: pairs
/// `(alpha, t)` with `deg t = e + w.alpha`.
struct Space {
    index: HashMap<(Exps, Exps), usize>,
    dim: usize,
}

fn space(case: &Case, ell: u32, e: i64) -> Space {
    let mut index = HashMap::new();
    for alpha in compositions_brute(case.weights.len(), ell) {
        for t in t_monomials(case, e + wdot(&case.weights, &alpha)) {
            let k = index.len();
            index.insert((alpha.clone(), t), k);
        }
    }
    let dim = index.len();
    Space { index, dim }
}

fn add_exps(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Rows spanning the image of `f` in the piece at `ell`, degree `e`.
fn image_rows(case: &Case, ell: u32, e: i64, target: &Space) -> Vec<Vec<u64>> {
    let p: u32 = case.terms[0].1.iter().sum();
    let f_deg = {
        let (c, g) = &case.terms[0];
        c[0].0.iter().sum::<u32>() as i64 + wdot(&case.weights, g)
    };
    let mut rows = Vec::new();
    for beta in compositions_brute(case.weights.len(), ell + p) {
        // s x^{-beta} lands in combined degree deg s - w.beta + f_deg
        let s_deg = e - f_deg + wdot(&case.weights, &beta);
        for s in t_monomials(case, s_deg) {
            let mut row = vec![0u64; target.dim];
            for (coef, gamma) in &case.terms {
                if beta.iter().zip(gamma).any(|(b, g)| b <= g) {
                    continue;
                }
                let alpha: Exps = beta.iter().zip(gamma).map(|(b, g)| b - g).collect();
                for (u, c) in coef {
                    let t = add_exps(&s, u);
                    let k = target.index[&(alpha.clone(), t)];
                    row[k] = (row[k] + c.rem_euclid(P as i64) as u64) % P;
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// `(dim coker, t-socle dim, star socle dim)` at `ell` in normalized degree `d`.
pub fn oracle_cell(case: &Case, ell: u32, d: i64) -> (usize, usize, usize) {
    let n = case.weights.len();
    if (ell as usize) < n {
        return (0, 0, 0);
    }
    let e = d - offset(case, ell);
    let src = space(case, ell, e);
    let img = image_rows(case, ell, e, &src);
    let img_rank = rank_mod_p(img.clone());
    let coker = src.dim - img_rank;
    if coker == 0 {
        return (0, 0, 0);
    }
    let ring_gens: Vec<Exps> = match &case.gens {
        None => (0..case.m).map(|j| (0..case.m).map(|i| u32::from(i == j)).collect()).collect(),
        Some(g) => g.clone(),
    };
    // targets: one per ring generator at (ell, e + deg g), one per x_i at (ell - 1, e + w_i)
    let mut targets: Vec<(u32, i64)> = ring_gens.iter().map(|g| (ell, e + g.iter().sum::<u32>() as i64)).collect();
    let nu = targets.len();
    if ell > n as u32 {
        targets.extend(case.weights.iter().map(|&w| (ell - 1, e + w as i64)));
    }
    let spaces: Vec<Space> = targets.iter().map(|&(l, ee)| space(case, l, ee)).collect();
    let images: Vec<Vec<Vec<u64>>> = targets.iter().zip(&spaces).map(|(&(l, ee), s)| image_rows(case, l, ee, s)).collect();
    let width: usize = spaces.iter().map(|s| s.dim).sum();
    let offsets: Vec<usize> = spaces.iter().scan(0, |acc, s| { let o = *acc; *acc += s.dim; Some(o) }).collect();

    // phi(basis vector) stacked over all targets, or only the u-targets
    let phi = |only_u: bool| -> Vec<Vec<u64>> {
        let mut entries: Vec<(&(Exps, Exps), &usize)> = src.index.iter().collect();
        entries.sort_by_key(|(_, &k)| k);
        entries
            .into_iter()
            .map(|((alpha, t), _)| {
                let mut row = vec![0u64; width];
                for (k, g) in ring_gens.iter().enumerate() {
                    let key = (alpha.clone(), add_exps(t, g));
                    if let Some(&c) = spaces[k].index.get(&key) {
                        row[offsets[k] + c] = 1;
                    }
                }
                if !only_u {
                    for i in 0..targets.len() - nu {
                        if alpha[i] < 2 {
                            continue;
                        }
                        let mut lowered = alpha.clone();
                        lowered[i] -= 1;
                        if let Some(&c) = spaces[nu + i].index.get(&(lowered, t.clone())) {
                            row[offsets[nu + i] + c] = 1;
                        }
                    }
                }
                row
            })
            .collect()
    };
    let stacked_images = |upto: usize| -> Vec<Vec<u64>> {
        let mut rows = Vec::new();
        for k in 0..upto {
            for r in &images[k] {
                let mut row = vec![0u64; width];
                row[offsets[k]..offsets[k] + r.len()].copy_from_slice(r);
                rows.push(row);
            }
        }
        rows
    };
    // rank of phi modulo the images, restricted to the chosen targets
    let socle = |only_u: bool| -> usize {
        let upto = if only_u { nu } else { targets.len() };
        let base = stacked_images(upto);
        let base_rank = rank_mod_p(base.clone());
        let mut all = base;
        let mut phis = phi(only_u);
        all.append(&mut phis);
        let phi_bar_rank = rank_mod_p(all) - base_rank;
        // phi vanishes on the image of f, so the induced map on the cokernel
        // has the same rank
        coker - phi_bar_rank
    };
    (coker, socle(true), socle(false))
}

pub fn hartshorne_case() -> Case {
    Case {
        m: 2,
        gens: None,
        weights: vec![1, 1],
        terms: vec![(vec![(vec![1, 0], 1)], vec![1, 0]), (vec![(vec![0, 1], 1)], vec![0, 1])],
    }
}

pub fn example12_case() -> Case {
    Case {
        m: 2,
        gens: Some(vec![vec![4, 0], vec![3, 1], vec![1, 3], vec![0, 4]]),
        weights: vec![4, 2, 2],
        terms: vec![(vec![(vec![4, 0], 1)], vec![2, 0, 0]), (vec![(vec![0, 8], 1)], vec![0, 1, 1])],
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// The same case as a library ring and hypersurface over `F_P`.
pub fn build_case(case: &Case) -> (lcsocle::CoeffRing<lcsocle::PrimeField>, lcsocle::HypersurfaceF<u32>) {
    use lcsocle::{CoeffPoly, CoeffRing, Field, HypersurfaceF, Monomial, PrimeField, RingDescriptor};
    let us: Vec<String> = (0..case.m).map(|i| format!("u{i}")).collect();
    let xs: Vec<String> = (0..case.weights.len()).map(|i| format!("x{i}")).collect();
    let us: Vec<&str> = us.iter().map(String::as_str).collect();
    let xs: Vec<&str> = xs.iter().map(String::as_str).collect();
    let desc = match &case.gens {
        None => RingDescriptor::polynomial(P, &us, &xs),
        Some(g) => RingDescriptor::semigroup(P, &us, g.iter().cloned().map(Monomial).collect(), &xs),
    }
    .with_weights(case.weights.clone());
    let field = PrimeField::default();
    let ring = CoeffRing::new(desc, field).expect("valid ring");
    let terms = case
        .terms
        .iter()
        .map(|(coef, gamma)| {
            let mut c = CoeffPoly::zero();
            for (u, k) in coef {
                c.add_term(Monomial(u.clone()), &field.from_i64(*k), &field);
            }
            (c, gamma.clone())
        })
        .collect();
    let f = HypersurfaceF::new(terms, &ring).expect("homogeneous f");
    (ring, f)
}

/// A random `f` over `k[u, v]` in `n` x-variables with declared weights in
/// `1..=3` and x-degree `p`. With `unit` one coefficient is a nonzero scalar;
/// otherwise every coefficient has positive degree.
pub fn random_case(rng: &mut impl rand::Rng, unit: bool) -> Case {
    let n = rng.gen_range(2..=3usize);
    let p = rng.gen_range(1..=2u32);
    let weights: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let gammas = all_vectors(n, p, 0);
    let mut chosen: Vec<Exps> = gammas.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    if chosen.is_empty() {
        chosen.push(gammas[rng.gen_range(0..gammas.len())].clone());
    }
    let wdeg: Vec<i64> = chosen.iter().map(|g| wdot(&weights, g)).collect();
    let top = if unit {
        let k = rng.gen_range(0..chosen.len());
        // the term at `k` gets degree 0; drop terms that would need negative degree
        wdeg[k]
    } else {
        wdeg.iter().copied().max().unwrap() + rng.gen_range(1..=2)
    };
    let mut terms = Vec::new();
    for (g, wd) in chosen.into_iter().zip(wdeg) {
        if wd > top {
            continue;
        }
        let cdeg = (top - wd) as u32;
        let mut coef = Vec::new();
        for a in 0..=cdeg {
            if cdeg == 0 || rng.gen_bool(0.6) {
                coef.push((vec![a, cdeg - a], rng.gen_range(1..P as i64)));
            }
        }
        if coef.is_empty() {
            coef.push((vec![cdeg, 0], 1));
        }
        terms.push((coef, g));
    }
    Case { m: 2, gens: None, weights, terms }
}
