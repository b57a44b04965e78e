//! WebAssembly bindings for the demo page. Each export returns a JSON string;
//! errors come back as a thrown string.

use lcsocle::annihilator::{ann_family as family_rows, build_an, ideal_equal_upto, maximal_minors, GradedIdeal};
use lcsocle::scenarios::{preset_source, ScenarioSpec, PRESET_NAMES};
use lcsocle::socle::star_socle_table;
use lcsocle::{CoeffRing, PrimeField, RingDescriptor};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest `n` the page accepts for the bidiagonal family.
pub const N_LIMIT: usize = 12;
/// Largest number of `ell` values in one socle table.
pub const ELL_LIMIT: usize = 40;

#[derive(Serialize)]
struct Preset {
    name: &'static str,
    toml: &'static str,
}

#[derive(Serialize)]
struct SocleRow {
    ell: u32,
    free_rank: usize,
    star_socle: usize,
    t_socle: usize,
    component_total: usize,
    window: (i64, i64),
    certified: bool,
    /// `[degree, component_dim, t_socle_dim, star_socle_dim]`
    per_degree: Vec<[i64; 4]>,
}

#[derive(Serialize)]
struct MinorsOut {
    n: usize,
    cap: u32,
    generators: Vec<String>,
    equals_uv_pow_n: bool,
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn uv_ring() -> CoeffRing<PrimeField> {
    CoeffRing::new(RingDescriptor::polynomial(32003, &["u", "v"], &["x"]), PrimeField::default()).expect("fixed ring")
}

fn check_n(n: usize) -> Result<(), String> {
    if (1..=N_LIMIT).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must lie in 1..={N_LIMIT}"))
    }
}

pub fn presets_json() -> String {
    let all: Vec<Preset> = PRESET_NAMES.iter().map(|&name| Preset { name, toml: preset_source(name).unwrap() }).collect();
    json(&all)
}

pub fn socle_table_json(config: &str) -> Result<String, String> {
    let spec = ScenarioSpec::from_toml(config).map_err(|e| e.to_string())?;
    let field = PrimeField::new(spec.characteristic()).map_err(|e| e.to_string())?;
    let scn = spec.build(field).map_err(|e| e.to_string())?;
    if scn.ells.len() > ELL_LIMIT {
        return Err(format!("at most {ELL_LIMIT} values of ell per table"));
    }
    let table = star_socle_table(&scn.ring, &scn.f, &scn.ells, scn.policy, 1).map_err(|e| e.to_string())?;
    let rows: Vec<SocleRow> = table
        .iter()
        .map(|r| SocleRow {
            ell: r.ell,
            free_rank: r.free_rank,
            star_socle: r.star_socle_total(),
            t_socle: r.t_socle_total(),
            component_total: r.component_total(),
            window: r.window,
            certified: r.certified_zero_above,
            per_degree: r
                .per_degree
                .iter()
                .map(|(&d, c)| [d, c.component_dim as i64, c.t_socle_dim as i64, c.star_socle_dim as i64])
                .collect(),
        })
        .collect();
    Ok(json(&rows))
}

pub fn minors_json(n: usize) -> Result<String, String> {
    check_n(n)?;
    let ring = uv_ring();
    let a = build_an(&ring, n).map_err(|e| e.to_string())?;
    let ideal = maximal_minors(&ring, &a).map_err(|e| e.to_string())?;
    let cap = 2 * n as u32 + 2;
    let cmp = ideal_equal_upto(&ideal, &GradedIdeal::maximal_power(&ring, n as u32), &ring, cap);
    let generators = ideal.generators.iter().map(|g| ring.format(g)).collect();
    Ok(json(&MinorsOut { n, cap, generators, equals_uv_pow_n: cmp.equal }))
}

pub fn ann_family_json(n_max: usize, cap: u32) -> Result<String, String> {
    check_n(n_max)?;
    let rows = family_rows(&uv_ring(), n_max, cap, 1).map_err(|e| e.to_string())?;
    Ok(json(&rows))
}

#[wasm_bindgen]
pub fn presets() -> String {
    presets_json()
}

#[wasm_bindgen]
pub fn socle_table(config: &str) -> Result<String, JsValue> {
    socle_table_json(config).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn minors(n: usize) -> Result<String, JsValue> {
    minors_json(n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn ann_family(n_max: usize, cap: u32) -> Result<String, JsValue> {
    ann_family_json(n_max, cap).map_err(|e| JsValue::from_str(&e))
}
