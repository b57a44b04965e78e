//! Deterministic CSV renderers. Every table has a header row and a fixed
//! column order.

use std::fmt::Write;

use crate::annihilator::AnnFamilyRow;
use crate::scenarios::{DeltaCheck, VanishingReport};
use crate::socle::SocleReport;

pub const SOCLE_HEADER: &str = "ell,free_rank,star_socle_dim_total,t_socle_dim_total,window_lo,window_hi,certified";
pub const PER_DEGREE_HEADER: &str = "ell,degree,component_dim,t_socle_dim,star_socle_dim";
pub const VANISH_HEADER: &str = "ell,component_total,first_nonzero_degree,certified";
pub const LSUMMAND_HEADER: &str = "q,ell,summand_basis,delta_ok,closure_ok,delta_matrix";
pub const ANN_FAMILY_HEADER: &str = "n,ann_equals_uv_pow_n,minors_equal,mindeg_intersection_so_far";

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn socle_csv(table: &[SocleReport]) -> String {
    let mut out = String::from(SOCLE_HEADER);
    out.push('\n');
    for r in table {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.ell,
            r.free_rank,
            r.star_socle_total(),
            r.t_socle_total(),
            r.window.0,
            r.window.1,
            r.certified_zero_above
        );
    }
    out
}

pub fn per_degree_csv(table: &[SocleReport]) -> String {
    let mut out = String::from(PER_DEGREE_HEADER);
    out.push('\n');
    for r in table {
        for (d, c) in &r.per_degree {
            let _ = writeln!(out, "{},{},{},{},{}", r.ell, d, c.component_dim, c.t_socle_dim, c.star_socle_dim);
        }
    }
    out
}

pub fn vanish_csv(rep: &VanishingReport) -> String {
    let mut out = String::from(VANISH_HEADER);
    out.push('\n');
    for r in &rep.rows {
        let first = r.first_nonzero_degree.map_or_else(|| "none".to_string(), |d| d.to_string());
        let _ = writeln!(out, "{},{},{},{}", r.ell, r.component_total, first, r.certified);
    }
    out
}

pub fn lsummand_csv(rows: &[(DeltaCheck, bool)]) -> String {
    let mut out = String::from(LSUMMAND_HEADER);
    out.push('\n');
    for (d, closure) in rows {
        let matrix: Vec<String> = d.matrix.iter().map(|r| r.join(" ")).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            d.q,
            d.ell,
            field(&d.rows.join(" ")),
            d.ok,
            closure,
            field(&format!("[{}]", matrix.join("; ")))
        );
    }
    out
}

pub fn ann_family_csv(rows: &[AnnFamilyRow]) -> String {
    let mut out = String::from(ANN_FAMILY_HEADER);
    out.push('\n');
    for r in rows {
        let mindeg = r.mindeg_intersection_so_far.map_or_else(|| "none".to_string(), |d| d.to_string());
        let _ = writeln!(out, "{},{},{},{}", r.n, r.ann_equals_uv_pow_n, r.minors_equal, mindeg);
    }
    out
}
